#include "polybgk/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "polybgk/errors.hpp"

namespace polybgk {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_profile_csv(std::ostream& os, const Simulation& sim) {
    const auto x = sim.coordinates();
    const auto q = sim.primitives();
    const double gamma = sim.gamma();
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    os << "x,rho,u,p,e,theta\n";
    for (std::size_t i : order) {
        const double theta = q[i].theta();
        os << format_number(x[i]) << ',' << format_number(q[i].rho) << ',' << format_number(q[i].u) << ','
           << format_number(q[i].p) << ',' << format_number(specific_internal_energy(theta, gamma)) << ','
           << format_number(theta) << '\n';
    }
}

void write_timeseries_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
    os << "t,mass,momentum,energy,mass_err,min_f,residual_linf\n";
    for (const auto& r : rows) {
        os << format_number(r.t) << ',' << format_number(r.mass) << ',' << format_number(r.momentum) << ','
           << format_number(r.energy) << ',' << format_number(r.mass_error) << ',' << format_number(r.min_f) << ','
           << format_number(r.residual_linf) << '\n';
    }
}

void write_fu_csv(std::ostream& os, const FuSlice& slice) {
    os << "u,f_u\n";
    for (std::size_t i = 0; i < slice.u.size(); ++i) {
        os << format_number(slice.u[i]) << ',' << format_number(slice.f_u[i]) << '\n';
    }
}

namespace {

void write_file(const fs::path& path, const std::string& text, RunSummary& summary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
    summary.files.push_back(path.filename().string());
}

template <class Writer>
std::string to_text(Writer&& w) {
    std::ostringstream os;
    w(os);
    return os.str();
}

json row_json(const DiagnosticsRow& r) {
    return {{"t", r.t},
            {"mass", r.mass},
            {"momentum", r.momentum},
            {"energy", r.energy},
            {"mass_err", r.mass_error},
            {"min_f", r.min_f},
            {"residual_linf", r.residual_linf}};
}

}  // namespace

RunSummary run_case(const Config& config, const std::string& out_dir, std::ostream& log) {
    RunSummary summary;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + out_dir + ": " + ec.message());
    write_file(dir / "config.txt", serialize_config(config), summary);

    json report;
    report["case"] = config.case_name;
    try {
        const BenchmarkCase bc = make_benchmark(config);
        Simulation sim(bc.setup);
        summary.warnings = sim.warnings();
        for (const auto& w : sim.warnings()) log << "warning: " << w << '\n';
        log << "case " << config.case_name << ": " << sim.mesh().n_elements() << " elements, p = " << sim.basis().p
            << ", " << sim.moment_operator().size() << " phase nodes, r_max = " << sim.r_max()
            << ", dt_cfl = " << sim.dt_cfl() << '\n';

        RunControl control;
        control.t_final = config.t_final;
        control.output_interval = config.output_interval;
        const auto t0 = std::chrono::steady_clock::now();
        const auto rows = sim.run(control);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto& last = rows.back();
        log << "finished t = " << last.t << " after " << sim.solver().counters().steps << " steps in " << wall
            << " s, mass error " << last.mass_error << ", residual " << last.residual_linf << '\n';

        write_file(dir / "profile.csv", to_text([&](std::ostream& os) { write_profile_csv(os, sim); }), summary);
        write_file(dir / "timeseries.csv", to_text([&](std::ostream& os) { write_timeseries_csv(os, rows); }),
                   summary);
        json slices = json::array();
        for (std::size_t i = 0; i < config.fu_locations.size(); ++i) {
            const FuSlice s =
                extract_fu(sim.field(), config.fu_locations[i], sim.mesh(), sim.basis(), sim.moment_operator());
            const std::string name =
                config.fu_locations.size() == 1 ? "fu_slice.csv" : "fu_slice_" + std::to_string(i) + ".csv";
            write_file(dir / name, to_text([&](std::ostream& os) { write_fu_csv(os, s); }), summary);
            slices.push_back({{"file", name}, {"x_requested", config.fu_locations[i]}, {"x_node", s.x}});
        }

        report["status"] = "ok";
        report["t_final"] = last.t;
        report["steps"] = sim.solver().counters().steps;
        report["rhs_evaluations"] = sim.solver().counters().rhs_evaluations;
        report["limited_nodes"] = sim.solver().counters().limited_nodes;
        report["gamma"] = sim.gamma();
        report["r_max"] = sim.r_max();
        report["velocity_offset"] = sim.velocity_offset()[0];
        report["zeta_max"] = sim.zeta_max();
        report["c_max"] = sim.c_max();
        report["dt_cfl"] = sim.dt_cfl();
        report["knudsen"] = sim.knudsen();
        report["mesh_knudsen"] = sim.mesh_knudsen_info().kn_h;
        report["warnings"] = sim.warnings();
        report["final"] = row_json(last);
        report["fu_slices"] = slices;

        if (config.case_name == "normal_shock" && bc.left_state && bc.right_state) {
            const auto rho = sim.density();
            const ShockThickness st = shock_thickness(rho, sim.mesh(), sim.basis(), bc.lambda_left,
                                                      bc.left_state->rho, bc.right_state->rho);
            report["shock"] = {{"thickness", st.thickness},
                               {"max_gradient", st.max_gradient},
                               {"inverse_thickness_ratio", st.inverse_ratio},
                               {"lambda_left", bc.lambda_left}};
        }
        if ((config.case_name == "sod" || config.case_name == "expansion") && bc.left_state && bc.right_state &&
            last.t > 0.0) {
            const auto x = sim.coordinates();
            std::vector<double> xt(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) xt[i] = (x[i] - 0.5) / last.t;
            const auto exact = exact_riemann(*bc.left_state, *bc.right_state, sim.gamma(), xt);
            std::vector<double> diff(x.size());
            const auto rho = sim.density();
            for (std::size_t i = 0; i < x.size(); ++i) diff[i] = std::abs(rho[i] - exact[i].rho);
            report["exact_riemann_l1_density"] = integrate(diff, sim.mesh(), sim.basis());
        }
        summary.status = 0;
    } catch (const Error& err) {
        report["status"] = "error";
        report["message"] = err.what();
        summary.status = 1;
        summary.message = err.what();
        log << "error: " << err.what() << '\n';
    }
    write_file(dir / "report.json", report.dump(2) + "\n", summary);
    return summary;
}

}  // namespace polybgk
