#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polybgk/config.hpp"
#include "polybgk/errors.hpp"
#include "polybgk/io.hpp"
#include "polybgk/phase_grid.hpp"
#include "polybgk/validation.hpp"

namespace {

int cmd_run(const std::string& path, const std::string& out, int threads, bool threads_set) {
    polybgk::Config config = polybgk::parse_config(path);
    if (threads_set) config.threads = threads;
    const auto summary = polybgk::run_case(config, out, std::cerr);
    for (const auto& f : summary.files) std::cout << out << '/' << f << '\n';
    return summary.status;
}

int cmd_validate(const std::string& suite, const std::string& jsonl, int threads) {
    polybgk::ValidationOptions opt;
    opt.threads = threads;
    opt.log = &std::cerr;
    const bool all = suite == "all";
    if (!all) {
        bool known = false;
        for (const auto& n : polybgk::validation_suites()) known = known || n == suite;
        if (!known) polybgk::run_validation(suite, opt);  // throws with the list of suites
    }
    bool ok = true;
    std::ofstream js;
    const std::string js_path = jsonl.empty() ? "validation_" + suite + ".jsonl" : jsonl;
    js.open(js_path);
    if (!js) throw polybgk::Error("cannot write " + js_path);
    for (const auto& name : polybgk::validation_suites()) {
        if (!all && name != suite) continue;
        const auto report = polybgk::run_validation(name, opt);
        polybgk::print_report(std::cout, report);
        polybgk::write_report_jsonl(js, report);
        ok = ok && report.passed();
    }
    std::cout << "report: " << js_path << '\n';
    return ok ? 0 : 1;
}

int cmd_tabulate(double delta, double eps, double theta) {
    const double z = polybgk::compute_zeta_max(delta, eps, theta);
    std::printf("delta %g eps %g zeta_max %.6f zeta_max/theta_max %.6f\n", delta, eps, z, z / theta);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyatomic BGK solver: flux reconstruction with a discrete velocity model"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    int threads = 1;
    auto* run = app.add_subcommand("run", "run a case described by a config file");
    run->add_option("config", config_path, "config file (key = value)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    auto* run_threads = run->add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

    std::string suite, jsonl;
    int v_threads = 1;
    auto* validate = app.add_subcommand("validate", "run a validation suite");
    validate->add_option("suite", suite, "suite name or 'all'")->required();
    validate->add_option("--out", jsonl, "JSON-lines report path (default validation_<suite>.jsonl)");
    validate->add_option("--threads", v_threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

    double delta = 0.0, eps = 1e-6, theta = 1.0;
    auto* tab = app.add_subcommand("tabulate-zeta", "print zeta_max for given delta and eps_zeta");
    tab->add_option("--delta", delta, "internal degrees of freedom (> 0)")->required();
    tab->add_option("--eps", eps, "tail tolerance eps_zeta in (0, 1)")->required();
    tab->add_option("--theta", theta, "theta_max")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config_path, out_dir, threads, run_threads->count() > 0);
        if (*validate) return cmd_validate(suite, jsonl, v_threads);
        if (*tab) return cmd_tabulate(delta, eps, theta);
    } catch (const polybgk::ParseError& e) {
        std::cerr << config_path << ": " << e.what() << '\n';
        return 2;
    } catch (const polybgk::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
