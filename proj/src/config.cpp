#include "polybgk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "polybgk/errors.hpp"
#include "polybgk/macro.hpp"

namespace polybgk {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string token;
    for (char c : value) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) out.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) out.push_back(token);
    return out;
}

double to_double(const std::string& key, const std::string& value, int line) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ParseError("'" + key + "' expects a number, got '" + value + "'", line);
    }
    return out;
}

int to_int(const std::string& key, const std::string& value, int line) {
    int out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) {
        throw ParseError("'" + key + "' expects an integer, got '" + value + "'", line);
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value, int line) {
    const std::string v = lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError("'" + key + "' expects true or false, got '" + value + "'", line);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void require(bool ok, const std::string& what, int line) {
    if (!ok) throw ParseError(what, line);
}

const char* collision_name(CollisionModel::Kind kind) {
    return kind == CollisionModel::Kind::PowerLaw ? "power_law" : "constant";
}

const std::vector<std::string> kCases = {"pulse", "expansion", "sod", "normal_shock", "uniform"};

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "case",      "p",          "n_elements", "domain",      "n_v",           "n_r",          "n_phi",
        "n_psi",     "n_zeta",     "delta",      "kn",          "kn_h",          "tau",          "collision_model",
        "omega",     "mach",       "beta",       "smooth_ic",   "t_final",       "cfl",          "eps_u",
        "eps_zeta",  "dvm",        "dvm_iters",  "init_iters",  "bc_left",       "bc_right",     "output_interval",
        "fu_locations", "threads"};
    return keys;
}

std::string boundary_name(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::Periodic: return "periodic";
        case BoundaryKind::Neumann: return "neumann";
        case BoundaryKind::Dirichlet: return "dirichlet";
        case BoundaryKind::SpecularWall: return "specular";
    }
    return "periodic";
}

BoundaryKind parse_boundary(const std::string& name) {
    const std::string v = lower(name);
    if (v == "periodic") return BoundaryKind::Periodic;
    if (v == "neumann") return BoundaryKind::Neumann;
    if (v == "dirichlet") return BoundaryKind::Dirichlet;
    if (v == "specular" || v == "specular_wall" || v == "wall") return BoundaryKind::SpecularWall;
    throw InvalidArgument("unknown boundary condition '" + name + "' (periodic, neumann, dirichlet, specular)");
}

Config parse_config_string(const std::string& text) {
    Config c;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, "expected 'key = value', got '" + line + "'", line_no);
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = config_keys();
        require(std::find(keys.begin(), keys.end(), key) != keys.end(), "unknown key '" + key + "'", line_no);
        require(!seen.count(key), "duplicate key '" + key + "'", line_no);
        require(!value.empty(), "missing value for '" + key + "'", line_no);
        seen[key] = line_no;
        const int ln = line_no;

        if (key == "case") {
            const std::string v = lower(value);
            require(std::find(kCases.begin(), kCases.end(), v) != kCases.end(),
                    "unknown case '" + value + "' (pulse, expansion, sod, normal_shock, uniform)", ln);
            c.case_name = v;
        } else if (key == "p") {
            c.p = to_int(key, value, ln);
            require(c.p >= 1, "p must be >= 1", ln);
        } else if (key == "n_elements") {
            c.n_elements = to_int(key, value, ln);
            require(c.n_elements >= 1, "n_elements must be >= 1", ln);
        } else if (key == "domain") {
            const auto parts = split_list(value);
            require(parts.size() == 2, "'domain' expects two numbers", ln);
            const double a = to_double(key, parts[0], ln);
            const double b = to_double(key, parts[1], ln);
            require(b > a, "'domain' must satisfy x_min < x_max", ln);
            c.domain = std::array<double, 2>{a, b};
        } else if (key == "n_v" || key == "n_r" || key == "n_phi" || key == "n_psi" || key == "n_zeta") {
            const int n = to_int(key, value, ln);
            require(n >= 1, "'" + key + "' must be >= 1", ln);
            if (key == "n_v") {
                require(n >= 2 && n % 2 == 0, "n_v must be an even integer >= 2", ln);
                c.n_v = n;
            } else if (key == "n_r") {
                c.n_r = n;
            } else if (key == "n_phi") {
                c.n_phi = n;
            } else if (key == "n_psi") {
                c.n_psi = n;
            } else {
                c.n_zeta = n;
            }
        } else if (key == "delta") {
            c.delta = to_double(key, value, ln);
            require(*c.delta >= 0.0, "delta must be >= 0", ln);
        } else if (key == "kn" || key == "kn_h" || key == "tau") {
            const double v = to_double(key, value, ln);
            require(v > 0.0, "'" + key + "' must be positive", ln);
            (key == "kn" ? c.kn : key == "kn_h" ? c.kn_h : c.tau) = v;
        } else if (key == "collision_model") {
            const std::string v = lower(value);
            require(v == "constant" || v == "power_law", "collision_model must be constant or power_law", ln);
            c.collision_model = v == "power_law" ? CollisionModel::Kind::PowerLaw : CollisionModel::Kind::Constant;
        } else if (key == "omega") {
            c.omega = to_double(key, value, ln);
            require(c.omega > 0.0 && c.omega <= 1.0, "omega must lie in (0, 1]", ln);
        } else if (key == "mach") {
            c.mach = to_double(key, value, ln);
            require(c.mach > 1.0, "mach must exceed 1", ln);
        } else if (key == "beta") {
            c.beta = to_double(key, value, ln);
            require(c.beta > 0.0, "beta must be positive", ln);
        } else if (key == "smooth_ic") {
            c.smooth_ic = to_bool(key, value, ln);
        } else if (key == "t_final") {
            c.t_final = to_double(key, value, ln);
            require(c.t_final >= 0.0, "t_final must be >= 0", ln);
        } else if (key == "cfl") {
            c.cfl = to_double(key, value, ln);
            require(c.cfl > 0.0, "cfl must be positive", ln);
        } else if (key == "eps_u") {
            c.eps_u = to_double(key, value, ln);
            require(c.eps_u > 0.0 && c.eps_u < 1.0, "eps_u must lie in (0, 1)", ln);
        } else if (key == "eps_zeta") {
            c.eps_zeta = to_double(key, value, ln);
            require(c.eps_zeta > 0.0 && c.eps_zeta < 1.0, "eps_zeta must lie in (0, 1)", ln);
        } else if (key == "dvm") {
            c.dvm = to_bool(key, value, ln);
        } else if (key == "dvm_iters" || key == "init_iters") {
            const int n = to_int(key, value, ln);
            require(n >= 0, "'" + key + "' must be >= 0", ln);
            (key == "dvm_iters" ? c.dvm_iters : c.init_iters) = n;
        } else if (key == "bc_left" || key == "bc_right") {
            BoundaryKind kind{};
            try {
                kind = parse_boundary(value);
            } catch (const InvalidArgument& e) {
                throw ParseError(e.what(), ln);
            }
            (key == "bc_left" ? c.bc_left : c.bc_right) = kind;
        } else if (key == "output_interval") {
            c.output_interval = to_double(key, value, ln);
            require(c.output_interval >= 0.0, "output_interval must be >= 0", ln);
        } else if (key == "fu_locations") {
            for (const auto& part : split_list(value)) c.fu_locations.push_back(to_double(key, part, ln));
        } else if (key == "threads") {
            c.threads = to_int(key, value, ln);
            require(c.threads >= 0, "threads must be >= 0", ln);
        }
    }

    std::vector<std::string> missing;
    for (const char* key : {"case", "p", "n_elements", "t_final"}) {
        if (!seen.count(key)) missing.push_back(key);
    }
    const bool polar = seen.count("n_r") || seen.count("n_phi") || seen.count("n_psi");
    if (!seen.count("n_v") && !polar) missing.push_back("n_v (or n_r, n_phi, n_psi)");
    const int n_collision = static_cast<int>(seen.count("kn") + seen.count("kn_h") + seen.count("tau"));
    if (n_collision == 0) missing.push_back("kn | kn_h | tau");
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw ParseError("missing required keys: " + list, 0);
    }
    if (n_collision > 1) {
        const int ln = std::max({seen.count("kn") ? seen["kn"] : 0, seen.count("kn_h") ? seen["kn_h"] : 0,
                                 seen.count("tau") ? seen["tau"] : 0});
        throw ParseError("kn, kn_h and tau are mutually exclusive", ln);
    }
    if (seen.count("n_v") && polar) {
        throw ParseError("n_v cannot be combined with n_r/n_phi/n_psi", seen["n_v"]);
    }
    if (polar && (!c.n_r || !c.n_phi)) {
        throw ParseError("polar velocity grids need both n_r and n_phi", seen.count("n_r") ? seen["n_r"] : seen["n_phi"]);
    }
    if (c.bc_left.has_value() != c.bc_right.has_value() ||
        (c.bc_left && ((*c.bc_left == BoundaryKind::Periodic) != (*c.bc_right == BoundaryKind::Periodic)))) {
        const int ln = std::max(seen.count("bc_left") ? seen["bc_left"] : 0, seen.count("bc_right") ? seen["bc_right"] : 0);
        if (c.bc_left.has_value() != c.bc_right.has_value()) {
            throw ParseError("bc_left and bc_right must be given together", ln);
        }
        throw ParseError("periodic boundaries must be set on both ends", ln);
    }
    return c;
}

Config parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_string(text.str());
}

std::string serialize_config(const Config& c) {
    std::ostringstream os;
    os << "case = " << c.case_name << '\n';
    os << "p = " << c.p << '\n';
    os << "n_elements = " << c.n_elements << '\n';
    if (c.domain) os << "domain = " << fmt((*c.domain)[0]) << ", " << fmt((*c.domain)[1]) << '\n';
    if (c.n_v) os << "n_v = " << *c.n_v << '\n';
    if (c.n_r) os << "n_r = " << *c.n_r << '\n';
    if (c.n_phi) os << "n_phi = " << *c.n_phi << '\n';
    if (c.n_psi) os << "n_psi = " << *c.n_psi << '\n';
    if (c.n_zeta) os << "n_zeta = " << *c.n_zeta << '\n';
    if (c.delta) os << "delta = " << fmt(*c.delta) << '\n';
    if (c.kn) os << "kn = " << fmt(*c.kn) << '\n';
    if (c.kn_h) os << "kn_h = " << fmt(*c.kn_h) << '\n';
    if (c.tau) os << "tau = " << fmt(*c.tau) << '\n';
    if (c.collision_model) os << "collision_model = " << collision_name(*c.collision_model) << '\n';
    os << "omega = " << fmt(c.omega) << '\n';
    os << "mach = " << fmt(c.mach) << '\n';
    os << "beta = " << fmt(c.beta) << '\n';
    os << "smooth_ic = " << (c.smooth_ic ? "true" : "false") << '\n';
    os << "t_final = " << fmt(c.t_final) << '\n';
    os << "cfl = " << fmt(c.cfl) << '\n';
    os << "eps_u = " << fmt(c.eps_u) << '\n';
    os << "eps_zeta = " << fmt(c.eps_zeta) << '\n';
    os << "dvm = " << (c.dvm ? "true" : "false") << '\n';
    os << "dvm_iters = " << c.dvm_iters << '\n';
    os << "init_iters = " << c.init_iters << '\n';
    if (c.bc_left) os << "bc_left = " << boundary_name(*c.bc_left) << '\n';
    if (c.bc_right) os << "bc_right = " << boundary_name(*c.bc_right) << '\n';
    os << "output_interval = " << fmt(c.output_interval) << '\n';
    if (!c.fu_locations.empty()) {
        os << "fu_locations = ";
        for (std::size_t i = 0; i < c.fu_locations.size(); ++i) os << (i ? ", " : "") << fmt(c.fu_locations[i]);
        os << '\n';
    }
    os << "threads = " << c.threads << '\n';
    return os.str();
}

BenchmarkCase make_benchmark(const Config& c) {
    BenchmarkCase bc = make_case(c.case_name);
    ProblemSetup& s = bc.setup;
    s.p = c.p;
    s.n_elements = c.n_elements;
    if (c.domain) {
        s.x_min = (*c.domain)[0];
        s.x_max = (*c.domain)[1];
    }
    if (c.n_v) {
        s.m = 1;
        s.n_v = *c.n_v;
    } else {
        s.m = c.n_psi ? 3 : 2;
        s.n_r = c.n_r.value_or(0);
        s.n_phi = c.n_phi.value_or(0);
        s.n_psi = c.n_psi.value_or(1);
    }
    if (c.n_zeta) s.n_zeta = *c.n_zeta;
    if (c.delta) s.delta = *c.delta;
    s.eps_u = c.eps_u;
    s.eps_zeta = c.eps_zeta;
    s.init_iters = c.init_iters;
    s.solver.dvm = c.dvm;
    s.solver.dvm_iters = c.dvm_iters;
    s.solver.cfl = c.cfl;
    s.solver.threads = c.threads;
    if (c.bc_left) s.bc_left = *c.bc_left;
    if (c.bc_right) s.bc_right = *c.bc_right;

    CollisionSpec col;
    col.kind = c.collision_model.value_or(s.collision.kind);
    col.kn = c.kn;
    col.kn_h = c.kn_h;
    col.tau = c.tau;
    col.omega = c.omega;
    col.l_ref = s.collision.l_ref;
    s.collision = col;

    const double h = (s.x_max - s.x_min) / s.n_elements;
    if (c.case_name == "pulse") {
        s.initial = smooth_pulse(c.beta);
    } else if (c.case_name == "expansion") {
        s.initial = double_expansion(c.smooth_ic, h);
    } else if (c.case_name == "normal_shock") {
        const NormalShock ns = normal_shock(c.mach, s.gamma(), c.omega);
        s.initial = ns.initial;
        bc.left_state = ns.upstream;
        bc.right_state = ns.downstream;
        // Kn = λ_L / L_ref.
        bc.lambda_left = c.kn ? *c.kn * s.collision.l_ref : ns.lambda_left;
    }
    bc.t_final = c.t_final;
    return bc;
}

ProblemSetup make_setup(const Config& config) { return make_benchmark(config).setup; }

}  // namespace polybgk
