#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "polybgk/cases.hpp"
#include "polybgk/fr1d.hpp"
#include "polybgk/solver.hpp"

namespace polybgk {

/// Run configuration read from a flat `key = value` file with `#` comments.
struct Config {
    std::string case_name;
    int p = 3;
    int n_elements = 0;
    std::optional<std::array<double, 2>> domain;
    std::optional<int> n_v;
    std::optional<int> n_r, n_phi, n_psi;
    std::optional<int> n_zeta;
    std::optional<double> delta;
    std::optional<double> kn, kn_h, tau;
    std::optional<CollisionModel::Kind> collision_model;
    double omega = 0.81;
    double mach = 3.8;
    double beta = 100.0;
    bool smooth_ic = false;
    double t_final = 0.0;
    double cfl = 0.5;
    double eps_u = 1e-15;
    double eps_zeta = 1e-6;
    bool dvm = true;
    int dvm_iters = 2;
    int init_iters = 5;
    std::optional<BoundaryKind> bc_left, bc_right;
    double output_interval = 0.0;
    std::vector<double> fu_locations;
    int threads = 1;
};

/// Every key accepted by the parser, in serialization order.
const std::vector<std::string>& config_keys();

Config parse_config_string(const std::string& text);
Config parse_config(const std::string& path);

/// Normalized text form. Only keys that are set (or carry defaults) are written; numbers use 17 digits.
std::string serialize_config(const Config& config);

std::string boundary_name(BoundaryKind kind);
BoundaryKind parse_boundary(const std::string& name);

/// Problem setup for the configured case with all overrides applied.
ProblemSetup make_setup(const Config& config);

/// Reference far states and λ_L for the configured case (used by the run report).
BenchmarkCase make_benchmark(const Config& config);

}  // namespace polybgk
