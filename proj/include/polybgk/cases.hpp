#pragma once

#include <functional>
#include <optional>
#include <string>

#include "polybgk/solver.hpp"
#include "polybgk/state.hpp"

namespace polybgk {

using InitialCondition = std::function<Primitive(double)>;

/// ρ = 1 + exp(-β(x - 1/2)²), U = 1, P = 1.
InitialCondition smooth_pulse(double beta = 100.0);

/// 123 problem: q_L = [1, -2, 0.4], q_R = [1, 2, 0.4] split at x = 1/2, or
/// U = 2 tanh((x - 1/2)/h) when smooth.
InitialCondition double_expansion(bool smooth = false, double h = 0.0);

/// Sod shock tube: [1, 0, 1] | [0.125, 0, 0.1] split at x = 1/2.
InitialCondition sod();

/// Normal shock IC with upstream q_L = [1, M√γ, 1] and the Rankine–Hugoniot downstream state, split at x = 0.
struct NormalShock {
    InitialCondition initial;
    Primitive upstream;
    Primitive downstream;
    double lambda_left = 1.0;  // upstream mean free path (Kn = 1, L_ref = 1)
    CollisionModel model;      // power law seeded from the upstream state
};

NormalShock normal_shock(double mach, double gamma = 5.0 / 3.0, double omega = 0.81);

/// A named benchmark with its standard configuration.
struct BenchmarkCase {
    ProblemSetup setup;
    double t_final = 0.0;
    std::optional<Primitive> left_state;
    std::optional<Primitive> right_state;
    double lambda_left = 0.0;
};

BenchmarkCase pulse_case(int p = 5, int n_elements = 20, double kn = 1e-2, double delta = 0.0, int n_v = 32,
                         int n_zeta = 16);
BenchmarkCase expansion_case(bool smooth = false, int n_elements = 100, int n_v = 32, int n_zeta = 32);
BenchmarkCase sod_case(double kn_h = 0.1, int n_elements = 50, int n_v = 16, int n_zeta = 16);
BenchmarkCase normal_shock_case(double mach = 3.8, int n_elements = 100, int n_v = 32, int n_zeta = 32);

/// Case by name: pulse, expansion, sod, normal_shock, uniform.
BenchmarkCase make_case(const std::string& name);

}  // namespace polybgk
