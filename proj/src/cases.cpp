#include "polybgk/cases.hpp"

#include <cmath>

#include "polybgk/errors.hpp"
#include "polybgk/macro.hpp"

namespace polybgk {

InitialCondition smooth_pulse(double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("smooth_pulse: beta must be positive");
    return [beta](double x) {
        const double d = x - 0.5;
        return Primitive{1.0 + std::exp(-beta * d * d), 1.0, 1.0};
    };
}

InitialCondition double_expansion(bool smooth, double h) {
    if (smooth) {
        if (!(h > 0.0)) throw InvalidArgument("double_expansion: h must be positive for the smoothed profile");
        return [h](double x) { return Primitive{1.0, 2.0 * std::tanh((x - 0.5) / h), 0.4}; };
    }
    return [](double x) { return x < 0.5 ? Primitive{1.0, -2.0, 0.4} : Primitive{1.0, 2.0, 0.4}; };
}

InitialCondition sod() {
    return [](double x) { return x < 0.5 ? Primitive{1.0, 0.0, 1.0} : Primitive{0.125, 0.0, 0.1}; };
}

NormalShock normal_shock(double mach, double gamma, double omega) {
    if (!(mach > 1.0)) throw InvalidArgument("normal_shock: Mach number must exceed 1");
    NormalShock s;
    s.upstream = Primitive{1.0, mach * std::sqrt(gamma), 1.0};
    s.downstream = rankine_hugoniot(mach, gamma, s.upstream);
    s.lambda_left = 1.0;
    const Primitive up = s.upstream;
    const Primitive down = s.downstream;
    s.initial = [up, down](double x) { return x < 0.0 ? up : down; };
    const double tau_ref = collision_time_from_knudsen(1.0, gamma, 1.0, sound_speed(up, gamma));
    s.model = CollisionModel::power_law(tau_ref, up.rho, up.theta(), omega);
    return s;
}

BenchmarkCase pulse_case(int p, int n_elements, double kn, double delta, int n_v, int n_zeta) {
    BenchmarkCase c;
    auto& s = c.setup;
    s.name = "pulse";
    s.x_min = 0.0;
    s.x_max = 1.0;
    s.n_elements = n_elements;
    s.p = p;
    s.initial = smooth_pulse(100.0);
    s.n_v = n_v;
    s.delta = delta;
    s.n_zeta = n_zeta;
    s.bc_left = s.bc_right = BoundaryKind::Periodic;
    s.collision.kn = kn;
    c.t_final = 1.0;
    return c;
}

BenchmarkCase expansion_case(bool smooth, int n_elements, int n_v, int n_zeta) {
    BenchmarkCase c;
    auto& s = c.setup;
    s.name = "expansion";
    s.n_elements = n_elements;
    s.p = 3;
    const double h = 1.0 / n_elements;
    s.initial = double_expansion(smooth, h);
    s.n_v = n_v;
    s.delta = 4.0;
    s.n_zeta = n_zeta;
    s.bc_left = s.bc_right = BoundaryKind::Dirichlet;
    if (smooth) {
        s.collision.kn = h / 10.0;
    } else {
        s.collision.kn = 1e-3;
    }
    c.t_final = 0.15;
    c.left_state = Primitive{1.0, -2.0, 0.4};
    c.right_state = Primitive{1.0, 2.0, 0.4};
    return c;
}

BenchmarkCase sod_case(double kn_h, int n_elements, int n_v, int n_zeta) {
    BenchmarkCase c;
    auto& s = c.setup;
    s.name = "sod";
    s.n_elements = n_elements;
    s.p = 3;
    s.initial = sod();
    s.n_v = n_v;
    s.delta = 4.0;
    s.n_zeta = n_zeta;
    s.bc_left = s.bc_right = BoundaryKind::Dirichlet;
    s.collision.kn_h = kn_h;
    c.t_final = 0.2;
    c.left_state = Primitive{1.0, 0.0, 1.0};
    c.right_state = Primitive{0.125, 0.0, 0.1};
    return c;
}

BenchmarkCase normal_shock_case(double mach, int n_elements, int n_v, int n_zeta) {
    BenchmarkCase c;
    auto& s = c.setup;
    s.name = "normal_shock";
    s.x_min = -25.0;
    s.x_max = 25.0;
    s.n_elements = n_elements;
    s.p = 3;
    s.delta = 2.0;
    const NormalShock ns = normal_shock(mach, s.gamma(), 0.81);
    s.initial = ns.initial;
    s.n_v = n_v;
    s.n_zeta = n_zeta;
    s.bc_left = s.bc_right = BoundaryKind::Dirichlet;
    s.collision.kind = CollisionModel::Kind::PowerLaw;
    s.collision.kn = 1.0;
    s.collision.omega = 0.81;
    c.t_final = 100.0;
    c.left_state = ns.upstream;
    c.right_state = ns.downstream;
    c.lambda_left = ns.lambda_left;
    return c;
}

BenchmarkCase make_case(const std::string& name) {
    if (name == "pulse") return pulse_case();
    if (name == "expansion") return expansion_case();
    if (name == "sod") return sod_case();
    if (name == "normal_shock") return normal_shock_case();
    if (name == "uniform") {
        BenchmarkCase c;
        c.setup.name = "uniform";
        c.setup.initial = [](double) { return Primitive{1.0, 0.3, 1.0}; };
        c.setup.p = 3;
        c.setup.n_elements = 10;
        c.setup.collision.kn = 1e-2;
        c.t_final = 0.1;
        return c;
    }
    throw ConfigError("unknown case '" + name + "' (expected pulse, expansion, sod, normal_shock or uniform)");
}

}  // namespace polybgk
