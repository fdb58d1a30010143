#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "polybgk/dvm.hpp"
#include "polybgk/errors.hpp"
#include "polybgk/macro.hpp"
#include "polybgk/phase_grid.hpp"

using namespace polybgk;

namespace {

MomentOperator make_op(int n_v, double r_max, double delta, int n_zeta, double zeta_max) {
    return MomentOperator(build_velocity_grid_1d(n_v, r_max, 0.0), build_internal_energy_grid(delta, n_zeta, zeta_max));
}

double rel_residual(const MacroState& got, const MacroState& q) {
    const double scale = std::max({std::abs(q.rho), std::abs(q.mom), std::abs(q.energy)});
    return std::max({std::abs(got.rho - q.rho), std::abs(got.mom - q.mom), std::abs(got.energy - q.energy)}) / scale;
}

}  // namespace

TEST_CASE("alpha from the standard Maxwellian state") {
    const AlphaParams a = alpha_from_macro({1.0, 0.0, 0.5}, 1, 0.0);
    CHECK(a.amplitude == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(a.beta == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(a.velocity == doctest::Approx(0.0));
    const auto g = eval_equilibrium(a, make_op(2, 1.0, 0.0, 1, 0.0));
    // nodes at ±r/2 of a 2-node grid; amplitude is the value at the peak
    CHECK(a.amplitude * std::exp(-a.beta * 0.0) == doctest::Approx(0.39894).epsilon(1e-5));
    CHECK(g.values.size() == 2u);
}

TEST_CASE("alpha and macro states are inverse") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-2.0, 2.0), P(0.2, 3.0);
    for (double delta : {0.0, 2.0, 3.0, 4.0}) {
        const double gamma = 1.0 + 2.0 / (1.0 + delta);
        for (int i = 0; i < 20; ++i) {
            const Primitive prim{P(rng), U(rng), P(rng)};
            const MacroState q = to_conserved(prim, gamma);
            const MacroState back = macro_from_alpha(alpha_from_macro(q, 1, delta), 1, delta);
            CHECK(rel_residual(back, q) < 1e-14);
        }
    }
    CHECK_THROWS_AS(alpha_from_macro({-1.0, 0.0, 1.0}, 1, 0.0), InvalidState);
    CHECK_THROWS_AS(alpha_from_macro({1.0, 2.0, 1.0}, 1, 0.0), InvalidState);
}

TEST_CASE("internal energy factor") {
    CHECK(internal_energy_factor(0.0, 1.3, 0.0) == 1.0);
    CHECK(internal_energy_normalization(4.0) == doctest::Approx(1.0));
    CHECK(internal_energy_normalization(3.0) == doctest::Approx(1.0 / std::tgamma(1.5)));
    // δ = 4: g_ζ = ζ e^{-ζ/θ} / θ²
    CHECK(internal_energy_factor(4.0, 2.0, 3.0) == doctest::Approx(3.0 * std::exp(-1.5) / 4.0).epsilon(1e-14));
}

TEST_CASE("Newton projection matches discrete moments") {
    for (double delta : {0.0, 2.0, 4.0}) {
        const double gamma = 1.0 + 2.0 / (1.0 + delta);
        const double zmax = delta > 0.0 ? compute_zeta_max(delta, 1e-6, 1.5) : 0.0;
        const MomentOperator op = make_op(16, 7.0, delta, 16, zmax);
        const MacroState q = to_conserved({1.2, 0.3, 1.1}, gamma);
        const NewtonResult r0 = newton_project(q, op, 0);
        const AlphaParams a0 = alpha_from_macro(q, 1, delta);
        CHECK(r0.alpha.amplitude == a0.amplitude);
        CHECK(r0.alpha.beta == a0.beta);
        CHECK(r0.alpha.velocity == a0.velocity);
        CHECK(r0.iterations == 0);

        double prev = rel_residual(DiscreteVelocityModel(op).discrete_moments(a0), q);
        for (int it = 1; it <= 3; ++it) {
            const NewtonResult r = newton_project(q, op, it);
            const double res = rel_residual(DiscreteVelocityModel(op).discrete_moments(r.alpha), q);
            CHECK(res <= prev);
            CHECK(r.residual == doctest::Approx(res).epsilon(1e-6).scale(1e-16));
            prev = res;
        }
        CHECK(prev < 1e-13);
    }
}

TEST_CASE("projection approaches the continuous alpha as the grid is refined") {
    const MacroState q = to_conserved({1.0, 0.2, 0.8}, 3.0);
    const AlphaParams a0 = alpha_from_macro(q, 1, 0.0);
    double prev = 1.0;
    for (int n : {8, 16, 32, 64}) {
        const NewtonResult r = newton_project(q, make_op(n, 8.0, 0.0, 1, 0.0), 4);
        const double d = std::abs(r.alpha.amplitude - a0.amplitude) + std::abs(r.alpha.beta - a0.beta) +
                         std::abs(r.alpha.velocity - a0.velocity);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("analytic Jacobian agrees with finite differences") {
    const MomentOperator op = make_op(16, 6.0, 4.0, 12, compute_zeta_max(4.0, 1e-6, 1.2));
    const DiscreteVelocityModel dvm(op);
    const AlphaParams a{0.3, 0.6, 0.4};
    const auto j = dvm.jacobian(a);
    const auto base = a.as_array();
    for (int c = 0; c < 3; ++c) {
        const double h = 1e-6 * std::max(1.0, std::abs(base[c]));
        auto ap = base, am = base;
        ap[c] += h;
        am[c] -= h;
        const auto mp = dvm.discrete_moments(AlphaParams::from_array(ap)).as_array();
        const auto mm = dvm.discrete_moments(AlphaParams::from_array(am)).as_array();
        for (int r = 0; r < 3; ++r) {
            const double fd = (mp[r] - mm[r]) / (2 * h);
            CHECK(fd == doctest::Approx(j[r][c]).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("discrete entropy") {
    const MomentOperator op = make_op(8, 3.0, 0.0, 1, 0.0);
    std::vector<double> z(op.size(), 0.0);
    CHECK(discrete_entropy(z, op) == 0.0);
    std::fill(z.begin(), z.end(), 1.0);
    CHECK(discrete_entropy(z, op) == 0.0);
    z[0] = -1.0;
    CHECK_THROWS_AS(discrete_entropy(z, op), InvalidArgument);
}

TEST_CASE("solve3") {
    std::array<std::array<double, 3>, 3> a{{{0.0, 2.0, 1.0}, {1.0, 1.0, 0.0}, {3.0, 0.0, 1.0}}};
    std::array<double, 3> b{7.0, 3.0, 6.0};  // x = (1, 2, 3)
    REQUIRE(solve3(a, b));
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[1] == doctest::Approx(2.0));
    CHECK(b[2] == doctest::Approx(3.0));
    std::array<std::array<double, 3>, 3> s{{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {0.0, 0.0, 1.0}}};
    std::array<double, 3> c{1.0, 2.0, 3.0};
    CHECK_FALSE(solve3(s, c));
}
