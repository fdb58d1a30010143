#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "polybgk/dvm.hpp"
#include "polybgk/errors.hpp"
#include "polybgk/phase_grid.hpp"

using namespace polybgk;

TEST_CASE("compute_k closed form") {
    CHECK(compute_k(1e-15, 1.4) == doctest::Approx(7.0243).epsilon(1e-4));
    for (double g : {1.4, 5.0 / 3.0, 3.0}) {
        CHECK(compute_k(1e-6, g) / compute_k(1e-15, g) == doctest::Approx(std::sqrt(0.4)).epsilon(1e-12));
        CHECK(compute_k(1e-6, g) / compute_k(1e-15, g) == doctest::Approx(0.632).epsilon(1e-3));
    }
    CHECK(compute_k(1.0 - 1e-15, 1.4) < 1e-6);
}

TEST_CASE("compute_r_max") {
    const std::vector<Primitive> uniform = {{1.0, 0.0, 1.0}};
    const double r = compute_r_max(uniform, 1e-15, 3.0);
    CHECK(r == doctest::Approx(8.310).epsilon(1e-3));
    const std::vector<Primitive> split = {{1.0, -2.0, 1.0}, {1.0, 2.0, 1.0}};
    CHECK(compute_r_max(split, 1e-15, 3.0) - r == doctest::Approx(2.0).epsilon(1e-12));
    const std::vector<Primitive> sod = {{1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}};
    CHECK(compute_r_max(sod, 1e-15, 1.4) == doctest::Approx(compute_k(1e-15, 1.4) * std::sqrt(1.4)).epsilon(1e-12));
}

TEST_CASE("compute_velocity_offset") {
    const std::vector<Primitive> u1 = {{1.0, 1.0, 1.0}, {2.0, 1.0, 1.0}};
    CHECK(compute_velocity_offset(u1)[0] == doctest::Approx(1.0));
    const std::vector<Primitive> e123 = {{1.0, -2.0, 0.4}, {1.0, 2.0, 0.4}};
    CHECK(compute_velocity_offset(e123)[0] == doctest::Approx(0.0));
    std::vector<Primitive> wave;
    for (int i = 0; i < 4000; ++i) wave.push_back({1.0, std::sin(2 * std::numbers::pi * i / 4000.0), 1.0});
    CHECK(std::abs(compute_velocity_offset(wave)[0]) < 1e-6);
}

TEST_CASE("compute_zeta_max solves the tail equation") {
    // δ = 2: e^-x = ε has the closed-form root -log ε
    CHECK(compute_zeta_max(2.0, 1e-2, 1.0) == doctest::Approx(std::log(100.0)).epsilon(1e-10));
    for (double delta : {3.0, 4.0, 5.0, 7.0}) {
        for (double eps : {1e-2, 1e-6, 1e-14}) {
            const double x = compute_zeta_max(delta, eps, 1.0);
            CHECK(x > delta / 2.0 - 1.0);
            CHECK(std::pow(x, delta / 2.0 - 1.0) * std::exp(-x) == doctest::Approx(eps).epsilon(1e-8));
        }
    }
    CHECK(compute_zeta_max(4.0, 1e-6, 2.5) == doctest::Approx(2.5 * compute_zeta_max(4.0, 1e-6, 1.0)));
    CHECK_THROWS_AS(compute_zeta_max(0.0, 1e-6, 1.0), InvalidArgument);
}

TEST_CASE("one-dimensional velocity grid") {
    const auto g = build_velocity_grid_1d(2, 1.0, 0.0);
    REQUIRE(g.size() == 2);
    CHECK(g.nodes[0][0] == doctest::Approx(-0.5));
    CHECK(g.nodes[1][0] == doctest::Approx(0.5));
    CHECK(g.weights[0] == doctest::Approx(1.0));
    CHECK(g.weights[1] == doctest::Approx(1.0));

    const auto h = build_velocity_grid_1d(32, 5.0, 0.7);
    for (std::size_t i = 1; i < h.size(); ++i) CHECK(h.nodes[i][0] > h.nodes[i - 1][0]);
    CHECK(std::accumulate(h.weights.begin(), h.weights.end(), 0.0) == doctest::Approx(10.0).epsilon(1e-13));
    for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK(h.nodes[i][0] - 0.7 == doctest::Approx(-(h.nodes[h.mirror(i)][0] - 0.7)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(build_velocity_grid_1d(7, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("polar and spherical grids integrate area and volume") {
    const auto disk = build_velocity_grid(2, 6, 5, 0, 2.0, {0.0, 0.0, 0.0});
    CHECK(disk.size() == 30u);
    CHECK(std::accumulate(disk.weights.begin(), disk.weights.end(), 0.0) ==
          doctest::Approx(std::numbers::pi * 4.0).epsilon(1e-13));
    double prev = 1.0;
    for (int n : {4, 8, 16, 32}) {
        const auto ball = build_velocity_grid(3, 4, 4, n, 1.5, {0.0, 0.0, 0.0});
        const double vol = std::accumulate(ball.weights.begin(), ball.weights.end(), 0.0);
        const double err = std::abs(vol / (4.0 / 3.0 * std::numbers::pi * 3.375) - 1.0);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("internal energy grid") {
    const auto z0 = build_internal_energy_grid(0.0, 8, 0.0);
    REQUIRE(z0.size() == 1);
    CHECK(z0.nodes[0] == 0.0);
    CHECK(z0.weights[0] == 1.0);
    CHECK(z0.inert());

    const auto z = build_internal_energy_grid(4.0, 8, 10.0);
    CHECK(std::accumulate(z.weights.begin(), z.weights.end(), 0.0) == doctest::Approx(10.0).epsilon(1e-12));
    for (double v : z.nodes) {
        CHECK(v > 0.0);
        CHECK(v <= 10.0);
    }

    const double zmax = compute_zeta_max(4.0, 1e-6, 1.0);
    const auto zf = build_internal_energy_grid(4.0, 32, zmax);
    double mass = 0.0;
    for (std::size_t i = 0; i < zf.size(); ++i) mass += zf.weights[i] * internal_energy_factor(4.0, 1.0, zf.nodes[i]);
    // ∫_0^zmax ζ e^-ζ dζ = 1 - (1 + zmax) e^-zmax
    CHECK(mass == doctest::Approx(1.0 - (1.0 + zmax) * std::exp(-zmax)).epsilon(1e-10));
    CHECK(std::abs(mass - 1.0) < 2e-6);
}

TEST_CASE("moment operator") {
    const MomentOperator op(build_velocity_grid_1d(8, 4.0, 0.0), build_internal_energy_grid(2.0, 4, 6.0));
    std::vector<double> f(op.size(), 0.0);
    const auto q0 = op.moments(f);
    CHECK(q0.rho == 0.0);
    CHECK(q0.mom == 0.0);
    CHECK(q0.energy == 0.0);

    const std::size_t k = 13;
    f[k] = 1.0 / op.weight(k);
    const auto q = op.moments(f);
    const double u = op.speeds()[k];
    const double zeta = op.energy().nodes[k % op.n_energy()];
    CHECK(q.rho == doctest::Approx(1.0));
    CHECK(q.mom == doctest::Approx(u));
    CHECK(q.energy == doctest::Approx(0.5 * u * u + zeta));
    CHECK(op.density(f) == doctest::Approx(1.0));
}
