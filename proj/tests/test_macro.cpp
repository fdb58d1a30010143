#include <doctest.h>

#include <cmath>

#include "polybgk/errors.hpp"
#include "polybgk/fr1d.hpp"
#include "polybgk/macro.hpp"

using namespace polybgk;

TEST_CASE("primitive and conserved conversions") {
    const MacroState q = to_conserved({1.0, 0.0, 1.0}, 1.4);
    CHECK(q.rho == 1.0);
    CHECK(q.mom == 0.0);
    CHECK(q.energy == doctest::Approx(2.5));
    const Primitive back = to_primitive(to_conserved({0.3, -1.2, 0.7}, 5.0 / 3.0), 5.0 / 3.0);
    CHECK(back.rho == doctest::Approx(0.3));
    CHECK(back.u == doctest::Approx(-1.2));
    CHECK(back.p == doctest::Approx(0.7));
    CHECK(sound_speed({1.0, 0.0, 1.0}, 1.4) == doctest::Approx(1.1832).epsilon(1e-4));
    CHECK_THROWS_AS(to_conserved({0.0, 0.0, 1.0}, 1.4), InvalidState);
    CHECK_THROWS_AS(to_primitive({1.0, 0.0, -1.0}, 1.4), InvalidState);
}

TEST_CASE("Rankine-Hugoniot jump") {
    const Primitive up{1.0, 3.8 * std::sqrt(5.0 / 3.0), 1.0};
    const Primitive down = rankine_hugoniot(3.8, 5.0 / 3.0, up);
    CHECK(down.rho == doctest::Approx(3.312).epsilon(1e-3));
    CHECK(down.p == doctest::Approx(17.80).epsilon(1e-3));
    CHECK(down.rho * down.u == doctest::Approx(up.rho * up.u).epsilon(1e-13));

    const Primitive same = rankine_hugoniot(1.0, 1.4, {2.0, 1.4, 3.0});
    CHECK(same.rho == doctest::Approx(2.0));
    CHECK(same.p == doctest::Approx(3.0));
    CHECK(rankine_hugoniot(1e4, 5.0 / 3.0, up).rho == doctest::Approx(4.0).epsilon(1e-6));
    CHECK_THROWS_AS(rankine_hugoniot(0.5, 1.4, up), InvalidArgument);
}

TEST_CASE("exact Riemann solver") {
    const ExactRiemann sod({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 1.4);
    CHECK(sod.p_star() == doctest::Approx(0.30313).epsilon(1e-4));
    CHECK(sod.u_star() == doctest::Approx(0.92745).epsilon(1e-4));
    CHECK(sod.rho_star_left() == doctest::Approx(0.42632).epsilon(1e-4));
    CHECK(sod.rho_star_right() == doctest::Approx(0.26557).epsilon(1e-4));
    REQUIRE(sod.right_shock_speed());
    CHECK(*sod.right_shock_speed() == doctest::Approx(1.75216).epsilon(1e-4));
    CHECK_FALSE(sod.left_shock_speed());

    const ExactRiemann flat({0.7, 0.2, 1.1}, {0.7, 0.2, 1.1}, 1.4);
    for (double s : {-3.0, 0.0, 0.5, 4.0}) {
        const Primitive q = flat.sample(s);
        CHECK(q.rho == doctest::Approx(0.7));
        CHECK(q.u == doctest::Approx(0.2));
        CHECK(q.p == doctest::Approx(1.1));
    }

    const ExactRiemann e123({1.0, -2.0, 0.4}, {1.0, 2.0, 0.4}, 1.4);
    CHECK(e123.u_star() == doctest::Approx(0.0).scale(1.0));
    CHECK(e123.p_star() == doctest::Approx(0.00189).epsilon(2e-2));
}

TEST_CASE("shock thickness of analytic profiles") {
    const Mesh1D mesh = Mesh1D::uniform(-10.0, 10.0, 400);
    const FRBasis b = build_basis(3);
    const double w = 0.5, rl = 1.0, rr = 3.0;
    std::vector<double> tanh_rho, ramp;
    for (std::size_t e = 0; e < mesh.n_elements(); ++e)
        for (std::size_t i = 0; i < b.n_nodes(); ++i) {
            const double x = mesh.map(e, b.xi[i]);
            tanh_rho.push_back(rl + 0.5 * (rr - rl) * (1.0 + std::tanh(x / w)));
            ramp.push_back(x < -2 ? rl : x > 2 ? rr : rl + (rr - rl) * (x + 2) / 4);
        }
    const ShockThickness st = shock_thickness(tanh_rho, mesh, b, 1.0, rl, rr);
    CHECK(st.thickness == doctest::Approx(2 * w).epsilon(0.02));
    CHECK(st.inverse_ratio == doctest::Approx(1.0 / st.thickness));
    CHECK(shock_thickness(ramp, mesh, b, 1.0).thickness == doctest::Approx(4.0).epsilon(0.02));
    std::vector<double> falling(tanh_rho.size());
    for (std::size_t k = 0; k < falling.size(); ++k) falling[k] = -0.1 * static_cast<double>(k);
    CHECK_THROWS_AS(shock_thickness(falling, mesh, b, 1.0, 0.0, 2.0), InvalidArgument);
}

TEST_CASE("integration and error metrics") {
    const Mesh1D mesh = Mesh1D::uniform(0.0, 2.0, 4);
    const FRBasis b = build_basis(2);
    std::vector<double> x2;
    for (std::size_t e = 0; e < 4; ++e)
        for (std::size_t i = 0; i < 3; ++i) x2.push_back(std::pow(mesh.map(e, b.xi[i]), 2));
    CHECK(integrate(x2, mesh, b) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    std::vector<double> shifted = x2;
    shifted[5] += 0.25;
    const ErrorMetrics em = error_metrics(shifted, x2, mesh, b);
    CHECK(em.linf_density == doctest::Approx(0.25));
    CHECK(em.mass_error > 0.0);
}

TEST_CASE("mesh Knudsen number") {
    const MeshKnudsen ok = mesh_knudsen(1e-2, 1.0, 0.05);
    CHECK(ok.kn_h == doctest::Approx(0.2));
    CHECK(ok.resolved);
    CHECK(ok.warning.empty());
    const MeshKnudsen bad = mesh_knudsen(1e-4, 1.0, 0.01);
    CHECK_FALSE(bad.resolved);
    CHECK_FALSE(bad.warning.empty());
}

TEST_CASE("convergence rate") {
    const std::vector<double> h = {0.1, 0.05, 0.025};
    const std::vector<double> e = {1e-2, 1.25e-3, 1.5625e-4};
    CHECK(convergence_rate(h, e) == doctest::Approx(3.0).epsilon(1e-12));
}
