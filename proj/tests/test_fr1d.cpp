#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polybgk/errors.hpp"
#include "polybgk/fr1d.hpp"
#include "polybgk/limiter.hpp"

using namespace polybgk;

TEST_CASE("linear basis") {
    const FRBasis b = build_basis(1);
    REQUIRE(b.n_nodes() == 2u);
    CHECK(b.xi[0] == -1.0);
    CHECK(b.xi[1] == 1.0);
    CHECK(b.diff(0, 0) == doctest::Approx(-0.5));
    CHECK(b.diff(0, 1) == doctest::Approx(0.5));
    CHECK(b.diff(1, 0) == doctest::Approx(-0.5));
    CHECK(b.diff(1, 1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(build_basis(0), InvalidArgument);
}

TEST_CASE("correction function derivatives integrate to the jump") {
    for (int p = 1; p <= 6; ++p) {
        const FRBasis b = build_basis(p);
        // g_L' is a polynomial of degree p, integrated exactly by the p+1 point GLL rule only up to 2p-1;
        // use the derivative matrix identity instead: Σ_j D_ij = 0 and the mean weights integrate g'
        double sl = 0.0, sr = 0.0, wsum = 0.0;
        for (std::size_t i = 0; i < b.n_nodes(); ++i) {
            sl += 2.0 * b.mean_weights[i] * b.g_left_deriv[i];
            sr += 2.0 * b.mean_weights[i] * b.g_right_deriv[i];
            wsum += b.mean_weights[i];
            double row = 0.0;
            for (std::size_t j = 0; j < b.n_nodes(); ++j) row += b.diff(i, j);
            CHECK(std::abs(row) < 1e-12);
        }
        CHECK(sl == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(sr == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t i = 0; i < b.n_nodes(); ++i) {
            CHECK(b.g_right_deriv[i] == doctest::Approx(-b.g_left_deriv[b.n_nodes() - 1 - i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("differentiation matrix is exact for degree p") {
    const FRBasis b = build_basis(4);
    for (std::size_t i = 0; i < b.n_nodes(); ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < b.n_nodes(); ++j) d += b.diff(i, j) * std::pow(b.xi[j], 4);
        CHECK(d == doctest::Approx(4.0 * std::pow(b.xi[i], 3)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("upwind flux") {
    CHECK(upwind_flux(2.0, 5.0, 1.0) == 2.0);
    CHECK(upwind_flux(2.0, 5.0, -1.0) == -5.0);
    CHECK(upwind_flux(2.0, 5.0, 0.0) == 0.0);
}

TEST_CASE("mesh") {
    const Mesh1D m = Mesh1D::uniform(-1.0, 3.0, 8);
    CHECK(m.n_elements() == 8u);
    CHECK(m.h(3) == doctest::Approx(0.5));
    CHECK(m.h_min() == doctest::Approx(0.5));
    CHECK(m.length() == doctest::Approx(4.0));
    CHECK(m.map(0, -1.0) == -1.0);
    CHECK(m.map(7, 1.0) == doctest::Approx(3.0));
    CHECK(max_node_spacing(m, build_basis(1)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(Mesh1D({0.0, 1.0, 0.5}), InvalidArgument);
}

TEST_CASE("constant field gives zero transport") {
    const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, 7);
    for (int p = 1; p <= 5; ++p) {
        const FRBasis b = build_basis(p);
        const std::vector<double> f(7 * b.n_nodes(), 3.5);
        for (double u : {-2.0, 0.7}) {
            for (const auto& v : advect_rhs(f, u, mesh, b, BoundarySpec::periodic())) CHECK(std::abs(v) < 1e-13);
        }
    }
}

TEST_CASE("advection of a sine converges at order p+1") {
    for (int p = 1; p <= 3; ++p) {
        const FRBasis b = build_basis(p);
        std::vector<double> err;
        std::vector<double> hs;
        for (int ne : {8, 16, 32}) {
            const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, ne);
            std::vector<double> f(ne * b.n_nodes());
            for (int e = 0; e < ne; ++e)
                for (std::size_t i = 0; i < b.n_nodes(); ++i)
                    f[e * b.n_nodes() + i] = std::sin(2 * std::numbers::pi * mesh.map(e, b.xi[i]));
            const auto r = advect_rhs(f, 1.0, mesh, b, BoundarySpec::periodic());
            double m = 0.0;
            for (int e = 0; e < ne; ++e)
                for (std::size_t i = 0; i < b.n_nodes(); ++i) {
                    const double exact = -2 * std::numbers::pi * std::cos(2 * std::numbers::pi * mesh.map(e, b.xi[i]));
                    m = std::max(m, std::abs(r[e * b.n_nodes() + i] - exact));
                }
            err.push_back(m);
            hs.push_back(1.0 / ne);
        }
        // derivative error of the upwind scheme decays at least at order p
        const double rate = std::log(err[1] / err[2]) / std::log(2.0);
        CHECK(rate > p - 0.3);
    }
}

TEST_CASE("upwind boundary values") {
    const Mesh1D mesh = Mesh1D::uniform(0.0, 2.0, 2);
    const FRBasis b = build_basis(2);
    // step: 1 on the left element, 0 on the right; Neumann ends
    std::vector<double> f = {1, 1, 1, 0, 0, 0};
    BoundarySpec bc;
    bc.left.kind = BoundaryKind::Neumann;
    bc.right.kind = BoundaryKind::Neumann;
    const auto right_moving = advect_rhs(f, 1.0, mesh, b, bc);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(right_moving[i]) < 1e-13);
    CHECK(right_moving[3] > 0.0);
    const auto left_moving = advect_rhs(f, -1.0, mesh, b, bc);
    for (int i = 3; i < 6; ++i) CHECK(std::abs(left_moving[i]) < 1e-13);
    CHECK(left_moving[2] < 0.0);

    BoundarySpec dir;
    dir.left.kind = BoundaryKind::Dirichlet;
    dir.left.state = {2.0};
    dir.right.kind = BoundaryKind::Neumann;
    const std::vector<double> ones(6, 2.0);
    for (double v : advect_rhs(ones, 1.0, mesh, b, dir)) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("batched transport agrees with the scalar operator") {
    const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, 5);
    const FRBasis b = build_basis(3);
    const std::vector<double> speeds = {-1.5, -0.2, 0.4, 2.0};
    const TransportOperator op(mesh, b, speeds, BoundarySpec::periodic());
    const std::size_t np = b.n_nodes(), nq = speeds.size();
    std::vector<double> f(op.field_size());
    for (std::size_t e = 0; e < 5; ++e)
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t q = 0; q < nq; ++q)
                f[(e * np + i) * nq + q] = std::cos(3.0 * mesh.map(e, b.xi[i]) + q);
    std::vector<double> rhs(f.size());
    op.apply(f, rhs);
    for (std::size_t q = 0; q < nq; ++q) {
        std::vector<double> fq(5 * np);
        for (std::size_t k = 0; k < fq.size(); ++k) fq[k] = f[k * nq + q];
        const auto r = advect_rhs(fq, speeds[q], mesh, b, BoundarySpec::periodic());
        for (std::size_t k = 0; k < fq.size(); ++k) CHECK(rhs[k * nq + q] == doctest::Approx(r[k]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("element mean") {
    const FRBasis b1 = build_basis(1);
    CHECK(element_mean(std::vector<double>{0.0, 2.0}, b1) == doctest::Approx(1.0));
    const FRBasis b4 = build_basis(4);
    std::vector<double> c(5, 4.2), odd(5);
    CHECK(element_mean(c, b4) == doctest::Approx(4.2));
    for (int i = 0; i < 5; ++i) odd[i] = std::pow(b4.xi[i], 3) - b4.xi[i];
    CHECK(std::abs(element_mean(odd, b4)) < 1e-15);
}
