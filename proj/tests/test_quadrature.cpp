#include <doctest.h>

#include <cmath>

#include "polybgk/errors.hpp"
#include "polybgk/quadrature.hpp"

using namespace polybgk;

TEST_CASE("gauss_legendre small rules") {
    const auto r1 = gauss_legendre(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(0.0));
    CHECK(r1.weights[0] == doctest::Approx(2.0));

    const auto r2 = gauss_legendre(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(1.0));
    CHECK(r2.weights[1] == doctest::Approx(1.0));
}

TEST_CASE("gauss_legendre exactness to degree 2n-1") {
    for (int n = 1; n <= 20; ++n) {
        const auto r = gauss_legendre(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
            const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(std::abs(s - exact) < 1e-13);
        }
        for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
    const auto r8 = gauss_legendre(8);
    double s = 0.0;
    for (std::size_t i = 0; i < r8.size(); ++i) s += r8.weights[i] * std::pow(r8.nodes[i], 15);
    CHECK(std::abs(s) < 1e-14);
}

TEST_CASE("gauss_lobatto includes endpoints and is exact to degree 2n-3") {
    for (int n = 2; n <= 12; ++n) {
        const auto r = gauss_lobatto(n);
        CHECK(r.nodes.front() == -1.0);
        CHECK(r.nodes.back() == 1.0);
        for (int deg = 0; deg <= 2 * n - 3; ++deg) {
            double s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
            const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(std::abs(s - exact) < 1e-13);
        }
    }
    const auto r2 = gauss_lobatto(2);
    CHECK(r2.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("quadrature argument checks") {
    CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
    CHECK_THROWS_AS(gauss_lobatto(1), InvalidArgument);
}

TEST_CASE("legendre recurrence") {
    const auto [p3, d3] = legendre(3, 0.5);
    CHECK(p3 == doctest::Approx(0.5 * (5 * 0.125 - 3 * 0.5)));
    CHECK(d3 == doctest::Approx(0.5 * (15 * 0.25 - 3)));
}
