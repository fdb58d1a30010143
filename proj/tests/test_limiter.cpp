#include <doctest.h>

#include <cmath>
#include <random>

#include "polybgk/errors.hpp"
#include "polybgk/fr1d.hpp"
#include "polybgk/limiter.hpp"

using namespace polybgk;

TEST_CASE("squeeze examples") {
    const FRBasis b1 = build_basis(1);
    const auto out = squeeze(std::vector<double>{-1.0, 3.0}, b1);
    CHECK(out[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(out[1] == doctest::Approx(2.0));
    CHECK(element_mean(out, b1) == doctest::Approx(1.0));

    const FRBasis b2 = build_basis(2);
    const std::vector<double> pos = {1.0, 2.0, 3.0};
    CHECK(squeeze(pos, b2) == pos);
    const std::vector<double> zero(3, 0.0);
    CHECK(squeeze(zero, b2) == zero);
}

TEST_CASE("negative mean is reported") {
    const FRBasis b1 = build_basis(1);
    CHECK_THROWS_AS(squeeze(std::vector<double>{-3.0, 1.0}, b1), BlowUpError);
}

TEST_CASE("random elements keep their mean and become nonnegative") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-0.5, 2.0);
    for (int p = 1; p <= 5; ++p) {
        const FRBasis b = build_basis(p);
        for (int t = 0; t < 200; ++t) {
            std::vector<double> v(b.n_nodes());
            for (auto& x : v) x = dist(rng);
            if (element_mean(v, b) <= 0.0) continue;
            const auto s = squeeze(v, b);
            CHECK(std::abs(element_mean(s, b) - element_mean(v, b)) < 1e-14);
            for (double x : s) CHECK(x >= 0.0);
            CHECK(squeeze(s, b) == s);
        }
    }
}

TEST_CASE("block squeeze matches the scalar squeeze") {
    const FRBasis b = build_basis(3);
    const std::size_t nq = 3;
    std::vector<double> block = {-0.1, 1.0, 0.5,
                                 0.4, 1.0, 0.5,
                                 0.6, 1.0, -0.05,
                                 0.3, 1.0, 0.9};
    std::vector<double> scratch(2 * nq);
    std::vector<std::vector<double>> cols(nq, std::vector<double>(4));
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t i = 0; i < 4; ++i) cols[q][i] = block[i * nq + q];
    const std::size_t changed = squeeze_block(block, nq, b, scratch);
    CHECK(changed == 2u);
    for (std::size_t q = 0; q < nq; ++q) {
        const auto s = squeeze(cols[q], b);
        for (std::size_t i = 0; i < 4; ++i) CHECK(block[i * nq + q] == doctest::Approx(s[i]).epsilon(1e-14).scale(1.0));
    }
}
