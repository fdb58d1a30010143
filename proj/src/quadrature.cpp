#include "polybgk/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "polybgk/errors.hpp"

namespace polybgk {

std::pair<double, double> legendre(int n, double x) {
    if (n == 0) return {1.0, 0.0};
    double p_prev = 1.0;
    double p = x;
    for (int k = 2; k <= n; ++k) {
        const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    // P_n'(x) from the derivative recurrence; at |x| = 1 use the closed form.
    double dp;
    if (std::abs(std::abs(x) - 1.0) < 1e-300) {
        dp = 0.5 * n * (n + 1.0) * (x > 0 ? 1.0 : ((n % 2 == 0) ? -1.0 : 1.0));
    } else {
        dp = n * (x * p - p_prev) / (x * x - 1.0);
    }
    return {p, dp};
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th largest root.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const auto [p, dp] = legendre(n, x);
        (void)p;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_lobatto(int n) {
    if (n < 2) throw InvalidArgument("gauss_lobatto: n must be >= 2");
    const int p = n - 1;
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.nodes.front() = -1.0;
    rule.nodes.back() = 1.0;
    // Interior nodes are the roots of P_p'(x); Newton on q(x) = (1 - x^2) P_p'(x),
    // q'(x) = -p(p+1) P_p(x).
    for (int i = 1; i <= (n - 1) / 2; ++i) {
        double x = -std::cos(std::numbers::pi * i / p);
        for (int it = 0; it < 100; ++it) {
            const auto [pp, dpp] = legendre(p, x);
            const double q = (1.0 - x * x) * dpp;
            const double dq = -p * (p + 1.0) * pp;
            const double dx = q / dq;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.nodes[n - 1 - i] = -x;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pp = legendre(p, rule.nodes[i]).first;
        rule.weights[i] = 2.0 / (p * (p + 1.0) * pp * pp);
    }
    return rule;
}

}  // namespace polybgk
