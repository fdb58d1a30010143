#pragma once

#include <utility>
#include <vector>

namespace polybgk {

/// Nodes and weights of a one-dimensional quadrature rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Legendre polynomial P_n(x) and its derivative, by the three-term recurrence.
std::pair<double, double> legendre(int n, double x);

/// n-point Gauss–Legendre rule. Nodes strictly increasing; throws InvalidArgument for n < 1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss–Lobatto–Legendre rule (endpoints included). Requires n >= 2.
QuadratureRule gauss_lobatto(int n);

}  // namespace polybgk
