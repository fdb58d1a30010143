#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polybgk/fr1d.hpp"

namespace polybgk {

/// Σ m_i f(ξ_i): the element mean of a nodal polynomial.
double element_mean(std::span<const double> nodal, const FRBasis& basis);

/// Zhang–Shu squeeze toward the element mean: f̂ = f̄ + β (f - f̄),
/// β = min(|f̄ / (f̄ - f_min)|, 1). Mean-preserving; leaves nonnegative input untouched.
/// Throws BlowUpError when the mean itself is negative beyond round-off.
std::vector<double> squeeze(std::span<const double> nodal, const FRBasis& basis);

/// In-place squeeze of one element block laid out as (p+1) rows of n_phase values.
/// Returns the number of phase nodes that were modified. scratch needs 2·n_phase entries.
std::size_t squeeze_block(std::span<double> block, std::size_t n_phase, const FRBasis& basis,
                          std::span<double> scratch);

}  // namespace polybgk
