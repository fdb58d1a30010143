#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace polybgk {

/// Discrete distribution f indexed (element, solution node, phase node),
/// where the phase index q = velocity · N_ζ + ζ-node. Contiguous, element-major.
struct DistributionField {
    std::size_t n_elements = 0;
    std::size_t n_nodes = 0;  // p + 1
    std::size_t n_phase = 0;  // N_v · N_ζ
    std::vector<double> values;

    DistributionField() = default;
    DistributionField(std::size_t ne, std::size_t np, std::size_t nq, double fill = 0.0)
        : n_elements(ne), n_nodes(np), n_phase(nq), values(ne * np * nq, fill) {}

    std::size_t n_points() const noexcept { return n_elements * n_nodes; }
    std::size_t block_size() const noexcept { return n_nodes * n_phase; }

    /// Phase-space slice at spatial point (element e, node i).
    std::span<double> slice(std::size_t e, std::size_t i) noexcept {
        return {values.data() + (e * n_nodes + i) * n_phase, n_phase};
    }
    std::span<const double> slice(std::size_t e, std::size_t i) const noexcept {
        return {values.data() + (e * n_nodes + i) * n_phase, n_phase};
    }
    std::span<const double> point(std::size_t pt) const noexcept {
        return {values.data() + pt * n_phase, n_phase};
    }
    std::span<double> block(std::size_t e) noexcept { return {values.data() + e * block_size(), block_size()}; }
};

}  // namespace polybgk
