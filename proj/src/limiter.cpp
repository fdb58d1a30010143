#include "polybgk/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "polybgk/errors.hpp"

namespace polybgk {

namespace {

// Mean tolerance relative to the element's largest magnitude.
constexpr double kMeanTolerance = 1e-12;

inline double squeeze_factor(double mean, double min_value) {
    const double denom = mean - min_value;
    if (std::abs(denom) < 1e-300) return 1.0;
    return std::min(std::abs(mean / denom), 1.0);
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

}  // namespace

double element_mean(std::span<const double> nodal, const FRBasis& basis) {
    if (nodal.size() != basis.n_nodes()) throw InvalidArgument("element_mean: wrong number of nodal values");
    double mean = 0.0;
    for (std::size_t i = 0; i < nodal.size(); ++i) mean += basis.mean_weights[i] * nodal[i];
    return mean;
}

std::vector<double> squeeze(std::span<const double> nodal, const FRBasis& basis) {
    const double mean = element_mean(nodal, basis);
    double min_value = nodal[0];
    double scale = 0.0;
    for (double v : nodal) {
        min_value = std::min(min_value, v);
        scale = std::max(scale, std::abs(v));
    }
    std::vector<double> out(nodal.begin(), nodal.end());
    if (min_value >= 0.0) return out;
    if (mean < -kMeanTolerance * scale) {
        throw BlowUpError("squeeze: negative element mean " + sci(mean) + " (time step too large?)");
    }
    if (mean <= 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return out;
    }
    const double beta = squeeze_factor(mean, min_value);
    // Clamp round-off at the minimum node so a second pass is the identity.
    for (auto& v : out) v = std::max(mean + beta * (v - mean), 0.0);
    return out;
}

std::size_t squeeze_block(std::span<double> block, std::size_t n_phase, const FRBasis& basis,
                          std::span<double> scratch) {
    const std::size_t np = basis.n_nodes();
    double* __restrict mean = scratch.data();
    double* __restrict min_value = scratch.data() + n_phase;
    double* f = block.data();

    const double m0 = basis.mean_weights[0];
    double scale = 0.0;
#pragma omp simd reduction(max : scale)
    for (std::size_t q = 0; q < n_phase; ++q) {
        mean[q] = m0 * f[q];
        min_value[q] = f[q];
        scale = std::max(scale, std::abs(f[q]));
    }
    for (std::size_t i = 1; i < np; ++i) {
        const double mi = basis.mean_weights[i];
        const double* __restrict row = f + i * n_phase;
#pragma omp simd reduction(max : scale)
        for (std::size_t q = 0; q < n_phase; ++q) {
            mean[q] += mi * row[q];
            min_value[q] = std::min(min_value[q], row[q]);
            scale = std::max(scale, std::abs(row[q]));
        }
    }
    double lowest = 0.0;
#pragma omp simd reduction(min : lowest)
    for (std::size_t q = 0; q < n_phase; ++q) lowest = std::min(lowest, min_value[q]);
    if (lowest >= 0.0) return 0;

    std::size_t limited = 0;
    for (std::size_t q = 0; q < n_phase; ++q) {
        if (min_value[q] >= 0.0) continue;
        if (mean[q] < -kMeanTolerance * scale) {
            throw BlowUpError("squeeze: negative element mean " + sci(mean[q]) + " (element max |f| " + sci(scale) + ") at phase node " +
                              std::to_string(q) + " (time step too large?)");
        }
        if (mean[q] <= 0.0) {
            // Round-off level negative mean: the only nonnegative state is zero.
            for (std::size_t i = 0; i < np; ++i) f[i * n_phase + q] = 0.0;
            ++limited;
            continue;
        }
        const double beta = squeeze_factor(mean[q], min_value[q]);
        for (std::size_t i = 0; i < np; ++i) {
            double& v = f[i * n_phase + q];
            v = std::max(mean[q] + beta * (v - mean[q]), 0.0);
        }
        ++limited;
    }
    return limited;
}

}  // namespace polybgk
