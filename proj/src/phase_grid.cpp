#include "polybgk/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "polybgk/errors.hpp"
#include "polybgk/quadrature.hpp"

namespace polybgk {

double compute_k(double eps_u, double gamma) {
    if (!(eps_u > 0.0 && eps_u < 1.0)) throw InvalidArgument("compute_k: eps_u must lie in (0, 1)");
    if (!(gamma > 1.0)) throw InvalidArgument("compute_k: gamma must exceed 1");
    return std::sqrt(-(2.0 / gamma) * std::log(eps_u));
}

double compute_r_max(std::span<const Primitive> initial, double eps_u, double gamma) {
    if (initial.empty()) throw InvalidArgument("compute_r_max: empty initial state");
    const double k = compute_k(eps_u, gamma);
    double cs_max = 0.0;
    double u_min = std::numeric_limits<double>::infinity();
    double u_max = -u_min;
    for (const auto& q : initial) {
        if (!(q.rho > 0.0) || !(q.p > 0.0)) {
            throw InvalidState("compute_r_max: non-positive density or pressure in initial state");
        }
        cs_max = std::max(cs_max, std::sqrt(gamma * q.p / q.rho));
        u_min = std::min(u_min, q.u);
        u_max = std::max(u_max, q.u);
    }
    return k * cs_max + 0.5 * std::abs(u_max - u_min);
}

Vec3 compute_velocity_offset(std::span<const Primitive> initial) {
    if (initial.empty()) throw InvalidArgument("compute_velocity_offset: empty initial state");
    const auto [lo, hi] = std::minmax_element(initial.begin(), initial.end(),
                                              [](const Primitive& a, const Primitive& b) { return a.u < b.u; });
    return {0.5 * (lo->u + hi->u), 0.0, 0.0};
}

double compute_zeta_max(double delta, double eps_zeta, double theta_max) {
    if (!(delta > 0.0)) throw InvalidArgument("compute_zeta_max: delta must be positive");
    if (!(eps_zeta > 0.0 && eps_zeta < 1.0)) throw InvalidArgument("compute_zeta_max: eps_zeta must lie in (0, 1)");
    if (!(theta_max > 0.0)) throw InvalidArgument("compute_zeta_max: theta_max must be positive");

    // log of the unnormalized tail, decreasing for x > max(δ/2 - 1, 0).
    const double log_eps = std::log(eps_zeta);
    auto residual = [&](double x) { return (0.5 * delta - 1.0) * std::log(x) - x - log_eps; };
    double lo = std::max(1.0, 0.5 * delta);
    double hi = 200.0;
    if (residual(lo) < 0.0) {
        throw InvalidArgument("compute_zeta_max: eps_zeta too large, no root beyond the mode");
    }
    if (residual(hi) > 0.0) throw InvalidArgument("compute_zeta_max: root beyond search bracket");
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    return theta_max * 0.5 * (lo + hi);
}

VelocityGrid build_velocity_grid(int m, int n_r, int n_phi, int n_psi, double r_max, Vec3 offset) {
    if (m < 1 || m > 3) throw InvalidArgument("build_velocity_grid: m must be 1, 2 or 3");
    if (n_r < 1) throw InvalidArgument("build_velocity_grid: N_r must be >= 1");
    if (!(r_max > 0.0)) throw InvalidArgument("build_velocity_grid: r_max must be positive");
    if (m >= 2 && n_phi < 1) throw InvalidArgument("build_velocity_grid: N_phi must be >= 1");
    if (m == 3 && n_psi < 1) throw InvalidArgument("build_velocity_grid: N_psi must be >= 1");

    VelocityGrid grid;
    grid.m = m;
    grid.r_max = r_max;
    grid.offset = offset;
    for (int i = m; i < 3; ++i) grid.offset[i] = 0.0;

    const QuadratureRule gl = gauss_legendre(n_r);
    std::vector<double> radius(n_r);
    std::vector<double> radial_weight(n_r);
    for (int i = 0; i < n_r; ++i) {
        radius[i] = r_max * 0.5 * (gl.nodes[i] + 1.0);
        radial_weight[i] = r_max * 0.5 * gl.weights[i] * std::pow(radius[i], m - 1);
    }

    if (m == 1) {
        grid.shape = {n_r, 2, 1};
        grid.nodes.reserve(2 * n_r);
        grid.weights.reserve(2 * n_r);
        for (int i = n_r - 1; i >= 0; --i) {
            grid.nodes.push_back({offset[0] - radius[i], 0.0, 0.0});
            grid.weights.push_back(radial_weight[i]);
        }
        for (int i = 0; i < n_r; ++i) {
            grid.nodes.push_back({offset[0] + radius[i], 0.0, 0.0});
            grid.weights.push_back(radial_weight[i]);
        }
        return grid;
    }

    const double dphi = 2.0 * std::numbers::pi / n_phi;
    if (m == 2) {
        grid.shape = {n_r, n_phi, 1};
        for (int i = 0; i < n_r; ++i) {
            for (int j = 0; j < n_phi; ++j) {
                const double phi = j * dphi;
                grid.nodes.push_back({radius[i] * std::cos(phi) + offset[0], radius[i] * std::sin(phi) + offset[1], 0.0});
                grid.weights.push_back(radial_weight[i] * dphi);
            }
        }
        return grid;
    }

    const double dpsi = std::numbers::pi / n_psi;
    grid.shape = {n_r, n_phi, n_psi};
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            const double phi = j * dphi;
            for (int k = 0; k < n_psi; ++k) {
                const double psi = (k + 0.5) * dpsi;
                grid.nodes.push_back({radius[i] * std::sin(psi) * std::cos(phi) + offset[0],
                                      radius[i] * std::sin(psi) * std::sin(phi) + offset[1],
                                      radius[i] * std::cos(psi) + offset[2]});
                grid.weights.push_back(radial_weight[i] * dphi * dpsi * std::sin(psi));
            }
        }
    }
    return grid;
}

VelocityGrid build_velocity_grid_1d(int n_v, double r_max, double offset) {
    if (n_v < 2 || n_v % 2 != 0) {
        throw InvalidArgument("build_velocity_grid_1d: N_v must be a positive even integer, got " + std::to_string(n_v));
    }
    return build_velocity_grid(1, n_v / 2, 2, 1, r_max, {offset, 0.0, 0.0});
}

InternalEnergyGrid build_internal_energy_grid(double delta, int n_zeta, double zeta_max) {
    if (delta < 0.0) throw InvalidArgument("build_internal_energy_grid: delta must be >= 0");
    InternalEnergyGrid grid;
    grid.delta = delta;
    if (delta == 0.0) {
        grid.nodes = {0.0};
        grid.weights = {1.0};
        grid.zeta_max = 0.0;
        return grid;
    }
    if (n_zeta < 1) throw InvalidArgument("build_internal_energy_grid: N_zeta must be >= 1");
    if (!(zeta_max > 0.0)) throw InvalidArgument("build_internal_energy_grid: zeta_max must be positive");
    const QuadratureRule gl = gauss_legendre(n_zeta);
    grid.zeta_max = zeta_max;
    grid.nodes.resize(n_zeta);
    grid.weights.resize(n_zeta);
    for (int i = 0; i < n_zeta; ++i) {
        grid.nodes[i] = zeta_max * 0.5 * (gl.nodes[i] + 1.0);
        grid.weights[i] = zeta_max * 0.5 * gl.weights[i];
    }
    return grid;
}

MomentOperator::MomentOperator(VelocityGrid velocity, InternalEnergyGrid energy)
    : velocity_(std::move(velocity)), energy_(std::move(energy)) {
    const std::size_t nv = velocity_.size();
    const std::size_t nz = energy_.size();
    if (nv == 0 || nz == 0) throw InvalidArgument("MomentOperator: empty grid");
    const std::size_t n = nv * nz;
    weight_.resize(n);
    speed_.resize(n);
    energy_psi_.resize(n);
    w_speed_.resize(n);
    w_energy_.resize(n);
    for (std::size_t v = 0; v < nv; ++v) {
        const Vec3& u = velocity_.nodes[v];
        const double kinetic = 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        for (std::size_t r = 0; r < nz; ++r) {
            const std::size_t q = v * nz + r;
            weight_[q] = velocity_.weights[v] * energy_.weights[r];
            speed_[q] = u[0];
            energy_psi_[q] = kinetic + energy_.nodes[r];
            w_speed_[q] = weight_[q] * speed_[q];
            w_energy_[q] = weight_[q] * energy_psi_[q];
        }
    }
}

MacroState MomentOperator::moments(std::span<const double> f) const {
    if (f.size() != size()) throw InvalidArgument("moments: phase-space slice has wrong size");
    const std::size_t n = f.size();
    const double* __restrict fv = f.data();
    const double* __restrict w0 = weight_.data();
    const double* __restrict w1 = w_speed_.data();
    const double* __restrict w2 = w_energy_.data();
    double rho = 0.0, mom = 0.0, energy = 0.0;
    // Vector reduction: summation order is fixed for a given build.
#pragma omp simd reduction(+ : rho, mom, energy)
    for (std::size_t q = 0; q < n; ++q) {
        rho += w0[q] * fv[q];
        mom += w1[q] * fv[q];
        energy += w2[q] * fv[q];
    }
    return {rho, mom, energy};
}

double MomentOperator::density(std::span<const double> f) const {
    if (f.size() != size()) throw InvalidArgument("density: phase-space slice has wrong size");
    const std::size_t n = f.size();
    const double* __restrict fv = f.data();
    const double* __restrict w0 = weight_.data();
    double rho = 0.0;
#pragma omp simd reduction(+ : rho)
    for (std::size_t q = 0; q < n; ++q) rho += w0[q] * fv[q];
    return rho;
}

MacroState moments(std::span<const double> f, const MomentOperator& op) { return op.moments(f); }

}  // namespace polybgk
