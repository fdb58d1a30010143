#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "polybgk/state.hpp"

namespace polybgk {

/// Truncated, nodally discretized velocity space Ω^u ⊂ R^m.
///
/// For m = 1 the nodes are two Gauss–Legendre rules on [-r_max, 0] and
/// [0, r_max] (shifted by the offset), stored in ascending order. For m = 2, 3
/// the nodes are a polar/spherical tensor grid with radial Gauss–Legendre
/// nodes, stored radius-major. Unused velocity components are zero.
struct VelocityGrid {
    int m = 1;
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    double r_max = 0.0;
    Vec3 offset{0.0, 0.0, 0.0};
    std::array<int, 3> shape{0, 1, 1};  // (N_r, N_phi, N_psi)

    std::size_t size() const noexcept { return nodes.size(); }

    /// Index of the node -u for an m = 1 grid with zero offset.
    std::size_t mirror(std::size_t i) const noexcept { return nodes.size() - 1 - i; }
};

/// Internal-energy grid ζ ∈ (0, ζ_max]. For δ = 0 it is the inert singleton {ζ = 0, w = 1}.
struct InternalEnergyGrid {
    double delta = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    double zeta_max = 0.0;

    std::size_t size() const noexcept { return nodes.size(); }
    bool inert() const noexcept { return delta == 0.0; }
};

/// k = sqrt(-(2/γ) log ε_u): thermal-scaled radius at which a Maxwellian falls to ε_u of its peak.
double compute_k(double eps_u, double gamma);

/// r_max = k · max c_s + |δU| / 2 over the sampled initial state.
double compute_r_max(std::span<const Primitive> initial, double eps_u, double gamma);

/// U_0 = (max U + min U) / 2 (first component; others zero).
Vec3 compute_velocity_offset(std::span<const Primitive> initial);

/// ζ_max = θ_max · x*, x* the tail root of x^(δ/2-1) e^(-x) = ε_ζ.
double compute_zeta_max(double delta, double eps_zeta, double theta_max);

VelocityGrid build_velocity_grid(int m, int n_r, int n_phi, int n_psi, double r_max, Vec3 offset);

/// m = 1 grid with n_v (even) total nodes.
VelocityGrid build_velocity_grid_1d(int n_v, double r_max, double offset = 0.0);

InternalEnergyGrid build_internal_energy_grid(double delta, int n_zeta, double zeta_max);

/// Discrete moment operator M over Ω^u × Ω^ζ for a one-dimensional flow.
///
/// Phase-space values are laid out velocity-major: index q = v · N_ζ + r.
/// Precomputes the weighted collision invariants w_q ψ(u_q, ζ_r).
class MomentOperator {
public:
    MomentOperator(VelocityGrid velocity, InternalEnergyGrid energy);

    const VelocityGrid& velocity() const noexcept { return velocity_; }
    const InternalEnergyGrid& energy() const noexcept { return energy_; }

    std::size_t size() const noexcept { return weight_.size(); }
    std::size_t n_velocity() const noexcept { return velocity_.size(); }
    std::size_t n_energy() const noexcept { return energy_.size(); }

    /// Combined weight w_v · w_ζ at phase index q.
    double weight(std::size_t q) const noexcept { return weight_[q]; }
    /// ψ(u_q, ζ_q) = [1, u_x, |u|²/2 + ζ].
    std::array<double, 3> psi(std::size_t q) const noexcept { return {1.0, speed_[q], energy_psi_[q]}; }
    /// Advection speed (x-velocity) at phase index q.
    std::span<const double> speeds() const noexcept { return speed_; }

    /// Q = M(ψ f) for one spatial point; f must have size() entries.
    MacroState moments(std::span<const double> f) const;
    /// ρ = M(f) only.
    double density(std::span<const double> f) const;

private:
    VelocityGrid velocity_;
    InternalEnergyGrid energy_;
    std::vector<double> weight_;
    std::vector<double> speed_;
    std::vector<double> energy_psi_;
    std::vector<double> w_speed_;
    std::vector<double> w_energy_;
};

MacroState moments(std::span<const double> f, const MomentOperator& op);

}  // namespace polybgk
