#pragma once

#include <array>
#include <span>
#include <vector>

#include "polybgk/phase_grid.hpp"
#include "polybgk/state.hpp"

namespace polybgk {

/// Parameters of a (possibly modified) Maxwellian
///   g_u(u) = α₁ exp(-α₂ |u - μ|²),  μ = (α₃, U₀_y, U₀_z),
/// with the internal-energy factor evaluated at θ = 1/(2α₂).
struct AlphaParams {
    double amplitude = 0.0;  // α₁
    double beta = 0.0;       // α₂ = 1/(2θ)
    double velocity = 0.0;   // α₃ = U

    std::array<double, 3> as_array() const noexcept { return {amplitude, beta, velocity}; }
    static AlphaParams from_array(const std::array<double, 3>& a) noexcept { return {a[0], a[1], a[2]}; }
};

/// g = g_u × g_ζ at every phase node of a MomentOperator, with the parameters that generated it.
struct EquilibriumField {
    std::vector<double> values;
    AlphaParams alpha;
    double theta = 0.0;
};

struct NewtonResult {
    AlphaParams alpha;
    double residual = 0.0;  // ‖M(ψ g(α)) - Q‖∞ / ‖Q‖∞
    int iterations = 0;
};

/// Γ(δ/2)⁻¹, the normalization of the internal-energy factor.
double internal_energy_normalization(double delta);

/// g_ζ(ζ; θ) = Λ(δ) (ζ/θ)^(δ/2-1) e^(-ζ/θ) / θ. Equals 1 for δ = 0.
double internal_energy_factor(double delta, double theta, double zeta);

/// α whose continuous Maxwellian has moments Q (transverse means at rest).
AlphaParams alpha_from_macro(const MacroState& q, int m, double delta);
/// Continuous moments of g(α).
MacroState macro_from_alpha(const AlphaParams& alpha, int m, double delta);

/// Discrete velocity model on a fixed phase grid.
///
/// The equilibrium is separable, g(u_v, ζ_r) = g_u(u_v) g_ζ(ζ_r), so its moments
/// and the Newton Jacobian reduce to O(N_v + N_ζ) sums. Instances are
/// immutable; scratch space is passed explicitly so one operator can be shared
/// across threads.
class DiscreteVelocityModel {
public:
    struct Workspace {
        std::vector<double> gu;
        std::vector<double> gz;
    };

    explicit DiscreteVelocityModel(const MomentOperator& op);

    const MomentOperator& moment_operator() const noexcept { return *op_; }
    int m() const noexcept { return op_->velocity().m; }
    double delta() const noexcept { return op_->energy().delta; }
    double gamma() const noexcept { return 1.0 + 2.0 / (m() + delta()); }

    Workspace make_workspace() const;

    /// Fill ws.gu and ws.gz for α. Requires α₂ > 0.
    void evaluate_factors(const AlphaParams& alpha, Workspace& ws) const;

    /// Discrete moments M(ψ g(α)) of the factors already held in ws.
    MacroState factor_moments(const AlphaParams& alpha, const Workspace& ws) const;

    /// Discrete moments M(ψ g(α)).
    MacroState discrete_moments(const AlphaParams& alpha) const;

    /// J_ij = M(ψ_i Θ_j g(α)) evaluated analytically.
    std::array<std::array<double, 3>, 3> jacobian(const AlphaParams& alpha) const;

    /// Newton iteration on M(ψ g(α)) = Q from α₀ = α(Q). On return ws holds g(α').
    NewtonResult project(const MacroState& q, int n_iters, Workspace& ws) const;
    NewtonResult project(const MacroState& q, int n_iters) const;

    /// Full nodal field g(α) in phase-index order.
    EquilibriumField evaluate(const AlphaParams& alpha) const;

private:
    std::array<std::array<double, 3>, 3> jacobian_from(const AlphaParams& alpha, const Workspace& ws) const;

    const MomentOperator* op_;
    std::vector<double> vel_weight_;
    std::vector<double> vel_x_;
    std::vector<double> vel_kinetic_;
    std::vector<double> vel_transverse_sq_;  // Σ_{i>1} (u_i - U₀_i)²
    std::vector<double> zeta_;
    std::vector<double> zeta_weight_;
    std::vector<double> log_zeta_;
    double log_norm_ = 0.0;
    double transverse_kinetic_ = 0.0;        // |U₀_⊥|²/2
};

EquilibriumField eval_equilibrium(const AlphaParams& alpha, const MomentOperator& op);

NewtonResult newton_project(const MacroState& q, const MomentOperator& op, int n_iters);

/// H'(z) = M(z log z), with 0 log 0 = 0. Negative entries are rejected.
double discrete_entropy(std::span<const double> z, const MomentOperator& op);

/// Solve the 3×3 system A x = b by Gaussian elimination with partial pivoting.
/// Returns false if a pivot vanishes.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3>& b);

}  // namespace polybgk
