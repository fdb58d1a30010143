#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polybgk/field.hpp"
#include "polybgk/fr1d.hpp"
#include "polybgk/phase_grid.hpp"
#include "polybgk/state.hpp"

namespace polybgk {

MacroState to_conserved(const Primitive& q, double gamma);
Primitive to_primitive(const MacroState& q, double gamma);

/// e = θ / (γ - 1).
inline double specific_internal_energy(double theta, double gamma) { return theta / (gamma - 1.0); }

inline double sound_speed(const Primitive& q, double gamma) { return std::sqrt(gamma * q.p / q.rho); }

/// Downstream state of a normal shock with upstream Mach number M ≥ 1.
Primitive rankine_hugoniot(double mach, double gamma, const Primitive& upstream);

/// Exact ideal-gas Riemann problem solution, sampled in similarity variable x/t.
class ExactRiemann {
public:
    ExactRiemann(const Primitive& left, const Primitive& right, double gamma);

    double p_star() const noexcept { return p_star_; }
    double u_star() const noexcept { return u_star_; }
    bool vacuum() const noexcept { return vacuum_; }
    /// Post-wave densities left and right of the contact.
    double rho_star_left() const noexcept { return rho_star_l_; }
    double rho_star_right() const noexcept { return rho_star_r_; }
    /// Shock speeds, when the corresponding wave is a shock.
    std::optional<double> left_shock_speed() const;
    std::optional<double> right_shock_speed() const;

    Primitive sample(double x_over_t) const;

private:
    Primitive left_, right_;
    double gamma_;
    double p_star_ = 0.0;
    double u_star_ = 0.0;
    double rho_star_l_ = 0.0;
    double rho_star_r_ = 0.0;
    bool vacuum_ = false;
};

std::vector<Primitive> exact_riemann(const Primitive& left, const Primitive& right, double gamma,
                                     std::span<const double> x_over_t);

/// Nodal ∂_x of a scalar nodal field using the FR corrected gradient with
/// interface values averaged between neighbours (BR1). Domain ends take the
/// interior trace.
std::vector<double> corrected_gradient(std::span<const double> nodal, const Mesh1D& mesh, const FRBasis& basis);

struct ShockThickness {
    double thickness = 0.0;       // Δ = (ρ_R - ρ_L) / max ∂_x ρ
    double max_gradient = 0.0;
    double rho_left = 0.0;
    double rho_right = 0.0;
    double inverse_ratio = 0.0;   // λ_L / Δ
};

/// Far states come from far_left/far_right when given, else from the means of the outer 10% of the domain.
ShockThickness shock_thickness(std::span<const double> density, const Mesh1D& mesh, const FRBasis& basis,
                               double lambda_left, std::optional<double> far_left = std::nullopt,
                               std::optional<double> far_right = std::nullopt);

struct FuSlice {
    std::vector<double> u;
    std::vector<double> f_u;
    double x = 0.0;  // coordinate of the solution node actually used
};

/// f_u(u) = max_ζ f(x, u, ζ) at the solution node nearest to x.
FuSlice extract_fu(const DistributionField& field, double x, const Mesh1D& mesh, const FRBasis& basis,
                   const MomentOperator& op);

/// ∫ z dx via element means.
double integrate(std::span<const double> nodal, const Mesh1D& mesh, const FRBasis& basis);

struct ErrorMetrics {
    double linf_density = 0.0;
    double mass_error = 0.0;
};

ErrorMetrics error_metrics(std::span<const double> density, std::span<const double> reference, const Mesh1D& mesh,
                           const FRBasis& basis);

struct MeshKnudsen {
    double kn_h = 0.0;
    double mean_free_path = 0.0;
    bool resolved = true;      // Kn_h ≥ 1/10
    std::string warning;       // non-empty when unresolved
};

MeshKnudsen mesh_knudsen(double kn, double l_ref, double h_max_node);

/// Least-squares slope of log(error) against log(h).
double convergence_rate(std::span<const double> h, std::span<const double> error);

}  // namespace polybgk
