#pragma once

#include <array>

namespace polybgk {

using Vec3 = std::array<double, 3>;

/// Gas model: velocity-space dimension m and internal degrees of freedom δ.
struct GasModel {
    int m = 1;
    double delta = 0.0;

    /// γ = 1 + 2/(m + δ).
    double gamma() const noexcept { return 1.0 + 2.0 / (m + delta); }
};

/// Primitive variables q = [ρ, U, P] for a one-dimensional flow.
struct Primitive {
    double rho = 1.0;
    double u = 0.0;
    double p = 1.0;

    double theta() const noexcept { return p / rho; }
};

/// Conserved variables Q = [ρ, ρU, E] for a one-dimensional flow.
struct MacroState {
    double rho = 0.0;
    double mom = 0.0;
    double energy = 0.0;

    double velocity() const noexcept { return mom / rho; }
    double pressure(double gamma) const noexcept {
        return (gamma - 1.0) * (energy - 0.5 * mom * mom / rho);
    }
    double theta(double gamma) const noexcept { return pressure(gamma) / rho; }

    std::array<double, 3> as_array() const noexcept { return {rho, mom, energy}; }
};

}  // namespace polybgk
