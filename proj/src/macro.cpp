#include "polybgk/macro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "polybgk/errors.hpp"
#include "polybgk/limiter.hpp"

namespace polybgk {

MacroState to_conserved(const Primitive& q, double gamma) {
    if (!(q.rho > 0.0) || !(q.p > 0.0)) throw InvalidState("to_conserved: inadmissible primitive state");
    return {q.rho, q.rho * q.u, q.p / (gamma - 1.0) + 0.5 * q.rho * q.u * q.u};
}

Primitive to_primitive(const MacroState& q, double gamma) {
    if (!(q.rho > 0.0)) throw InvalidState("to_primitive: non-positive density");
    const Primitive out{q.rho, q.mom / q.rho, q.pressure(gamma)};
    if (!(out.p > 0.0)) throw InvalidState("to_primitive: non-positive pressure");
    return out;
}

Primitive rankine_hugoniot(double mach, double gamma, const Primitive& upstream) {
    if (!(mach >= 1.0)) throw InvalidArgument("rankine_hugoniot: Mach number must be >= 1");
    const double m2 = mach * mach;
    const double rho_ratio = (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
    const double u_ratio = ((gamma - 1.0) * m2 + 2.0) / ((gamma + 1.0) * m2);
    const double p_ratio = (2.0 * gamma * m2 - (gamma - 1.0)) / (gamma + 1.0);
    return {upstream.rho * rho_ratio, upstream.u * u_ratio, upstream.p * p_ratio};
}

namespace {

struct PressureFunction {
    double value;
    double derivative;
};

// Toro's f_K(p) for one side of the Riemann problem.
PressureFunction pressure_function(double p, const Primitive& s, double gamma) {
    const double c = std::sqrt(gamma * s.p / s.rho);
    if (p > s.p) {
        const double a = 2.0 / ((gamma + 1.0) * s.rho);
        const double b = (gamma - 1.0) / (gamma + 1.0) * s.p;
        const double root = std::sqrt(a / (p + b));
        return {(p - s.p) * root, root * (1.0 - 0.5 * (p - s.p) / (b + p))};
    }
    const double ratio = p / s.p;
    const double z = (gamma - 1.0) / (2.0 * gamma);
    return {2.0 * c / (gamma - 1.0) * (std::pow(ratio, z) - 1.0),
            1.0 / (s.rho * c) * std::pow(ratio, -(gamma + 1.0) / (2.0 * gamma))};
}

}  // namespace

ExactRiemann::ExactRiemann(const Primitive& left, const Primitive& right, double gamma)
    : left_(left), right_(right), gamma_(gamma) {
    if (!(left.rho > 0.0) || !(left.p > 0.0) || !(right.rho > 0.0) || !(right.p > 0.0)) {
        throw InvalidState("exact_riemann: inadmissible initial states");
    }
    const double cl = std::sqrt(gamma * left.p / left.rho);
    const double cr = std::sqrt(gamma * right.p / right.rho);
    const double du = right.u - left.u;
    if (2.0 * (cl + cr) / (gamma - 1.0) <= du) {
        vacuum_ = true;
        return;
    }
    // Two-rarefaction initial guess.
    const double z = (gamma - 1.0) / (2.0 * gamma);
    double p = std::pow((cl + cr - 0.5 * (gamma - 1.0) * du) / (cl / std::pow(left.p, z) + cr / std::pow(right.p, z)),
                        1.0 / z);
    p = std::max(p, 1e-14);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        const auto fl = pressure_function(p, left, gamma);
        const auto fr = pressure_function(p, right, gamma);
        double next = p - (fl.value + fr.value + du) / (fl.derivative + fr.derivative);
        if (next <= 0.0) next = 0.5 * p;
        const double change = 2.0 * std::abs(next - p) / (next + p);
        p = next;
        if (change < 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged) throw ConvergenceError("exact_riemann: pressure iteration did not converge");
    p_star_ = p;
    const auto fl = pressure_function(p, left, gamma);
    const auto fr = pressure_function(p, right, gamma);
    u_star_ = 0.5 * (left.u + right.u) + 0.5 * (fr.value - fl.value);

    const double g = (gamma - 1.0) / (gamma + 1.0);
    auto star_density = [&](const Primitive& s) {
        const double ratio = p / s.p;
        if (p > s.p) return s.rho * (ratio + g) / (g * ratio + 1.0);
        return s.rho * std::pow(ratio, 1.0 / gamma);
    };
    rho_star_l_ = star_density(left);
    rho_star_r_ = star_density(right);
}

std::optional<double> ExactRiemann::left_shock_speed() const {
    if (vacuum_ || p_star_ <= left_.p) return std::nullopt;
    const double cl = std::sqrt(gamma_ * left_.p / left_.rho);
    return left_.u - cl * std::sqrt((gamma_ + 1.0) / (2.0 * gamma_) * p_star_ / left_.p + (gamma_ - 1.0) / (2.0 * gamma_));
}

std::optional<double> ExactRiemann::right_shock_speed() const {
    if (vacuum_ || p_star_ <= right_.p) return std::nullopt;
    const double cr = std::sqrt(gamma_ * right_.p / right_.rho);
    return right_.u + cr * std::sqrt((gamma_ + 1.0) / (2.0 * gamma_) * p_star_ / right_.p + (gamma_ - 1.0) / (2.0 * gamma_));
}

Primitive ExactRiemann::sample(double s) const {
    const double gamma = gamma_;
    const double cl = std::sqrt(gamma * left_.p / left_.rho);
    const double cr = std::sqrt(gamma * right_.p / right_.rho);
    const double gm1 = gamma - 1.0;
    const double gp1 = gamma + 1.0;

    if (vacuum_) {
        // Two rarefactions separated by vacuum.
        const double head_l = left_.u - cl;
        const double tail_l = left_.u + 2.0 * cl / gm1;
        const double head_r = right_.u + cr;
        const double tail_r = right_.u - 2.0 * cr / gm1;
        if (s <= head_l) return left_;
        if (s < tail_l) {
            const double c = 2.0 / gp1 * (cl + 0.5 * gm1 * (left_.u - s));
            const double rho = left_.rho * std::pow(c / cl, 2.0 / gm1);
            return {rho, 2.0 / gp1 * (cl + 0.5 * gm1 * left_.u + s), left_.p * std::pow(c / cl, 2.0 * gamma / gm1)};
        }
        if (s >= head_r) return right_;
        if (s > tail_r) {
            const double c = 2.0 / gp1 * (cr - 0.5 * gm1 * (right_.u - s));
            const double rho = right_.rho * std::pow(c / cr, 2.0 / gm1);
            return {rho, 2.0 / gp1 * (-cr + 0.5 * gm1 * right_.u + s), right_.p * std::pow(c / cr, 2.0 * gamma / gm1)};
        }
        return {0.0, 0.5 * (tail_l + tail_r), 0.0};
    }

    if (s <= u_star_) {
        if (p_star_ > left_.p) {
            if (s <= *left_shock_speed()) return left_;
            return {rho_star_l_, u_star_, p_star_};
        }
        const double head = left_.u - cl;
        const double c_star = cl * std::pow(p_star_ / left_.p, gm1 / (2.0 * gamma));
        const double tail = u_star_ - c_star;
        if (s <= head) return left_;
        if (s >= tail) return {rho_star_l_, u_star_, p_star_};
        const double c = 2.0 / gp1 * (cl + 0.5 * gm1 * (left_.u - s));
        return {left_.rho * std::pow(c / cl, 2.0 / gm1), 2.0 / gp1 * (cl + 0.5 * gm1 * left_.u + s),
                left_.p * std::pow(c / cl, 2.0 * gamma / gm1)};
    }
    if (p_star_ > right_.p) {
        if (s >= *right_shock_speed()) return right_;
        return {rho_star_r_, u_star_, p_star_};
    }
    const double head = right_.u + cr;
    const double c_star = cr * std::pow(p_star_ / right_.p, gm1 / (2.0 * gamma));
    const double tail = u_star_ + c_star;
    if (s >= head) return right_;
    if (s <= tail) return {rho_star_r_, u_star_, p_star_};
    const double c = 2.0 / gp1 * (cr - 0.5 * gm1 * (right_.u - s));
    return {right_.rho * std::pow(c / cr, 2.0 / gm1), 2.0 / gp1 * (-cr + 0.5 * gm1 * right_.u + s),
            right_.p * std::pow(c / cr, 2.0 * gamma / gm1)};
}

std::vector<Primitive> exact_riemann(const Primitive& left, const Primitive& right, double gamma,
                                     std::span<const double> x_over_t) {
    const ExactRiemann solution(left, right, gamma);
    std::vector<Primitive> out;
    out.reserve(x_over_t.size());
    for (double s : x_over_t) out.push_back(solution.sample(s));
    return out;
}

std::vector<double> corrected_gradient(std::span<const double> nodal, const Mesh1D& mesh, const FRBasis& basis) {
    const std::size_t np = basis.n_nodes();
    const std::size_t ne = mesh.n_elements();
    if (nodal.size() != ne * np) throw InvalidArgument("corrected_gradient: field has wrong size");
    std::vector<double> grad(nodal.size());
    for (std::size_t k = 0; k < ne; ++k) {
        const double* z = nodal.data() + k * np;
        const double left_common = k > 0 ? 0.5 * (z[0] + nodal[k * np - 1]) : z[0];
        const double right_common = k + 1 < ne ? 0.5 * (z[np - 1] + nodal[(k + 1) * np]) : z[np - 1];
        const double jl = left_common - z[0];
        const double jr = right_common - z[np - 1];
        const double scale = 2.0 / mesh.h(k);
        for (std::size_t i = 0; i < np; ++i) {
            double dz = 0.0;
            for (std::size_t j = 0; j < np; ++j) dz += basis.diff(i, j) * z[j];
            grad[k * np + i] = scale * (dz + jl * basis.g_left_deriv[i] + jr * basis.g_right_deriv[i]);
        }
    }
    return grad;
}

ShockThickness shock_thickness(std::span<const double> density, const Mesh1D& mesh, const FRBasis& basis,
                               double lambda_left, std::optional<double> far_left, std::optional<double> far_right) {
    const std::size_t np = basis.n_nodes();
    const std::size_t ne = mesh.n_elements();
    if (density.size() != ne * np) throw InvalidArgument("shock_thickness: field has wrong size");

    ShockThickness out;
    if (far_left && far_right) {
        out.rho_left = *far_left;
        out.rho_right = *far_right;
    } else {
        // Element-mean average over the outer 10% of the domain on each side.
        const double a = mesh.vertices().front();
        const double b = mesh.vertices().back();
        const double band = 0.1 * (b - a);
        double sum_l = 0.0, len_l = 0.0, sum_r = 0.0, len_r = 0.0;
        for (std::size_t k = 0; k < ne; ++k) {
            const double mid = mesh.map(k, 0.0);
            const double mean = element_mean(density.subspan(k * np, np), basis);
            if (mid <= a + band) {
                sum_l += mean * mesh.h(k);
                len_l += mesh.h(k);
            }
            if (mid >= b - band) {
                sum_r += mean * mesh.h(k);
                len_r += mesh.h(k);
            }
        }
        if (len_l == 0.0 || len_r == 0.0) throw InvalidArgument("shock_thickness: mesh too coarse for far-state bands");
        out.rho_left = far_left.value_or(sum_l / len_l);
        out.rho_right = far_right.value_or(sum_r / len_r);
    }

    const auto grad = corrected_gradient(density, mesh, basis);
    const double sign = out.rho_right >= out.rho_left ? 1.0 : -1.0;
    double max_grad = -std::numeric_limits<double>::infinity();
    for (double g : grad) max_grad = std::max(max_grad, sign * g);
    if (!(max_grad > 0.0)) throw InvalidArgument("shock_thickness: profile has no positive gradient");
    out.max_gradient = max_grad;
    out.thickness = std::abs(out.rho_right - out.rho_left) / max_grad;
    out.inverse_ratio = lambda_left / out.thickness;
    return out;
}

FuSlice extract_fu(const DistributionField& field, double x, const Mesh1D& mesh, const FRBasis& basis,
                   const MomentOperator& op) {
    std::size_t best_e = 0, best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < field.n_elements; ++e) {
        for (std::size_t i = 0; i < field.n_nodes; ++i) {
            const double d = std::abs(mesh.map(e, basis.xi[i]) - x);
            if (d < best) {
                best = d;
                best_e = e;
                best_i = i;
            }
        }
    }
    const auto slice = field.slice(best_e, best_i);
    const std::size_t nv = op.n_velocity();
    const std::size_t nz = op.n_energy();
    FuSlice out;
    out.x = mesh.map(best_e, basis.xi[best_i]);
    out.u.resize(nv);
    out.f_u.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        out.u[v] = op.velocity().nodes[v][0];
        out.f_u[v] = *std::max_element(slice.begin() + v * nz, slice.begin() + (v + 1) * nz);
    }
    return out;
}

double integrate(std::span<const double> nodal, const Mesh1D& mesh, const FRBasis& basis) {
    const std::size_t np = basis.n_nodes();
    if (nodal.size() != mesh.n_elements() * np) throw InvalidArgument("integrate: field has wrong size");
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.n_elements(); ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < np; ++i) mean += basis.mean_weights[i] * nodal[k * np + i];
        total += mesh.h(k) * mean;
    }
    return total;
}

ErrorMetrics error_metrics(std::span<const double> density, std::span<const double> reference, const Mesh1D& mesh,
                           const FRBasis& basis) {
    if (density.size() != reference.size()) throw InvalidArgument("error_metrics: shape mismatch");
    ErrorMetrics out;
    for (std::size_t i = 0; i < density.size(); ++i) {
        out.linf_density = std::max(out.linf_density, std::abs(density[i] - reference[i]));
    }
    out.mass_error = std::abs(integrate(density, mesh, basis) - integrate(reference, mesh, basis));
    return out;
}

MeshKnudsen mesh_knudsen(double kn, double l_ref, double h_max_node) {
    MeshKnudsen out;
    out.mean_free_path = kn * l_ref;
    out.kn_h = out.mean_free_path / h_max_node;
    // Relative slack so Kn_h = 1/10 computed in floating point counts as resolved.
    out.resolved = out.kn_h >= 0.1 * (1.0 - 1e-9);
    if (!out.resolved) {
        out.warning = "mesh Knudsen number " + std::to_string(out.kn_h) +
                      " < 1/10: structures ~10 mean free paths thick are not resolved by the mesh";
    }
    return out;
}

double convergence_rate(std::span<const double> h, std::span<const double> error) {
    if (h.size() != error.size() || h.size() < 2) throw InvalidArgument("convergence_rate: need >= 2 samples");
    const std::size_t n = h.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(h[i]);
        my += std::log(error[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(h[i]) - mx;
        sxy += dx * (std::log(error[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace polybgk
