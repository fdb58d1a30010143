#include "polybgk/dvm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polybgk/errors.hpp"

#ifdef POLYBGK_HAVE_LIBMVEC
// glibc's vector math library provides SIMD variants of exp.
extern "C" {
#pragma omp declare simd notinbranch
double exp(double) noexcept;
}
#define POLYBGK_VEXP ::exp
#else
#define POLYBGK_VEXP std::exp
#endif

namespace polybgk {

namespace {

// exp(x) with results below ~1e-300 flushed to zero.
inline double flushed_exp(double x) { return x < -690.0 ? 0.0 : std::exp(x); }

double inf_norm(const std::array<double, 3>& a) {
    return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

AlphaParams alpha_with_transverse(const MacroState& q, int m, double delta, double transverse_kinetic) {
    if (!(q.rho > 0.0)) throw InvalidState("alpha_from_macro: non-positive density " + std::to_string(q.rho));
    const double gamma = 1.0 + 2.0 / (m + delta);
    const double u = q.mom / q.rho;
    const double p = (gamma - 1.0) * (q.energy - 0.5 * q.rho * u * u - q.rho * transverse_kinetic);
    const double theta = p / q.rho;
    if (!(theta > 0.0)) throw InvalidState("alpha_from_macro: non-positive temperature " + std::to_string(theta));
    return {q.rho / std::pow(2.0 * std::numbers::pi * theta, 0.5 * m), 0.5 / theta, u};
}

}  // namespace

double internal_energy_normalization(double delta) {
    if (delta <= 0.0) return 1.0;
    return 1.0 / std::tgamma(0.5 * delta);
}

double internal_energy_factor(double delta, double theta, double zeta) {
    if (delta == 0.0) return 1.0;
    const double x = zeta / theta;
    return internal_energy_normalization(delta) * std::pow(x, 0.5 * delta - 1.0) * flushed_exp(-x) / theta;
}

AlphaParams alpha_from_macro(const MacroState& q, int m, double delta) {
    return alpha_with_transverse(q, m, delta, 0.0);
}

MacroState macro_from_alpha(const AlphaParams& alpha, int m, double delta) {
    const double theta = 0.5 / alpha.beta;
    const double rho = alpha.amplitude * std::pow(2.0 * std::numbers::pi * theta, 0.5 * m);
    return {rho, rho * alpha.velocity, 0.5 * rho * alpha.velocity * alpha.velocity + 0.5 * (m + delta) * rho * theta};
}

bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3>& b) {
    double scale = 0.0;
    for (const auto& row : a) scale = std::max({scale, std::abs(row[0]), std::abs(row[1]), std::abs(row[2])});
    if (!(scale > 0.0) || !std::isfinite(scale)) return false;
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) <= 1e-300 * scale) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 3; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * b[c];
        b[r] = s / a[r][r];
    }
    return true;
}

DiscreteVelocityModel::DiscreteVelocityModel(const MomentOperator& op) : op_(&op) {
    const VelocityGrid& vg = op.velocity();
    const InternalEnergyGrid& eg = op.energy();
    const std::size_t nv = vg.size();
    vel_weight_ = vg.weights;
    vel_x_.resize(nv);
    vel_kinetic_.resize(nv);
    vel_transverse_sq_.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        const Vec3& u = vg.nodes[v];
        vel_x_[v] = u[0];
        vel_kinetic_[v] = 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        double t = 0.0;
        for (int i = 1; i < vg.m; ++i) t += (u[i] - vg.offset[i]) * (u[i] - vg.offset[i]);
        vel_transverse_sq_[v] = t;
    }
    for (int i = 1; i < vg.m; ++i) transverse_kinetic_ += 0.5 * vg.offset[i] * vg.offset[i];
    zeta_ = eg.nodes;
    zeta_weight_ = eg.weights;
    if (!eg.inert()) {
        log_zeta_.resize(zeta_.size());
        for (std::size_t r = 0; r < zeta_.size(); ++r) log_zeta_[r] = std::log(zeta_[r]);
        log_norm_ = std::log(internal_energy_normalization(eg.delta));
    }
}

DiscreteVelocityModel::Workspace DiscreteVelocityModel::make_workspace() const {
    return {std::vector<double>(vel_x_.size()), std::vector<double>(zeta_.size())};
}

void DiscreteVelocityModel::evaluate_factors(const AlphaParams& alpha, Workspace& ws) const {
    const std::size_t nv = vel_x_.size();
    ws.gu.resize(nv);
    ws.gz.resize(zeta_.size());
    {
        const double* __restrict vx = vel_x_.data();
        const double* __restrict vt = vel_transverse_sq_.data();
        double* __restrict gu = ws.gu.data();
        const double u = alpha.velocity, beta = alpha.beta, amp = alpha.amplitude;
#pragma omp simd
        for (std::size_t v = 0; v < nv; ++v) {
            const double c = vx[v] - u;
            const double x = -beta * (c * c + vt[v]);
            const double e = POLYBGK_VEXP(x);
            gu[v] = amp * (x < -690.0 ? 0.0 : e);
        }
    }
    const double delta = this->delta();
    if (delta == 0.0) {
        ws.gz[0] = 1.0;
        return;
    }
    // g_ζ = Λ(δ) (2α₂)^(δ/2) ζ^(δ/2-1) e^(-2α₂ζ), evaluated in log form.
    const double log_pref = log_norm_ + 0.5 * delta * std::log(2.0 * alpha.beta);
    const double expo = 0.5 * delta - 1.0;
    const double* __restrict lz = log_zeta_.data();
    const double* __restrict z = zeta_.data();
    double* __restrict gz = ws.gz.data();
    const double two_beta = 2.0 * alpha.beta;
    const std::size_t nz = zeta_.size();
#pragma omp simd
    for (std::size_t r = 0; r < nz; ++r) {
        const double x = log_pref + expo * lz[r] - two_beta * z[r];
        const double e = POLYBGK_VEXP(x);
        gz[r] = x < -690.0 ? 0.0 : e;
    }
}

MacroState DiscreteVelocityModel::factor_moments(const AlphaParams& /*alpha*/, const Workspace& ws) const {
    const double* __restrict w = vel_weight_.data();
    const double* __restrict gu = ws.gu.data();
    const double* __restrict vx = vel_x_.data();
    const double* __restrict vk = vel_kinetic_.data();
    const std::size_t nv = vel_x_.size();
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
#pragma omp simd reduction(+ : a0, a1, a2)
    for (std::size_t v = 0; v < nv; ++v) {
        const double wg = w[v] * gu[v];
        a0 += wg;
        a1 += wg * vx[v];
        a2 += wg * vk[v];
    }
    const double* __restrict zw = zeta_weight_.data();
    const double* __restrict gz = ws.gz.data();
    const double* __restrict z = zeta_.data();
    const std::size_t nz = zeta_.size();
    double z0 = 0.0, z1 = 0.0;
#pragma omp simd reduction(+ : z0, z1)
    for (std::size_t r = 0; r < nz; ++r) {
        const double wg = zw[r] * gz[r];
        z0 += wg;
        z1 += wg * z[r];
    }
    return {a0 * z0, a1 * z0, a2 * z0 + a0 * z1};
}

MacroState DiscreteVelocityModel::discrete_moments(const AlphaParams& alpha) const {
    Workspace ws = make_workspace();
    evaluate_factors(alpha, ws);
    return factor_moments(alpha, ws);
}

std::array<std::array<double, 3>, 3> DiscreteVelocityModel::jacobian_from(const AlphaParams& alpha,
                                                                         const Workspace& ws) const {
    double a0 = 0, a1 = 0, a2 = 0;  // Σ w g {1, c, s}
    double b0 = 0, b1 = 0, b2 = 0;  // Σ w g r² {1, c, s}
    double c0 = 0, c1 = 0, c2 = 0;  // Σ w g (c - α₃) {1, c, s}
    const double* __restrict w = vel_weight_.data();
    const double* __restrict gu = ws.gu.data();
    const double* __restrict vx = vel_x_.data();
    const double* __restrict vk = vel_kinetic_.data();
    const double* __restrict vt = vel_transverse_sq_.data();
    const std::size_t nv = vel_x_.size();
    const double u = alpha.velocity;
#pragma omp simd reduction(+ : a0, a1, a2, b0, b1, b2, c0, c1, c2)
    for (std::size_t v = 0; v < nv; ++v) {
        const double wg = w[v] * gu[v];
        const double c = vx[v];
        const double s = vk[v];
        const double dc = c - u;
        const double r2 = dc * dc + vt[v];
        a0 += wg;
        a1 += wg * c;
        a2 += wg * s;
        b0 += wg * r2;
        b1 += wg * r2 * c;
        b2 += wg * r2 * s;
        c0 += wg * dc;
        c1 += wg * dc * c;
        c2 += wg * dc * s;
    }
    double z0 = 0, z1 = 0, z2 = 0;  // Σ w g_ζ {1, ζ, ζ²}
    const double* __restrict zw = zeta_weight_.data();
    const double* __restrict gz = ws.gz.data();
    const double* __restrict z = zeta_.data();
    const std::size_t nz = zeta_.size();
#pragma omp simd reduction(+ : z0, z1, z2)
    for (std::size_t r = 0; r < nz; ++r) {
        const double wg = zw[r] * gz[r];
        z0 += wg;
        z1 += wg * z[r];
        z2 += wg * z[r] * z[r];
    }
    const double rho = a0 * z0;
    const double mom = a1 * z0;
    const double energy = a2 * z0 + a0 * z1;
    // Θ = [1/α₁, -r² + (δ - 4ζα₂)/(2α₂), 2α₂(u - α₃)]
    const double h0 = delta() / (2.0 * alpha.beta);
    const double tb = 2.0 * alpha.beta;
    std::array<std::array<double, 3>, 3> j{};
    j[0][0] = rho / alpha.amplitude;
    j[1][0] = mom / alpha.amplitude;
    j[2][0] = energy / alpha.amplitude;
    j[0][1] = (h0 * a0 - b0) * z0 - 2.0 * a0 * z1;
    j[1][1] = (h0 * a1 - b1) * z0 - 2.0 * a1 * z1;
    j[2][1] = (h0 * a2 - b2) * z0 - 2.0 * a2 * z1 + (h0 * a0 - b0) * z1 - 2.0 * a0 * z2;
    j[0][2] = tb * c0 * z0;
    j[1][2] = tb * c1 * z0;
    j[2][2] = tb * (c2 * z0 + c0 * z1);
    return j;
}

std::array<std::array<double, 3>, 3> DiscreteVelocityModel::jacobian(const AlphaParams& alpha) const {
    Workspace ws = make_workspace();
    evaluate_factors(alpha, ws);
    return jacobian_from(alpha, ws);
}

NewtonResult DiscreteVelocityModel::project(const MacroState& q, int n_iters, Workspace& ws) const {
    if (n_iters < 0) throw InvalidArgument("newton_project: n_iters must be >= 0");
    AlphaParams alpha = alpha_with_transverse(q, m(), delta(), transverse_kinetic_);
    const auto target = q.as_array();
    const double scale = std::max(inf_norm(target), 1e-300);

    evaluate_factors(alpha, ws);
    auto residual_of = [&](const AlphaParams& a) {
        const auto mom = factor_moments(a, ws).as_array();
        return std::array<double, 3>{mom[0] - target[0], mom[1] - target[1], mom[2] - target[2]};
    };
    std::array<double, 3> res = residual_of(alpha);
    double norm = inf_norm(res) / scale;

    for (int it = 0; it < n_iters; ++it) {
        auto step = res;
        if (!solve3(jacobian_from(alpha, ws), step)) {
            throw ConvergenceError("newton_project: singular Jacobian at iteration " + std::to_string(it));
        }
        const AlphaParams next{alpha.amplitude - step[0], alpha.beta - step[1], alpha.velocity - step[2]};
        if (!(next.amplitude > 0.0) || !(next.beta > 0.0) || !std::isfinite(next.velocity)) {
            throw ConvergenceError("newton_project: iterate left the admissible set at iteration " +
                                   std::to_string(it));
        }
        alpha = next;
        evaluate_factors(alpha, ws);
        res = residual_of(alpha);
        const double next_norm = inf_norm(res) / scale;
        if (!std::isfinite(next_norm) || (next_norm > norm && next_norm > 1e-12)) {
            throw ConvergenceError("newton_project: residual grew from " + std::to_string(norm) + " to " +
                                   std::to_string(next_norm) + " at iteration " + std::to_string(it));
        }
        norm = next_norm;
    }
    return {alpha, norm, n_iters};
}

NewtonResult DiscreteVelocityModel::project(const MacroState& q, int n_iters) const {
    Workspace ws = make_workspace();
    return project(q, n_iters, ws);
}

EquilibriumField DiscreteVelocityModel::evaluate(const AlphaParams& alpha) const {
    Workspace ws = make_workspace();
    evaluate_factors(alpha, ws);
    EquilibriumField field;
    field.alpha = alpha;
    field.theta = 0.5 / alpha.beta;
    const std::size_t nz = zeta_.size();
    field.values.resize(vel_x_.size() * nz);
    for (std::size_t v = 0; v < vel_x_.size(); ++v) {
        for (std::size_t r = 0; r < nz; ++r) field.values[v * nz + r] = ws.gu[v] * ws.gz[r];
    }
    return field;
}

EquilibriumField eval_equilibrium(const AlphaParams& alpha, const MomentOperator& op) {
    return DiscreteVelocityModel(op).evaluate(alpha);
}

NewtonResult newton_project(const MacroState& q, const MomentOperator& op, int n_iters) {
    return DiscreteVelocityModel(op).project(q, n_iters);
}

double discrete_entropy(std::span<const double> z, const MomentOperator& op) {
    if (z.size() != op.size()) throw InvalidArgument("discrete_entropy: slice has wrong size");
    double h = 0.0;
    for (std::size_t q = 0; q < z.size(); ++q) {
        if (z[q] < 0.0) throw InvalidArgument("discrete_entropy: negative value at node " + std::to_string(q));
        if (z[q] > 0.0) h += op.weight(q) * z[q] * std::log(z[q]);
    }
    return h;
}

}  // namespace polybgk
