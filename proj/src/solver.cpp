#include "polybgk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif
#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define POLYBGK_HAVE_MXCSR 1
#endif

#include "polybgk/errors.hpp"
#include "polybgk/limiter.hpp"

namespace polybgk {

namespace {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

// Subnormal tails of the distribution cost ~100x per operation; treat them as zero
// while the guard is alive (per thread, restored on exit).
class FlushSubnormals {
public:
    FlushSubnormals() {
#ifdef POLYBGK_HAVE_MXCSR
        saved_ = _mm_getcsr();
        _mm_setcsr(saved_ | 0x8040u);  // FTZ | DAZ
#endif
    }
    ~FlushSubnormals() {
#ifdef POLYBGK_HAVE_MXCSR
        _mm_setcsr(saved_);
#endif
    }
    FlushSubnormals(const FlushSubnormals&) = delete;
    FlushSubnormals& operator=(const FlushSubnormals&) = delete;

private:
    unsigned saved_ = 0;
};

// Runs body(k) for k in [0, n). The first exception thrown is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel num_threads(threads) if (threads > 1)
#endif
    {
        FlushSubnormals guard;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
            try {
                body(static_cast<std::size_t>(k));
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical(polybgk_error)
#endif
                if (!error) error = std::current_exception();
            }
        }
    }
    (void)threads;
    if (error) std::rethrow_exception(error);
}

std::string point_label(const Mesh1D& mesh, const FRBasis& basis, std::size_t e, std::size_t i) {
    std::ostringstream os;
    os << "element " << e << ", node " << i << ", x = " << mesh.map(e, basis.xi[i]);
    return os.str();
}

}  // namespace

CollisionModel CollisionModel::constant(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("collision model: tau must be positive");
    CollisionModel m;
    m.kind = Kind::Constant;
    m.tau = tau;
    return m;
}

CollisionModel CollisionModel::power_law(double tau_ref, double rho_ref, double theta_ref, double omega) {
    if (!(tau_ref > 0.0) || !(rho_ref > 0.0) || !(theta_ref > 0.0)) {
        throw InvalidArgument("collision model: reference values must be positive");
    }
    if (!(omega > 0.0 && omega <= 1.0)) throw InvalidArgument("collision model: omega must lie in (0, 1]");
    CollisionModel m;
    m.kind = Kind::PowerLaw;
    m.tau_ref = tau_ref;
    m.rho_ref = rho_ref;
    m.theta_ref = theta_ref;
    m.omega = omega;
    return m;
}

double collision_time_from_knudsen(double kn, double gamma, double l_ref, double c_s_ref) {
    if (!(kn > 0.0) || !(gamma > 0.0)) {
        throw InvalidArgument("collision_time_from_knudsen: Kn and gamma must be positive");
    }
    if (!(c_s_ref > 0.0) || !(l_ref > 0.0)) {
        throw InvalidArgument("collision_time_from_knudsen: reference length and speed must be positive");
    }
    return std::sqrt(2.0 * gamma / std::numbers::pi) * kn * l_ref / c_s_ref;
}

double evaluate_collision_time(const CollisionModel& model, const MacroState& q, double gamma) {
    if (model.kind == CollisionModel::Kind::Constant) return model.tau;
    const double theta = q.theta(gamma);
    if (!(q.rho > 0.0) || !(theta > 0.0)) {
        throw InvalidState("collision time: non-positive density or temperature");
    }
    return model.tau_ref * (model.rho_ref / q.rho) * std::pow(model.theta_ref / theta, 1.0 - model.omega);
}

double cfl_time_step(double cfl, int p, double h_min, double c_max) {
    if (!(cfl > 0.0)) throw InvalidArgument("cfl_time_step: CFL must be positive");
    if (!(c_max > 0.0)) throw InvalidArgument("cfl_time_step: maximum speed must be positive");
    return cfl / (2.0 * p + 1.0) * h_min / c_max;
}

// ---------------------------------------------------------------------------

BgkSolver::BgkSolver(TransportOperator transport, std::shared_ptr<const MomentOperator> op, CollisionModel model,
                     SolverOptions options)
    : transport_(std::move(transport)),
      op_(std::move(op)),
      dvm_(*op_),
      model_(model),
      options_(options) {
    if (transport_.n_phase() != op_->size()) {
        throw InvalidArgument("BgkSolver: transport and moment operator disagree on the phase grid size");
    }
    if (options_.dvm_iters < 0) throw InvalidArgument("BgkSolver: dvm_iters must be >= 0");
    if (!(options_.cfl > 0.0)) throw InvalidArgument("BgkSolver: CFL must be positive");
    if (options_.threads < 0) throw InvalidArgument("BgkSolver: threads must be >= 0");
    const int nt = thread_count();
    for (int t = 0; t < nt; ++t) {
        workspaces_.push_back(dvm_.make_workspace());
        scratch_.emplace_back(2 * op_->size());
    }
    const std::size_t ne = transport_.n_elements();
    const std::size_t bs = transport_.basis().n_nodes() * op_->size();
    // Stage buffer plus the owned output blocks should stay inside a typical L2.
    constexpr std::size_t budget = 2048 * 1024;
    std::size_t chunk = budget / (2 * bs * sizeof(double));
    chunk = chunk > 4 ? chunk - 4 : 1;
    chunk = std::clamp<std::size_t>(chunk, 4, std::max<std::size_t>(ne, 1));
    chunk = std::min(chunk, (ne + nt - 1) / static_cast<std::size_t>(nt));
    chunk_elements_ = std::max<std::size_t>(chunk, 1);
    for (int t = 0; t < nt; ++t) {
        chunk_buffers_.emplace_back((chunk_elements_ + 8 + 2) * bs);
        chunk_rows_.emplace_back();
    }
    const std::size_t npts = ne * transport_.basis().n_nodes();
    q_.assign(npts, MacroState{});
    tau_.assign(npts, 0.0);
    last_density_.assign(npts, 0.0);
    start_density_.assign(npts, 0.0);
}

int BgkSolver::thread_count() const {
    return options_.threads == 0 ? std::max(1, max_threads()) : options_.threads;
}

DistributionField BgkSolver::make_field() const {
    return DistributionField(transport_.n_elements(), transport_.basis().n_nodes(), op_->size());
}

std::vector<double> BgkSolver::equilibrium_slice(const MacroState& q, int n_iters) const {
    auto ws = dvm_.make_workspace();
    dvm_.project(q, std::max(n_iters, 0), ws);
    const std::size_t nz = op_->n_energy();
    std::vector<double> out(op_->size());
    for (std::size_t v = 0; v < op_->n_velocity(); ++v) {
        for (std::size_t r = 0; r < nz; ++r) out[v * nz + r] = ws.gu[v] * ws.gz[r];
    }
    return out;
}

void BgkSolver::element_rhs(std::size_t e, const double* left_row, const double* block, const double* right_row,
                            double* out, int thread, const MacroState* q_pre, bool record) {
    const std::size_t np = transport_.basis().n_nodes();
    const std::size_t nq = op_->size();
    const std::size_t nv = op_->n_velocity();
    const std::size_t nz = op_->n_energy();
    const double gamma = dvm_.gamma();
    const int iters = options_.dvm ? options_.dvm_iters : 0;
    auto& ws = workspaces_[thread];
    transport_.apply_block(e, left_row, block, right_row, out, scratch_[thread]);
    for (std::size_t i = 0; i < np; ++i) {
        const double* __restrict fv = block + i * nq;
        const MacroState q = q_pre ? q_pre[i] : op_->moments({fv, nq});
        if (!std::isfinite(q.rho) || !std::isfinite(q.energy)) {
            throw BlowUpError("non-finite moments at " + point_label(transport_.mesh(), transport_.basis(), e, i));
        }
        double tau = 0.0;
        try {
            tau = evaluate_collision_time(model_, q, gamma);
            dvm_.project(q, iters, ws);
        } catch (const ConvergenceError& err) {
            throw ConvergenceError(std::string(err.what()) + " at " +
                                   point_label(transport_.mesh(), transport_.basis(), e, i));
        } catch (const InvalidState& err) {
            throw InvalidState(std::string(err.what()) + " at " +
                               point_label(transport_.mesh(), transport_.basis(), e, i));
        }
        if (record) {
            tau_[e * np + i] = tau;
            last_density_[e * np + i] = q.rho;
        }
        const double inv_tau = 1.0 / tau;
        double* __restrict r = out + i * nq;
        const double* __restrict gz = ws.gz.data();
        for (std::size_t v = 0; v < nv; ++v) {
            const double gu = ws.gu[v];
            const std::size_t base = v * nz;
            for (std::size_t z = 0; z < nz; ++z) {
                r[base + z] += (gu * gz[z] - fv[base + z]) * inv_tau;
            }
        }
    }
}

void BgkSolver::rhs(const DistributionField& f, DistributionField& out) {
    const std::size_t ne = transport_.n_elements();
    const std::size_t nq = op_->size();
    const std::size_t bs = f.block_size();
    if (f.values.size() != transport_.field_size()) throw InvalidArgument("BgkSolver::rhs: field has wrong size");
    if (out.values.size() != f.values.size()) out = make_field();
    const bool periodic = transport_.boundary().left.kind == BoundaryKind::Periodic;
    const double* data = f.values.data();

    parallel_for(ne, thread_count(), [&](std::size_t e) {
        const double* block = data + e * bs;
        const double* left = e > 0 ? block - nq : (periodic ? data + ne * bs - nq : nullptr);
        const double* right = e + 1 < ne ? block + bs : (periodic ? data : nullptr);
        element_rhs(e, left, block, right, out.values.data() + e * bs, thread_id(), nullptr, true);
    });
    last_tau_min_ = *std::min_element(tau_.begin(), tau_.end());
    ++counters_.rhs_evaluations;
}

void BgkSolver::limit(DistributionField& f) {
    const std::size_t ne = f.n_elements;
    std::vector<std::size_t> count(ne, 0);
    parallel_for(ne, thread_count(), [&](std::size_t e) {
        count[e] = squeeze_block(f.block(e), f.n_phase, transport_.basis(), scratch_[thread_id()]);
    });
    ++counters_.limiter_passes;
    for (auto c : count) counters_.limited_nodes += c;
}

double BgkSolver::prepare_step(DistributionField& f) {
    if (f.values.size() != transport_.field_size()) throw InvalidArgument("BgkSolver: field has wrong size");
    const std::size_t ne = f.n_elements;
    const std::size_t np = f.n_nodes;
    const double gamma = dvm_.gamma();
    std::vector<std::size_t> count(ne, 0);
    parallel_for(ne, thread_count(), [&](std::size_t e) {
        count[e] = squeeze_block(f.block(e), f.n_phase, transport_.basis(), scratch_[thread_id()]);
        for (std::size_t i = 0; i < np; ++i) {
            const std::size_t pt = e * np + i;
            const MacroState q = op_->moments(f.point(pt));
            if (!std::isfinite(q.rho) || !std::isfinite(q.energy)) {
                throw BlowUpError("non-finite moments at " +
                                  point_label(transport_.mesh(), transport_.basis(), e, i));
            }
            try {
                tau_[pt] = evaluate_collision_time(model_, q, gamma);
            } catch (const InvalidState& err) {
                throw InvalidState(std::string(err.what()) + " at " +
                                   point_label(transport_.mesh(), transport_.basis(), e, i));
            }
            q_[pt] = q;
            last_density_[pt] = q.rho;
        }
    });
    ++counters_.limiter_passes;
    for (auto c : count) counters_.limited_nodes += c;
    start_density_ = last_density_;
    last_tau_min_ = *std::min_element(tau_.begin(), tau_.end());
    return last_tau_min_;
}

// All four stages are run chunk by chunk. A chunk [a, b) recomputes stage s on
// [a - (4 - s), b + (4 - s)) so the stage states never leave the thread-local buffer.
void BgkSolver::fused_step(DistributionField& f, double dt) {
    constexpr std::ptrdiff_t halo = 4;
    const auto ne = static_cast<std::ptrdiff_t>(f.n_elements);
    const std::size_t np = f.n_nodes;
    const std::size_t nq = f.n_phase;
    const std::size_t bs = f.block_size();
    const bool periodic = transport_.boundary().left.kind == BoundaryKind::Periodic;
    const auto chunk = static_cast<std::ptrdiff_t>(chunk_elements_);
    const std::ptrdiff_t n_chunks = (ne + chunk - 1) / chunk;
    const std::ptrdiff_t base_len = ne / n_chunks;
    const std::ptrdiff_t extra = ne % n_chunks;
    if (next_.values.size() != f.values.size()) next_ = make_field();

    const double stage_coeff[3] = {0.5 * dt, 0.5 * dt, dt};
    const double weight[4] = {dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0};
    const double* fdata = f.values.data();
    std::vector<std::size_t> count(static_cast<std::size_t>(n_chunks), 0);
    auto wrap = [ne](std::ptrdiff_t u) { return static_cast<std::size_t>(((u % ne) + ne) % ne); };

    parallel_for(static_cast<std::size_t>(n_chunks), thread_count(), [&](std::size_t c) {
        const int t = thread_id();
        const auto ci = static_cast<std::ptrdiff_t>(c);
        const std::ptrdiff_t a = ci * base_len + std::min(ci, extra);
        const std::ptrdiff_t b = a + base_len + (ci < extra ? 1 : 0);
        const std::ptrdiff_t lo0 = periodic ? a - halo : std::max<std::ptrdiff_t>(0, a - halo);
        const std::ptrdiff_t hi0 = periodic ? b + halo : std::min(ne, b + halo);
        double* ybuf = chunk_buffers_[t].data();
        double* kslot[2] = {ybuf + (chunk + 2 * halo) * bs, ybuf + (chunk + 2 * halo + 1) * bs};
        auto& ycur = chunk_rows_[t];
        ycur.resize(static_cast<std::size_t>(hi0 - lo0));
        for (std::ptrdiff_t u = lo0; u < hi0; ++u) ycur[u - lo0] = fdata + wrap(u) * bs;
        auto& scratch = scratch_[t];

        for (int s = 1; s <= 4; ++s) {
            const std::ptrdiff_t d = halo - s;
            const std::ptrdiff_t klo = periodic ? a - d : std::max<std::ptrdiff_t>(0, a - d);
            const std::ptrdiff_t khi = periodic ? b + d : std::min(ne, b + d);

            auto finalize = [&](std::ptrdiff_t u) {
                const std::size_t g = wrap(u);
                const double* __restrict k = kslot[(u - klo) & 1];
                const double* __restrict fb = fdata + g * bs;
                double sum = 0.0;
#pragma omp simd reduction(+ : sum)
                for (std::size_t j = 0; j < bs; ++j) sum += k[j];
                if (!std::isfinite(sum)) {
                    throw BlowUpError("non-finite right-hand side in RK stage " + std::to_string(s) +
                                      " at element " + std::to_string(g) + ", step " +
                                      std::to_string(counters_.steps));
                }
                const bool owned = u >= a && u < b;
                if (owned) {
                    double* __restrict acc = next_.values.data() + g * bs;
                    const double w = weight[s - 1];
                    if (s == 1) {
#pragma omp simd
                        for (std::size_t j = 0; j < bs; ++j) acc[j] = fb[j] + w * k[j];
                    } else {
#pragma omp simd
                        for (std::size_t j = 0; j < bs; ++j) acc[j] += w * k[j];
                    }
                    if (s == 4) count[c] += squeeze_block({acc, bs}, nq, transport_.basis(), scratch);
                }
                if (s < 4) {
                    double* __restrict y = ybuf + (u - lo0) * bs;
                    const double cs = stage_coeff[s - 1];
#pragma omp simd
                    for (std::size_t j = 0; j < bs; ++j) y[j] = fb[j] + cs * k[j];
                    const std::size_t limited = squeeze_block({y, bs}, nq, transport_.basis(), scratch);
                    if (owned) count[c] += limited;
                    ycur[u - lo0] = y;
                }
            };

            for (std::ptrdiff_t u = klo; u < khi; ++u) {
                const std::size_t l = static_cast<std::size_t>(u - lo0);
                const double* left = u - 1 >= lo0 ? ycur[l - 1] + (np - 1) * nq : nullptr;
                const double* right = u + 1 < hi0 ? ycur[l + 1] : nullptr;
                const std::size_t g = wrap(u);
                element_rhs(g, left, ycur[l], right, kslot[(u - klo) & 1], t, s == 1 ? &q_[g * np] : nullptr,
                            false);
                // Stage s at u - 1 has now been read by all its neighbours.
                if (u > klo) finalize(u - 1);
            }
            finalize(khi - 1);
        }
    });
    f.values.swap(next_.values);
    counters_.rhs_evaluations += 4;
    counters_.limiter_passes += 4;
    for (auto n : count) counters_.limited_nodes += n;
    ++counters_.steps;
}

void BgkSolver::rk4_step(DistributionField& f, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("rk4_step: dt must be positive and finite");
    prepare_step(f);
    fused_step(f, dt);
}

double BgkSolver::adaptive_step(DistributionField& f, double dt_cfl, double dt_max) {
    const double tau_min = prepare_step(f);
    const double dt = std::min(compute_dt(tau_min, dt_cfl), dt_max);
    if (!(dt > 0.0)) throw InvalidArgument("adaptive_step: non-positive time step");
    fused_step(f, dt);
    return dt;
}

double BgkSolver::min_collision_time(const DistributionField& f) const {
    if (model_.kind == CollisionModel::Kind::Constant) return model_.tau;
    double tau_min = std::numeric_limits<double>::infinity();
    for (std::size_t pt = 0; pt < f.n_points(); ++pt) {
        tau_min = std::min(tau_min, evaluate_collision_time(model_, op_->moments(f.point(pt)), dvm_.gamma()));
    }
    return tau_min;
}

std::vector<MacroState> BgkSolver::macro_states(const DistributionField& f) const {
    std::vector<MacroState> out(f.n_points());
    for (std::size_t pt = 0; pt < f.n_points(); ++pt) out[pt] = op_->moments(f.point(pt));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void validate_setup(const ProblemSetup& s) {
    if (!s.initial) throw ConfigError("no initial condition");
    if (!(s.x_max > s.x_min)) throw ConfigError("domain must satisfy x_min < x_max");
    if (s.n_elements < 1) throw ConfigError("n_elements must be >= 1");
    if (s.p < 1) throw ConfigError("p must be >= 1");
    if (s.m < 1 || s.m > 3) throw ConfigError("velocity dimension m must be 1, 2 or 3");
    if (s.delta < 0.0) throw ConfigError("delta must be >= 0");
    if (s.m == 1 && (s.n_v < 2 || s.n_v % 2 != 0)) throw ConfigError("n_v must be even and >= 2");
    if (s.delta > 0.0 && s.n_zeta < 1) throw ConfigError("n_zeta must be >= 1");
    if (s.init_iters < 0) throw ConfigError("init_iters must be >= 0");
    const bool lp = s.bc_left == BoundaryKind::Periodic;
    const bool rp = s.bc_right == BoundaryKind::Periodic;
    if (lp != rp) throw ConfigError("periodic boundaries must be set on both ends");
}

}  // namespace

Simulation::Simulation(const ProblemSetup& setup) : setup_(setup) {
    validate_setup(setup_);
    const double gamma = setup_.gamma();
    Mesh1D mesh = Mesh1D::uniform(setup_.x_min, setup_.x_max, setup_.n_elements);
    FRBasis basis = build_basis(setup_.p);
    const std::size_t ne = mesh.n_elements();
    const std::size_t np = basis.n_nodes();

    // Initial state sampled just inside each element so discontinuities on vertices are element-aligned.
    std::vector<Primitive> prims(ne * np);
    for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t i = 0; i < np; ++i) {
            const double nudge = 1e-9 * (i == 0 ? 1.0 : (i == np - 1 ? -1.0 : 0.0));
            const Primitive q = setup_.initial(mesh.map(e, basis.xi[i] + nudge));
            if (!(q.rho > 0.0) || !(q.p > 0.0) || !std::isfinite(q.u)) {
                throw ConfigError("initial condition must have positive density and pressure at " +
                                  point_label(mesh, basis, e, i));
            }
            prims[e * np + i] = q;
        }
    }

    const bool specular =
        setup_.bc_left == BoundaryKind::SpecularWall || setup_.bc_right == BoundaryKind::SpecularWall;
    if (specular && setup_.m != 1) throw ConfigError("specular walls require m = 1");
    r_max_ = compute_r_max(prims, setup_.eps_u, gamma);
    offset_ = compute_velocity_offset(prims);
    if (specular) {
        // A mirror-symmetric grid is needed; widen the box to cover the discarded offset.
        r_max_ += std::abs(offset_[0]);
        offset_ = {0.0, 0.0, 0.0};
    }
    VelocityGrid vgrid = setup_.m == 1
                             ? build_velocity_grid_1d(setup_.n_v, r_max_, offset_[0])
                             : build_velocity_grid(setup_.m, setup_.n_r, setup_.n_phi, setup_.n_psi, r_max_, offset_);
    double theta_max = 0.0;
    double cs_max = 0.0;
    for (const auto& q : prims) {
        theta_max = std::max(theta_max, q.theta());
        cs_max = std::max(cs_max, sound_speed(q, gamma));
    }
    zeta_max_ = setup_.delta > 0.0 ? compute_zeta_max(setup_.delta, setup_.eps_zeta, theta_max) : 0.0;
    InternalEnergyGrid zgrid = build_internal_energy_grid(setup_.delta, setup_.n_zeta, zeta_max_);
    op_ = std::make_shared<const MomentOperator>(std::move(vgrid), std::move(zgrid));

    // Collision model.
    const auto& cs = setup_.collision;
    const double h_node = max_node_spacing(mesh, basis);
    const Primitive ref = setup_.initial(setup_.x_min);
    const double cs_ref = cs.kind == CollisionModel::Kind::Constant ? cs_max : sound_speed(ref, gamma);
    const double tau_factor = std::sqrt(2.0 * gamma / std::numbers::pi) * cs.l_ref / cs_ref;
    double tau0 = 0.0;
    if (cs.tau) {
        tau0 = *cs.tau;
        kn_ = tau0 / tau_factor;
    } else if (cs.kn) {
        kn_ = *cs.kn;
        tau0 = collision_time_from_knudsen(kn_, gamma, cs.l_ref, cs_ref);
    } else if (cs.kn_h) {
        kn_ = *cs.kn_h * h_node / cs.l_ref;
        tau0 = collision_time_from_knudsen(kn_, gamma, cs.l_ref, cs_ref);
    } else {
        throw ConfigError("one of kn, kn_h or tau must be given");
    }
    if (!(tau0 > 0.0)) throw ConfigError("collision time must be positive");
    const CollisionModel model = cs.kind == CollisionModel::Kind::Constant
                                     ? CollisionModel::constant(tau0)
                                     : CollisionModel::power_law(tau0, ref.rho, ref.theta(), cs.omega);
    mesh_kn_ = mesh_knudsen(kn_, cs.l_ref, h_node);
    if (!mesh_kn_.resolved) warnings_.push_back(mesh_kn_.warning);

    // Boundaries.
    const DiscreteVelocityModel dvm(*op_);
    const int init_iters = setup_.solver.dvm ? setup_.init_iters : 0;
    auto slice_for = [&](const Primitive& q) {
        auto ws = dvm.make_workspace();
        dvm.project(to_conserved(q, gamma), init_iters, ws);
        const std::size_t nz = op_->n_energy();
        std::vector<double> out(op_->size());
        for (std::size_t v = 0; v < op_->n_velocity(); ++v) {
            for (std::size_t r = 0; r < nz; ++r) out[v * nz + r] = ws.gu[v] * ws.gz[r];
        }
        return out;
    };
    BoundarySpec bc;
    bc.left.kind = setup_.bc_left;
    bc.right.kind = setup_.bc_right;
    if (bc.left.kind == BoundaryKind::Dirichlet) bc.left.state = slice_for(prims.front());
    if (bc.right.kind == BoundaryKind::Dirichlet) bc.right.state = slice_for(prims.back());
    std::vector<std::size_t> mirror;
    if (specular) {
        const std::size_t nz = op_->n_energy();
        mirror.resize(op_->size());
        for (std::size_t v = 0; v < op_->n_velocity(); ++v) {
            for (std::size_t r = 0; r < nz; ++r) mirror[v * nz + r] = op_->velocity().mirror(v) * nz + r;
        }
    }
    std::vector<double> speeds(op_->speeds().begin(), op_->speeds().end());

    c_max_ = 0.0;
    for (double u : speeds) c_max_ = std::max(c_max_, std::abs(u));
    c_max_ = std::max(c_max_, r_max_ + std::hypot(offset_[0], offset_[1], offset_[2]));
    dt_cfl_ = cfl_time_step(setup_.solver.cfl, setup_.p, mesh.h_min(), c_max_);

    solver_ = std::make_unique<BgkSolver>(TransportOperator(std::move(mesh), std::move(basis), std::move(speeds), bc,
                                                            std::move(mirror)),
                                          op_, model, setup_.solver);

    field_ = solver_->make_field();
    for (std::size_t pt = 0; pt < prims.size(); ++pt) {
        const auto g = slice_for(prims[pt]);
        std::copy(g.begin(), g.end(), field_.values.begin() + static_cast<std::ptrdiff_t>(pt * op_->size()));
    }
    initial_mass_ = integrate(density(), this->mesh(), this->basis());
}

std::vector<double> Simulation::coordinates() const {
    const auto& m = mesh();
    const auto& b = basis();
    std::vector<double> x;
    x.reserve(m.n_elements() * b.n_nodes());
    for (std::size_t e = 0; e < m.n_elements(); ++e) {
        for (double xi : b.xi) x.push_back(m.map(e, xi));
    }
    return x;
}

std::vector<double> Simulation::density() const {
    std::vector<double> rho(field_.n_points());
    for (std::size_t pt = 0; pt < rho.size(); ++pt) rho[pt] = op_->density(field_.point(pt));
    return rho;
}

std::vector<Primitive> Simulation::primitives() const {
    const auto qs = solver_->macro_states(field_);
    std::vector<Primitive> out(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) out[i] = to_primitive(qs[i], gamma());
    return out;
}

DiagnosticsRow Simulation::diagnostics(double residual) const {
    const auto qs = solver_->macro_states(field_);
    std::vector<double> rho(qs.size()), mom(qs.size()), en(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) {
        rho[i] = qs[i].rho;
        mom[i] = qs[i].mom;
        en[i] = qs[i].energy;
    }
    DiagnosticsRow row;
    row.t = time_;
    row.mass = integrate(rho, mesh(), basis());
    row.momentum = integrate(mom, mesh(), basis());
    row.energy = integrate(en, mesh(), basis());
    row.mass_error = std::abs(row.mass - initial_mass_) / std::max(std::abs(initial_mass_), 1e-300);
    row.min_f = *std::min_element(field_.values.begin(), field_.values.end());
    row.residual_linf = residual;
    return row;
}

std::vector<DiagnosticsRow> Simulation::run(const RunControl& control) {
    if (!(control.t_final >= 0.0) || !std::isfinite(control.t_final)) {
        throw InvalidArgument("run: t_final must be finite and >= 0");
    }
    std::vector<DiagnosticsRow> rows;
    rows.push_back(diagnostics(0.0));
    const double t_end = control.t_final;
    const double eps = 1e-13 * std::max(1.0, std::abs(t_end));
    double next_output = control.output_interval > 0.0 ? time_ + control.output_interval
                                                       : std::numeric_limits<double>::infinity();
    std::size_t steps = 0;
    while (time_ < t_end - eps) {
        if (steps >= control.max_steps) {
            throw InvalidState("run: exceeded max_steps = " + std::to_string(control.max_steps));
        }
        const double remaining = t_end - time_;
        const double dt = solver_->adaptive_step(field_, dt_cfl_, remaining);
        time_ = (dt == remaining) ? t_end : time_ + dt;
        ++steps;
        if (control.on_step) control.on_step(*this, dt);
        const bool last = time_ >= t_end - eps;
        if (last || time_ >= next_output) {
            const auto rho = density();
            const auto& rho0 = solver_->step_start_density();
            double diff = 0.0;
            for (std::size_t i = 0; i < rho.size(); ++i) diff = std::max(diff, std::abs(rho[i] - rho0[i]));
            rows.push_back(diagnostics(diff / dt));
            while (next_output <= time_) next_output += control.output_interval;
        }
    }
    return rows;
}

}  // namespace polybgk
