#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polybgk/dvm.hpp"
#include "polybgk/field.hpp"
#include "polybgk/fr1d.hpp"
#include "polybgk/macro.hpp"
#include "polybgk/phase_grid.hpp"
#include "polybgk/state.hpp"

namespace polybgk {

/// Relaxation time τ(Q): constant, or the power law
/// τ = τ_ref (ρ_ref/ρ) (θ_ref/θ)^(1-ω).
struct CollisionModel {
    enum class Kind { Constant, PowerLaw };

    Kind kind = Kind::Constant;
    double tau = 1.0;
    double tau_ref = 1.0;
    double rho_ref = 1.0;
    double theta_ref = 1.0;
    double omega = 1.0;

    static CollisionModel constant(double tau);
    static CollisionModel power_law(double tau_ref, double rho_ref, double theta_ref, double omega);
};

/// τ = sqrt(2γ/π) Kn L_ref / c_s.
double collision_time_from_knudsen(double kn, double gamma, double l_ref, double c_s_ref);

double evaluate_collision_time(const CollisionModel& model, const MacroState& q, double gamma);

/// Δt_CFL = CFL/(2p+1) · h_min / c_max.
double cfl_time_step(double cfl, int p, double h_min, double c_max);

/// Δt = min(τ_min, Δt_CFL).
inline double compute_dt(double tau_min, double dt_cfl) { return tau_min < dt_cfl ? tau_min : dt_cfl; }

struct SolverOptions {
    bool dvm = true;     // false: relax toward the continuous Maxwellian α(Q)
    int dvm_iters = 2;
    double cfl = 0.5;
    int threads = 1;     // 0 = all available
};

struct SolverCounters {
    std::size_t rhs_evaluations = 0;
    std::size_t limiter_passes = 0;
    std::size_t limited_nodes = 0;
    std::size_t steps = 0;
};

/// Semi-discrete Boltzmann–BGK operator on a fixed phase grid and mesh,
/// with the RK4 integrator and positivity limiter.
class BgkSolver {
public:
    BgkSolver(TransportOperator transport, std::shared_ptr<const MomentOperator> op, CollisionModel model,
              SolverOptions options);

    const TransportOperator& transport() const noexcept { return transport_; }
    const MomentOperator& moment_operator() const noexcept { return *op_; }
    const DiscreteVelocityModel& dvm() const noexcept { return dvm_; }
    const CollisionModel& collision_model() const noexcept { return model_; }
    const SolverOptions& options() const noexcept { return options_; }
    const SolverCounters& counters() const noexcept { return counters_; }
    double gamma() const noexcept { return dvm_.gamma(); }

    DistributionField make_field() const;

    /// Equilibrium slice for macroscopic state q (DVM-projected with n_iters, or α(Q) when n_iters < 0).
    std::vector<double> equilibrium_slice(const MacroState& q, int n_iters) const;

    /// out = -∂_x F^C(f) + (g' - f)/τ at every node. Also records per-point τ and ρ.
    void rhs(const DistributionField& f, DistributionField& out);

    /// Squeeze limiter on every element and phase node.
    void limit(DistributionField& f);

    /// One classic RK4 step; limiter before every stage derivative and on the final state.
    void rk4_step(DistributionField& f, double dt);

    /// RK4 step with Δt = min(τ_min, dt_cfl, dt_max), τ_min taken from the first stage. Returns Δt.
    double adaptive_step(DistributionField& f, double dt_cfl, double dt_max);

    /// Smallest τ over all solution points of f.
    double min_collision_time(const DistributionField& f) const;

    /// Conserved state at every solution point.
    std::vector<MacroState> macro_states(const DistributionField& f) const;

    /// Smallest τ and the densities recorded by the last rhs() call or at the start of the last step.
    double last_tau_min() const noexcept { return last_tau_min_; }
    const std::vector<double>& last_density() const noexcept { return last_density_; }
    /// Densities at the start of the last adaptive_step (after limiting).
    const std::vector<double>& step_start_density() const noexcept { return start_density_; }

private:
    // Limits f, stores per-point moments and τ; returns τ_min.
    double prepare_step(DistributionField& f);
    // RK4 with the stage-1 moments from prepare_step.
    void fused_step(DistributionField& f, double dt);
    void element_rhs(std::size_t e, const double* left_row, const double* block, const double* right_row,
                     double* out, int thread, const MacroState* q_pre, bool record);
    int thread_count() const;

    TransportOperator transport_;
    std::shared_ptr<const MomentOperator> op_;
    DiscreteVelocityModel dvm_;
    CollisionModel model_;
    SolverOptions options_;
    SolverCounters counters_;
    DistributionField next_;
    std::vector<MacroState> q_;
    std::vector<double> tau_;
    std::vector<double> last_density_;
    std::vector<double> start_density_;
    std::vector<DiscreteVelocityModel::Workspace> workspaces_;
    std::vector<std::vector<double>> scratch_;
    std::size_t chunk_elements_ = 1;
    std::vector<std::vector<double>> chunk_buffers_;
    std::vector<std::vector<const double*>> chunk_rows_;
    double last_tau_min_ = 0.0;
};

/// Collision-time specification resolved against the initial state.
struct CollisionSpec {
    CollisionModel::Kind kind = CollisionModel::Kind::Constant;
    std::optional<double> kn;     // Knudsen number based on L_ref
    std::optional<double> kn_h;   // mesh Knudsen number; Kn = Kn_h · h_max / L_ref
    std::optional<double> tau;    // explicit constant τ (or τ_ref for the power law)
    double omega = 0.81;
    double l_ref = 1.0;
};

/// Everything needed to build a run.
struct ProblemSetup {
    std::string name = "custom";
    double x_min = 0.0;
    double x_max = 1.0;
    int n_elements = 10;
    int p = 3;
    std::function<Primitive(double)> initial;
    int m = 1;
    int n_v = 32;                  // m = 1
    int n_r = 0, n_phi = 0, n_psi = 0;  // m = 2, 3
    double delta = 0.0;
    int n_zeta = 16;
    double eps_u = 1e-15;
    double eps_zeta = 1e-6;
    BoundaryKind bc_left = BoundaryKind::Periodic;
    BoundaryKind bc_right = BoundaryKind::Periodic;
    CollisionSpec collision;
    SolverOptions solver;
    int init_iters = 5;

    double gamma() const noexcept { return 1.0 + 2.0 / (m + delta); }
};

struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;
    double momentum = 0.0;
    double energy = 0.0;
    double mass_error = 0.0;     // |m - m(0)| / |m(0)|
    double min_f = 0.0;
    double residual_linf = 0.0;  // ‖ρⁿ⁺¹ - ρⁿ‖∞ / Δt of the last step
};

class Simulation;

struct RunControl {
    double t_final = 0.0;
    double output_interval = 0.0;  // ≤ 0: first and last rows only
    std::size_t max_steps = 100000000;
    std::function<void(const Simulation&, double dt)> on_step;  // after every accepted step
};

/// A fully initialised problem: grids, mesh, solver and the current field.
class Simulation {
public:
    explicit Simulation(const ProblemSetup& setup);

    const ProblemSetup& setup() const noexcept { return setup_; }
    const Mesh1D& mesh() const noexcept { return solver_->transport().mesh(); }
    const FRBasis& basis() const noexcept { return solver_->transport().basis(); }
    const MomentOperator& moment_operator() const noexcept { return *op_; }
    BgkSolver& solver() noexcept { return *solver_; }
    const BgkSolver& solver() const noexcept { return *solver_; }
    const DistributionField& field() const noexcept { return field_; }
    DistributionField& field() noexcept { return field_; }
    double time() const noexcept { return time_; }
    double gamma() const noexcept { return setup_.gamma(); }

    double r_max() const noexcept { return r_max_; }
    const Vec3& velocity_offset() const noexcept { return offset_; }
    double zeta_max() const noexcept { return zeta_max_; }
    double c_max() const noexcept { return c_max_; }
    double dt_cfl() const noexcept { return dt_cfl_; }
    double knudsen() const noexcept { return kn_; }
    const MeshKnudsen& mesh_knudsen_info() const noexcept { return mesh_kn_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Physical coordinates of all solution points, element-major.
    std::vector<double> coordinates() const;
    std::vector<double> density() const;
    std::vector<Primitive> primitives() const;
    DiagnosticsRow diagnostics(double residual) const;

    /// Advance to t_final, returning the diagnostics rows (first row at the current time).
    std::vector<DiagnosticsRow> run(const RunControl& control);

private:
    ProblemSetup setup_;
    std::shared_ptr<const MomentOperator> op_;
    std::unique_ptr<BgkSolver> solver_;
    DistributionField field_;
    double time_ = 0.0;
    double r_max_ = 0.0;
    Vec3 offset_{};
    double zeta_max_ = 0.0;
    double c_max_ = 0.0;
    double dt_cfl_ = 0.0;
    double kn_ = 0.0;
    double initial_mass_ = 0.0;
    MeshKnudsen mesh_kn_;
    std::vector<std::string> warnings_;
};

}  // namespace polybgk
