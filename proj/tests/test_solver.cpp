#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polybgk/cases.hpp"
#include "polybgk/errors.hpp"
#include "polybgk/solver.hpp"

using namespace polybgk;

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

ProblemSetup small_pulse() {
    ProblemSetup s = pulse_case(3, 6, 1e-2, 0.0, 16, 1).setup;
    return s;
}

}  // namespace

TEST_CASE("collision time") {
    CHECK(collision_time_from_knudsen(1e-2, 3.0, 1.0, std::sqrt(3.0)) == doctest::Approx(7.9788e-3).epsilon(1e-4));
    CHECK_THROWS_AS(collision_time_from_knudsen(0.0, 3.0, 1.0, 1.0), InvalidArgument);

    const CollisionModel c = CollisionModel::constant(0.25);
    CHECK(evaluate_collision_time(c, {2.0, 0.0, 7.0}, 1.4) == 0.25);

    const CollisionModel pl = CollisionModel::power_law(0.3, 1.0, 1.0, 0.81);
    const double gamma = 5.0 / 3.0;
    CHECK(evaluate_collision_time(pl, to_conserved({1.0, 0.4, 1.0}, gamma), gamma) == doctest::Approx(0.3));
    CHECK(evaluate_collision_time(pl, to_conserved({2.0, 0.0, 4.0}, gamma), gamma) ==
          doctest::Approx(0.4383 * 0.3).epsilon(1e-4));
    const CollisionModel hs = CollisionModel::power_law(0.3, 1.0, 1.0, 1.0);
    CHECK(evaluate_collision_time(hs, to_conserved({2.0, 0.0, 10.0}, gamma), gamma) == doctest::Approx(0.15));
    CHECK_THROWS_AS(evaluate_collision_time(pl, {-1.0, 0.0, 1.0}, gamma), InvalidState);
}

TEST_CASE("time step selection") {
    CHECK(compute_dt(1e-6, 1e-3) == 1e-6);
    CHECK(compute_dt(1e-2, 1e-3) == 1e-3);
    CHECK(cfl_time_step(0.5, 3, 0.01, 10.0) == doctest::Approx(7.143e-5).epsilon(1e-4));
}

TEST_CASE("uniform equilibrium is preserved") {
    const BenchmarkCase bc = make_case("uniform");
    Simulation sim(bc.setup);
    const auto f0 = sim.field().values;
    DistributionField rhs = sim.field();
    sim.solver().rhs(sim.field(), rhs);
    CHECK(max_abs(rhs.values) <= 1e-11 * max_abs(f0));

    RunControl rc;
    rc.t_final = 50 * sim.dt_cfl();
    sim.run(rc);
    double drift = 0.0;
    for (std::size_t i = 0; i < f0.size(); ++i) drift = std::max(drift, std::abs(sim.field().values[i] - f0[i]));
    CHECK(drift <= 1e-11 * max_abs(f0));
}

TEST_CASE("large tau reduces to pure advection") {
    ProblemSetup s = small_pulse();
    s.collision = {};
    s.collision.tau = 1e12;
    Simulation sim(s);
    DistributionField rhs = sim.field();
    sim.solver().rhs(sim.field(), rhs);
    std::vector<double> adv(sim.field().values.size());
    sim.solver().transport().apply(sim.field().values, adv);
    for (std::size_t i = 0; i < adv.size(); ++i) CHECK(std::abs(rhs.values[i] - adv[i]) <= 1e-12 * (1.0 + std::abs(adv[i])));
}

TEST_CASE("zero field has zero right-hand side away from collisions") {
    ProblemSetup s = small_pulse();
    Simulation sim(s);
    std::vector<double> zero(sim.field().values.size(), 0.0), out(zero.size(), 1.0);
    sim.solver().transport().apply(zero, out);
    CHECK(max_abs(out) == 0.0);
}

TEST_CASE("fused step agrees with the reference RK4") {
    ProblemSetup s = small_pulse();
    Simulation a(s), b(s);
    const double dt = 0.5 * a.dt_cfl();
    a.solver().rk4_step(a.field(), dt);
    b.solver().adaptive_step(b.field(), dt, dt);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.field().values.size(); ++i)
        diff = std::max(diff, std::abs(a.field().values[i] - b.field().values[i]));
    CHECK(diff <= 1e-13 * max_abs(a.field().values));
}

TEST_CASE("thread count does not change results beyond round-off") {
    ProblemSetup s = small_pulse();
    s.solver.threads = 1;
    Simulation a(s);
    s.solver.threads = 3;
    Simulation b(s);
    RunControl rc;
    rc.t_final = 10 * a.dt_cfl();
    a.run(rc);
    b.run(rc);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.field().values.size(); ++i)
        diff = std::max(diff, std::abs(a.field().values[i] - b.field().values[i]));
    CHECK(diff <= 1e-12);
}

TEST_CASE("run control") {
    Simulation sim(small_pulse());
    RunControl zero;
    zero.t_final = 0.0;
    const auto rows = sim.run(zero);
    CHECK(rows.size() == 1u);
    CHECK(rows[0].t == 0.0);
    CHECK(rows[0].mass_error == 0.0);

    RunControl rc;
    rc.t_final = 0.02;
    rc.output_interval = 0.005;
    int calls = 0;
    rc.on_step = [&](const Simulation&, double dt) {
        ++calls;
        CHECK(dt > 0.0);
    };
    const auto r2 = sim.run(rc);
    CHECK(sim.time() == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(r2.back().t == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(r2.size() >= 5u);
    CHECK(calls == static_cast<int>(sim.solver().counters().steps));
    CHECK(r2.back().min_f >= 0.0);
}

TEST_CASE("mass, momentum and energy are conserved on a periodic pulse") {
    ProblemSetup s = pulse_case(4, 8, 1e-1, 2.0, 16, 8).setup;
    s.solver.dvm_iters = 3;
    Simulation sim(s);
    RunControl rc;
    rc.t_final = 0.1;
    const auto rows = sim.run(rc);
    const auto& f = rows.front();
    const auto& l = rows.back();
    CHECK(std::abs(l.mass - f.mass) <= 1e-11 * std::abs(f.mass));
    CHECK(std::abs(l.momentum - f.momentum) <= 1e-11 * std::abs(f.momentum));
    CHECK(std::abs(l.energy - f.energy) <= 1e-11 * std::abs(f.energy));
}

TEST_CASE("setup validation") {
    ProblemSetup s = small_pulse();
    s.n_v = 7;
    CHECK_THROWS_AS(Simulation{s}, Error);
    ProblemSetup w = small_pulse();
    w.bc_left = BoundaryKind::SpecularWall;
    w.bc_right = BoundaryKind::SpecularWall;
    const Simulation periodic(small_pulse());
    const Simulation walls(w);
    // the box is re-centred on zero and widened by the dropped offset
    CHECK(walls.velocity_offset()[0] == 0.0);
    CHECK(walls.r_max() == doctest::Approx(periodic.r_max() + std::abs(periodic.velocity_offset()[0])));
    const auto& u = walls.moment_operator().speeds();
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(-u[u.size() - 1 - i]));
    w.m = 2;
    w.n_r = 4;
    w.n_phi = 4;
    CHECK_THROWS_AS(Simulation{w}, ConfigError);
}

TEST_CASE("unresolved mesh Knudsen number warns") {
    Simulation sim(sod_case(0.01, 20, 8, 4).setup);
    REQUIRE_FALSE(sim.warnings().empty());
    CHECK(sim.mesh_knudsen_info().kn_h == doctest::Approx(0.01).epsilon(1e-9));
    Simulation ok(sod_case(0.1, 20, 8, 4).setup);
    CHECK(ok.warnings().empty());
}
