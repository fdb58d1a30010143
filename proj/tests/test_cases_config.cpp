#include <doctest.h>

#include <cmath>

#include "polybgk/cases.hpp"
#include "polybgk/config.hpp"
#include "polybgk/errors.hpp"

using namespace polybgk;

TEST_CASE("initial conditions") {
    const auto pulse = smooth_pulse();
    CHECK(pulse(0.5).rho == doctest::Approx(2.0));
    CHECK(pulse(0.0).rho == doctest::Approx(1.0 + std::exp(-25.0)));
    CHECK(pulse(0.3).u == 1.0);
    CHECK(pulse(0.3).p == 1.0);

    const auto s = sod();
    CHECK(s(0.25).rho == 1.0);
    CHECK(s(0.75).rho == 0.125);
    CHECK(s(0.75).p == doctest::Approx(0.1));

    const auto e = double_expansion();
    CHECK(e(0.2).u == -2.0);
    CHECK(e(0.8).u == 2.0);
    CHECK(e(0.8).p == doctest::Approx(0.4));
    const auto es = double_expansion(true, 0.01);
    CHECK(es(0.5).u == doctest::Approx(0.0));
    CHECK(es(0.9).u == doctest::Approx(2.0));

    const NormalShock ns = normal_shock(3.8);
    CHECK(ns.upstream.u == doctest::Approx(3.8 * std::sqrt(5.0 / 3.0)));
    CHECK(ns.downstream.rho == doctest::Approx(3.312).epsilon(1e-3));
    CHECK(ns.initial(-1.0).rho == 1.0);
    CHECK(ns.initial(1.0).rho == doctest::Approx(ns.downstream.rho));
    CHECK(ns.model.kind == CollisionModel::Kind::PowerLaw);
    CHECK(ns.model.omega == 0.81);
}

TEST_CASE("named cases") {
    for (const char* name : {"pulse", "expansion", "sod", "normal_shock", "uniform"}) {
        const BenchmarkCase bc = make_case(name);
        CHECK(bc.t_final > 0.0);
        CHECK(bc.setup.n_elements > 0);
    }
    CHECK(make_case("sod").setup.delta == 4.0);
    CHECK(make_case("normal_shock").setup.x_min == -25.0);
    CHECK(make_case("normal_shock").t_final == 100.0);
    CHECK_THROWS_AS(make_case("nope"), ConfigError);
}

TEST_CASE("config parsing and round trip") {
    const std::string text =
        "# sod tube\n"
        "case = sod\n"
        "p = 2\n"
        "n_elements = 40   # trailing comment\n"
        "t_final = 0.2\n"
        "kn_h = 0.1\n"
        "delta = 4\n"
        "n_v = 16\n"
        "n_zeta = 8\n"
        "domain = 0, 1\n"
        "bc_left = neumann\n"
        "bc_right = dirichlet\n"
        "dvm = yes\n"
        "fu_locations = 0.25 0.75\n";
    const Config c = parse_config_string(text);
    CHECK(c.case_name == "sod");
    CHECK(c.p == 2);
    CHECK(c.n_elements == 40);
    CHECK(*c.kn_h == 0.1);
    CHECK(*c.delta == 4.0);
    CHECK((*c.domain)[1] == 1.0);
    CHECK(*c.bc_left == BoundaryKind::Neumann);
    CHECK(c.fu_locations.size() == 2u);

    const std::string once = serialize_config(c);
    const Config again = parse_config_string(once);
    CHECK(serialize_config(again) == once);

    const ProblemSetup s = make_setup(c);
    CHECK(s.p == 2);
    CHECK(s.n_elements == 40);
    CHECK(s.bc_left == BoundaryKind::Neumann);
}

TEST_CASE("config errors carry line numbers") {
    try {
        parse_config_string("case = sod\np = 2\nbogus = 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config_string("case = sod\np = 2\nn_elements = 4\n"), ParseError);
    CHECK_THROWS_AS(parse_config_string("case = sod\ncase = sod\np = 1\nn_elements = 4\nt_final = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config_string("case = sod\np = x\nn_elements = 4\nt_final = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config_string("case = sod\np = 1\nn_elements = 4\nt_final = 1\ndomain = 1, 0\n"), ParseError);
    CHECK_THROWS_AS(parse_config("/nonexistent/file.cfg"), Error);
    CHECK_THROWS_AS(parse_boundary("sticky"), InvalidArgument);
    for (auto k : {BoundaryKind::Periodic, BoundaryKind::Neumann, BoundaryKind::Dirichlet, BoundaryKind::SpecularWall})
        CHECK(parse_boundary(boundary_name(k)) == k);
}
