#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "polybgk/errors.hpp"
#include "polybgk/validation.hpp"

using namespace polybgk;

TEST_CASE("suite registry") {
    const auto& names = validation_suites();
    CHECK(names.size() == 8u);
    CHECK_THROWS_AS(run_validation("no_such_suite"), InvalidArgument);
    const auto& table = reference_zeta_table();
    CHECK(table.size() == 4u);
    for (const auto& row : table) CHECK(row.size() == 7u);
}

TEST_CASE("property suite passes and reports as JSON lines") {
    const SuiteReport r = run_validation("properties");
    CHECK(r.passed());
    std::ostringstream os;
    write_report_jsonl(os, r);
    std::istringstream in(os.str());
    std::string line;
    std::size_t n = 0;
    nlohmann::json last;
    while (std::getline(in, line)) {
        last = nlohmann::json::parse(line);
        ++n;
    }
    CHECK(n == r.checks.size() + 1);
    CHECK(last["summary"] == true);
    CHECK(last["pass"] == true);
    std::ostringstream table;
    print_report(table, r);
    CHECK(table.str().find("PASS") != std::string::npos);
}

TEST_CASE("empty report does not pass") {
    SuiteReport r;
    CHECK_FALSE(r.passed());
}
