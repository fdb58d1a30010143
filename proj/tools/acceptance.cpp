// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polybgk/errors.hpp"
#include "polybgk/validation.hpp"

namespace {

struct Criterion {
    int id;
    const char* suite;
    const char* title;
    double budget_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "zeta_table", "zeta_max table", 1},
    {2, "pulse_convergence", "spatial convergence orders", 20 * 60},
    {3, "dvm_conservation", "DVM conservation", 10 * 60},
    {4, "well_balance", "well-balancing", 60},
    {5, "sod", "Sod shock tube", 5 * 60},
    {6, "expansion", "123 problem", 15 * 60},
    {7, "normal_shock", "normal shock M=3.8", 30 * 60},
    {8, "properties", "property suites", 2 * 60},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria runner"};
    std::vector<int> only;
    int threads = 1;
    std::string jsonl = "acceptance.jsonl";
    bool quiet = false;
    app.add_option("criteria", only, "criterion numbers to run (default: all)")->check(CLI::Range(1, 8));
    app.add_option("--threads", threads, "worker threads, 0 = all cores");
    app.add_option("--jsonl", jsonl, "JSON-lines report path")->capture_default_str();
    app.add_flag("--quiet", quiet, "suppress progress messages");
    CLI11_PARSE(app, argc, argv);

    const std::set<int> selected(only.begin(), only.end());
    std::ofstream js(jsonl);
    if (!js) {
        std::cerr << "cannot write " << jsonl << '\n';
        return 2;
    }
    polybgk::ValidationOptions opt;
    opt.threads = threads;
    opt.log = quiet ? nullptr : &std::cerr;

    std::vector<std::string> summary;
    bool all_ok = true;
    for (const auto& c : kCriteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        polybgk::SuiteReport report;
        std::string error;
        try {
            report = polybgk::run_validation(c.suite, opt);
        } catch (const polybgk::Error& e) {
            error = e.what();
            report.suite = c.suite;
        }
        polybgk::print_report(std::cout, report);
        polybgk::write_report_jsonl(js, report);
        std::size_t passed = 0;
        for (const auto& ch : report.checks) passed += ch.pass;
        const bool ok = error.empty() && report.passed();
        all_ok = all_ok && ok;
        char line[512];
        std::snprintf(line, sizeof line, "%s criterion %d (%s): %zu/%zu checks, %.1f s (laptop budget %.0f s)%s%s",
                      ok ? "PASS" : "FAIL", c.id, c.title, passed, report.checks.size(), report.seconds, c.budget_s,
                      error.empty() ? "" : ", error: ", error.c_str());
        std::cout << line << std::endl;
        summary.emplace_back(line);
    }
    std::cout << "\nsummary\n";
    for (const auto& s : summary) std::cout << s << '\n';
    return all_ok ? 0 : 1;
}
