#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polybgk {

/// One measured quantity compared against its target.
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;  // relation used and any context
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
    double seconds = 0.0;

    bool passed() const;
};

struct ValidationOptions {
    int threads = 1;
    std::ostream* log = nullptr;  // progress messages, may be null
};

/// zeta_table, pulse_convergence, dvm_conservation, well_balance, sod, expansion, normal_shock, properties.
const std::vector<std::string>& validation_suites();

/// Runs one suite. Throws InvalidArgument for an unknown name.
SuiteReport run_validation(const std::string& suite, const ValidationOptions& options = {});

/// Aligned human-readable table ending in a PASS/FAIL line.
void print_report(std::ostream& os, const SuiteReport& report);

/// One JSON object per check followed by a summary object.
void write_report_jsonl(std::ostream& os, const SuiteReport& report);

/// Tabulated reference ζ_max/θ_max values for δ ∈ {2,3,4,5} (rows) and ε ∈ {1e-2,…,1e-14} (columns).
const std::vector<std::vector<double>>& reference_zeta_table();

}  // namespace polybgk
