#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polybgk/config.hpp"
#include "polybgk/macro.hpp"
#include "polybgk/solver.hpp"

namespace polybgk {

/// Decimal text of x with 17 significant digits (round-trips exactly).
std::string format_number(double x);

/// x,rho,u,p,e,theta at every solution node, sorted by x (stable for shared vertices).
void write_profile_csv(std::ostream& os, const Simulation& sim);
/// t,mass,momentum,energy,mass_err,min_f,residual_linf
void write_timeseries_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows);
/// u,f_u
void write_fu_csv(std::ostream& os, const FuSlice& slice);

struct RunSummary {
    int status = 0;  // 0 ok, 1 solver error
    std::string message;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

/// Runs the configured case and writes config.txt, profile.csv, timeseries.csv,
/// fu_slice*.csv and report.json into out_dir (created if missing). Progress goes to log.
RunSummary run_case(const Config& config, const std::string& out_dir, std::ostream& log);

}  // namespace polybgk
