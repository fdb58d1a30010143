#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polybgk/config.hpp"
#include "polybgk/io.hpp"

using namespace polybgk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Config small_config() {
    return parse_config_string(
        "case = pulse\np = 2\nn_elements = 6\nt_final = 0.02\nn_v = 16\nkn = 0.1\noutput_interval = 0.01\n"
        "fu_locations = 0.5\n");
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("run writes the expected files with fixed headers") {
    const fs::path dir = fs::temp_directory_path() / "polybgk_io_test_a";
    fs::remove_all(dir);
    std::ostringstream log;
    const RunSummary s = run_case(small_config(), dir.string(), log);
    REQUIRE(s.status == 0);
    for (const char* f : {"config.txt", "profile.csv", "timeseries.csv", "fu_slice.csv", "report.json"})
        CHECK(fs::exists(dir / f));
    CHECK(slurp(dir / "profile.csv").rfind("x,rho,u,p,e,theta\n", 0) == 0);
    CHECK(slurp(dir / "timeseries.csv").rfind("t,mass,momentum,energy,mass_err,min_f,residual_linf\n", 0) == 0);
    CHECK(slurp(dir / "fu_slice.csv").rfind("u,f_u\n", 0) == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report["status"] == "ok");
    CHECK(report["t_final"].get<double>() == doctest::Approx(0.02));

    const fs::path dir2 = fs::temp_directory_path() / "polybgk_io_test_b";
    fs::remove_all(dir2);
    run_case(small_config(), dir2.string(), log);
    for (const char* f : {"profile.csv", "timeseries.csv", "fu_slice.csv", "config.txt"})
        CHECK(slurp(dir / f) == slurp(dir2 / f));
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("solver failures are reported, not thrown") {
    const fs::path dir = fs::temp_directory_path() / "polybgk_io_test_c";
    fs::remove_all(dir);
    Config c = small_config();
    c.cfl = 50.0;
    c.kn = 10.0;
    c.t_final = 1.0;
    std::ostringstream log;
    const RunSummary s = run_case(c, dir.string(), log);
    CHECK(s.status == 1);
    CHECK_FALSE(s.message.empty());
    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report["status"] == "error");
    fs::remove_all(dir);
}
