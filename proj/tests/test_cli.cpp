#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gridstress/calendar.hpp"
#include "support/cli_fixture.hpp"

using namespace gridstress;
using namespace gridstress::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = GRIDSTRESS_TEST_DATA;
const fs::path kGolden = GRIDSTRESS_TEST_GOLDEN;

}  // namespace

TEST_CASE("ingest and indicators match the golden tables") {
    const fs::path out = scratch_dir("golden");
    REQUIRE(run_cli("ingest -c " + (kData / "tiny.json").string() + " -o " + out.string()).exit_code == 0);
    REQUIRE(run_cli("indicators -c " + (kData / "tiny.json").string() + " -o " + out.string()).exit_code == 0);
    REQUIRE(run_cli("density -c " + (kData / "tiny.json").string() + " -o " + out.string() +
                    " -w first -w rest -i demand")
                .exit_code == 0);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(kGolden / "tiny")) {
        const fs::path produced = out / "tiny" / entry.path().filename();
        INFO(entry.path().filename().string());
        REQUIRE(fs::exists(produced));
        CHECK(slurp(produced) == slurp(entry.path()));
        ++compared;
    }
    CHECK(compared >= 10);
}

TEST_CASE("indicators with a window and json output") {
    const fs::path out = scratch_dir("window");
    const auto r = run_cli("indicators -c " + (kData / "tiny.json").string() + " -o " + out.string() +
                           " -w first -f json");
    CHECK(r.exit_code == 0);
    const std::string totals = slurp(out / "tiny" / "daily_totals.json");
    CHECK(totals.find("\"total_mwh\": 27000.0") != std::string::npos);
    CHECK(totals.find("2020-03-03") == std::string::npos);
}

TEST_CASE("empty window exits with insufficient data") {
    const fs::path out = scratch_dir("empty");
    CHECK(run_cli("indicators -c " + (kData / "tiny.json").string() + " -o " + out.string() + " -w empty")
              .exit_code == 3);
}

TEST_CASE("missing declared column exits 2 naming the column") {
    const fs::path dir = scratch_dir("badcol");
    write_file(dir / "grid.csv", "timestamp,load\n2020-03-02 01:00,1\n");
    write_file(dir / "cfg.json", R"({"regions":[{"id":"r","grid_csv":"grid.csv","schema":{"columns":{"demand":"Demand"}}}]})");
    const auto r = run_cli("ingest -c " + (dir / "cfg.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("Demand") != std::string::npos);
    CHECK(r.err.find("grid.csv:1") != std::string::npos);
}

TEST_CASE("order errors report file and line") {
    const fs::path dir = scratch_dir("order");
    write_file(dir / "grid.csv", "timestamp,demand\n2020-03-02 02:00,1\n2020-03-02 01:00,1\n");
    write_file(dir / "cfg.json", R"({"regions":[{"id":"r","grid_csv":"grid.csv","schema":{"columns":{"demand":"demand"}}}]})");
    const auto r = run_cli("ingest -c " + (dir / "cfg.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("grid.csv:3") != std::string::npos);
}

TEST_CASE("demand-only region skips forecast error with a warning") {
    const fs::path dir = scratch_dir("demand_only");
    std::string csv = "timestamp,demand\n";
    for (int h = 1; h <= 48; ++h) {
        csv += format_hour(hour_stamp(std::chrono::year{2020} / 3 / 2, 1) + std::chrono::hours{h - 1}) + "," +
               std::to_string(1000 + h) + "\n";
    }
    write_file(dir / "grid.csv", csv);
    write_file(dir / "cfg.json", R"({"regions":[{"id":"r","grid_csv":"grid.csv","schema":{"columns":{"demand":"demand"}}}]})");
    const auto r = run_cli("indicators -c " + (dir / "cfg.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("forecast error skipped") != std::string::npos);
    for (const char* name : {"peak_trough.csv", "ramp_rate.csv", "daily_totals.csv"}) {
        CHECK(fs::exists(dir / "out" / "r" / name));
    }
    CHECK_FALSE(fs::exists(dir / "out" / "r" / "forecast_error.csv"));
}

TEST_CASE("density wiring and errors") {
    const fs::path out = scratch_dir("density");
    const std::string cfg = (kData / "tiny.json").string();
    CHECK(run_cli("density -c " + cfg + " -o " + out.string() + " -w all -w all -i ramp_rate").exit_code == 0);
    const std::string summary = slurp(out / "tiny" / "density_ramp_rate_all_vs_all_summary.csv");
    std::istringstream lines(summary);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    while (std::getline(lines, line)) CHECK(line.substr(line.rfind(',') + 1) == "0");

    const auto one = run_cli("density -c " + cfg + " -o " + out.string() + " -w first -w empty -i demand");
    CHECK(one.exit_code == 3);
    CHECK(one.err.find("empty") != std::string::npos);
    CHECK(run_cli("density -c " + cfg + " -w first -i bogus").exit_code == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("ingest").exit_code == 2);
    CHECK(run_cli("ingest -c /nonexistent/cfg.json").exit_code == 2);
    CHECK(run_cli("ingest -c " + (kData / "tiny.json").string() + " -r nowhere").exit_code == 2);
}

TEST_CASE("backcast without weather exits 2") {
    const fs::path out = scratch_dir("noweather");
    CHECK(run_cli("backcast -c " + (kData / "tiny.json").string() + " -o " + out.string() + " -w first rest all")
              .exit_code == 2);
}

TEST_CASE("backcast recovers a planted change profile") {
    const BackcastFixture fx = write_backcast_fixture(scratch_dir("backcast"), 0.08);
    const auto r = run_cli("backcast -c " + fx.config.string());
    REQUIRE(r.exit_code == 0);
    const auto rows = read_change_table(fx.out / "synth" / "change.csv");
    REQUIRE(rows.size() == 28);
    std::size_t inside = 0;
    for (const auto& row : rows) {
        const double planted = fx.planted_change_pct.at(row.date);
        inside += row.ci95_lo <= planted && planted <= row.ci95_hi;
    }
    CHECK(inside >= 26);

    // The fitted setpoints are the planted ones.
    const std::string diag = slurp(fx.out / "synth" / "fit_diagnostics.csv");
    CHECK(diag.find("heating_setpoint_degF,60") != std::string::npos);
    CHECK(diag.find("cooling_setpoint_degF,70") != std::string::npos);
    CHECK(fs::exists(fx.out / "synth" / "model.json"));
    CHECK(fs::exists(fx.out / "synth" / "setpoint_scores.csv"));
}

TEST_CASE("backcast on the training window is centred at zero") {
    const BackcastFixture fx = write_backcast_fixture(scratch_dir("insample"), 0.0);
    const auto r = run_cli("backcast -c " + fx.config.string() + " -w train train base holdout");
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.find("overlaps") != std::string::npos);
    const auto rows = read_change_table(fx.out / "synth" / "change.csv");
    REQUIRE(rows.size() == 28);
    double mean = 0.0, half_width = rows.front().ci95_hi - rows.front().change_pct;
    for (const auto& row : rows) mean += row.change_pct / static_cast<double>(rows.size());
    // OLS residuals sum to zero per hour-of-week slot, so the mean daily change vanishes.
    CHECK(std::abs(mean) < 1e-6);
    CHECK(half_width > 0.0);
}

TEST_CASE("reruns are byte identical") {
    const BackcastFixture fx = write_backcast_fixture(scratch_dir("determinism"), 0.05);
    const fs::path a = fx.out.parent_path() / "run_a", b = fx.out.parent_path() / "run_b";
    for (const char* cmd : {"ingest", "indicators", "backcast"}) {
        REQUIRE(run_cli(std::string(cmd) + " -c " + fx.config.string() + " -o " + a.string()).exit_code == 0);
        REQUIRE(run_cli(std::string(cmd) + " -c " + fx.config.string() + " -o " + b.string()).exit_code == 0);
    }
    CHECK(directories_identical(a, b));
}
