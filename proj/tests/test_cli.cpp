#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lyapspec/cli_run.hpp"
#include "lyapspec/config.hpp"
#include "lyapspec/models.hpp"
#include "lyapspec/pressure.hpp"

using namespace lyapspec;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(LYAPSPEC_SOURCE_DIR) + "/configs/";

fs::path temp_dir() {
    fs::path p = fs::temp_directory_path() / "lyapspec_cli_tests";
    fs::create_directories(p);
    return p;
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        rows.push_back(cols);
    }
    return rows;
}

}  // namespace

TEST_CASE("pressure subcommand emits the oracle-consistent grid") {
    fs::path out = temp_dir() / "gc24_pressure.csv";
    int code = run({"pressure", "--map-config", kConfigs + "gc24.json", "--d-min", "-2",
                    "--d-max", "2", "--out", out.string()});
    REQUIRE(code == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() == 82);  // header + 81 grid rows
    CHECK(rows[0] ==
          std::vector<std::string>{"d", "P_lower", "P_upper", "P_extrapolated", "err",
                                   "depth"});
    PressureHost h = whole_map_host(model_gc24());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double d = std::stod(rows[i][0]);
        double val = std::stod(rows[i][3]);
        double err = std::stod(rows[i][4]);
        double oracle = pressure_matrix_oracle(h, d);
        CHECK(std::fabs(val - oracle) <= err + 1e-12);
    }
    CHECK(fs::exists(out.string() + ".manifest.json"));
    std::string manifest = slurp(out.string() + ".manifest.json");
    CHECK(manifest.find("config_hash") != std::string::npos);
    CHECK(manifest.find(kToolVersion) != std::string::npos);
}

TEST_CASE("schema violations exit with code 2") {
    fs::path dir = temp_dir();
    fs::path bad = dir / "bad_key.json";
    std::ofstream(bad) << R"({"family": "manneville_pomeau", "s": 1.0, "zzz": 3})";
    fs::path out = dir / "never.csv";
    std::string err;
    int code = run({"pressure", "--map-config", bad.string(), "--out", out.string()},
                   nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("unknown key") != std::string::npos);

    fs::path zero_row = dir / "zero_row.json";
    std::ofstream(zero_row) << R"({"family": "linear_sft", "slopes": [2, 2],
        "matrix": [[0, 0], [1, 1]],
        "branch_intervals": [[0.0, 0.5], [0.5, 1.0]]})";
    code = run({"pressure", "--map-config", zero_row.string(), "--out", out.string()},
               nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("mixing") != std::string::npos);

    // missing required flag
    code = run({"wsample", "--map-config", kConfigs + "gc24.json", "--schedule-config",
                kConfigs + "schedule_alternating_gc24.json", "--out", out.string()},
               nullptr, &err);
    CHECK(code == 2);
}

TEST_CASE("degenerate maps are refused with exit code 4") {
    fs::path out = temp_dir() / "doubling_spec.csv";
    std::string err;
    int code = run({"spectrum", "--map-config", kConfigs + "doubling.json", "--out",
                    out.string()},
                   nullptr, &err);
    CHECK(code == 4);
    CHECK(err.find("cohomologous") != std::string::npos);
}

TEST_CASE("spectrum subcommand writes the curve and its side file") {
    fs::path out = temp_dir() / "gc24_spectrum.csv";
    int code = run({"spectrum", "--map-config", kConfigs + "gc24.json", "--alpha-steps",
                    "61", "--out", out.string()});
    REQUIRE(code == 0);
    auto rows = read_csv(out);
    CHECK(rows.size() == 62);
    CHECK(rows[0][0] == "alpha");
    json meta = load_json_file(out.string() + ".meta.json");
    CHECK(meta.at("case").get<std::string>() == "hyperbolic");
    double d0lo = meta.at("d0_lo").get<double>();
    double d0hi = meta.at("d0_hi").get<double>();
    double expect = std::log((1 + std::sqrt(5.0)) / 2) / std::log(2.0);
    CHECK(d0lo <= expect);
    CHECK(expect <= d0hi);
}

TEST_CASE("measure subcommand lists cylinder masses") {
    fs::path out = temp_dir() / "doubling_masses.csv";
    int code = run({"measure", "--map-config", kConfigs + "doubling.json", "--conformal-d",
                    "1.0", "--depth", "4", "--out", out.string()});
    REQUIRE(code == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() == 17);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][1]) == doctest::Approx(1.0 / 16).epsilon(1e-12));

    fs::path out2 = temp_dir() / "gc24_gibbs.csv";
    code = run({"measure", "--map-config", kConfigs + "gc24.json", "--q", "0", "--depth",
                "3", "--out", out2.string()});
    REQUIRE(code == 0);
    auto rows2 = read_csv(out2);
    REQUIRE(rows2.size() == 9);
    for (std::size_t i = 1; i < rows2.size(); ++i)
        CHECK(std::stod(rows2[i][1]) == doctest::Approx(0.125).epsilon(1e-12));

    std::string err;
    code = run({"measure", "--map-config", kConfigs + "gc24.json", "--out",
                (temp_dir() / "x.csv").string()},
               nullptr, &err);
    CHECK(code == 2);  // needs --q, --alpha, or --conformal-d
}

TEST_CASE("entropy subcommand emits counts and bounds") {
    fs::path out = temp_dir() / "mp_entropy.csv";
    int code = run({"entropy", "--map-config", kConfigs + "mp_s1.json", "--epsilon", "0.2",
                    "--epsilon", "0.1", "--depth-min", "6", "--depth-max", "10", "--report",
                    "--out", out.string()});
    REQUIRE(code == 0);
    auto rows = read_csv(out);
    CHECK(rows.size() == 11);  // header + 2 epsilons x 5 depths
    json rep = load_json_file(out.string() + ".report.json");
    CHECK(rep.at("parabolic").get<bool>());
    CHECK(rep.at("d0_lo").get<double>() <= 1.0);
    CHECK(rep.at("d0_hi").get<double>() >= 1.0);
}

TEST_CASE("byte-identical outputs for identical config and seed") {
    fs::path dir = temp_dir();
    auto run_once = [&](const std::string& tag) {
        fs::path out = dir / ("ws_" + tag + ".csv");
        int code = run({"wsample", "--map-config", kConfigs + "gc24.json",
                        "--schedule-config", kConfigs + "schedule_alternating_gc24.json",
                        "--seed", "7", "--seeds", "2", "--out", out.string()});
        REQUIRE(code == 0);
        return slurp(out) + "\x01" + slurp(out.string() + ".summary.json") + "\x01" +
               slurp(out.string() + ".manifest.json");
    };
    CHECK(run_once("a") == run_once("b"));

    auto fig_once = [&](const std::string& tag) {
        fs::path out = dir / ("fig_" + tag);
        int code = run({"figure-data", "--map-config", kConfigs + "mp_s1.json", "--d-steps",
                        "21", "--alpha-steps", "31", "--out", out.string()});
        REQUIRE(code == 0);
        return slurp(out.string() + "_pressure.csv") + "\x01" +
               slurp(out.string() + "_spectrum.csv") + "\x01" +
               slurp(out.string() + "_annotations.json");
    };
    CHECK(fig_once("a") == fig_once("b"));
}

TEST_CASE("figure data pairs the two curves") {
    fs::path out = temp_dir() / "fig_gc24";
    int code = run({"figure-data", "--map-config", kConfigs + "gc24.json", "--d-steps",
                    "21", "--alpha-steps", "21", "--out", out.string()});
    REQUIRE(code == 0);
    CHECK(fs::exists(out.string() + "_pressure.csv"));
    CHECK(fs::exists(out.string() + "_spectrum.csv"));
    json ann = load_json_file(out.string() + "_annotations.json");
    CHECK(ann.at("case").get<std::string>() == "hyperbolic");
    CHECK(ann.at("alpha_plateau").is_null());
}

TEST_CASE("schedule config validation") {
    ScheduleConfig sc = load_schedule_config(kConfigs + "schedule_alternating_gc24.json");
    CHECK(sc.stages.size() == 2);
    CHECK(sc.switch_times.size() == 5);
    json bad = json::parse(R"({"stages": [{"q": 0.0}], "switch_times": [10, 11]})");
    ScheduleConfig parsed = schedule_from_config(bad);
    CHECK_THROWS_AS(
        build_schedule(model_gc24(), parsed.stages, parsed.switch_times, parsed.policy),
        SchemaError);
}

TEST_CASE("measure with a target exponent and truncated parabolic sampling") {
    fs::path out = temp_dir() / "gc24_alpha.csv";
    int code = run({"measure", "--map-config", kConfigs + "gc24.json", "--alpha",
                    "1.0397207708399179", "--depth", "2", "--out", out.string()});
    REQUIRE(code == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][1]) == doctest::Approx(0.25).epsilon(1e-6));

    // Gibbs states on an untruncated parabolic map are a usage error
    std::string err;
    code = run({"measure", "--map-config", kConfigs + "mp_s1.json", "--q", "1.0", "--out",
                (temp_dir() / "x.csv").string()},
               nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("hyperbolic") != std::string::npos);

    fs::path wout = temp_dir() / "mp_trace.csv";
    code = run({"wsample", "--map-config", kConfigs + "mp_s1.json", "--schedule-config",
                kConfigs + "schedule_mp_truncated.json", "--seed", "3", "--out",
                wout.string()});
    REQUIRE(code == 0);
    auto wrows = read_csv(wout);
    CHECK(wrows.size() > 10);
    CHECK(wrows[0] == std::vector<std::string>{"m", "L_m", "H_m", "stage_index"});
}

TEST_CASE("work caps surface as exit code 3") {
    std::string err;
    int code = run({"measure", "--map-config", kConfigs + "gc24.json", "--q", "0",
                    "--depth", "25", "--out", (temp_dir() / "deep.csv").string()},
                   nullptr, &err);
    CHECK(code == 3);
    CHECK(err.find("work cap") != std::string::npos);
}

TEST_CASE("measure on a truncated parabolic host") {
    fs::path out = temp_dir() / "mp_sub_masses.csv";
    int code = run({"measure", "--map-config", kConfigs + "mp_s1.json", "--subsystem", "3",
                    "--q", "0.8", "--depth", "5", "--out", out.string()});
    REQUIRE(code == 0);
    auto rows = read_csv(out);
    REQUIRE(rows.size() > 10);
    double total = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(rows[i][1]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i][0].find("000") == std::string::npos);
}
