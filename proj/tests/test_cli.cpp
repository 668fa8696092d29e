#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string cli() {
    const char* p = std::getenv("BEATGEN_CLI");
    REQUIRE_MESSAGE(p != nullptr, "BEATGEN_CLI must point at the beatgen binary");
    return p;
}

int run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + cli() + " " + args + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp(const std::string& name) { return "/tmp/beatgen_test_" + name; }

}  // namespace

TEST_CASE("help and presets run clean") {
    CHECK(run("--help > /dev/null") == 0);
    CHECK(run("presets --out " + tmp("presets.csv")) == 0);
    auto text = slurp(tmp("presets.csv"));
    CHECK(text.find("fig8b") != std::string::npos);
    CHECK(text.find("tau-slope-zero") != std::string::npos);
}

TEST_CASE("iterate from the synchronous state emits constant columns") {
    auto out = tmp("sync.csv");
    REQUIRE(run("iterate --map oieb --preset fig3 --i0 2.5414940825367984 --phi0 0 --steps 5 --out " + out) == 0);
    std::istringstream in(slurp(out));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
        CHECK(line.find("2.5414940825367") != std::string::npos);
        ++rows;
    }
    CHECK(rows == 6);
}

TEST_CASE("dynamical termination exits 3 but still writes the trace") {
    auto out = tmp("diverge.csv");
    CHECK(run("iterate --map oieb --preset fig8e --i0 2.5 --phi0 0.3 --steps 200 --out " + out) == 3);
    auto text = slurp(out);
    CHECK(text.find("termination") != std::string::npos);
    CHECK(text.find("\nn,i,phi") != std::string::npos);
}

TEST_CASE("unknown preset is a configuration error") {
    CHECK(run("iterate --preset nope --out /dev/null") == 2);
    CHECK(run("boundaries --kind unit-modulus --fixed-point 0 --out /dev/null") == 2);
}

TEST_CASE("explicit flags override preset fields") {
    auto out = tmp("override.json");
    REQUIRE(run("attractor --preset fig8b --delta-phi 4.5 --format json --out " + out) == 0);
    auto root = json::parse(slurp(out));
    CHECK(root.at("meta").at("config").at("params").at("delta_phi").get<double>() == 4.5);
    CHECK(root.at("meta").at("config").at("params").at("delta_t").get<double>() == 0.002);
    // fig8b with delta_phi 4.5 is the period-4 preset
    CHECK(root.at("data").at("period").at(0).get<int>() == 4);
}

TEST_CASE("config header reruns byte-identically") {
    auto out1 = tmp("rr1.csv");
    REQUIRE(run("iterate --map oieb --preset fig8b --i0 2.5 --phi0 0.3 --steps 64 --out " + out1) == 0);
    auto text = slurp(out1);
    auto pos = text.find("# config: ");
    REQUIRE(pos != std::string::npos);
    auto eol = text.find('\n', pos);
    std::string cfg_line = text.substr(pos + 10, eol - pos - 10);

    auto cfg_path = tmp("rr.json");
    {
        std::ofstream f(cfg_path);
        f << cfg_line;
    }
    auto out2 = tmp("rr2.csv");
    // the rerun writes to a different path; the out field inside the config
    // is only a default
    auto cfg = nlohmann::ordered_json::parse(cfg_line);
    cfg["out"] = out2;
    {
        std::ofstream f(cfg_path);
        f << cfg.dump();
    }
    REQUIRE(run("--config " + cfg_path) == 0);
    auto a = slurp(out1);
    auto b = slurp(out2);
    CHECK(a == b);
}

TEST_CASE("sweep outputs are byte-identical across worker counts") {
    auto out1 = tmp("det1.csv");
    auto out4 = tmp("det4.csv");
    std::string args = "regions --tstim 500 --window 0:0.01,0:7 --res 60x60 --out ";
    REQUIRE(run(args + out1, "BEATGEN_THREADS=1") == 0);
    REQUIRE(run(args + out4, "BEATGEN_THREADS=4") == 0);
    CHECK(slurp(out1) == slurp(out4));

    auto b1 = tmp("bas1.csv");
    auto b4 = tmp("bas4.csv");
    std::string bargs =
        "basin --map oieb --preset fig4 --grid 2.2:2.9:8,0.05:0.95:8 --transient 2000 --observe 4000 --out ";
    REQUIRE(run(bargs + b1, "BEATGEN_THREADS=1") == 0);
    REQUIRE(run(bargs + b4, "BEATGEN_THREADS=4") == 0);
    CHECK(slurp(b1) == slurp(b4));
}

TEST_CASE("boundary command emits the origin-anchored curve") {
    auto out = tmp("unitmod.csv");
    REQUIRE(run("boundaries --kind unit-modulus --fixed-point 1 --tstim 500 --window 0:0.01,0:5 "
                "--lines 60 --out " + out) == 0);
    std::istringstream in(slurp(out));
    std::string line;
    double min_dp = 1e9;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'd') continue;
        auto c1 = line.find(','), c2 = line.rfind(',');
        double dt = std::strtod(line.substr(0, c1).c_str(), nullptr);
        double dp = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
        CHECK(dp == doctest::Approx(500.0 * dt).epsilon(1e-6));
        min_dp = std::min(min_dp, dp);
    }
    CHECK(min_dp < 0.2);
}

TEST_CASE("CSV and JSON runs carry identical numeric values") {
    auto csv_path = tmp("fmt.csv");
    auto json_path = tmp("fmt.json");
    std::string args = "iterate --map oieb --preset fig8b --i0 2.5 --phi0 0.3 --steps 40 ";
    REQUIRE(run(args + "--format csv --out " + csv_path) == 0);
    REQUIRE(run(args + "--format json --out " + json_path) == 0);

    auto root = json::parse(slurp(json_path));
    const auto& ji = root.at("data").at("i");
    const auto& jphi = root.at("data").at("phi");

    std::istringstream in(slurp(csv_path));
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        double i = std::strtod(cell.c_str(), nullptr);
        std::getline(ss, cell, ',');
        double phi = std::strtod(cell.c_str(), nullptr);
        CHECK(i == ji.at(row).get<double>());
        CHECK(phi == jphi.at(row).get<double>());
        ++row;
    }
    CHECK(row == 41);
}

TEST_CASE("feigenbaum logistic validation through the CLI") {
    auto out = tmp("feig.json");
    REQUIRE(run("feigenbaum --map logistic --kmax 5 --format json --out " + out) == 0);
    auto root = json::parse(slurp(out));
    auto ratios = root.at("meta").at("result").at("ratios");
    REQUIRE(ratios.size() == 3);
    double f5 = ratios.at(2).get<double>();
    CHECK(std::fabs(f5 - 4.669) / 4.669 < 0.02);
}

TEST_CASE("tempo-change protocol shows the convergence asymmetry") {
    auto up = tmp("up.json");
    auto down = tmp("down.json");
    // entrained at 250 ms switching up to 500 ms, and the reverse
    REQUIRE(run("simulate --tau 1000 --tstim 250 --delta-t 0.005 --delta-phi 0 "
                "--i0 4.520811664187799 --phi0 0 --cycles 4000 --tempo-change 2000 500 "
                "--format json --out " + up) == 0);
    REQUIRE(run("simulate --tau 1000 --tstim 500 --delta-t 0.005 --delta-phi 0 "
                "--i0 2.5414940825367984 --phi0 0 --cycles 4000 --tempo-change 2000 250 "
                "--format json --out " + down) == 0);
    auto ju = json::parse(slurp(up));
    auto jd = json::parse(slurp(down));
    REQUIRE(ju.at("meta").at("result").at("converged").get<bool>());
    REQUIRE(jd.at("meta").at("result").at("converged").get<bool>());
    auto cu = ju.at("meta").at("result").at("cycles_to_converge").get<long long>();
    auto cd = jd.at("meta").at("result").at("cycles_to_converge").get<long long>();
    CHECK(cu < cd);
}

TEST_CASE("calibrate reports the reference behaviors at the default tau") {
    auto out = tmp("cal.json");
    REQUIRE(run("calibrate --tau-range 1000:1000.0001 --steps 2 --format json --out " + out) == 0);
    auto root = json::parse(slurp(out));
    CHECK(root.at("meta").at("result").at("best_reproduced").get<int>() == 6);
    const auto& data = root.at("data");
    CHECK(data.at("fig8b_period5").at(0).get<int>() == 1);
    CHECK(data.at("fig8f_period104").at(0).get<int>() == 1);
}
