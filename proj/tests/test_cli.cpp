#include "zcorr/correlators.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Black-box tests of the installed executable; the build injects its path.
#ifndef ZCORR_CLI_PATH
#error "ZCORR_CLI_PATH must point at the front-end binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const std::string tag = ::testing::UnitTest::GetInstance()
                                ->current_test_info()
                                ->name() +
                            std::string("_") + std::to_string(counter++);
    const std::string out_path = "/tmp/zcorr_cli_" + tag + ".out";
    const std::string err_path = "/tmp/zcorr_cli_" + tag + ".err";
    const std::string cmd = env + " '" + ZCORR_CLI_PATH + "' " + args + " > " +
                            out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

} // namespace

TEST(Cli, EvalClosedMatchesLibrary) {
    const RunResult r = run_cli("eval --k 3 --m 3 --r 1.0 --method closed");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NEAR(std::stod(r.out), zcorr::kappa_point_closed(1.0, 3), 1e-14);
    // Resolved configuration appears on stderr, ahead of the value.
    EXPECT_NE(r.err.find("config:"), std::string::npos);
    EXPECT_EQ(r.out.find("config:"), std::string::npos);
}

TEST(Cli, EvalRoutesAgreeThroughTheFrontEnd) {
    const std::string methods[] = {"berezin", "expansion", "closed", "wick"};
    double values[4];
    for (int i = 0; i < 4; ++i) {
        const RunResult r =
            run_cli("eval --k 2 --m 2 --r 0.8 --method " + methods[i]);
        ASSERT_EQ(r.exit_code, 0) << methods[i] << ": " << r.err;
        values[i] = std::stod(r.out);
    }
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(values[i], values[0], 1e-11);
}

TEST(Cli, DomainErrorsNameTheirPrecondition) {
    const RunResult neg = run_cli("eval --k 1 --m 1 --r -1 --method closed");
    EXPECT_EQ(neg.exit_code, 2);
    EXPECT_NE(neg.err.find("r must be > 0"), std::string::npos) << neg.err;

    const RunResult badk = run_cli("eval --k 3 --m 2 --r 1 --method closed");
    EXPECT_EQ(badk.exit_code, 2);

    const RunResult nogeom = run_cli("eval --k 1 --m 1 --method closed");
    EXPECT_EQ(nogeom.exit_code, 2);
    EXPECT_NE(nogeom.err.find("--r"), std::string::npos);

    const RunResult unknown = run_cli("eval --k 1 --m 1 --r 1 --frobnicate");
    EXPECT_EQ(unknown.exit_code, 2);
}

TEST(Cli, CurveHeaderAndDeterminism) {
    const std::string flags = "curve --k 3 --m 3 --rmin 0.2 --rmax 4 --steps 40";
    const RunResult a = run_cli(flags);
    ASSERT_EQ(a.exit_code, 0) << a.err;
    EXPECT_EQ(a.out.substr(0, 8), "r,kappa\n");
    int lines = 0;
    for (char c : a.out) lines += c == '\n';
    EXPECT_EQ(lines, 41); // header + one row per grid point
    const RunResult b = run_cli(flags);
    EXPECT_EQ(a.out, b.out); // byte-identical reruns

    const RunResult file_run = run_cli(flags + " --out /tmp/zcorr_curve_test.csv");
    ASSERT_EQ(file_run.exit_code, 0);
    EXPECT_EQ(slurp("/tmp/zcorr_curve_test.csv"), a.out);
    std::remove("/tmp/zcorr_curve_test.csv");

    const RunResult bad = run_cli(flags + " --out /no/such/dir/x.csv");
    EXPECT_EQ(bad.exit_code, 3);
}

TEST(Cli, CurveJsonCarriesTheSameNumbers) {
    const RunResult csv = run_cli("curve --k 1 --m 1 --rmin 0.5 --rmax 1.5 --steps 3");
    const RunResult js =
        run_cli("curve --k 1 --m 1 --rmin 0.5 --rmax 1.5 --steps 3 --json");
    ASSERT_EQ(js.exit_code, 0) << js.err;
    const auto env = nlohmann::json::parse(js.out);
    ASSERT_EQ(env.at("points").size(), 3u);
    std::istringstream csv_in(csv.out);
    std::string line;
    std::getline(csv_in, line); // header
    for (const auto& p : env.at("points")) {
        std::getline(csv_in, line);
        const auto comma = line.find(',');
        EXPECT_NEAR(p.at("r").get<double>(), std::stod(line.substr(0, comma)),
                    1e-13);
        EXPECT_NEAR(p.at("kappa").get<double>(),
                    std::stod(line.substr(comma + 1)), 1e-13);
    }
}

TEST(Cli, SeriesJsonEnvelope) {
    const RunResult r = run_cli("series --k 1 --m 1 --json");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto env = nlohmann::json::parse(r.out);
    EXPECT_EQ(env.at("series").at("var"), "u");
    EXPECT_EQ(env.at("series").at("valuation").get<int>(), 1);
    EXPECT_EQ(env.at("series").at("coeffs")[0], "1/2");
    // Plain mode prints the same leading coefficient.
    const RunResult plain = run_cli("series --k 1 --m 1");
    EXPECT_EQ(plain.out.substr(0, 9), "u^1: 1/2\n");
}

TEST(Cli, McSeedFormatsAndDeterminism) {
    const std::string base = "mc --k 1 --m 1 --r 1 --samples 20000";
    const RunResult dec = run_cli(base + " --seed 42");
    const RunResult hex = run_cli(base + " --seed 0x2a");
    ASSERT_EQ(dec.exit_code, 0) << dec.err;
    EXPECT_EQ(dec.out, hex.out); // same seed, either spelling
    const RunResult rerun = run_cli(base + " --seed 42");
    EXPECT_EQ(dec.out, rerun.out);
    const RunResult other = run_cli(base + " --seed 43");
    EXPECT_NE(dec.out, other.out);
    const RunResult garbage = run_cli(base + " --seed 12x9");
    EXPECT_EQ(garbage.exit_code, 2);

    // Worker count must not influence the numbers.
    const RunResult w1 = run_cli(base + " --seed 42", "ZCORR_THREADS=1");
    const RunResult w7 = run_cli(base + " --seed 42", "ZCORR_THREADS=7");
    EXPECT_EQ(w1.out, w7.out);
}

TEST(Cli, McJsonEnvelope) {
    const RunResult r =
        run_cli("mc --k 2 --m 2 --r 1 --samples 20000 --seed 4 --json");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto env = nlohmann::json::parse(r.out);
    EXPECT_TRUE(env.contains("mean"));
    EXPECT_TRUE(env.contains("stderr"));
    EXPECT_EQ(env.at("samples").get<long long>(), 20000);
    EXPECT_GT(env.at("stderr").get<double>(), 0.0);
}

TEST(Cli, PointsFileEvaluation) {
    const std::string path = "/tmp/zcorr_pts_test.json";
    {
        std::ofstream f(path);
        f << "[[[0,0],[0,0]],[[1.2,0],[0,0.5]]]";
    }
    const RunResult r =
        run_cli("eval --k 1 --m 2 --points-file " + path + " --method berezin");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_TRUE(std::isfinite(std::stod(r.out)));

    {
        std::ofstream f(path);
        f << "[[[0,0]],[[1,0]]]"; // points of length 1, but m = 2
    }
    EXPECT_EQ(run_cli("eval --k 1 --m 2 --points-file " + path +
                      " --method berezin")
                  .exit_code,
              2);
    std::remove(path.c_str());
    // Missing file is an I/O failure, not a domain error.
    EXPECT_EQ(run_cli("eval --k 1 --m 2 --points-file /tmp/zcorr_no_such.json "
                      "--method berezin")
                  .exit_code,
              3);
}

TEST(Cli, EnsembleEmitsJsonRecords) {
    const RunResult r = run_cli("ensemble --degree 40 --trials 20 --seed 6");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    int records = 0;
    while (std::getline(lines, line)) {
        const auto rec = nlohmann::json::parse(line);
        EXPECT_TRUE(rec.contains("bin_center"));
        EXPECT_TRUE(rec.contains("kappa_hat"));
        EXPECT_TRUE(rec.contains("stderr"));
        EXPECT_TRUE(rec.contains("pairs_counted"));
        ++records;
    }
    EXPECT_EQ(records, 7); // default bin edges 0.25, 0.75, ..., 3.75
}

TEST(Cli, ValidateFastIsCleanAndQuick) {
    const RunResult r = run_cli("validate --level fast");
    EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("6 of 6 checks passed"), std::string::npos);
    const RunResult js = run_cli("validate --level fast --json");
    const auto env = nlohmann::json::parse(js.out);
    EXPECT_EQ(env.at("failed").get<int>(), 0);
    EXPECT_EQ(env.at("checks").size(), 6u);
}
