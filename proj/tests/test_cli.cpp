#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spectra_app.hpp"

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "spectra");
    std::ostringstream out, err;
    Result r;
    r.code = spectra::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

nlohmann::json run_json(const std::vector<std::string>& args) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out);
}

/// CSV rows after the comment preamble and header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::string* header = nullptr) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            if (header) *header = line;
            seen_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string data_lines(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# config", 0) != 0) out += line + "\n";
    return out;
}

}  // namespace

TEST(Cli, ClassifyVerdicts) {
    EXPECT_EQ(run_json({"classify", "--dist", "poisson:2"})["report"]["verdict"], "NoExtendedStatesL2");
    EXPECT_EQ(run_json({"classify", "--dist", "poisson:3"})["report"]["verdict"], "ExtendedStates");
    const auto degenerate = run_json({"classify", "--dist", "pmf:0=0.5,1=0.5"});
    EXPECT_EQ(degenerate["report"]["verdict"], "DegenerateAtomic");
    EXPECT_DOUBLE_EQ(degenerate["report"]["atom_mass"].get<double>(), 0.5);
}

TEST(Cli, OutputsEmbedConfigAndVersion) {
    const auto j = run_json({"classify", "--dist", "poisson:1", "--seed", "42"});
    EXPECT_EQ(j["version"], UGW_VERSION);
    EXPECT_EQ(j["config"]["seed"], 42);
    EXPECT_EQ(j["config"]["distribution"], "poisson:1");
    EXPECT_EQ(j["config"]["subcommand"], "classify");
    const auto csv = run({"kmcurve", "--d", "3", "--points", "5"}).out;
    EXPECT_NE(csv.find("# config {"), std::string::npos);
    EXPECT_NE(csv.find("# spectra " UGW_VERSION), std::string::npos);
}

TEST(Cli, UsageErrors) {
    const auto bad = run({"classify", "--dist", "poisson:abc"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("abc"), std::string::npos);
    EXPECT_EQ(run({"classify", "--dist", "weird:1"}).code, 2);
    EXPECT_EQ(run({"classify"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"sweep", "--dist", "poisson:2", "--t-grid", "0.1,0.2"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--n", "5000", "--model", "er:1"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--n", "10"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, NumericalFailureExitCode) {
    // Too short a run for the frequencies to settle in a small pool.
    const auto r = run({"alphabeta", "--dist", "poisson:3", "--pool", "1000", "--iters", "50"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("PoolNotConverged"), std::string::npos);
}

TEST(Cli, LocusRows) {
    const auto rows = csv_rows(run({"locus", "--c-min", "1", "--c-max", "3", "--steps", "3"}).out);
    std::map<double, int> count;
    for (const auto& r : rows) ++count[std::stod(r.at(0))];
    EXPECT_EQ(count[1.0], 1);
    EXPECT_EQ(count[3.0], 3);
    bool branch = false;
    for (const auto& r : rows)
        if (std::abs(std::stod(r[0]) - std::numbers::e) < 1e-15) {
            branch = true;
            EXPECT_NEAR(std::stod(r[1]), 1.0 / std::numbers::e, 1e-4);
        }
    EXPECT_TRUE(branch);
}

TEST(Cli, McurveMatchesLibrary) {
    std::string header;
    const auto rows = csv_rows(run({"mcurve", "--dist", "poisson:3", "--points", "5"}).out, &header);
    EXPECT_EQ(header, "z,M,Mprime,Msecond");
    ASSERT_EQ(rows.size(), 5u);
    const ugw::MFunction m(ugw::DegreeDistribution::poisson(3.0));
    for (const auto& r : rows) {
        const double z = std::stod(r[0]);
        EXPECT_DOUBLE_EQ(std::stod(r[1]), m.value(z));
        EXPECT_DOUBLE_EQ(std::stod(r[2]), m.prime(z));
        EXPECT_DOUBLE_EQ(std::stod(r[3]), m.second(z));
    }
}

TEST(Cli, SpectrumTwoEdges) {
    std::string header;
    const auto rows = csv_rows(run({"spectrum", "--dist", "dirac:1", "--n", "4"}).out, &header);
    EXPECT_EQ(header, "lambda");
    ASSERT_EQ(rows.size(), 4u);
    const double expected[] = {-1, -1, 1, 1};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::stod(rows[i][0]), expected[i], 1e-12);
}

TEST(Cli, KmcurveColumns) {
    std::string header;
    const auto rows = csv_rows(run({"kmcurve", "--d", "3", "--points", "101"}).out, &header);
    EXPECT_EQ(header, "lambda,density,cdf");
    ASSERT_EQ(rows.size(), 101u);
    EXPECT_NEAR(std::stod(rows.front()[0]), -2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::stod(rows[50][1]), std::sqrt(2.0) / (3.0 * std::numbers::pi), 1e-12);
    EXPECT_NEAR(std::stod(rows.back()[2]), 1.0, 1e-12);
}

TEST(Cli, AlphabetaBelowThreshold) {
    const auto j = run_json({"alphabeta", "--dist", "poisson:2", "--pool", "50000", "--iters", "200"});
    EXPECT_LT(j["frequencies"]["star"].get<double>(), 0.01);
    EXPECT_NEAR(j["frequencies"]["plus"].get<double>(), j["closed_form"]["plus"].get<double>(), 0.01);
    EXPECT_FALSE(j["beta_star"]["diverging"].get<bool>());
    EXPECT_TRUE(j["converged"].get<bool>());
}

TEST(Cli, SweepCsvAndThreadIndependence) {
    const std::vector<std::string> base = {"sweep", "--dist", "poisson:2", "--pool", "5000", "--iters",
                                           "60",    "--ab-iters", "60", "--t-grid", "0.1,0.01"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    auto three = base;
    three.insert(three.end(), {"--threads", "3"});
    const auto a = run(one);
    const auto b = run(three);
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(data_lines(a.out), data_lines(b.out));
    std::string header;
    const auto rows = csv_rows(a.out, &header);
    EXPECT_EQ(header.rfind("t,E_root,stderr_root,t_times_E,s_star,trend", 0), 0u);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_GT(std::stod(rows[0][0]), std::stod(rows[1][0]));
}

TEST(Cli, NullityEnsembleJson) {
    const auto j = run_json({"nullity", "--model", "er:1", "--n", "400", "--seeds", "3", "--eps", "0.1,0.05"});
    const auto& e = j["ensemble"];
    EXPECT_EQ(e["n"], 400);
    EXPECT_EQ(e["seeds"], 3);
    EXPECT_EQ(e["c_or_dist"], "er:1");
    EXPECT_TRUE(e["window_mass"].contains("0.1"));
    EXPECT_TRUE(e["window_mass"].contains("0.05"));
    EXPECT_NEAR(e["nullity_mean"].get<double>(), 0.456, 0.05);
}

TEST(Cli, ReportCrossModuleAgreement) {
    const auto j = run_json({"report", "--dist", "poisson:1", "--pool", "10000", "--iters", "80", "--ab-iters", "80",
                             "--t-grid", "0.1,0.01", "--n", "2000", "--seeds", "4", "--eps", ""});
    EXPECT_NEAR(j["theory"]["atom_mass"].get<double>(), j["ensemble"]["nullity_mean"].get<double>(), 0.01);
    EXPECT_EQ(j["ensemble"]["c_or_dist"], "er:1");
    EXPECT_TRUE(j["sweep"].contains("trend"));
}

TEST(Cli, WritesToFile) {
    const auto path = std::filesystem::temp_directory_path() / "spectra_cli_test.csv";
    const auto r = run({"kmcurve", "--d", "4", "--points", "7", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(csv_rows(buf.str()).size(), 7u);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"kmcurve", "--out", "/nonexistent-dir/x.csv"}).code, 2);
}
