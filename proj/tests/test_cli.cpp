// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("qmem_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }

    fs::path write(const std::string& name, const nlohmann::json& j) {
        auto p = dir_ / name;
        std::ofstream(p) << j.dump();
        return p;
    }

    CliResult run(const std::string& args) {
        auto out = dir_ / "stdout";
        auto err = dir_ / "stderr";
        std::string cmd = std::string(QMEM_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
        int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, ZeroNoiseIntegrityIsOne) {
    auto cfg = write("c.json", {{"schema", "qmem/1"}, {"code", "steane"}, {"tau", 0.0}, {"m", 1}, {"n_runs", 3000}});
    auto r = run("integrity --config " + cfg.string() + " --threads 2");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["R_hat"], 1.0);
    EXPECT_EQ(j["n_runs"], 3000);
    EXPECT_TRUE(j.contains("ci_low"));
    EXPECT_TRUE(j.contains("worst_axis"));
}

TEST_F(Cli, BadEcStyleExitsTwoListingStyles) {
    auto cfg = write("c.json", {{"schema", "qmem/1"}, {"code", "five"}, {"ec_style", "foo"}});
    auto r = run("integrity --config " + cfg.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("ec_style"), std::string::npos);
    for (const char* s : {"non_ft", "shor_ft", "flag_ft", "surface_ordered"}) {
        EXPECT_NE(r.err.find(s), std::string::npos) << s;
    }
    EXPECT_EQ(run("integrity --config " + (dir_ / "missing.json").string()).code, 2);
    EXPECT_EQ(run("integrity").code, 2);
}

TEST_F(Cli, SinglePointSweepMatchesIntegrity) {
    nlohmann::json doc = {{"schema", "qmem/1"}, {"code", "five"}, {"tau", 0.3}, {"m", 1},
                          {"p_e", 0.005},      {"n_runs", 5000}, {"label", "five"}};
    auto cfg = write("c.json", doc);
    auto a = run("integrity --config " + cfg.string());
    auto b = run("sweep --config " + cfg.string());
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    auto j = nlohmann::json::parse(a.out);
    std::istringstream lines(b.out);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_FALSE(std::getline(lines, extra));
    EXPECT_EQ(header, "channel_label,tau_over_T,R_hat,ci_low,ci_high,n_runs,seed,p_e");
    std::vector<std::string> cells;
    std::stringstream rs(row);
    for (std::string c; std::getline(rs, c, ',');) {
        cells.push_back(c);
    }
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(std::stod(cells[2]), j["R_hat"].get<double>());
    EXPECT_EQ(std::stod(cells[3]), j["ci_low"].get<double>());
}

TEST_F(Cli, OutputIsByteIdenticalAcrossRunsAndThreads) {
    auto cfg = write("c.json", {{"schema", "qmem/1"},
                                {"code", "steane"},
                                {"ec_style", "flag_ft"},
                                {"m", 1},
                                {"p_e", 0.005},
                                {"n_runs", 4000},
                                {"tau_grid", {0.0, 0.2}}});
    auto out1 = dir_ / "a.csv";
    auto out2 = dir_ / "b.csv";
    ASSERT_EQ(run("sweep --config " + cfg.string() + " --threads 1 --out " + out1.string()).code, 0);
    ASSERT_EQ(run("sweep --config " + cfg.string() + " --threads 3 --out " + out2.string()).code, 0);
    EXPECT_EQ(slurp(out1), slurp(out2));
    auto manifest = nlohmann::json::parse(slurp(out1.string() + ".manifest.json"));
    EXPECT_EQ(manifest["command"], "sweep");
    EXPECT_EQ(manifest["results"].size(), 2u);
    EXPECT_TRUE(manifest["results"][0].contains("config_hash"));
    EXPECT_TRUE(manifest.contains("wall_seconds"));
    // The environment fallback must not change results either.
    auto out3 = dir_ / "c.csv";
    ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + out3.string()).code, 0);
    EXPECT_EQ(slurp(out1), slurp(out3));
}

TEST_F(Cli, SeedAndRunsOverrides) {
    auto cfg = write("c.json", {{"schema", "qmem/1"}, {"code", "physical_qubit"}, {"tau", 0.4}, {"n_runs", 100}});
    auto a = run("integrity --config " + cfg.string() + " --runs 777 --seed 5");
    EXPECT_EQ(nlohmann::json::parse(a.out)["n_runs"], 777);
    EXPECT_NE(a.out, run("integrity --config " + cfg.string() + " --runs 777 --seed 6").out);
    EXPECT_EQ(a.out, run("integrity --config " + cfg.string() + " --runs 777 --seed 5").out);
    EXPECT_EQ(nlohmann::json::parse(run("integrity --config " + cfg.string() + " --fast").out)["n_runs"], 100000);
}

TEST_F(Cli, OracleCompareExitCodes) {
    auto five = write("f.json", {{"schema", "qmem/1"}, {"code", "five"}, {"m", 1}, {"tau", 0.0}, {"n_runs", 600}});
    auto r = run("oracle-compare --config " + five.string() + " --require-exact");
    ASSERT_EQ(r.code, 0) << r.err;
    // Zero noise: every estimate and the exact value are 1.
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_NE(line.find(",1,1,0,"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 3);
    auto nine = write("n.json", {{"schema", "qmem/1"}, {"code", "surface9"}, {"m", 1}, {"n_runs", 600}});
    EXPECT_EQ(run("oracle-compare --config " + nine.string() + " --require-exact").code, 3);
    auto plain = run("oracle-compare --config " + nine.string());
    EXPECT_EQ(plain.code, 0);
    EXPECT_NE(plain.out.find("nan"), std::string::npos);
    EXPECT_EQ(run("integrity --exact --config " + nine.string()).code, 3);
}

TEST_F(Cli, MilestonesNeedAFamily) {
    auto empty = write("e.json", {{"schema", "qmem/1"}, {"code", "five"}, {"max_m", 2}});
    auto r = run("milestones --config " + empty.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("tau_grid"), std::string::npos);
    auto ok = write("m.json", {{"schema", "qmem/1"},
                               {"code", "five"},
                               {"p_e", 0.0},
                               {"n_runs", 8000},
                               {"max_m", 1},
                               {"tau_grid", {0.05}}});
    r = run("milestones --config " + ok.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["M1"], "met");
    EXPECT_EQ(j["M3"], "met");
}

TEST_F(Cli, InterruptionAtZeroIsPerfectWithIdealAlice) {
    auto cfg = write("c.json", {{"schema", "qmem/1"},
                                {"code", "five"},
                                {"m", 1},
                                {"tau", 0.4},
                                {"p_e", 0.01},
                                {"n_runs", 2000},
                                {"interrupt_grid", {0.0}}});
    auto r = run("interruption --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("interrupt_t_over_T"), std::string::npos);
    EXPECT_NE(r.out.find(",0.40000000000000002,0,1,"), std::string::npos) << r.out;
    auto bad = write("b.json", {{"schema", "qmem/1"}, {"code", "five"}, {"tau", 0.4}, {"interrupt_grid", {0.5}}});
    EXPECT_EQ(run("interruption --config " + bad.string()).code, 2);
}
