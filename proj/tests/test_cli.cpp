#include "dfsec/csv.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string cli = DFSEC_CLI;
const std::string config = std::string(DFSEC_DATA_DIR) + "/paper_n2j3.json";

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    const std::string cmd = "'" + cli + "' " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

double field(const std::string& out, const std::string& key) {
    const auto pos = out.find("\n" + key);
    if (pos == std::string::npos) return std::nan("");
    return std::stod(out.substr(pos + 1 + key.size()));
}

std::string tmp(const std::string& name) { return testing::TempDir() + "dfsec_" + name; }

}  // namespace

TEST(Cli, SolveWithoutPublicMessage) {
    const auto r = run("solve --config '" + config + "' --public-rate 0");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("status          Solved"), std::string::npos);
    EXPECT_GT(field(r.out, "Rs"), 0.0) << r.out;
    EXPECT_NE(r.out.find("dB)"), std::string::npos);
}

TEST(Cli, MissingConfigIsAnError) {
    const auto r = run("solve --config /nonexistent/file.json");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("error"), std::string::npos);
}

TEST(Cli, NoPowerMeansPublicInfeasible) {
    const auto r = run("solve --config '" + config + "' --total-power-db -100 --public-rate 0.2");
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_NE(r.out.find("PublicInfeasible"), std::string::npos);
}

TEST(Cli, BadArgumentsAreErrors) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("sweep --config '" + config + "' --axis bogus --from 0 --to 1 --points 2").code, 1);
    EXPECT_EQ(run("solve --config '" + config + "' --eves 4").code, 1);
    EXPECT_EQ(run("solve --config '" + config + "' --statistical-csi --eve-decode-public").code, 1);
}

TEST(Cli, TraceFile) {
    const std::string path = tmp("trace.csv");
    const auto r = run("solve --config '" + config + "' --eves 1 --trace '" + path + "'");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto rows = parse_csv(slurp(path));
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "m");
    EXPECT_EQ(rows[1][0], "49");
}

TEST(Cli, SinglePointSweepMatchesSolve) {
    const std::string path = tmp("one.csv");
    const auto s = run("sweep --config '" + config + "' --eves 1 --axis power_db --from 6 --to 6 --points 1 --out '" + path + "'");
    ASSERT_EQ(s.code, 0) << s.out;
    const auto rows = parse_csv(slurp(path));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].size(), 9u);
    const auto r = run("solve --config '" + config + "' --eves 1");
    ASSERT_EQ(r.code, 0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", field(r.out, "Rs"));
    EXPECT_EQ(rows[1][2], buf);
    EXPECT_EQ(rows[1][4], "1");
    EXPECT_NE(r.out.find("m_star          " + rows[1][3] + " of"), std::string::npos);
}

TEST(Cli, PowerSweepIsMonotone) {
    const std::string path = tmp("power.csv");
    const auto s = run("sweep --config '" + config + "' --axis power_db --from 0 --to 12 --points 13 --out '" + path + "'");
    ASSERT_EQ(s.code, 0) << s.out;
    const auto rows = parse_csv(slurp(path));
    ASSERT_EQ(rows.size(), 14u);
    EXPECT_EQ(rows[0][0] + "," + rows[0][1] + "," + rows[0][2] + "," + rows[0][3] + "," + rows[0][4] + "," + rows[0][5] +
                  "," + rows[0][6] + "," + rows[0][7] + "," + rows[0][8],
              dfsec::sweep_csv_header);
    for (std::size_t k = 2; k < rows.size(); ++k) EXPECT_GE(std::stod(rows[k][2]), std::stod(rows[k - 1][2]) - 2e-6);
}

TEST(Cli, RateSweepTransitionMatchesSolve) {
    const std::string path = tmp("rate.csv");
    const auto s = run("sweep --config '" + config + "' --axis public_rate --from 0 --to 2 --points 11 --out '" + path + "'");
    ASSERT_EQ(s.code, 0) << s.out;
    const auto rows = parse_csv(slurp(path));
    ASSERT_EQ(rows.size(), 12u);
    int last_ok = -1, first_bad = -1;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k][4] == "1") last_ok = static_cast<int>(k);
        if (rows[k][4] == "0" && first_bad < 0) first_bad = static_cast<int>(k);
    }
    ASSERT_GT(last_ok, 0);
    ASSERT_GT(first_bad, last_ok) << "feasibility should switch off once";
    EXPECT_TRUE(rows[first_bad][3].empty());
    EXPECT_EQ(run("solve --config '" + config + "' --public-rate " + rows[last_ok][1]).code, 0);
    EXPECT_EQ(run("solve --config '" + config + "' --public-rate " + rows[first_bad][1]).code, 2);
}

TEST(Cli, SweepIsByteIdentical) {
    const std::string a = tmp("a.csv"), b = tmp("b.csv");
    const std::string args = "sweep --config '" + config + "' --statistical-csi --axis public_rate --from 0 --to 0.6 --points 7 --seed 5";
    ASSERT_EQ(run(args + " --jobs 1 --out '" + a + "'").code, 0);
    ASSERT_EQ(run(args + " --jobs 4 --out '" + b + "'").code, 0);
    const std::string ta = slurp(a), tb = slurp(b);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, tb);
    EXPECT_EQ(ta.find('\r'), std::string::npos);
}

TEST(Cli, OracleCheck) {
    const auto ok = run("oracle-check --config '" + config + "' --trials 5 --seed 3");
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_NE(ok.out.find("PASS"), std::string::npos);
    const auto strict = run("oracle-check --config '" + config + "' --trials 5 --seed 3 --tolerance 0");
    EXPECT_EQ(strict.code, 1) << strict.out;
    EXPECT_NE(strict.out.find("FAIL"), std::string::npos);
    const auto none = run("oracle-check --config '" + config + "' --trials 0");
    EXPECT_EQ(none.code, 0);
    EXPECT_NE(none.out.find("warning"), std::string::npos);
}
