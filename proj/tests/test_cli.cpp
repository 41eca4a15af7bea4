#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>

#include "gridsel/text.hpp"
#include "support/temp_dir.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(GRIDSEL_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST(Cli, ValidatesReferenceGrid) {
    const auto r = run("grid validate");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("20 buses, 6 generators, 8 loads, 2 tie-lines"), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, ReportsInvalidGrid) {
    testing_support::TempDir dir("cli");
    const auto bad = (dir.path() / "bad.grid").string();
    gridsel::text::write_file(bad,
                              "[meta]\nbase_mva, 100\nbase_frequency, 50\n[buses]\n1, PQ, 1.0, 0, 0\n2, PQ, 1.0, 0, 0\n"
                              "[branches]\n1, 2, 0.01, 0.1, 0, 100, 0\n[loads]\n2, 50, 0\n");
    const auto r = run("grid validate " + bad);
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_NE(r.out.find("FAIL exactly one slack bus"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("train bogus").code, 1);
    EXPECT_EQ(run("eval --model /nonexistent --data /nonexistent").code, 1);
    EXPECT_EQ(run("--version").code, 0);
}

TEST(Cli, PlotsCurve) {
    testing_support::TempDir dir("plot");
    const auto csv = (dir.path() / "c.csv").string();
    gridsel::text::write_file(csv, "step,train_loss\n1,2\n2,1\n");
    const auto svg = (dir.path() / "c.svg").string();
    const auto r = run("plot " + csv + " -o " + svg);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(std::filesystem::exists(svg));
    EXPECT_EQ(run("plot " + svg + " -o " + svg + ".2").code, 1);
}
