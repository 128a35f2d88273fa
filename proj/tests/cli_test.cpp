#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gtest/gtest.h"

namespace {

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun ghz_lab(const std::string& args) {
    const std::string cmd = std::string(GHZ_LAB_EXE) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << contents;
    return path.string();
}

}  // namespace

TEST(cli, subcommands_exit_zero_with_json) {
    for (const char* sub : {"algebra", "eigen", "counterfactual", "ks", "product-state", "single-particle"}) {
        const CliRun r = ghz_lab(std::string(sub) + " --deterministic");
        EXPECT_EQ(r.exit_code, 0) << sub;
        const nlohmann::json j = nlohmann::json::parse(r.out);
        EXPECT_EQ(j.at("subcommand"), sub);
        EXPECT_TRUE(j.at("passed").get<bool>());
        EXPECT_FALSE(j.contains("generated_at"));
    }
}

TEST(cli, text_format) {
    const CliRun r = ghz_lab("ks --format text");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("[PASS]"), std::string::npos);
}

TEST(cli, generated_at_without_deterministic) {
    const CliRun r = ghz_lab("algebra");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out).contains("generated_at"));
}

TEST(cli, seeded_runs_repeat) {
    const std::string args = "measure-seq --seed 3 --trials 5000 --deterministic";
    const CliRun a = ghz_lab(args);
    const CliRun b = ghz_lab(args);
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, ghz_lab("measure-seq --seed 4 --trials 5000 --deterministic").out);
}

TEST(cli, measure_seq_flags) {
    const CliRun r = ghz_lab("measure-seq --state alpha --sequence X,Z --compare Z,X --trials 20000 --deterministic");
    EXPECT_EQ(r.exit_code, 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j.at("results").at("order_comparison").at("identical_exact").get<bool>());
}

TEST(cli, bell_identity_csv) {
    const std::string ok = temp_file("ghzlab_cli_ok.csv", "a,b,c\n1,-1,1\n-1,-1,1\n1,1,-1\n");
    EXPECT_EQ(ghz_lab("bell-identity --input " + ok).exit_code, 0);
    const std::string bad = temp_file("ghzlab_cli_bad.csv", "a,b,c\n1,2,1\n");
    const CliRun r = ghz_lab("bell-identity --input " + bad);
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(ghz_lab("bell-identity --input /nonexistent/ghzlab.csv").exit_code, 2);
}

TEST(cli, usage_errors_exit_two) {
    EXPECT_EQ(ghz_lab("").exit_code, 2);
    EXPECT_EQ(ghz_lab("frobnicate").exit_code, 2);
    EXPECT_EQ(ghz_lab("algebra --bogus").exit_code, 2);
    EXPECT_EQ(ghz_lab("algebra --format yaml").exit_code, 2);
    EXPECT_EQ(ghz_lab("chsh-sim --trials 0").exit_code, 2);
    EXPECT_EQ(ghz_lab("chsh-sim --angles 0,1").exit_code, 2);
    EXPECT_EQ(ghz_lab("measure-seq --sequence Q").exit_code, 2);
    EXPECT_EQ(ghz_lab("stationarity --input /nonexistent.csv").exit_code, 2);
}

TEST(cli, help_and_version) {
    const CliRun help = ghz_lab("--help");
    EXPECT_EQ(help.exit_code, 0);
    EXPECT_NE(help.out.find("chsh-sim"), std::string::npos);
    const CliRun version = ghz_lab("--version");
    EXPECT_EQ(version.exit_code, 0);
    EXPECT_NE(version.out.find("0.1.0"), std::string::npos);
}
