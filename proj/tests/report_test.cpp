#include "ghzlab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"

#include "ghzlab/error.hpp"

using namespace ghzlab;

namespace {

Report run(const std::string& sub, std::optional<std::uint64_t> trials = std::nullopt) {
    ReportOptions o;
    o.subcommand = sub;
    o.trials = trials;
    o.deterministic = true;
    return run_report(o);
}

std::string temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << contents;
    return path.string();
}

}  // namespace

TEST(report, every_subcommand_verifies) {
    for (const std::string& sub : subcommands()) {
        const Report r = run(sub, sub == "measure-seq" || sub == "chsh-sim" || sub == "stationarity"
                                      ? std::optional<std::uint64_t>(20000)
                                      : std::nullopt);
        EXPECT_TRUE(r.passed()) << sub << "\n" << r.to_text();
        EXPECT_FALSE(r.claims.empty()) << sub;
        for (const Claim& c : r.claims) EXPECT_FALSE(c.anchor.empty()) << sub << " " << c.id;
    }
}

TEST(report, json_shape) {
    const Report r = run("ks");
    const nlohmann::json j = r.to_json(true);
    EXPECT_EQ(j.at("subcommand"), "ks");
    EXPECT_EQ(j.at("version"), version());
    EXPECT_TRUE(j.at("passed").get<bool>());
    EXPECT_FALSE(j.contains("generated_at"));
    EXPECT_TRUE(r.to_json(false).contains("generated_at"));
    for (const auto& c : j.at("claims")) {
        EXPECT_TRUE(c.contains("id"));
        EXPECT_TRUE(c.contains("anchor"));
        EXPECT_TRUE(c.contains("passed"));
    }
    EXPECT_EQ(j.at("results").at("operator_value"), -1);
}

TEST(report, deterministic_output_is_stable) {
    for (const std::string& sub : {"measure-seq", "chsh-sim", "bell-identity"}) {
        ReportOptions o;
        o.subcommand = sub;
        o.seed = 5;
        o.trials = 2000;
        o.deterministic = true;
        EXPECT_EQ(run_report(o).to_json(true).dump(), run_report(o).to_json(true).dump()) << sub;
    }
}

TEST(report, failing_claim_marks_report) {
    Report r;
    r.claim("a", "x", "holds", true);
    EXPECT_TRUE(r.passed());
    r.claim("b", "x", "does not hold", false);
    EXPECT_FALSE(r.passed());
    EXPECT_NE(r.to_text().find("[FAIL] b"), std::string::npos);
}

TEST(report, unknown_subcommand) {
    EXPECT_THROW(run("nope"), Error);
}

TEST(report, named_states_and_operators) {
    EXPECT_EQ(named_state("ghz").n_qubits(), 3);
    EXPECT_EQ(named_state("alpha").amplitude(0), Amplitude(1.0));
    EXPECT_THROW(named_state("psi9"), Error);
    EXPECT_EQ(named_operator("A4"), ghz_operators().a4);
    EXPECT_EQ(named_operator("Ahat2"), ghz_operators().hat2);
    EXPECT_EQ(named_operator("ZZ"), PauliString({PauliOp::Z, PauliOp::Z}));
    const std::vector<Observable> seq = parse_sequence("A1, A2,A1");
    ASSERT_EQ(seq.size(), 3u);
    EXPECT_EQ(seq[2].op(), ghz_operators().a1);
    EXPECT_THROW(parse_sequence(""), Error);
    EXPECT_THROW(parse_sequence("iX"), Error);
}

TEST(report, measure_seq_options) {
    ReportOptions o;
    o.subcommand = "measure-seq";
    o.state = "alpha";
    o.sequence = "X,Z";
    o.compare = "Z,X";
    o.trials = 20000;
    const Report r = run_report(o);
    EXPECT_TRUE(r.passed()) << r.to_text();
    o.sequence = "XX";
    EXPECT_THROW(run_report(o), Error);
}

TEST(report, bell_identity_from_csv) {
    ReportOptions o;
    o.subcommand = "bell-identity";
    o.input = temp_file("ghzlab_report_ok.csv", "a,b,c,d\n1,-1,1,1\n-1,-1,1,-1\n1,1,-1,-1\n");
    const Report r = run_report(o);
    EXPECT_TRUE(r.passed()) << r.to_text();
    o.input = temp_file("ghzlab_report_bad.csv", "a,b,c\n1,2,1\n");
    try {
        run_report(o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
    }
}

TEST(report, stationarity_from_csv) {
    ReportOptions o;
    o.subcommand = "stationarity";
    o.input = temp_file("ghzlab_stat.csv", "a1,b1,a2,b2\n1,-1,1,-1\n-1,1,-1,1\n1,1,1,1\n");
    o.metadata = temp_file("ghzlab_stat.json",
                           R"({"angles": {"a1": 0, "b1": 0.5, "a2": 1, "b2": 1.5}, "pairs": [["a1","b1"],["a2","b2"]]})");
    const Report r = run_report(o);
    EXPECT_EQ(r.results.at("audit").at("n_pairs"), 2);
    o.metadata.reset();
    EXPECT_THROW(run_report(o), Error);
}

TEST(report, chsh_angles_option) {
    ReportOptions o;
    o.subcommand = "chsh-sim";
    o.angles = "0,1.5707963267948966,0.7853981633974483,-0.7853981633974483";
    o.trials = 50000;
    EXPECT_TRUE(run_report(o).passed());
    o.angles = "0,1,2";
    EXPECT_THROW(run_report(o), Error);
}
