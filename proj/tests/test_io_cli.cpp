#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "../tools/commands.hpp"
#include "maxsum/io.hpp"
#include "maxsum/svg.hpp"

namespace maxsum {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const fs::path kData = MAXSUM_TEST_DATA;

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "maxsum");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("maxsum_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

TEST(Io, CsvAndJsonAgree) {
    const Instance a = load_instance(kData / "square.json");
    const Instance b = load_instance(kData / "square.csv");
    EXPECT_EQ(a.red(), b.red());
    EXPECT_EQ(a.blue(), b.blue());
    const Instance c = parse_instance_csv("# comment\nR,0,0\nB, 2.5 ,1\n");
    EXPECT_EQ(c.red()[0], (Point{0, 0}));
    EXPECT_EQ(c.blue()[0], (Point{2.5, 1}));
}

TEST(Io, JsonRoundTrip) {
    const Instance a = load_instance(kData / "thin.json");
    const Instance b = parse_instance_json(instance_to_json(a).dump());
    EXPECT_EQ(a.red(), b.red());
    EXPECT_EQ(a.blue(), b.blue());
}

TEST(Io, ParseErrors) {
    EXPECT_THROW(parse_instance_json("{"), ParseError);
    EXPECT_THROW(parse_instance_json(R"({"red": [[0, 0]]})"), ParseError);
    EXPECT_THROW(parse_instance_json(R"({"red": [[0, "x"]], "blue": [[1, 1]]})"), ParseError);
    EXPECT_THROW(parse_instance_json(R"({"red": [[0, 0]], "blue": [[1, 1], [2, 2]]})"), InvalidInput);
    EXPECT_THROW(parse_instance_csv("R,0,zero\nB,1,1\n"), ParseError);
    EXPECT_THROW(parse_instance_csv("G,0,0\nB,1,1\n"), ParseError);
    EXPECT_THROW(load_instance(kData / "missing.json"), ParseError);
}

TEST(Io, MatchingDocuments) {
    const Instance sq = load_instance(kData / "square.json");
    EXPECT_EQ(parse_matching(json::parse("[[0, 1], [1, 0]]")), (std::vector<MatchedPair>{{0, 1}, {1, 0}}));
    EXPECT_EQ(parse_matching(json::parse(R"({"matching": [[1, 1], [0, 0]]})")),
              (std::vector<MatchedPair>{{1, 1}, {0, 0}}));
    const Matching m(sq, {{0, 1}, {1, 0}});
    const json doc = matching_to_json(m);
    EXPECT_EQ(Matching(sq, parse_matching(doc)), m);
    EXPECT_DOUBLE_EQ(doc["total"].get<double>(), 2.0);
    EXPECT_THROW(Matching(sq, parse_matching(json::parse("[[0, 0], [1, 0]]"))), InvalidInput);
}

TEST(Cli, ToleranceResolution) {
    ::unsetenv("MAXSUM_TOL");
    EXPECT_DOUBLE_EQ(cli::resolve_tolerance(std::nullopt), 1e-9);
    ::setenv("MAXSUM_TOL", "1e-6", 1);
    EXPECT_DOUBLE_EQ(cli::resolve_tolerance(std::nullopt), 1e-6);
    EXPECT_DOUBLE_EQ(cli::resolve_tolerance(1e-4), 1e-4);
    ::setenv("MAXSUM_TOL", "bogus", 1);
    EXPECT_DOUBLE_EQ(cli::resolve_tolerance(std::nullopt), 1e-9);
    ::unsetenv("MAXSUM_TOL");
}

TEST(Cli, MatchSquare) {
    const RunResult r = run_cli({"match", (kData / "square.csv").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_DOUBLE_EQ(doc["total"].get<double>(), 2.0);
    const RunResult oracle = run_cli({"match", "--oracle", (kData / "square.json").string()});
    ASSERT_EQ(oracle.code, cli::kOk);
    EXPECT_EQ(json::parse(oracle.out)["matching"], doc["matching"]);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"match"}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"match", (kData / "missing.json").string()}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"verify", "--trials", "many"}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"verify", "--suite", "nope"}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"verify", "--trials", "3", "--distribution", "plaid"}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"--tol", "-1", "center", (kData / "square.json").string()}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
}

TEST_F(TempDir, OracleLimit) {
    std::string csv;
    for (int i = 0; i < 9; ++i) csv += "R," + std::to_string(i) + ",0\nB," + std::to_string(i) + ",1\n";
    const fs::path p = write("nine.csv", csv);
    const RunResult r = run_cli({"match", "--oracle", p.string()});
    EXPECT_EQ(r.code, cli::kOracleLimit);
    EXPECT_NE(r.err.find("error"), std::string::npos);
    EXPECT_EQ(run_cli({"match", p.string()}).code, cli::kOk);
}

TEST_F(TempDir, MalformedInputs) {
    EXPECT_EQ(run_cli({"match", write("bad.json", "{\"red\": [[0, 0]]").string()}).code, cli::kBadInput);
    EXPECT_EQ(run_cli({"match", write("coincident.json", R"({"red": [[0, 0]], "blue": [[0, 0]]})").string()}).code,
              cli::kBadInput);
    const fs::path m = write("m.json", "[[0, 0], [0, 1]]");
    EXPECT_EQ(run_cli({"center", (kData / "square.json").string(), "--matching", m.string()}).code, cli::kBadInput);
}

TEST_F(TempDir, CenterRoundTripAndCheck) {
    const RunResult r = run_cli({"center", (kData / "square.json").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const json cert = json::parse(r.out);
    EXPECT_NEAR(cert["lambda_star"].get<double>(), std::numbers::sqrt2, 1e-9);
    EXPECT_NEAR(cert["center"][0].get<double>(), 0.5, 1e-9);
    EXPECT_NEAR(cert["center"][1].get<double>(), 0.5, 1e-9);
    EXPECT_TRUE(cert["pass"].get<bool>());
    EXPECT_EQ(cert["bound"], "sqrt2");

    // Re-reading the stored certificate reproduces its numbers within 1e-9.
    const Instance sq = load_instance(kData / "square.json");
    const CertificateCheck c = check_certificate(sq, cert);
    EXPECT_TRUE(c.ok);
    EXPECT_LE(c.max_ratio_error, 1e-9);
    EXPECT_LE(c.lambda_error, 1e-9);

    const fs::path stored = write("cert.json", r.out);
    const RunResult ok = run_cli({"center", (kData / "square.json").string(), "--check", stored.string()});
    EXPECT_EQ(ok.code, cli::kOk) << ok.out;

    json tampered = cert;
    tampered["lambda_star"] = 1.3;
    const fs::path bad = write("tampered.json", tampered.dump());
    const RunResult rejected = run_cli({"center", (kData / "square.json").string(), "--check", bad.string()});
    EXPECT_EQ(rejected.code, cli::kViolation);
    EXPECT_FALSE(json::parse(rejected.out)["ok"].get<bool>());
}

TEST(Cli, CenterWithSuppliedMatchingHasNoPass) {
    const RunResult r = run_cli({"center", (kData / "thin.json").string(), "--matching",
                                 (kData / "thin_identity_matching.json").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const json cert = json::parse(r.out);
    EXPECT_NEAR(cert["lambda_star"].get<double>(), 10.0, 1e-9);
    EXPECT_FALSE(cert.contains("pass"));
    ASSERT_EQ(cert["ratios"].size(), 2u);
}

TEST(Cli, ImproveThinIdentity) {
    const RunResult r = run_cli({"improve", (kData / "thin.json").string(),
                                 (kData / "thin_identity_matching.json").string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc["status"], "ACCEPT");
    ASSERT_EQ(doc["steps"].size(), 1u);
    const json& step = doc["steps"][0];
    EXPECT_DOUBLE_EQ(step["total_before"].get<double>(), 2.0);
    EXPECT_DOUBLE_EQ(step["total_after"].get<double>(), 20.0);
    EXPECT_DOUBLE_EQ(doc["total"].get<double>(), 20.0);
    EXPECT_LE(doc["lambda_star"].get<double>(), std::numbers::sqrt2 + 1e-9);
}

TEST(Cli, ImproveStepLimitAndAcceptedStart) {
    const RunResult limited = run_cli({"improve", (kData / "thin.json").string(),
                                       (kData / "thin_identity_matching.json").string(), "--max-steps", "0"});
    ASSERT_EQ(limited.code, cli::kOk) << limited.err;
    const json doc = json::parse(limited.out);
    EXPECT_EQ(doc["status"], "LIMIT");
    EXPECT_TRUE(doc["steps"].empty());
    EXPECT_NEAR(doc["lambda_star"].get<double>(), 10.0, 1e-9);
}

TEST_F(TempDir, ImproveAlreadyAccepted) {
    const fs::path m = write("m.json", R"({"matching": [[0, 0], [1, 1]]})");
    const RunResult r = run_cli({"improve", (kData / "square.json").string(), m.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc["status"], "ACCEPT");
    EXPECT_TRUE(doc["steps"].empty());
}

TEST_F(TempDir, PlotIsDeterministicAndMatchesGolden) {
    const fs::path a = dir_ / "a.svg", b = dir_ / "b.svg";
    ASSERT_EQ(run_cli({"plot", (kData / "square.json").string(), "--out", a.string()}).code, cli::kOk);
    ASSERT_EQ(run_cli({"plot", (kData / "square.json").string(), "--out", b.string()}).code, cli::kOk);
    const std::string first = read_text_file(a);
    EXPECT_EQ(first, read_text_file(b));
    EXPECT_EQ(first, read_text_file(kData / "square.svg"));
    EXPECT_NE(first.find("<svg"), std::string::npos);
    EXPECT_NE(first.find("data-lambda"), std::string::npos);
}

TEST(Cli, PlotErrors) {
    EXPECT_EQ(run_cli({"plot", (kData / "square.json").string(), "--out", "/nonexistent/dir/x.svg"}).code,
              cli::kBadInput);
    EXPECT_EQ(run_cli({"plot", (kData / "square.json").string(), "--out", "/tmp/x.svg", "--lambda", "0.5"}).code,
              cli::kBadInput);
}

TEST(Cli, VerifySmallSuites) {
    const RunResult theorem = run_cli({"verify", "--trials", "40", "--seed", "2", "--threads", "2"});
    ASSERT_EQ(theorem.code, cli::kOk) << theorem.err;
    const json doc = json::parse(theorem.out);
    EXPECT_EQ(doc["violations"], 0);
    EXPECT_EQ(doc["trials"], 40);
    EXPECT_TRUE(doc["failures"].empty());

    for (const char* suite : {"uncolored", "squared"}) {
        const RunResult r = run_cli({"verify", "--suite", suite, "--trials", "30"});
        EXPECT_EQ(r.code, cli::kOk) << suite << r.err;
        EXPECT_EQ(json::parse(r.out)["violations"], 0);
    }
    const RunResult gap = run_cli({"verify", "--suite", "diskgap", "--trials", "0"});
    ASSERT_EQ(gap.code, cli::kOk);
    EXPECT_FALSE(json::parse(gap.out)["found"].get<bool>());
}

TEST(Binary, ExitCodeThroughProcess) {
    const std::string bin = MAXSUM_CLI_PATH;
    const int ok = std::system((bin + " match " + (kData / "square.json").string() + " > /dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(ok), 0);
    const int bad = std::system((bin + " verify --bogus > /dev/null 2>&1").c_str());
    EXPECT_EQ(WEXITSTATUS(bad), 2);
    const int env = std::system(("MAXSUM_TOL=1e-6 " + bin + " center " + (kData / "square.json").string() +
                                 " > /dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(env), 0);
}

}  // namespace
}  // namespace maxsum
