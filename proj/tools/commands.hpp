#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace maxsum::cli {

enum ExitCode : int {
    kOk = 0,
    kViolation = 1,
    kBadInput = 2,
    kOracleLimit = 3,
    kNoConvergence = 4,
    kToleranceFailure = 5,
};

/// Solver tolerance: explicit flag, else MAXSUM_TOL, else 1e-9.
double resolve_tolerance(std::optional<double> flag);

struct MatchArgs {
    std::filesystem::path input;
    bool oracle = false;
};

struct CenterArgs {
    std::filesystem::path input;
    std::optional<std::filesystem::path> matching;
    std::optional<std::filesystem::path> check;
    double tol = 1e-9;
};

struct ImproveArgs {
    std::filesystem::path input;
    std::filesystem::path matching;
    std::size_t max_steps = 1000;
    double tol = 1e-9;
};

struct VerifyArgs {
    std::string suite = "theorem";
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    std::size_t nmin = 2;
    std::size_t nmax = 7;
    std::vector<std::string> distributions{"uniform-square", "gaussian"};
    std::optional<std::filesystem::path> fixture_dir;
    unsigned threads = 1;
};

struct PlotArgs {
    std::filesystem::path input;
    std::optional<std::filesystem::path> matching;
    std::filesystem::path out;
    double lambda = 1.4142135623730951;
    double tol = 1e-9;
};

// Each command writes its JSON result to `out`, diagnostics to `err`, and returns an exit code.
int cmd_match(const MatchArgs& args, std::ostream& out, std::ostream& err);
int cmd_center(const CenterArgs& args, std::ostream& out, std::ostream& err);
int cmd_improve(const ImproveArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maxsum::cli
