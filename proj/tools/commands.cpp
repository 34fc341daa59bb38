#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxsum/center.hpp"
#include "maxsum/io.hpp"
#include "maxsum/matching.hpp"
#include "maxsum/proofgraph.hpp"
#include "maxsum/svg.hpp"
#include "maxsum/verify.hpp"

namespace maxsum::cli {

using nlohmann::json;

namespace {

constexpr const char* kTolEnv = "MAXSUM_TOL";

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const ToleranceFailure& e) {
        err << "error: " << e.what() << '\n';
        return kToleranceFailure;
    } catch (const OracleLimitExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kOracleLimit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
}

json pairs_json(const std::vector<MatchedPair>& pairs) {
    json arr = json::array();
    for (const MatchedPair& p : pairs) arr.push_back(json::array({p.red, p.blue}));
    return arr;
}

CenterOptions center_options(double tol) {
    CenterOptions o;
    o.tol = tol;
    return o;
}

json report_json(const TrialReport& r) {
    json j{{"seed", r.seed},         {"n", r.n},         {"distribution", r.distribution},
           {"value", r.lambda_star}, {"bound", r.bound}, {"margin", r.margin},
           {"pass", r.pass},         {"worst_pair", r.worst_pair}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

json summarize(const std::string& suite, const std::vector<TrialReport>& reports) {
    json s{{"suite", suite}, {"trials", reports.size()}, {"violations", count_violations(reports)}};
    if (!reports.empty()) {
        const TrialReport* worst = &reports.front();
        for (const TrialReport& r : reports) {
            if (r.margin < worst->margin) worst = &r;
        }
        s["min_margin"] = worst->margin;
        s["worst_trial"] = report_json(*worst);
    }
    json failures = json::array();
    for (const TrialReport& r : reports) {
        if (!r.pass) failures.push_back(report_json(r));
    }
    s["failures"] = failures;
    return s;
}

}  // namespace

double resolve_tolerance(std::optional<double> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv(kTolEnv)) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && std::isfinite(v) && v > 0.0) return v;
    }
    return 1e-9;
}

int cmd_match(const MatchArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Instance inst = load_instance(args.input);
        const Matching m = args.oracle ? brute_force_max_sum(inst) : max_sum_matching(inst);
        json doc = matching_to_json(m);
        doc["solver"] = args.oracle ? "brute-force" : "assignment";
        out << doc.dump(2) << '\n';
        return kOk;
    });
}

int cmd_center(const CenterArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Instance inst = load_instance(args.input);
        if (args.check) {
            json cert;
            try {
                cert = json::parse(read_text_file(*args.check));
            } catch (const json::parse_error& e) {
                throw ParseError(std::string("invalid certificate JSON: ") + e.what());
            }
            const CertificateCheck c = check_certificate(inst, cert, std::max(args.tol, 1e-9));
            out << json{{"ok", c.ok},
                        {"max_ratio_error", c.max_ratio_error},
                        {"lambda_error", c.lambda_error},
                        {"recomputed_gap", c.recomputed_gap},
                        {"problems", c.problems}}
                       .dump(2)
                << '\n';
            return c.ok ? kOk : kViolation;
        }
        const bool computed = !args.matching;
        const Matching m = computed ? max_sum_matching(inst) : load_matching(*args.matching, inst);
        const CenterCertificate cert = center_point(inst, m, center_options(args.tol));
        std::optional<bool> pass;
        if (computed) pass = cert.lambda_star <= std::numbers::sqrt2 + args.tol;
        out << certificate_to_json(m, cert, pass).dump(2) << '\n';
        return kOk;
    });
}

int cmd_improve(const ImproveArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Instance inst = load_instance(args.input);
        Matching m = load_matching(args.matching, inst);
        RefuteOptions options;
        options.center = center_options(args.tol);
        options.accept_tol = args.tol;

        json steps = json::array();
        std::string status = "LIMIT";
        std::optional<double> lambda;
        for (std::size_t step = 0; step < args.max_steps; ++step) {
            RefutationResult result = refute_or_accept(inst, m, options);
            if (const auto* acc = std::get_if<Accepted>(&result)) {
                status = "ACCEPT";
                lambda = acc->certificate.lambda_star;
                break;
            }
            auto& imp = std::get<Improved>(result);
            std::vector<MatchedPair> removed, added;
            const std::size_t k = imp.cycle.reds.size();
            for (std::size_t i = 0; i < k; ++i) {
                removed.push_back({imp.cycle.reds[i], imp.cycle.blues[i]});
                added.push_back({imp.cycle.reds[(i + 1) % k], imp.cycle.blues[i]});
            }
            steps.push_back(json{{"step", step + 1},
                                 {"pairs", imp.pairs},
                                 {"witness", json::array({imp.witness.center.x, imp.witness.center.y})},
                                 {"lambda", imp.witness.lambda_star},
                                 {"cycle_reds", imp.cycle.reds},
                                 {"cycle_blues", imp.cycle.blues},
                                 {"removed", pairs_json(removed)},
                                 {"added", pairs_json(added)},
                                 {"total_before", imp.total_before},
                                 {"total_after", imp.total_after}});
            m = std::move(imp.matching);
        }
        if (!lambda) lambda = center_point(inst, m, options.center).lambda_star;
        json doc = matching_to_json(m);
        doc["status"] = status;
        doc["steps"] = steps;
        doc["lambda_star"] = *lambda;
        out << doc.dump(2) << '\n';
        return kOk;
    });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        SuiteConfig config;
        config.trials = args.trials;
        config.seed = args.seed;
        config.n_min = args.nmin;
        config.n_max = args.nmax;
        config.threads = args.threads;
        config.fixture_dir = args.fixture_dir;
        config.distributions.clear();
        for (const std::string& name : args.distributions) {
            const auto d = parse_distribution(name);
            if (!d) throw InvalidInput("unknown distribution: " + name);
            config.distributions.push_back(*d);
        }

        if (args.suite == "diskgap") {
            const auto found = search_disk_gap(args.trials, args.seed);
            json doc{{"suite", "diskgap"}, {"budget", args.trials}, {"found", found.has_value()}};
            if (found) {
                doc["seed"] = found->seed;
                doc["residual"] = found->residual;
                doc["instance"] = instance_to_json(found->instance);
                doc["matching"] = pairs_json(found->matching.pairs());
                if (args.fixture_dir) {
                    std::filesystem::create_directories(*args.fixture_dir);
                    write_instance_json(*args.fixture_dir / ("diskgap_" + std::to_string(found->seed) + ".json"),
                                        found->instance);
                }
            }
            out << doc.dump(2) << '\n';
            return kOk;
        }

        std::vector<TrialReport> reports;
        if (args.suite == "theorem") {
            reports = verify_theorem_suite(config);
        } else if (args.suite == "uncolored") {
            std::vector<std::size_t> sizes;
            for (std::size_t k = 2; k <= std::min<std::size_t>(args.nmax, 4); ++k) sizes.push_back(2 * k);
            if (sizes.empty()) throw InvalidInput("uncolored suite needs --nmax >= 2");
            reports = verify_uncolored_suite(args.trials, sizes, args.seed, 1e-7, args.threads);
            if (args.fixture_dir) {
                std::filesystem::create_directories(*args.fixture_dir);
                for (const TrialReport& r : reports) {
                    if (r.pass) continue;
                    json pts = json::array();
                    for (Point p : random_uncolored(r.seed, r.n)) pts.push_back(json::array({p.x, p.y}));
                    std::ofstream(*args.fixture_dir / ("uncolored_" + std::to_string(r.seed) + ".json"))
                        << json{{"points", pts}}.dump(2) << '\n';
                }
            }
        } else if (args.suite == "squared") {
            reports = verify_squared_variant(config);
        } else {
            throw InvalidInput("unknown suite: " + args.suite);
        }
        const json summary = summarize(args.suite, reports);
        out << summary.dump(2) << '\n';
        return count_violations(reports) == 0 ? kOk : kViolation;
    });
}

int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Instance inst = load_instance(args.input);
        const bool computed = !args.matching;
        const Matching m = computed ? max_sum_matching(inst) : load_matching(*args.matching, inst);
        if (!std::isfinite(args.lambda) || args.lambda < 1.0) throw InvalidInput("--lambda must be >= 1");
        const CenterCertificate cert = center_point(inst, m, center_options(args.tol));
        const std::string svg = render_svg(inst, m, cert, args.lambda);
        std::ofstream file(args.out, std::ios::binary);
        if (!file || !(file << svg)) throw ParseError("cannot write " + args.out.string());
        out << json{{"svg", args.out.string()}, {"lambda", args.lambda}}.dump(2) << '\n';
        return kOk;
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Max-sum bichromatic matchings and their sqrt(2) center certificates"};
    app.require_subcommand(1);
    std::optional<double> tol_flag;
    app.add_option("--tol", tol_flag, "solver tolerance (overrides MAXSUM_TOL; default 1e-9)")->check(CLI::PositiveNumber);

    MatchArgs match;
    auto* match_cmd = app.add_subcommand("match", "max-sum matching of an instance");
    match_cmd->add_option("input", match.input, "instance file (.json or .csv)")->required();
    match_cmd->add_flag("--oracle", match.oracle, "exhaustive search instead of the assignment solver (n <= 8)");

    CenterArgs center;
    auto* center_cmd = app.add_subcommand("center", "center point certificate");
    center_cmd->add_option("input", center.input, "instance file")->required();
    center_cmd->add_option("--matching", center.matching, "matching JSON; default is the computed max-sum matching");
    center_cmd->add_option("--check", center.check, "re-verify a stored certificate against the instance");

    ImproveArgs improve;
    auto* improve_cmd = app.add_subcommand("improve", "alternating-cycle improvement until the bound holds");
    improve_cmd->add_option("input", improve.input, "instance file")->required();
    improve_cmd->add_option("matching", improve.matching, "starting matching JSON")->required();
    improve_cmd->add_option("--max-steps", improve.max_steps, "step limit");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "randomized theorem suites");
    verify_cmd->add_option("--suite", verify.suite, "theorem | uncolored | squared | diskgap")
        ->check(CLI::IsMember({"theorem", "uncolored", "squared", "diskgap"}));
    verify_cmd->add_option("--trials", verify.trials, "trial count (search budget for diskgap)");
    verify_cmd->add_option("--seed", verify.seed, "base seed");
    verify_cmd->add_option("--nmin", verify.nmin, "smallest n");
    verify_cmd->add_option("--nmax", verify.nmax, "largest n");
    verify_cmd->add_option("--distribution", verify.distributions, "uniform-square | gaussian | clustered | collinear-jitter");
    verify_cmd->add_option("--fixture-dir", verify.fixture_dir, "directory for failing-instance fixtures");
    verify_cmd->add_option("--threads", verify.threads, "worker threads");

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("plot", "SVG figure of the matching, disks, ellipses and center");
    plot_cmd->add_option("input", plot.input, "instance file")->required();
    plot_cmd->add_option("--out", plot.out, "SVG output path")->required();
    plot_cmd->add_option("--matching", plot.matching, "matching JSON; default is the computed max-sum matching");
    plot_cmd->add_option("--lambda", plot.lambda, "ellipse inflation factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    const double tol = resolve_tolerance(tol_flag);
    if (match_cmd->parsed()) return cmd_match(match, out, err);
    if (center_cmd->parsed()) {
        center.tol = tol;
        return cmd_center(center, out, err);
    }
    if (improve_cmd->parsed()) {
        improve.tol = tol;
        return cmd_improve(improve, out, err);
    }
    if (verify_cmd->parsed()) {
        if (verify.suite == "squared" && verify_cmd->count("--nmax") == 0) verify.nmax = 5;
        return cmd_verify(verify, out, err);
    }
    plot.tol = tol;
    return cmd_plot(plot, out, err);
}

}  // namespace maxsum::cli
