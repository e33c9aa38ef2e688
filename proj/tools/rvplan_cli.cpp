// Command-line front end: plan / evaluate / simulate / oracle-check /
// generate / bench over problem files in the JSON domain format.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvplan/rvplan.hpp"

namespace {

using namespace rvplan;

enum class OutputFormat { text, csv, structured };

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "structured-text") return OutputFormat::structured;
    return OutputFormat::text;
}

// Human-oriented rounding; machine formats keep full precision.
std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_ids(std::span<const BidId> ids, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += sep;
        out += std::to_string(ids[i]);
    }
    return out;
}

std::vector<BidId> parse_id_list(const std::string& text) {
    std::vector<BidId> ids;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(token, &pos);
        } catch (const std::exception&) {
            throw ValidationError("invalid bid id \"" + token + "\" in sequence");
        }
        if (pos != token.size())
            throw ValidationError("invalid bid id \"" + token + "\" in sequence");
        ids.push_back(static_cast<BidId>(v));
    }
    return ids;
}

const Bid& bid_by_id(const NegotiationDomain& domain, BidId id) {
    const Bid* b = domain.find(id);
    if (b == nullptr) throw UnknownIdError(id);
    return *b;
}

nlohmann::json plan_to_json(const BidPlan& plan) {
    nlohmann::json j;
    j["sequence"] = plan.sequence;
    j["expected_utility"] = plan.expected_utility;
    return j;
}

int run_plan(const std::string& file, bool naive, OutputFormat format) {
    const PlanningProblem problem = parse_problem_file(file);
    const EvalPath path = naive ? EvalPath::naive : EvalPath::incremental;
    const PlanResult result = plan_with_trace(problem, path);

    if (format == OutputFormat::structured) {
        nlohmann::json j = plan_to_json(result.plan);
        j["trace"] = nlohmann::json::array();
        for (const GreedyStep& s : result.trace) {
            const Bid& b = bid_by_id(problem.domain, s.chosen);
            j["trace"].push_back({{"step", s.step},
                                  {"bid_id", s.chosen},
                                  {"label", b.label},
                                  {"utility", b.utility},
                                  {"acceptance_probability", b.acceptance_probability},
                                  {"delta", s.delta},
                                  {"expected_utility_after", s.expected_utility_after}});
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (format == OutputFormat::csv) {
        std::cout << "step,bid_id,label,utility,acceptance_probability,delta,"
                     "expected_utility_after\n";
        for (const GreedyStep& s : result.trace) {
            const Bid& b = bid_by_id(problem.domain, s.chosen);
            std::cout << s.step << ',' << s.chosen << ',' << csv_escape(b.label) << ','
                      << format_double(b.utility) << ',' << format_double(b.acceptance_probability)
                      << ',' << format_double(s.delta) << ','
                      << format_double(s.expected_utility_after) << "\n";
        }
        return 0;
    }

    std::cout << "problem: " << problem.domain.size() << " bids, reservation value "
              << fmt6(problem.reservation_value) << ", deadline " << problem.deadline << "\n";
    if (result.trace.empty()) {
        std::cout << "plan: (empty; the reservation value is the best option)\n";
    } else {
        std::cout << "step  bid  label            utility  acceptance  delta        eu_after\n";
        for (const GreedyStep& s : result.trace) {
            const Bid& b = bid_by_id(problem.domain, s.chosen);
            std::printf("%-5d %-4u %-16s %-8s %-11s %-12s %s\n", s.step, s.chosen,
                        b.label.empty() ? "-" : b.label.c_str(), fmt6(b.utility).c_str(),
                        fmt6(b.acceptance_probability).c_str(), fmt6(s.delta).c_str(),
                        fmt6(s.expected_utility_after).c_str());
        }
        std::cout << "plan: " << join_ids(result.plan.sequence) << "\n";
    }
    std::cout << "expected utility: " << fmt6(result.plan.expected_utility) << "\n";
    return 0;
}

int run_evaluate(const std::string& file, const std::string& sequence, OutputFormat format) {
    const PlanningProblem problem = parse_problem_file(file);
    const std::vector<BidId> ids = parse_id_list(sequence);
    const std::vector<Bid> bids = resolve_sequence(problem.domain, ids);
    const double eu = expected_utility(bids, problem.reservation_value);

    if (format == OutputFormat::structured) {
        nlohmann::json j;
        j["sequence"] = ids;
        j["expected_utility"] = eu;
        std::cout << j.dump(2) << "\n";
    } else if (format == OutputFormat::csv) {
        std::cout << "sequence,expected_utility\n"
                  << csv_escape(join_ids(ids, ';')) << ',' << format_double(eu) << "\n";
    } else {
        std::cout << "sequence: " << (ids.empty() ? "(empty)" : join_ids(ids)) << "\n";
        std::cout << "expected utility: " << fmt6(eu) << "\n";
    }
    return 0;
}

int run_simulate(const std::string& file, std::uint64_t trials, std::uint64_t seed,
                 unsigned threads, const std::optional<std::string>& sequence, bool naive,
                 OutputFormat format) {
    const PlanningProblem problem = parse_problem_file(file);
    std::vector<Bid> bids;
    std::vector<BidId> ids;
    if (sequence) {
        ids = parse_id_list(*sequence);
        bids = resolve_sequence(problem.domain, ids);
    } else {
        const BidPlan plan =
            plan_miarvelous(problem, naive ? EvalPath::naive : EvalPath::incremental);
        ids = plan.sequence;
        bids = resolve_sequence(problem.domain, ids);
    }
    const double analytic = expected_utility(bids, problem.reservation_value);
    const SimulationResult r = simulate(bids, problem.reservation_value, trials, seed, threads);

    if (format == OutputFormat::structured) {
        nlohmann::json j;
        j["sequence"] = ids;
        j["trials"] = r.trials;
        j["seed"] = r.seed;
        j["mean_utility"] = r.mean_utility;
        j["std_error"] = r.std_error;
        j["agreement_rate"] = r.agreement_rate;
        j["acceptance_counts"] = r.acceptance_counts;
        j["analytic_expected_utility"] = analytic;
        std::cout << j.dump(2) << "\n";
    } else if (format == OutputFormat::csv) {
        std::cout << "trials,seed,mean_utility,std_error,agreement_rate,agreements,"
                     "analytic_expected_utility\n";
        std::cout << r.trials << ',' << r.seed << ',' << format_double(r.mean_utility) << ','
                  << format_double(r.std_error) << ',' << format_double(r.agreement_rate) << ','
                  << r.agreements() << ',' << format_double(analytic) << "\n";
    } else {
        std::cout << "plan: " << (ids.empty() ? "(empty)" : join_ids(ids)) << "\n";
        std::cout << "trials: " << r.trials << ", seed: " << r.seed << "\n";
        std::cout << "mean utility: " << fmt6(r.mean_utility) << ", std error: "
                  << fmt6(r.std_error) << "\n";
        std::cout << "agreement rate: " << fmt6(r.agreement_rate) << "\n";
        std::cout << "analytic expected utility: " << fmt6(analytic) << "\n";
        std::cout << "acceptance counts:";
        for (std::size_t i = 0; i < r.acceptance_counts.size(); ++i)
            std::cout << " [" << ids[i] << "]=" << r.acceptance_counts[i];
        std::cout << "\n";
    }
    return 0;
}

int run_oracle_check(const std::string& file, std::size_t max_n, int max_deadline,
                     OutputFormat format) {
    const PlanningProblem problem = parse_problem_file(file);
    const BidPlan greedy = plan_miarvelous(problem);
    const BidPlan exhaustive = plan_bruteforce(problem, OracleLimits{max_n, max_deadline});
    const double diff = std::fabs(greedy.expected_utility - exhaustive.expected_utility);
    constexpr double kTolerance = 1e-9;
    const bool pass = diff <= kTolerance;

    if (format == OutputFormat::structured) {
        nlohmann::json j;
        j["planner"] = plan_to_json(greedy);
        j["oracle"] = plan_to_json(exhaustive);
        j["abs_difference"] = diff;
        j["tolerance"] = kTolerance;
        j["pass"] = pass;
        std::cout << j.dump(2) << "\n";
    } else if (format == OutputFormat::csv) {
        std::cout << "planner_sequence,planner_eu,oracle_sequence,oracle_eu,abs_difference,pass\n";
        std::cout << csv_escape(join_ids(greedy.sequence, ';')) << ','
                  << format_double(greedy.expected_utility) << ','
                  << csv_escape(join_ids(exhaustive.sequence, ';')) << ','
                  << format_double(exhaustive.expected_utility) << ',' << format_double(diff)
                  << ',' << (pass ? "PASS" : "FAIL") << "\n";
    } else {
        std::cout << "planner: [" << join_ids(greedy.sequence) << "] eu "
                  << format_double(greedy.expected_utility) << "\n";
        std::cout << "oracle:  [" << join_ids(exhaustive.sequence) << "] eu "
                  << format_double(exhaustive.expected_utility) << "\n";
        std::cout << "|difference| = " << format_double(diff) << " (tolerance "
                  << format_double(kTolerance) << ")\n";
        std::cout << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? 0 : 3;
}

int run_generate(std::size_t n, std::uint64_t seed, bool inverse, std::optional<double> rv,
                 std::optional<int> deadline, const std::string& output) {
    const RvMode mode = rv ? RvMode::fixed(*rv) : RvMode::uniform();
    const int d = deadline ? *deadline : static_cast<int>(n);
    const PlanningProblem problem = random_problem(
        n, mode, d, seed, inverse ? Correlation::inverse : Correlation::independent);
    if (output.empty()) {
        std::cout << problem_to_string(problem);
    } else {
        write_problem_file(output, problem);
    }
    return 0;
}

int run_bench(const std::vector<std::size_t>& n_values, const std::vector<int>& d_values,
              int reps, std::uint64_t seed, OutputFormat format) {
    const std::vector<BenchCell> cells = bench_scaling(n_values, d_values, reps, seed);
    if (format == OutputFormat::csv) {
        std::cout << bench_csv(cells);
    } else if (format == OutputFormat::structured) {
        nlohmann::json j = nlohmann::json::array();
        for (const BenchCell& c : cells) {
            j.push_back({{"n", c.n},
                         {"deadline", c.deadline},
                         {"reps", c.reps},
                         {"median_plan_length", c.median_plan_length},
                         {"naive_median_ms", c.naive_median_ms},
                         {"incremental_median_ms", c.incremental_median_ms},
                         {"plans_identical", c.plans_identical},
                         {"max_eu_diff", c.max_eu_diff}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << bench_table(cells);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal bid sequencing for bilateral negotiation with a reservation value"};
    app.require_subcommand(1);

    std::string file;
    std::string format_name = "text";
    bool naive = false;

    CLI::App* plan_cmd = app.add_subcommand("plan", "Compute the optimal bid plan for a problem file");
    plan_cmd->add_option("file", file, "problem file (JSON)")->required();
    plan_cmd->add_flag("--naive", naive, "use the naive per-candidate re-evaluation path");
    plan_cmd->add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"text", "csv", "structured-text"}));

    std::string sequence;
    CLI::App* eval_cmd =
        app.add_subcommand("evaluate", "Expected utility of a given bid sequence, in the order given");
    eval_cmd->add_option("file", file, "problem file (JSON)")->required();
    eval_cmd->add_option("--sequence", sequence, "comma-separated bid ids (may be empty)")
        ->required();
    eval_cmd->add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"text", "csv", "structured-text"}));

    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string sim_sequence;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of a plan against the acceptance model");
    sim_cmd->add_option("file", file, "problem file (JSON)")->required();
    sim_cmd->add_option("--trials", trials, "number of trials")->required();
    sim_cmd->add_option("--seed", seed, "RNG seed")->required();
    sim_cmd->add_option("--threads", threads, "worker threads (default: RVPLAN_THREADS or 1)");
    CLI::Option* sim_seq_opt = sim_cmd->add_option(
        "--sequence", sim_sequence, "simulate this sequence instead of the planner output");
    sim_cmd->add_flag("--naive", naive, "plan with the naive path when no sequence is given");
    sim_cmd->add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"text", "csv", "structured-text"}));

    std::size_t oracle_max_n = 10;
    int oracle_max_d = 6;
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle-check", "Compare the planner against the exhaustive oracle");
    oracle_cmd->add_option("file", file, "problem file (JSON)")->required();
    oracle_cmd->add_option("--max-n", oracle_max_n, "oracle domain-size guard");
    oracle_cmd->add_option("--max-deadline", oracle_max_d, "oracle deadline guard");
    oracle_cmd->add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"text", "csv", "structured-text"}));

    std::size_t gen_n = 0;
    bool inverse = false;
    double rv_value = 0.0;
    int gen_deadline = 0;
    std::string output;
    CLI::App* gen_cmd = app.add_subcommand("generate", "Emit a seeded random problem file");
    gen_cmd->add_option("--n", gen_n, "number of bids")->required();
    gen_cmd->add_option("--seed", seed, "RNG seed")->required();
    gen_cmd->add_flag("--inverse", inverse, "anti-correlate acceptance with utility");
    CLI::Option* rv_opt =
        gen_cmd->add_option("--rv", rv_value, "fixed reservation value (default: drawn uniformly)");
    CLI::Option* dl_opt = gen_cmd->add_option("--deadline", gen_deadline, "deadline (default: n)");
    gen_cmd->add_option("--output,-o", output, "write to this path instead of stdout");

    std::vector<std::size_t> n_values{250, 500, 1000};
    std::vector<int> d_values{25, 50, 100};
    int reps = 5;
    std::uint64_t bench_seed = 1;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "Time both planner paths over an (n, deadline) grid");
    bench_cmd->add_option("--n-values", n_values, "domain sizes")->delimiter(',');
    bench_cmd->add_option("--d-values", d_values, "deadlines")->delimiter(',');
    bench_cmd->add_option("--reps", reps, "instances per cell (>= 3)");
    bench_cmd->add_option("--seed", bench_seed, "base RNG seed");
    bench_cmd->add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"text", "csv", "structured-text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const OutputFormat format = parse_format(format_name);
    try {
        if (app.got_subcommand(plan_cmd)) return run_plan(file, naive, format);
        if (app.got_subcommand(eval_cmd)) return run_evaluate(file, sequence, format);
        if (app.got_subcommand(sim_cmd))
            return run_simulate(file, trials, seed, threads,
                                *sim_seq_opt ? std::optional<std::string>(sim_sequence)
                                             : std::nullopt,
                                naive, format);
        if (app.got_subcommand(oracle_cmd))
            return run_oracle_check(file, oracle_max_n, oracle_max_d, format);
        if (app.got_subcommand(gen_cmd))
            return run_generate(gen_n, seed, inverse,
                                *rv_opt ? std::optional<double>(rv_value) : std::nullopt,
                                *dl_opt ? std::optional<int>(gen_deadline) : std::nullopt, output);
        if (app.got_subcommand(bench_cmd))
            return run_bench(n_values, d_values, reps, bench_seed, format);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParamsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InstanceTooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
