#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rvplan/generators.hpp"
#include "rvplan/planner.hpp"

namespace rvplan {

/// Timing and cross-path agreement for one (n, deadline) grid cell.
struct BenchCell {
    std::size_t n = 0;
    int deadline = 0;
    int reps = 0;
    double naive_median_ms = 0.0;
    double incremental_median_ms = 0.0;
    std::size_t median_plan_length = 0;
    bool plans_identical = true;  // across both paths, all reps
    double max_eu_diff = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

template <typename F>
double time_ms(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace detail

/// Times plan_miarvelous over seeded random instances (independent mode,
/// rv = 0) for every (n, deadline) combination, on both evaluation paths,
/// and checks that the paths return identical plans.  Instances depend on
/// (seed, n, rep) only, so deadline cells share domains and differ purely in
/// horizon.  Single-threaded by design; medians over reps.
inline std::vector<BenchCell> bench_scaling(std::span<const std::size_t> n_values,
                                            std::span<const int> d_values, int reps,
                                            std::uint64_t seed) {
    if (reps < 3) throw InvalidParamsError("reps must be >= 3");
    for (std::size_t n : n_values)
        if (n < 1) throw InvalidParamsError("n must be >= 1");
    for (int d : d_values)
        if (d < 1) throw InvalidParamsError("deadline must be >= 1");

    std::vector<BenchCell> cells;
    for (std::size_t n : n_values) {
        for (int d : d_values) {
            BenchCell cell;
            cell.n = n;
            cell.deadline = d;
            cell.reps = reps;
            std::vector<double> naive_ms;
            std::vector<double> incr_ms;
            std::vector<double> lengths;
            for (int rep = 0; rep < reps; ++rep) {
                const std::uint64_t instance_seed =
                    rng::mix64(seed ^ rng::mix64(static_cast<std::uint64_t>(n) * 0x1000193u +
                                                 static_cast<std::uint64_t>(rep)));
                const PlanningProblem problem =
                    random_problem(n, RvMode::fixed(0.0), d, instance_seed,
                                   Correlation::independent);
                PlanResult naive_result;
                PlanResult incr_result;
                naive_ms.push_back(detail::time_ms(
                    [&] { naive_result = plan_with_trace(problem, EvalPath::naive); }));
                incr_ms.push_back(detail::time_ms(
                    [&] { incr_result = plan_with_trace(problem, EvalPath::incremental); }));
                if (naive_result.plan.sequence != incr_result.plan.sequence)
                    cell.plans_identical = false;
                cell.max_eu_diff =
                    std::max(cell.max_eu_diff, std::fabs(naive_result.plan.expected_utility -
                                                         incr_result.plan.expected_utility));
                lengths.push_back(static_cast<double>(incr_result.plan.sequence.size()));
            }
            cell.naive_median_ms = detail::median_of(std::move(naive_ms));
            cell.incremental_median_ms = detail::median_of(std::move(incr_ms));
            cell.median_plan_length =
                static_cast<std::size_t>(detail::median_of(std::move(lengths)));
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

inline std::string bench_table(std::span<const BenchCell> cells) {
    std::ostringstream os;
    os << std::left << std::setw(8) << "n" << std::setw(10) << "deadline" << std::setw(12)
       << "plan_len" << std::setw(14) << "naive_ms" << std::setw(16) << "incremental_ms"
       << std::setw(12) << "identical" << "max_eu_diff\n";
    for (const BenchCell& c : cells) {
        os << std::left << std::setw(8) << c.n << std::setw(10) << c.deadline << std::setw(12)
           << c.median_plan_length << std::setw(14) << std::fixed << std::setprecision(4)
           << c.naive_median_ms << std::setw(16) << c.incremental_median_ms << std::setw(12)
           << (c.plans_identical ? "yes" : "NO") << std::scientific << std::setprecision(3)
           << c.max_eu_diff << "\n";
        os.unsetf(std::ios::floatfield);
    }
    return os.str();
}

inline std::string bench_csv(std::span<const BenchCell> cells) {
    std::ostringstream os;
    os << "n,deadline,reps,median_plan_length,naive_median_ms,incremental_median_ms,"
          "plans_identical,max_eu_diff\n";
    for (const BenchCell& c : cells) {
        os << c.n << ',' << c.deadline << ',' << c.reps << ',' << c.median_plan_length << ','
           << std::setprecision(17) << c.naive_median_ms << ',' << c.incremental_median_ms << ','
           << (c.plans_identical ? 1 : 0) << ',' << c.max_eu_diff << "\n";
    }
    return os.str();
}

}  // namespace rvplan
