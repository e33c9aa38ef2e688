#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rvplan/core.hpp"
#include "rvplan/evaluator.hpp"

namespace rvplan {

/// Drops every bid whose utility does not strictly exceed the reservation
/// value.  Such a bid can never raise the expected utility of a plan: its
/// best-case gain is survival * a * (u - rv) <= 0, and on an exact tie the
/// planner prefers the shorter plan anyway.  May return an empty domain.
inline NegotiationDomain filter_dominated(const NegotiationDomain& domain,
                                          double reservation_value) {
    NegotiationDomain filtered;
    filtered.bids.reserve(domain.bids.size());
    for (const Bid& b : domain.bids) {
        if (b.utility > reservation_value) filtered.bids.push_back(b);
    }
    return filtered;
}

/// How the greedy loop evaluates candidate insertions.  Both paths compute
/// the same doubles in the same order and therefore return bit-identical
/// plans; they differ only in how much work the per-candidate evaluation
/// redoes.
enum class EvalPath {
    /// O(1) per candidate, reusing the per-step evaluation report.
    incremental,
    /// Recomputes the survival prefix and continuation value from scratch
    /// for every candidate, the Theta(k) cost of re-evaluating the inserted
    /// sequence each time.  Worst case O(n^2 D) over the whole run.
    naive,
};

struct GreedyStep {
    int step = 0;  // 1-based
    BidId chosen = 0;
    double delta = 0.0;
    double expected_utility_after = 0.0;
};

struct PlanResult {
    BidPlan plan;
    std::vector<GreedyStep> trace;
};

namespace detail {

// Survival product over positions [0, position) of the plan, recomputed
// front-to-back exactly as evaluate_with_report does.
inline double recompute_survival(std::span<const Bid> plan, std::size_t position) {
    double survival = 1.0;
    for (std::size_t j = 0; j < position; ++j) {
        survival *= (1.0 - plan[j].acceptance_probability);
    }
    return survival;
}

// Continuation value at `position`, recomputed back-to-front exactly as
// evaluate_with_report does.
inline double recompute_suffix_value(std::span<const Bid> plan, std::size_t position,
                                     double reservation_value) {
    double value = reservation_value;
    for (std::size_t j = plan.size(); j > position; --j) {
        const Bid& b = plan[j - 1];
        value = b.acceptance_probability * b.utility +
                (1.0 - b.acceptance_probability) * value;
    }
    return value;
}

}  // namespace detail

/// Greedy marginal-improvement planning (the MIA-RVelous strategy): start
/// from the empty plan, and while rounds remain keep inserting the unused
/// bid whose insertion at its sorted position gains the most expected
/// utility.  Ties on the gain go to the lower bid id.  The loop stops once
/// no insertion strictly improves the plan: either the best delta is not
/// positive, or the improvement is too small to register on the accumulated
/// expected utility in double precision (beyond that point appended bids
/// would be zero-effect and the trace could no longer strictly increase).
///
/// Returns the sorted plan, its expected utility, and the per-step trace.
inline PlanResult plan_with_trace(const PlanningProblem& problem,
                                  EvalPath path = EvalPath::incremental) {
    const double rv = problem.reservation_value;
    const NegotiationDomain candidates = filter_dominated(problem.domain, rv);
    const std::size_t max_len =
        std::min<std::size_t>(static_cast<std::size_t>(problem.deadline), candidates.size());

    std::vector<Bid> plan;
    plan.reserve(max_len);
    std::vector<char> used(candidates.size(), 0);
    EvaluationReport report = evaluate_with_report(plan, rv);
    double eu = report.expected_utility;

    PlanResult result;
    while (plan.size() < max_len) {
        bool found = false;
        double best_delta = 0.0;
        std::size_t best_pos = 0;
        std::size_t best_index = 0;

        for (std::size_t ci = 0; ci < candidates.bids.size(); ++ci) {
            if (used[ci]) continue;
            const Bid& c = candidates.bids[ci];
            const std::size_t pos = insertion_position(plan, c.utility);
            double survival;
            double continuation;
            if (path == EvalPath::incremental) {
                survival = report.survival_before(pos);
                continuation = report.suffix_value[pos];
            } else {
                survival = detail::recompute_survival(plan, pos);
                continuation = detail::recompute_suffix_value(plan, pos, rv);
            }
            const double delta = survival * c.acceptance_probability * (c.utility - continuation);
            if (!found || delta > best_delta ||
                (delta == best_delta && c.id < candidates.bids[best_index].id)) {
                found = true;
                best_delta = delta;
                best_pos = pos;
                best_index = ci;
            }
        }

        if (!found || !(best_delta > 0.0)) break;

        plan.insert(plan.begin() + static_cast<std::ptrdiff_t>(best_pos),
                    candidates.bids[best_index]);
        EvaluationReport next = evaluate_with_report(plan, rv);
        if (!(next.expected_utility > eu)) {
            plan.erase(plan.begin() + static_cast<std::ptrdiff_t>(best_pos));
            break;
        }
        report = std::move(next);
        eu = report.expected_utility;
        used[best_index] = 1;
        result.trace.push_back({static_cast<int>(result.trace.size() + 1),
                                candidates.bids[best_index].id, best_delta, eu});
    }

    result.plan.sequence.reserve(plan.size());
    for (const Bid& b : plan) result.plan.sequence.push_back(b.id);
    result.plan.expected_utility = eu;
    return result;
}

inline BidPlan plan_miarvelous(const PlanningProblem& problem,
                               EvalPath path = EvalPath::incremental) {
    return plan_with_trace(problem, path).plan;
}

inline std::vector<GreedyStep> plan_greedy_trace(const PlanningProblem& problem,
                                                 EvalPath path = EvalPath::incremental) {
    return plan_with_trace(problem, path).trace;
}

}  // namespace rvplan
