#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rvplan/core.hpp"

namespace rvplan {

class InstanceTooLargeError : public Error {
  public:
    InstanceTooLargeError(const std::string& what_arg) : Error(what_arg) {}
};

/// Expected utility by direct forward summation of
///
///   sum_i u_i * a_i * prod_{j<i}(1 - a_j)  +  rv * prod_j(1 - a_j).
///
/// Intentionally a different computation route than the evaluator's backward
/// recurrence; the two are compared against each other in tests.
inline double direct_expected_utility(std::span<const Bid> plan, double reservation_value) {
    double survival = 1.0;
    double total = 0.0;
    for (const Bid& b : plan) {
        total += b.utility * b.acceptance_probability * survival;
        survival *= (1.0 - b.acceptance_probability);
    }
    return total + reservation_value * survival;
}

struct OracleLimits {
    std::size_t max_n = 10;
    int max_deadline = 6;
};

struct BruteforceResult {
    BidPlan plan;
    /// Best expected utility over every enumerated ordering, sorted or not.
    /// Equal (up to float noise) to plan.expected_utility by sorted dominance.
    double max_over_all_orderings = 0.0;
    std::size_t sequences_evaluated = 0;
};

namespace detail {

inline double direct_eu_ptrs(std::span<const Bid* const> seq, double reservation_value) {
    double survival = 1.0;
    double total = 0.0;
    for (const Bid* b : seq) {
        total += b->utility * b->acceptance_probability * survival;
        survival *= (1.0 - b->acceptance_probability);
    }
    return total + reservation_value * survival;
}

inline bool non_increasing_utilities(std::span<const Bid* const> seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i]->utility < seq[i + 1]->utility) return false;
    }
    return true;
}

inline bool lex_smaller_ids(std::span<const Bid* const> a, std::span<const BidId> b) {
    const std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i]->id != b[i]) return a[i]->id < b[i];
    }
    return a.size() < b.size();
}

}  // namespace detail

/// Exhaustive solver: enumerates every duplicate-free ordered sequence of
/// length 0..min(deadline, n) over the unfiltered domain and evaluates each
/// by direct summation.  Returns the best sequence among those sorted by
/// non-increasing utility (one of them always attains the overall maximum);
/// ties go to the shorter sequence, then the lexicographically smaller id
/// sequence.  Guards reject instances whose enumeration would blow up.
inline BruteforceResult plan_bruteforce_detailed(const PlanningProblem& problem,
                                                 const OracleLimits& limits = {}) {
    const std::size_t n = problem.domain.size();
    if (n > limits.max_n)
        throw InstanceTooLargeError("domain size " + std::to_string(n) + " exceeds oracle guard " +
                                    std::to_string(limits.max_n));
    if (problem.deadline > limits.max_deadline)
        throw InstanceTooLargeError("deadline " + std::to_string(problem.deadline) +
                                    " exceeds oracle guard " + std::to_string(limits.max_deadline));

    const double rv = problem.reservation_value;
    const std::size_t max_len = std::min<std::size_t>(static_cast<std::size_t>(problem.deadline), n);

    BruteforceResult result;
    result.plan.sequence.clear();
    result.plan.expected_utility = rv;  // the empty sequence
    result.max_over_all_orderings = rv;
    result.sequences_evaluated = 1;

    std::vector<const Bid*> seq;
    std::vector<char> used(n, 0);
    seq.reserve(max_len);

    auto consider = [&]() {
        const double eu = detail::direct_eu_ptrs(seq, rv);
        ++result.sequences_evaluated;
        if (eu > result.max_over_all_orderings) result.max_over_all_orderings = eu;
        if (!detail::non_increasing_utilities(seq)) return;
        const bool better =
            eu > result.plan.expected_utility ||
            (eu == result.plan.expected_utility &&
             (seq.size() < result.plan.sequence.size() ||
              (seq.size() == result.plan.sequence.size() &&
               detail::lex_smaller_ids(seq, result.plan.sequence))));
        if (better) {
            result.plan.expected_utility = eu;
            result.plan.sequence.clear();
            for (const Bid* b : seq) result.plan.sequence.push_back(b->id);
        }
    };

    auto extend = [&](auto&& self) -> void {
        if (seq.size() == max_len) return;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            used[i] = 1;
            seq.push_back(&problem.domain.bids[i]);
            consider();
            self(self);
            seq.pop_back();
            used[i] = 0;
        }
    };
    extend(extend);
    return result;
}

inline BidPlan plan_bruteforce(const PlanningProblem& problem, const OracleLimits& limits = {}) {
    return plan_bruteforce_detailed(problem, limits).plan;
}

/// True iff ordering the set by non-increasing utility attains the maximum
/// expected utility over all |bid_set|! orderings (up to 1e-12, since equal
/// utilities make distinct orderings algebraically but not bitwise equal).
inline bool verify_sorted_dominance(std::span<const Bid> bid_set, double reservation_value,
                                    std::size_t max_size = 6) {
    if (bid_set.size() > max_size)
        throw InstanceTooLargeError("bid set of size " + std::to_string(bid_set.size()) +
                                    " exceeds permutation guard " + std::to_string(max_size));

    std::vector<Bid> sorted(bid_set.begin(), bid_set.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Bid& a, const Bid& b) { return a.utility > b.utility; });
    const double sorted_eu = direct_expected_utility(sorted, reservation_value);

    std::vector<std::size_t> index(bid_set.size());
    std::iota(index.begin(), index.end(), 0);
    double best = sorted_eu;
    std::vector<Bid> perm(bid_set.size());
    do {
        for (std::size_t i = 0; i < index.size(); ++i) perm[i] = bid_set[index[i]];
        best = std::max(best, direct_expected_utility(perm, reservation_value));
    } while (std::next_permutation(index.begin(), index.end()));

    return sorted_eu >= best - 1e-12;
}

}  // namespace rvplan
