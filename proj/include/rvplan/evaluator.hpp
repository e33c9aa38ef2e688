#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rvplan/core.hpp"

namespace rvplan {

/// Expected utility of offering `plan` in order: the opponent accepts bid i
/// with probability a_i independently; if every bid is rejected the agent
/// falls back on the reservation value.  Computed by the backward recurrence
///
///   V_{k+1} = rv,   V_i = a_i * u_i + (1 - a_i) * V_{i+1}
///
/// in O(k).  The plan is evaluated as given; this function does not sort.
inline double expected_utility(std::span<const Bid> plan, double reservation_value) {
    double value = reservation_value;
    for (std::size_t i = plan.size(); i > 0; --i) {
        const Bid& b = plan[i - 1];
        value = b.acceptance_probability * b.utility +
                (1.0 - b.acceptance_probability) * value;
    }
    return value;
}

/// Expanded evaluation of a plan: the per-position survival products and
/// continuation values that make single-bid insertions O(1).
///
///   survival_prefix[i] = prod_{j<=i} (1 - a_j)          (k entries)
///   suffix_value[i]    = EU of plan[i..k) ending in rv   (k+1 entries)
///
/// suffix_value.front() is the plan's expected utility; suffix_value.back()
/// is the reservation value itself.
struct EvaluationReport {
    double expected_utility = 0.0;
    std::vector<double> survival_prefix;
    std::vector<double> suffix_value;

    /// Probability that every bid strictly before `position` gets rejected.
    double survival_before(std::size_t position) const {
        return position == 0 ? 1.0 : survival_prefix[position - 1];
    }
};

inline EvaluationReport evaluate_with_report(std::span<const Bid> plan,
                                             double reservation_value) {
    const std::size_t k = plan.size();
    EvaluationReport report;
    report.suffix_value.resize(k + 1);
    report.suffix_value[k] = reservation_value;
    for (std::size_t i = k; i > 0; --i) {
        const Bid& b = plan[i - 1];
        report.suffix_value[i - 1] = b.acceptance_probability * b.utility +
                                     (1.0 - b.acceptance_probability) * report.suffix_value[i];
    }
    report.survival_prefix.resize(k);
    double survival = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        survival *= (1.0 - plan[i].acceptance_probability);
        report.survival_prefix[i] = survival;
    }
    report.expected_utility = report.suffix_value[0];
    return report;
}

/// Index at which a bid of the given utility is inserted to keep the plan
/// sorted by non-increasing utility.  Equal utilities sort before the
/// candidate, so the insertion point is the first strictly smaller entry.
inline std::size_t insertion_position(std::span<const Bid> sorted_plan, double utility) {
    std::size_t lo = 0;
    std::size_t hi = sorted_plan.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (sorted_plan[mid].utility < utility) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

class CandidateAlreadyInPlanError : public ValidationError {
  public:
    explicit CandidateAlreadyInPlanError(BidId id)
        : ValidationError("candidate bid " + std::to_string(id) + " is already in the plan"),
          id(id) {}
    BidId id;
};

struct Insertion {
    double delta = 0.0;
    std::size_t position = 0;
};

/// Gain in expected utility from inserting `candidate` into a sorted plan at
/// its sorted position:
///
///   delta = survival_before(p) * a_c * (u_c - suffix_value[p])
///
/// which equals EU(plan with candidate) - EU(plan).  O(log k) given a report
/// for the current plan.  The plan must be sorted by non-increasing utility
/// and the report must describe exactly this plan.
inline Insertion marginal_improvement(std::span<const Bid> sorted_plan, const Bid& candidate,
                                      double reservation_value, const EvaluationReport& report) {
    (void)reservation_value;  // already folded into the report's suffix values
    const std::size_t position = insertion_position(sorted_plan, candidate.utility);
    // A duplicate coming from the same domain has equal utility, so it can
    // only live in the equal-utility run just before the insertion point.
    for (std::size_t i = position; i > 0; --i) {
        const Bid& b = sorted_plan[i - 1];
        if (b.utility != candidate.utility) break;
        if (b.id == candidate.id) throw CandidateAlreadyInPlanError(candidate.id);
    }
    const double delta = report.survival_before(position) * candidate.acceptance_probability *
                         (candidate.utility - report.suffix_value[position]);
    return {delta, position};
}

}  // namespace rvplan
