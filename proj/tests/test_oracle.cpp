#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "rvplan/evaluator.hpp"
#include "rvplan/generators.hpp"
#include "rvplan/oracle.hpp"
#include "test_support.hpp"

using namespace rvplan;

namespace {

// Second, structurally different enumeration: every subset (bitmask) in
// sorted order only.  Used to cross-check the ordered-sequence enumeration.
double best_over_sorted_subsets(const PlanningProblem& problem) {
    const std::size_t n = problem.domain.size();
    const std::size_t max_len =
        std::min<std::size_t>(static_cast<std::size_t>(problem.deadline), n);
    double best = problem.reservation_value;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > max_len) continue;
        std::vector<Bid> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) subset.push_back(problem.domain.bids[i]);
        std::stable_sort(subset.begin(), subset.end(),
                         [](const Bid& a, const Bid& b) { return a.utility > b.utility; });
        best = std::max(best, expected_utility(subset, problem.reservation_value));
    }
    return best;
}

}  // namespace

TEST_CASE("oracle picks Fast food for one round without a fallback") {
    const BidPlan plan = plan_bruteforce(test::dinner_problem(0.0, 1));
    CHECK(plan.sequence == std::vector<BidId>{2});
    CHECK_THAT(plan.expected_utility, Catch::Matchers::WithinAbs(0.27, 1e-12));
}

TEST_CASE("oracle solves the three-round dinner problem") {
    const BidPlan plan = plan_bruteforce(test::dinner_problem(0.2, 3));
    CHECK(plan.sequence == std::vector<BidId>{1, 0, 2});
    CHECK_THAT(plan.expected_utility, Catch::Matchers::WithinAbs(0.4792, 1e-12));
}

TEST_CASE("a lone dominated bid leaves the empty plan") {
    NegotiationDomain domain;
    domain.bids.push_back(Bid{0, "", 0.3, 0.9});
    const PlanningProblem problem{domain, 0.5, 2};
    const BidPlan plan = plan_bruteforce(problem);
    CHECK(plan.sequence.empty());
    CHECK(plan.expected_utility == 0.5);
}

TEST_CASE("oracle guards reject oversized instances") {
    const PlanningProblem big = random_problem(11, RvMode::fixed(0.1), 3, 1);
    CHECK_THROWS_AS(plan_bruteforce(big), InstanceTooLargeError);
    const PlanningProblem deep = random_problem(4, RvMode::fixed(0.1), 7, 1);
    CHECK_THROWS_AS(plan_bruteforce(deep), InstanceTooLargeError);
    CHECK_NOTHROW(plan_bruteforce(deep, OracleLimits{10, 8}));
}

TEST_CASE("ordered-sequence and sorted-subset enumerations agree") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const PlanningProblem problem =
            random_problem(1 + seed % 7, RvMode::uniform(), 1 + static_cast<int>(seed % 5), seed,
                           seed % 2 == 0 ? Correlation::independent : Correlation::inverse);
        const BruteforceResult result = plan_bruteforce_detailed(problem);
        const double subset_best = best_over_sorted_subsets(problem);
        CHECK_THAT(result.plan.expected_utility,
                   Catch::Matchers::WithinAbs(subset_best, 1e-12));
        CHECK_THAT(result.max_over_all_orderings,
                   Catch::Matchers::WithinAbs(subset_best, 1e-12));
    }
}

TEST_CASE("oracle value agrees with the evaluator on its own plan") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const PlanningProblem problem =
            random_problem(2 + seed % 6, RvMode::uniform(), 1 + static_cast<int>(seed % 4), seed);
        const BidPlan plan = plan_bruteforce(problem);
        const std::vector<Bid> bids = resolve_sequence(problem.domain, plan.sequence);
        // Direct summation vs backward recurrence: independent routes.
        CHECK_THAT(plan.expected_utility,
                   Catch::Matchers::WithinAbs(expected_utility(bids, problem.reservation_value),
                                              1e-12));
    }
}

TEST_CASE("oracle plans satisfy the plan invariants") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const PlanningProblem problem =
            random_problem(2 + seed % 7, RvMode::uniform(), 1 + static_cast<int>(seed % 5), seed);
        CHECK_NOTHROW(check_plan_invariants(plan_bruteforce(problem), problem));
    }
}

TEST_CASE("oracle never returns dominated bids") {
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const PlanningProblem problem =
            random_problem(2 + seed % 7, RvMode::uniform(), 1 + static_cast<int>(seed % 5), seed);
        const BidPlan plan = plan_bruteforce(problem);
        for (BidId id : plan.sequence)
            CHECK(problem.domain.find(id)->utility > problem.reservation_value);
    }
}

TEST_CASE("sorted dominance holds for the dinner bids") {
    const std::vector<Bid> bids{test::sushi(), test::italian(), test::fastfood()};
    CHECK(verify_sorted_dominance(bids, 0.2));
}

TEST_CASE("sorted dominance is trivial for singletons") {
    const std::vector<Bid> one{test::sushi()};
    CHECK(verify_sorted_dominance(one, 0.4));
}

TEST_CASE("equal-utility pairs tie and both orderings attain the max") {
    const Bid a{0, "", 0.6, 0.3};
    const Bid b{1, "", 0.6, 0.8};
    const std::vector<Bid> ab{a, b};
    const std::vector<Bid> ba{b, a};
    CHECK(verify_sorted_dominance(ab, 0.1));
    CHECK_THAT(direct_expected_utility(ab, 0.1),
               Catch::Matchers::WithinAbs(direct_expected_utility(ba, 0.1), 1e-12));
}

TEST_CASE("sorted dominance guard rejects large sets") {
    rng::SplitMix64 gen(42);
    const std::vector<Bid> bids = test::random_bid_set(gen, 7);
    CHECK_THROWS_AS(verify_sorted_dominance(bids, 0.2), InstanceTooLargeError);
}
