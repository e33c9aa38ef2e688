#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "rvplan/evaluator.hpp"
#include "rvplan/simulator.hpp"
#include "test_support.hpp"

using namespace rvplan;

TEST_CASE("certain acceptance yields the bid utility exactly") {
    const std::vector<Bid> plan{Bid{0, "", 0.6, 1.0}};
    const SimulationResult r = simulate(plan, 0.0, 777, 5);
    CHECK(r.mean_utility == 0.6);
    CHECK(r.std_error == 0.0);
    CHECK(r.agreement_rate == 1.0);
    CHECK(r.acceptance_counts == std::vector<std::uint64_t>{777});
}

TEST_CASE("empty plans always yield the reservation value") {
    const SimulationResult r = simulate({}, 0.2, 10, 3);
    CHECK(r.mean_utility == 0.2);
    CHECK(r.std_error == 0.0);
    CHECK(r.agreement_rate == 0.0);
    CHECK(r.acceptance_counts.empty());
    CHECK(r.trials == 10);
}

TEST_CASE("a single trial reports zero standard error") {
    const std::vector<Bid> plan{test::sushi()};
    const SimulationResult r = simulate(plan, 0.2, 1, 9);
    CHECK(r.std_error == 0.0);
    CHECK(r.trials == 1);
}

TEST_CASE("zero trials are rejected") {
    CHECK_THROWS_AS(simulate({}, 0.2, 0, 1), InvalidTrialCountError);
}

TEST_CASE("acceptance counts add up to the agreements") {
    const std::vector<Bid> plan{test::sushi(), test::italian(), test::fastfood()};
    const SimulationResult r = simulate(plan, 0.2, 20000, 11);
    const double recovered = r.agreement_rate * static_cast<double>(r.trials);
    CHECK(std::llround(recovered) == static_cast<long long>(r.agreements()));
    CHECK(std::fabs(recovered - static_cast<double>(r.agreements())) < 1e-6);
    CHECK(r.agreements() <= r.trials);
}

TEST_CASE("identical inputs give bit-identical results for any thread count") {
    const std::vector<Bid> plan{test::sushi(), test::italian(), test::fastfood()};
    const SimulationResult base = simulate(plan, 0.2, 50000, 31, 1);
    for (unsigned threads : {2u, 3u, 8u}) {
        const SimulationResult r = simulate(plan, 0.2, 50000, 31, threads);
        CHECK(r == base);
    }
}

TEST_CASE("different seeds shuffle the outcomes") {
    const std::vector<Bid> plan{test::sushi(), test::italian()};
    const SimulationResult a = simulate(plan, 0.2, 10000, 1);
    const SimulationResult b = simulate(plan, 0.2, 10000, 2);
    CHECK(a.acceptance_counts != b.acceptance_counts);
}

TEST_CASE("sample mean converges to the analytic expected utility") {
    const std::vector<Bid> plan{test::sushi(), test::italian(), test::fastfood()};
    const double analytic = expected_utility(plan, 0.2);
    int within = 0;
    const int runs = 60;
    for (int s = 0; s < runs; ++s) {
        const SimulationResult r = simulate(plan, 0.2, 10000, static_cast<std::uint64_t>(s));
        if (std::fabs(r.mean_utility - analytic) <= 4.0 * r.std_error) ++within;
    }
    CHECK(within >= runs - 1);
}

TEST_CASE("agreement rate converges to one minus the survival product") {
    const std::vector<Bid> plan{test::sushi(), test::italian(), test::fastfood()};
    double survival = 1.0;
    for (const Bid& b : plan) survival *= (1.0 - b.acceptance_probability);
    const double expected_rate = 1.0 - survival;  // 0.952
    int within = 0;
    const int runs = 60;
    const std::uint64_t trials = 10000;
    for (int s = 0; s < runs; ++s) {
        const SimulationResult r = simulate(plan, 0.2, trials, static_cast<std::uint64_t>(s) + 100);
        const double se = std::sqrt(expected_rate * (1.0 - expected_rate) /
                                    static_cast<double>(trials));
        if (std::fabs(r.agreement_rate - expected_rate) <= 4.0 * se) ++within;
    }
    CHECK(within >= runs - 1);
}

TEST_CASE("mean utility stays inside the unit interval") {
    rng::SplitMix64 gen(909);
    for (int round = 0; round < 30; ++round) {
        const std::vector<Bid> plan = test::random_bid_set(gen, 1 + gen.next() % 6);
        const SimulationResult r =
            simulate(plan, gen.uniform01(), 500, gen.next());
        CHECK(r.mean_utility >= 0.0);
        CHECK(r.mean_utility <= 1.0);
        CHECK(r.std_error >= 0.0);
    }
}

TEST_CASE("thread count resolution prefers the explicit request") {
    CHECK(resolve_thread_count(4) == 4);
}
