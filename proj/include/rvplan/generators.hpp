#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "rvplan/core.hpp"
#include "rvplan/simulator.hpp"

namespace rvplan {

class InvalidParamsError : public Error {
  public:
    explicit InvalidParamsError(const std::string& what_arg) : Error(what_arg) {}
};

/// How the generated problem's reservation value is chosen.
struct RvMode {
    static RvMode fixed(double v) { return RvMode{false, v}; }
    static RvMode uniform() { return RvMode{true, 0.0}; }

    bool draw_uniform = false;
    double value = 0.0;
};

enum class Correlation {
    /// Utility and acceptance probability drawn independently.
    independent,
    /// a = 1 - u plus uniform noise in [-0.1, 0.1], clamped to [0, 1]:
    /// attractive bids are the hard sells.
    inverse,
};

/// Seeded random problem instance: n bids with uniform utilities, acceptance
/// probabilities per `correlation`, ids 0..n-1.  Deterministic per seed.
inline PlanningProblem random_problem(std::size_t n, RvMode rv_mode, int deadline,
                                      std::uint64_t seed,
                                      Correlation correlation = Correlation::independent) {
    if (n < 1) throw InvalidParamsError("n must be >= 1");
    if (deadline < 1) throw InvalidParamsError("deadline must be >= 1");
    if (!rv_mode.draw_uniform && !in_unit_interval(rv_mode.value))
        throw InvalidParamsError("fixed reservation value must be in [0, 1]");

    rng::SplitMix64 gen(rng::mix64(seed));
    PlanningProblem problem;
    problem.domain.bids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Bid b;
        b.id = static_cast<BidId>(i);
        b.utility = gen.uniform01();
        if (correlation == Correlation::independent) {
            b.acceptance_probability = gen.uniform01();
        } else {
            const double noise = gen.uniform01() * 0.2 - 0.1;
            b.acceptance_probability = std::clamp(1.0 - b.utility + noise, 0.0, 1.0);
        }
        problem.domain.bids.push_back(std::move(b));
    }
    problem.reservation_value = rv_mode.draw_uniform ? gen.uniform01() : rv_mode.value;
    problem.deadline = deadline;
    return problem;
}

}  // namespace rvplan
