#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "rvplan/core.hpp"

namespace rvplan {

namespace rng {

/// SplitMix64 finalizer; full 64-bit avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Tiny counter-advanced generator.  A stream keyed by (seed, counter) is
/// independent of every other stream, so trials can be generated in any
/// order and on any thread with identical results.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t counter) {
    return SplitMix64(mix64(seed) ^ mix64(counter ^ 0xd1b54a32d192ed03ull));
}

}  // namespace rng

/// Monte Carlo estimate of the utility a fixed plan achieves against the
/// static accept/reject opponent.
struct SimulationResult {
    std::uint64_t trials = 0;
    double mean_utility = 0.0;
    double std_error = 0.0;
    double agreement_rate = 0.0;
    /// acceptance_counts[i] = trials that ended with bid i accepted.
    std::vector<std::uint64_t> acceptance_counts;
    std::uint64_t seed = 0;

    std::uint64_t agreements() const {
        std::uint64_t total = 0;
        for (std::uint64_t c : acceptance_counts) total += c;
        return total;
    }

    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

class InvalidTrialCountError : public ValidationError {
  public:
    InvalidTrialCountError() : ValidationError("trials must be >= 1") {}
};

/// Thread count for parallel scans: an explicit request wins, otherwise the
/// RVPLAN_THREADS environment variable, otherwise single-threaded.
inline unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RVPLAN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

namespace detail {

/// Outcome tallies for a range of trials.  A trial either ends at the first
/// accepted position or falls through to the reservation value, so integer
/// counts fully describe the empirical distribution; merging counts is
/// exact and order-independent, which is what makes the result bit-identical
/// for any thread count.
struct TrialCounts {
    std::vector<std::uint64_t> accepted_at;  // per plan position
    std::uint64_t rejected_all = 0;

    void merge(const TrialCounts& other) {
        for (std::size_t i = 0; i < accepted_at.size(); ++i) accepted_at[i] += other.accepted_at[i];
        rejected_all += other.rejected_all;
    }
};

inline TrialCounts run_trials(std::span<const Bid> plan, std::uint64_t seed,
                              std::uint64_t first_trial, std::uint64_t count) {
    TrialCounts counts;
    counts.accepted_at.assign(plan.size(), 0);
    for (std::uint64_t t = first_trial; t < first_trial + count; ++t) {
        rng::SplitMix64 stream = rng::substream(seed, t);
        bool accepted = false;
        for (std::size_t i = 0; i < plan.size(); ++i) {
            if (stream.uniform01() < plan[i].acceptance_probability) {
                ++counts.accepted_at[i];
                accepted = true;
                break;
            }
        }
        if (!accepted) ++counts.rejected_all;
    }
    return counts;
}

}  // namespace detail

/// Runs `trials` independent walks of the plan: bid i is accepted with
/// probability a_i, acceptance ends the trial with utility u_i, full
/// rejection yields the reservation value.  Mean and the unbiased standard
/// error are derived from the per-position outcome counts.  Deterministic
/// for a fixed seed regardless of `threads` (each trial draws from its own
/// (seed, trial index) substream).
inline SimulationResult simulate(std::span<const Bid> plan, double reservation_value,
                                 std::uint64_t trials, std::uint64_t seed, unsigned threads = 0) {
    if (trials < 1) throw InvalidTrialCountError();

    const unsigned nthreads = resolve_thread_count(threads);
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t nblocks = (trials + kBlock - 1) / kBlock;

    detail::TrialCounts total;
    total.accepted_at.assign(plan.size(), 0);

    if (nthreads <= 1 || nblocks <= 1) {
        total = detail::run_trials(plan, seed, 0, trials);
    } else {
        std::atomic<std::uint64_t> next_block{0};
        std::mutex merge_mutex;
        auto worker = [&]() {
            detail::TrialCounts local;
            local.accepted_at.assign(plan.size(), 0);
            for (;;) {
                const std::uint64_t b = next_block.fetch_add(1);
                if (b >= nblocks) break;
                const std::uint64_t first = b * kBlock;
                const std::uint64_t count = std::min(kBlock, trials - first);
                local.merge(detail::run_trials(plan, seed, first, count));
            }
            const std::lock_guard<std::mutex> lock(merge_mutex);
            total.merge(local);
        };
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    SimulationResult result;
    result.trials = trials;
    result.seed = seed;
    result.acceptance_counts = total.accepted_at;

    const double n = static_cast<double>(trials);
    std::uint64_t agreements = 0;
    double mean = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        agreements += total.accepted_at[i];
        mean += (static_cast<double>(total.accepted_at[i]) / n) * plan[i].utility;
    }
    mean += (static_cast<double>(total.rejected_all) / n) * reservation_value;
    result.mean_utility = mean;
    result.agreement_rate = static_cast<double>(agreements) / n;

    if (trials > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < plan.size(); ++i) {
            const double d = plan[i].utility - mean;
            ss += static_cast<double>(total.accepted_at[i]) * d * d;
        }
        const double dr = reservation_value - mean;
        ss += static_cast<double>(total.rejected_all) * dr * dr;
        const double sample_variance = ss / (n - 1.0);
        result.std_error = std::sqrt(sample_variance / n);
    } else {
        result.std_error = 0.0;
    }
    return result;
}

}  // namespace rvplan
