#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace rvplan {

using BidId = std::uint32_t;

/// One outcome the agent can offer: the agent's own utility for it and the
/// modeled probability that the opponent accepts it.  Immutable value type.
struct Bid {
    BidId id = 0;
    std::string label;  // optional; empty means unnamed
    double utility = 0.0;
    double acceptance_probability = 0.0;

    friend bool operator==(const Bid&, const Bid&) = default;
};

/// The finite set of possible agreements, in canonical (input) order.
struct NegotiationDomain {
    std::vector<Bid> bids;

    std::size_t size() const { return bids.size(); }

    const Bid* find(BidId id) const {
        for (const Bid& b : bids) {
            if (b.id == id) return &b;
        }
        return nullptr;
    }

    friend bool operator==(const NegotiationDomain&, const NegotiationDomain&) = default;
};

/// A domain together with the agent's private reservation value and the
/// number of bidding rounds available before the fallback kicks in.
struct PlanningProblem {
    NegotiationDomain domain;
    double reservation_value = 0.0;
    int deadline = 1;

    friend bool operator==(const PlanningProblem&, const PlanningProblem&) = default;
};

/// An ordered, duplicate-free bid sequence (ids into a domain), sorted by
/// non-increasing utility, plus its expected utility.
struct BidPlan {
    std::vector<BidId> sequence;
    double expected_utility = 0.0;

    friend bool operator==(const BidPlan&, const BidPlan&) = default;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
  public:
    using Error::Error;
};

class DuplicateIdError : public ValidationError {
  public:
    explicit DuplicateIdError(BidId id)
        : ValidationError("duplicate bid id " + std::to_string(id)), id(id) {}
    BidId id;
};

class OutOfRangeError : public ValidationError {
  public:
    OutOfRangeError(std::string field_name, std::optional<BidId> bid_id, double bad_value)
        : ValidationError(describe(field_name, bid_id, bad_value)),
          field(std::move(field_name)),
          id(bid_id),
          value(bad_value) {}

    std::string field;
    std::optional<BidId> id;
    double value;

  private:
    static std::string describe(const std::string& field, std::optional<BidId> id, double value) {
        std::ostringstream os;
        os << field;
        if (id) os << " of bid " << *id;
        os << " is out of range: " << value;
        return os.str();
    }
};

class EmptyDomainError : public ValidationError {
  public:
    EmptyDomainError() : ValidationError("domain contains no bids") {}
};

class UnknownIdError : public ValidationError {
  public:
    explicit UnknownIdError(BidId id)
        : ValidationError("no bid with id " + std::to_string(id)), id(id) {}
    BidId id;
};

inline bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

/// Checks the domain invariants (distinct ids, all values in [0,1], at least
/// one bid) and returns the domain unchanged.  Bid order is preserved.
/// Idempotent.  Bids whose utility falls below a reservation value are legal
/// here; dropping them is the planner's job.
inline NegotiationDomain validate_domain(NegotiationDomain raw) {
    if (raw.bids.empty()) throw EmptyDomainError();
    std::unordered_set<BidId> seen;
    seen.reserve(raw.bids.size());
    for (const Bid& b : raw.bids) {
        if (!seen.insert(b.id).second) throw DuplicateIdError(b.id);
        if (!in_unit_interval(b.utility)) throw OutOfRangeError("utility", b.id, b.utility);
        if (!in_unit_interval(b.acceptance_probability))
            throw OutOfRangeError("acceptance_probability", b.id, b.acceptance_probability);
    }
    return raw;
}

/// Domain plus problem-level invariants (rv in [0,1], deadline >= 1).
inline PlanningProblem validate_problem(PlanningProblem raw) {
    raw.domain = validate_domain(std::move(raw.domain));
    if (!in_unit_interval(raw.reservation_value))
        throw OutOfRangeError("reservation_value", std::nullopt, raw.reservation_value);
    if (raw.deadline < 1)
        throw OutOfRangeError("deadline", std::nullopt, static_cast<double>(raw.deadline));
    return raw;
}

/// Resolves a sequence of ids against a domain, rejecting unknown and
/// duplicate ids.  Order is preserved as given.
inline std::vector<Bid> resolve_sequence(const NegotiationDomain& domain,
                                         std::span<const BidId> ids) {
    std::vector<Bid> out;
    out.reserve(ids.size());
    std::unordered_set<BidId> seen;
    for (BidId id : ids) {
        const Bid* b = domain.find(id);
        if (b == nullptr) throw UnknownIdError(id);
        if (!seen.insert(id).second) throw DuplicateIdError(id);
        out.push_back(*b);
    }
    return out;
}

/// Asserts the BidPlan invariants against the problem that produced it.
inline void check_plan_invariants(const BidPlan& plan, const PlanningProblem& problem) {
    const std::size_t n = problem.domain.size();
    const std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(problem.deadline), n);
    if (plan.sequence.size() > cap)
        throw ValidationError("plan length exceeds min(deadline, n)");
    std::vector<Bid> bids = resolve_sequence(problem.domain, plan.sequence);
    for (std::size_t i = 0; i + 1 < bids.size(); ++i) {
        if (bids[i].utility < bids[i + 1].utility)
            throw ValidationError("plan utilities are not non-increasing");
    }
    for (const Bid& b : bids) {
        if (b.utility < problem.reservation_value)
            throw ValidationError("plan contains a bid below the reservation value");
    }
    if (plan.expected_utility < problem.reservation_value - 1e-12 ||
        plan.expected_utility > 1.0 + 1e-12)
        throw ValidationError("plan expected utility outside [rv, 1]");
}

}  // namespace rvplan
