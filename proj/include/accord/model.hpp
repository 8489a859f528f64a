#pragma once

#include "accord/rational.hpp"

#include <set>
#include <string>
#include <vector>

namespace accord {

// A hidden-action principal-agent instance: action costs, outcome rewards,
// and a row-stochastic outcome distribution per action. Immutable once
// built; all operations below are pure functions of it.
//
// Conventions: actions and outcomes are 0-based in this API. Costs and
// rewards are expected non-decreasing, and on a full instance action 0 has
// zero cost (see validate_instance).
struct Instance {
    std::vector<Rational> costs;
    std::vector<Rational> rewards;
    std::vector<std::vector<Rational>> probs;
    std::string provenance;  // generator tag, empty for hand-built instances

    int num_actions() const { return static_cast<int>(costs.size()); }
    int num_outcomes() const { return static_cast<int>(rewards.size()); }

    bool operator==(const Instance& o) const {
        return costs == o.costs && rewards == o.rewards && probs == o.probs;
    }
};

// View of an instance restricted to a subset of actions. Original action
// indices are preserved: every operation keyed by action takes ids of the
// base instance.
class Subinstance {
public:
    Subinstance(const Instance& base, std::vector<int> actions);

    const Instance& base() const { return *base_; }
    const std::vector<int>& actions() const { return actions_; }
    bool contains(int action) const;
    int num_outcomes() const { return base_->num_outcomes(); }

private:
    const Instance* base_;
    std::vector<int> actions_;  // ascending, unique
};

// One payment per outcome; limited liability requires every entry >= 0.
struct PaymentFunction {
    std::vector<Rational> payments;

    int size() const { return static_cast<int>(payments.size()); }
    bool operator==(const PaymentFunction& o) const { return payments == o.payments; }
    bool operator<(const PaymentFunction& o) const { return payments < o.payments; }
};

struct ClassicContract {
    PaymentFunction t;
    int action = 0;
};

// Multiset of payment functions plus a recommended action. The support is
// kept in construction order; equality compares the sorted multiset.
struct AmbiguousContract {
    std::vector<PaymentFunction> support;
    int action = 0;

    int k() const { return static_cast<int>(support.size()); }
    std::vector<PaymentFunction> canonical_support() const;
    bool operator==(const AmbiguousContract& o) const;
};

// Assignment of a ground set of action indices to k labeled blocks; empty
// blocks are allowed. Blocks hold ascending indices.
struct Partition {
    std::vector<std::vector<int>> blocks;

    int k() const { return static_cast<int>(blocks.size()); }
    bool operator==(const Partition& o) const { return blocks == o.blocks; }
};

struct Violation {
    std::string rule;
    std::string location;
    std::string message;
};

Rational expected_reward(const Instance& inst, int action);
Rational welfare(const Instance& inst, int action);
Rational expected_payment(const Instance& inst, int action, const PaymentFunction& t);
Rational agent_utility(const Instance& inst, int action, const PaymentFunction& t);
Rational principal_utility(const Instance& inst, int action, const PaymentFunction& t);
Rational agent_utility_ambiguous(const Instance& inst, int action, const AmbiguousContract& tau);

Rational expected_reward(const Subinstance& sub, int action);
Rational welfare(const Subinstance& sub, int action);
Rational expected_payment(const Subinstance& sub, int action, const PaymentFunction& t);
Rational agent_utility(const Subinstance& sub, int action, const PaymentFunction& t);
Rational principal_utility(const Subinstance& sub, int action, const PaymentFunction& t);

// Argmax set of the worst-case agent utility; never empty on a non-empty
// action set. Ties are reported in full, callers break them.
std::vector<int> best_responses(const Instance& inst, const AmbiguousContract& tau);
std::vector<int> best_responses(const Subinstance& sub, const AmbiguousContract& tau);

// Consistency: every support member yields the same principal utility at
// the recommended action. IC additionally requires the recommended action
// to be a best response.
bool is_consistent(const Instance& inst, const AmbiguousContract& tau, int action);
bool is_ic(const Instance& inst, const AmbiguousContract& tau, int action);
bool is_ic(const Subinstance& sub, const AmbiguousContract& tau, int action);

// t protects `action` against every action in `against`:
// U_A(i' | t) <= U_A(action | t) for all i' in `against`.
bool protects(const Instance& inst, const PaymentFunction& t, int action,
              const std::vector<int>& against);

// Empty iff row sums are exactly 1, all probabilities and payments-relevant
// quantities are non-negative, costs and rewards are non-decreasing, and
// the first action has zero cost. Each violation names rule and location.
std::vector<Violation> validate_instance(const Instance& inst);

// Monotone payment: non-decreasing in the (reward-sorted) outcome index.
bool is_monotone_payment(const Instance& inst, const PaymentFunction& t);

struct NormalizedInstance {
    Instance instance;
    std::vector<int> action_perm;   // action_perm[new] = old index
    std::vector<int> outcome_perm;  // outcome_perm[new] = old index
};

// Stable re-sort of actions by cost and outcomes by reward. Validation
// never re-sorts; generators that need sorted output call this and keep
// the permutation to recover the original roles.
NormalizedInstance normalize_instance(const Instance& inst);

void check_action(const Instance& inst, int action);
void check_payment(const Instance& inst, const PaymentFunction& t);

}  // namespace accord
