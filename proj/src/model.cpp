#include "accord/model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace accord {

void check_action(const Instance& inst, int action) {
    if (action < 0 || action >= inst.num_actions())
        throw std::out_of_range("action index " + std::to_string(action) + " out of range");
}

void check_payment(const Instance& inst, const PaymentFunction& t) {
    if (t.size() != inst.num_outcomes())
        throw std::invalid_argument("payment function length " + std::to_string(t.size()) +
                                    " does not match outcome count " +
                                    std::to_string(inst.num_outcomes()));
}

Subinstance::Subinstance(const Instance& base, std::vector<int> actions)
    : base_(&base), actions_(std::move(actions)) {
    if (actions_.empty()) throw std::invalid_argument("subinstance needs at least one action");
    std::sort(actions_.begin(), actions_.end());
    actions_.erase(std::unique(actions_.begin(), actions_.end()), actions_.end());
    for (int a : actions_) check_action(base, a);
}

bool Subinstance::contains(int action) const {
    return std::binary_search(actions_.begin(), actions_.end(), action);
}

std::vector<PaymentFunction> AmbiguousContract::canonical_support() const {
    std::vector<PaymentFunction> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

bool AmbiguousContract::operator==(const AmbiguousContract& o) const {
    return action == o.action && canonical_support() == o.canonical_support();
}

Rational expected_reward(const Instance& inst, int action) {
    check_action(inst, action);
    Rational sum;
    for (int j = 0; j < inst.num_outcomes(); ++j) sum += inst.probs[action][j] * inst.rewards[j];
    return sum;
}

Rational welfare(const Instance& inst, int action) {
    return expected_reward(inst, action) - inst.costs[action];
}

Rational expected_payment(const Instance& inst, int action, const PaymentFunction& t) {
    check_action(inst, action);
    check_payment(inst, t);
    Rational sum;
    for (int j = 0; j < inst.num_outcomes(); ++j) sum += inst.probs[action][j] * t.payments[j];
    return sum;
}

Rational agent_utility(const Instance& inst, int action, const PaymentFunction& t) {
    return expected_payment(inst, action, t) - inst.costs[action];
}

Rational principal_utility(const Instance& inst, int action, const PaymentFunction& t) {
    return expected_reward(inst, action) - expected_payment(inst, action, t);
}

Rational agent_utility_ambiguous(const Instance& inst, int action, const AmbiguousContract& tau) {
    if (tau.support.empty()) throw std::invalid_argument("ambiguous contract with empty support");
    Rational best = agent_utility(inst, action, tau.support.front());
    for (size_t idx = 1; idx < tau.support.size(); ++idx) {
        Rational u = agent_utility(inst, action, tau.support[idx]);
        if (u < best) best = u;
    }
    return best;
}

namespace {

std::vector<int> argmax_ambiguous(const Instance& inst, const std::vector<int>& actions,
                                  const AmbiguousContract& tau) {
    std::vector<int> arg;
    Rational best;
    bool have = false;
    for (int a : actions) {
        Rational u = agent_utility_ambiguous(inst, a, tau);
        if (!have || u > best) {
            best = u;
            arg = {a};
            have = true;
        } else if (u == best) {
            arg.push_back(a);
        }
    }
    return arg;
}

}  // namespace

std::vector<int> best_responses(const Instance& inst, const AmbiguousContract& tau) {
    std::vector<int> all(inst.num_actions());
    std::iota(all.begin(), all.end(), 0);
    return argmax_ambiguous(inst, all, tau);
}

std::vector<int> best_responses(const Subinstance& sub, const AmbiguousContract& tau) {
    return argmax_ambiguous(sub.base(), sub.actions(), tau);
}

bool is_consistent(const Instance& inst, const AmbiguousContract& tau, int action) {
    if (tau.support.empty()) throw std::invalid_argument("ambiguous contract with empty support");
    Rational first = principal_utility(inst, action, tau.support.front());
    for (size_t idx = 1; idx < tau.support.size(); ++idx)
        if (principal_utility(inst, action, tau.support[idx]) != first) return false;
    return true;
}

bool is_ic(const Instance& inst, const AmbiguousContract& tau, int action) {
    if (!is_consistent(inst, tau, action)) return false;
    std::vector<int> br = best_responses(inst, tau);
    return std::find(br.begin(), br.end(), action) != br.end();
}

bool is_ic(const Subinstance& sub, const AmbiguousContract& tau, int action) {
    if (!sub.contains(action)) throw std::out_of_range("action not in subinstance");
    if (!is_consistent(sub.base(), tau, action)) return false;
    std::vector<int> br = best_responses(sub, tau);
    return std::find(br.begin(), br.end(), action) != br.end();
}

bool protects(const Instance& inst, const PaymentFunction& t, int action,
              const std::vector<int>& against) {
    Rational ua = agent_utility(inst, action, t);
    for (int other : against)
        if (agent_utility(inst, other, t) > ua) return false;
    return true;
}

Rational expected_reward(const Subinstance& sub, int action) {
    if (!sub.contains(action)) throw std::out_of_range("action not in subinstance");
    return expected_reward(sub.base(), action);
}

Rational welfare(const Subinstance& sub, int action) {
    if (!sub.contains(action)) throw std::out_of_range("action not in subinstance");
    return welfare(sub.base(), action);
}

Rational expected_payment(const Subinstance& sub, int action, const PaymentFunction& t) {
    if (!sub.contains(action)) throw std::out_of_range("action not in subinstance");
    return expected_payment(sub.base(), action, t);
}

Rational agent_utility(const Subinstance& sub, int action, const PaymentFunction& t) {
    if (!sub.contains(action)) throw std::out_of_range("action not in subinstance");
    return agent_utility(sub.base(), action, t);
}

Rational principal_utility(const Subinstance& sub, int action, const PaymentFunction& t) {
    if (!sub.contains(action)) throw std::out_of_range("action not in subinstance");
    return principal_utility(sub.base(), action, t);
}

std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out;
    const int n = inst.num_actions();
    const int m = inst.num_outcomes();
    if (n == 0) out.push_back({"shape", "costs", "instance has no actions"});
    if (m == 0) out.push_back({"shape", "rewards", "instance has no outcomes"});
    if (static_cast<int>(inst.probs.size()) != n) {
        out.push_back({"shape", "probs",
                       "expected " + std::to_string(n) + " probability rows, got " +
                           std::to_string(inst.probs.size())});
        return out;
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(inst.probs[i].size()) != m) {
            out.push_back({"shape", "probs[" + std::to_string(i + 1) + "]",
                           "row length " + std::to_string(inst.probs[i].size()) +
                               " does not match outcome count " + std::to_string(m)});
            continue;
        }
        Rational sum;
        for (int j = 0; j < m; ++j) {
            if (inst.probs[i][j].sign() < 0)
                out.push_back({"negative-prob",
                               "probs[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]",
                               "probability " + inst.probs[i][j].str() + " is negative"});
            sum += inst.probs[i][j];
        }
        if (sum != Rational(1))
            out.push_back({"row-sum", "probs[" + std::to_string(i + 1) + "]",
                           "row sums to " + sum.str() + ", expected 1"});
    }
    for (int i = 0; i < n; ++i)
        if (inst.costs[i].sign() < 0)
            out.push_back({"negative-cost", "costs[" + std::to_string(i + 1) + "]",
                           "cost " + inst.costs[i].str() + " is negative"});
    for (int j = 0; j < m; ++j)
        if (inst.rewards[j].sign() < 0)
            out.push_back({"negative-reward", "rewards[" + std::to_string(j + 1) + "]",
                           "reward " + inst.rewards[j].str() + " is negative"});
    for (int i = 0; i + 1 < n; ++i)
        if (inst.costs[i] > inst.costs[i + 1])
            out.push_back({"costs-sorted", "costs[" + std::to_string(i + 2) + "]",
                           "cost " + inst.costs[i + 1].str() + " is below its predecessor " +
                               inst.costs[i].str()});
    for (int j = 0; j + 1 < m; ++j)
        if (inst.rewards[j] > inst.rewards[j + 1])
            out.push_back({"rewards-sorted", "rewards[" + std::to_string(j + 2) + "]",
                           "reward " + inst.rewards[j + 1].str() + " is below its predecessor " +
                               inst.rewards[j].str()});
    if (n > 0 && !inst.costs[0].is_zero())
        out.push_back({"null-action", "costs[1]",
                       "first action must cost 0, got " + inst.costs[0].str()});
    return out;
}

bool is_monotone_payment(const Instance& inst, const PaymentFunction& t) {
    check_payment(inst, t);
    for (int j = 0; j + 1 < t.size(); ++j)
        if (t.payments[j] > t.payments[j + 1]) return false;
    return true;
}

NormalizedInstance normalize_instance(const Instance& inst) {
    NormalizedInstance out;
    const int n = inst.num_actions();
    const int m = inst.num_outcomes();
    out.action_perm.resize(n);
    out.outcome_perm.resize(m);
    std::iota(out.action_perm.begin(), out.action_perm.end(), 0);
    std::iota(out.outcome_perm.begin(), out.outcome_perm.end(), 0);
    std::stable_sort(out.action_perm.begin(), out.action_perm.end(),
                     [&](int a, int b) { return inst.costs[a] < inst.costs[b]; });
    std::stable_sort(out.outcome_perm.begin(), out.outcome_perm.end(),
                     [&](int a, int b) { return inst.rewards[a] < inst.rewards[b]; });
    out.instance.provenance = inst.provenance;
    out.instance.costs.reserve(n);
    out.instance.rewards.reserve(m);
    for (int i = 0; i < n; ++i) out.instance.costs.push_back(inst.costs[out.action_perm[i]]);
    for (int j = 0; j < m; ++j) out.instance.rewards.push_back(inst.rewards[out.outcome_perm[j]]);
    out.instance.probs.resize(n);
    for (int i = 0; i < n; ++i) {
        out.instance.probs[i].reserve(m);
        for (int j = 0; j < m; ++j)
            out.instance.probs[i].push_back(inst.probs[out.action_perm[i]][out.outcome_perm[j]]);
    }
    return out;
}

}  // namespace accord
