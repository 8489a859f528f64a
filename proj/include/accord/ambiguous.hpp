#pragma once

#include "accord/lp.hpp"
#include "accord/model.hpp"
#include "accord/rational.hpp"

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace accord {

struct SolveOptions {
    bool monotone = false;
    unsigned long long partition_ceiling = 1'000'000;
    bool force = false;  // enumerate past the ceiling anyway
    int threads = 1;
};

// Raised before any LP work when a solve would enumerate more partitions
// than the configured ceiling; carries the exact count.
class PartitionCeilingExceeded : public std::runtime_error {
public:
    PartitionCeilingExceeded(std::string count, unsigned long long ceiling)
        : std::runtime_error("partition count " + count + " exceeds ceiling " +
                             std::to_string(ceiling) + "; pass force to proceed"),
          count_(std::move(count)) {}
    const std::string& count() const { return count_; }

private:
    std::string count_;
};

// Raised when the multiplicative balancing variant cannot produce an IC
// contract (it is only sound in the unrestricted singleton regime).
class BalanceError : public std::runtime_error {
public:
    explicit BalanceError(const std::string& what) : std::runtime_error(what) {}
};

class GapUndefined : public std::runtime_error {
public:
    explicit GapUndefined(const std::string& what) : std::runtime_error(what) {}
};

// Additive balancing: lifts every payment function by a uniform amount so
// all of them give the same expected payment theta = max_j T_i(t^j) for the
// recommended action. Uniform shifts preserve all utility differences, so
// if the inputs protect the action against a partition the result is IC.
AmbiguousContract balance(const Instance& inst, int action,
                          const std::vector<PaymentFunction>& ts);

// Multiplicative balancing of single-outcome payment functions: scales each
// SOP by theta / T_i(t^j) >= 1. Throws BalanceError when an input is not an
// SOP, pays nothing in expectation, or when the scaled collection fails IC.
AmbiguousContract balance_multiplicative_sop(const Instance& inst, int action,
                                             const std::vector<PaymentFunction>& sops);

// Stirling number of the second kind S(n, k).
mpz_class stirling2(int n, int k);

// Number of partitions of a ground set of the given size into at most k
// non-empty blocks (the stream below yields exactly this many).
mpz_class partition_count(int ground_size, int k);

// Streams every partition of `ground` into at most k non-empty blocks
// exactly once, in restricted-growth-string order, padded with empty
// blocks to exactly k. An empty ground set yields one partition of k
// empty blocks.
class PartitionStream {
public:
    PartitionStream(std::vector<int> ground, int k);
    std::optional<Partition> next();

private:
    Partition current() const;

    std::vector<int> ground_;
    int k_;
    std::vector<int> rgs_;
    bool first_ = true;
    bool done_ = false;
};

std::vector<Partition> all_partitions(std::vector<int> ground, int k);

// Optimal IC k-ambiguous contract for the action with respect to one fixed
// partition of the other actions: per-block (monotone) min-pay contracts,
// then additive balancing. Empty iff some block's LP is infeasible. Empty
// blocks contribute the zero payment function.
std::optional<AmbiguousContract> optimal_for_partition(const Instance& inst, int action,
                                                       const Partition& partition, bool monotone);

struct ActionOptimum {
    AmbiguousContract contract;
    Partition partition;
    Rational payment;
    Rational utility;
    unsigned long long partitions_examined = 0;
};

// Minimizes the expected payment over all partitions of the other actions
// into at most k blocks; ties go to the first partition in enumeration
// order. Empty iff no partition admits protection.
std::optional<ActionOptimum> optimal_for_action(const Instance& inst, int action, int k,
                                                const SolveOptions& opts = {});

struct ActionSummary {
    int action = 0;
    bool implementable = false;
    Rational utility;
    Rational payment;
};

struct SolveReport {
    int k = 1;
    bool monotone = false;
    std::optional<AmbiguousContract> contract;
    Rational principal_utility;
    Rational expected_payment;
    std::optional<Partition> winning_partition;
    unsigned long long partitions_examined = 0;
    std::vector<ActionSummary> actions;
};

// Global optimum: best action by principal utility, ties to the lowest
// action index.
SolveReport optimal_contract(const Instance& inst, int k, const SolveOptions& opts = {});

// True iff some partition into at most k blocks protects the action; stops
// at the first feasible partition.
bool is_implementable_k(const Instance& inst, int action, int k, bool monotone = false,
                        const SolveOptions& opts = {});

// Unrestricted (k = n-1) optimum through the all-singletons partition;
// splitting blocks never hurts, so this path is polynomial.
std::optional<ActionOptimum> optimal_unrestricted_for_action(const Instance& inst, int action,
                                                             bool monotone = false);
SolveReport optimal_unrestricted(const Instance& inst, bool monotone = false);

// Best linear contract (payments alpha * reward) on a subinstance, with the
// recommended action chosen in the principal's favor among agent ties.
struct LinearContractChoice {
    PaymentFunction t;
    int action = 0;
    Rational alpha;
    Rational utility;
};
LinearContractChoice best_linear_contract(const Subinstance& sub);

// Polynomial-time IC k-ambiguous contract whose principal utility is at
// least 1/(n-k) of the optimal unrestricted ambiguous utility. Augments a
// classic contract on the low-cost subinstance with either unrestricted
// protection functions or a constant payment, then balances.
AmbiguousContract approx_contract(const Instance& inst, int k);

// Ratio of the optimal k-ambiguous to the optimal unrestricted principal
// utility. Throws GapUndefined when the unrestricted optimum is zero.
Rational succinctness_gap(const Instance& inst, int k, const SolveOptions& opts = {});

// JSON serialization of a report; action and outcome indices are 1-based
// on this surface, all rationals are exact "p/q" strings.
std::string solve_report_to_json(const SolveReport& report, int indent = -1);

}  // namespace accord
