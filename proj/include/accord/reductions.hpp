#pragma once

#include "accord/ambiguous.hpp"
#include "accord/model.hpp"
#include "accord/rational.hpp"

#include <array>
#include <string>
#include <vector>

namespace accord {

struct MakespanInput {
    std::vector<Rational> values;  // all strictly positive
    int machines = 1;
};

// Contract-problem encoding of a makespan instance. Actions are re-sorted
// by cost so the instance validates; the role fields map back to the
// scheduling roles. Outcome 0 carries reward 0 and outcome j+1 carries
// value j; outcomes are never permuted.
struct MakespanInstance {
    Instance instance;
    bool monotone = false;
    int null_action = 0;
    int target_action = 0;
    std::vector<int> value_actions;  // value_actions[j] encodes values[j]
    std::vector<Rational> values;
};

MakespanInstance makespan_to_instance(const MakespanInput& input);
MakespanInstance monotone_makespan_to_instance(const MakespanInput& input);

// Closed-form protection test: plain family t_{j+1} >= t_0 + a_j, monotone
// family t_{j+1} - t_j >= a_j / (n - j). Agrees with the generic agent
// utility comparison on the respective family.
bool protects_value(const MakespanInstance& mi, const PaymentFunction& t, int value_index);

// Partition of the value indices {0..n-1} -> IC ambiguous contract for the
// target action whose expected payment is exactly makespan(partition) / n.
AmbiguousContract partition_to_contract(const MakespanInstance& mi, const Partition& partition);

// Greedy extraction of a makespan-optimal partition from an optimal IC
// contract implementing the target action. Requires optimality: the
// extracted partition's makespan equals n times the contract's payment.
Partition contract_to_makespan_partition(const MakespanInstance& mi, const AmbiguousContract& opt);

Rational makespan_of(const MakespanInput& input, const Partition& partition);

// Exhaustive assignment search; refuses when machines^values exceeds the
// ceiling.
Rational brute_force_makespan(const MakespanInput& input,
                              unsigned long long ceiling = 10'000'000);

struct MakespanSolution {
    Partition partition;  // over value indices
    Rational makespan;
    Rational n_times_payment;
    unsigned long long partitions_examined = 0;
};

// Forward map, optimal-contract solve for the target action, extraction.
// n = 1 and machines = 1 skip the solve and return the only partition.
MakespanSolution solve_makespan_via_contract(const MakespanInput& input, bool monotone = false,
                                             const SolveOptions& opts = {});

struct Matching3dInput {
    int n = 0;  // |X| = |Y| = |Z|
    std::vector<std::array<int, 3>> triples;
};

struct Matching3dInstance {
    Instance instance;
    int null_action = 0;
    int target_action = 0;
    std::vector<int> x_actions, y_actions, z_actions;
    // outcome 1+j corresponds to triple j; the last outcome carries the
    // only positive reward
};

Matching3dInstance matching3d_to_instance(const Matching3dInput& input);

// Deterministic fixtures for the two regimes: a diagonal system that
// always admits a perfect matching, and one whose triples all share the
// first X element (pigeonhole blocks any matching for n >= 2).
Matching3dInput matching3d_matchable_fixture(int n);
Matching3dInput matching3d_unmatchable_fixture(int n);

// Brute-force matching oracle.
bool has_perfect_matching(const Matching3dInput& input);

MakespanInput parse_makespan_input(const std::string& json_text);
std::string serialize_makespan_input(const MakespanInput& input, int indent = 2);
Matching3dInput parse_matching3d_input(const std::string& json_text);
std::string serialize_matching3d_input(const Matching3dInput& input, int indent = 2);

}  // namespace accord
