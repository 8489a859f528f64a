#include "accord/ambiguous.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace accord {

namespace {

std::vector<int> other_actions(const Instance& inst, int action) {
    std::vector<int> ground;
    ground.reserve(inst.num_actions() - 1);
    for (int a = 0; a < inst.num_actions(); ++a)
        if (a != action) ground.push_back(a);
    return ground;
}

PaymentFunction zero_payment(const Instance& inst) {
    return PaymentFunction{std::vector<Rational>(inst.num_outcomes(), Rational(0))};
}

PaymentFunction constant_payment(const Instance& inst, const Rational& amount) {
    return PaymentFunction{std::vector<Rational>(inst.num_outcomes(), amount)};
}

void check_partition(const Instance& inst, int action, const Partition& partition) {
    std::vector<bool> seen(inst.num_actions(), false);
    int covered = 0;
    for (const auto& block : partition.blocks) {
        for (int a : block) {
            check_action(inst, a);
            if (a == action)
                throw std::invalid_argument("partition block contains the target action");
            if (seen[a]) throw std::invalid_argument("partition blocks are not disjoint");
            seen[a] = true;
            ++covered;
        }
    }
    if (covered != inst.num_actions() - 1)
        throw std::invalid_argument("partition does not cover all competing actions");
}

// Per-block min-pay results keyed by the block's membership mask; one
// solver per (action, monotone) sweep. Falls back to unmemoized solves
// when the instance has too many actions for a 64-bit mask.
class BlockSolver {
public:
    BlockSolver(const Instance& inst, int action, bool monotone)
        : inst_(inst), action_(action), monotone_(monotone),
          use_cache_(inst.num_actions() <= 64) {}

    const std::optional<MinPayContract>& solve(const std::vector<int>& block) {
        if (block.empty()) {
            if (!empty_) empty_ = MinPayContract{zero_payment(inst_), Rational(0)};
            return *empty_;
        }
        if (use_cache_) {
            uint64_t mask = 0;
            for (int a : block) mask |= uint64_t{1} << a;
            auto it = cache_.find(mask);
            if (it != cache_.end()) return it->second;
            return cache_.emplace(mask, solve_direct(block)).first->second;
        }
        scratch_ = solve_direct(block);
        return scratch_;
    }

private:
    std::optional<MinPayContract> solve_direct(const std::vector<int>& block) {
        std::vector<int> actions = block;
        actions.push_back(action_);
        return min_pay_contract(Subinstance(inst_, actions), action_, monotone_);
    }

    const Instance& inst_;
    int action_;
    bool monotone_;
    bool use_cache_;
    std::optional<std::optional<MinPayContract>> empty_;
    std::optional<MinPayContract> scratch_;
    std::unordered_map<uint64_t, std::optional<MinPayContract>> cache_;
};

// Largest per-block LP value across the partition, or nothing if a block
// is unprotectable. This is the expected payment of the balanced contract.
std::optional<Rational> partition_payment(BlockSolver& solver, const Partition& partition) {
    Rational theta(0);
    for (const auto& block : partition.blocks) {
        const auto& res = solver.solve(block);
        if (!res) return std::nullopt;
        if (res->value > theta) theta = res->value;
    }
    return theta;
}

AmbiguousContract assemble_contract(const Instance& inst, int action, BlockSolver& solver,
                                    const Partition& partition) {
    std::vector<PaymentFunction> ts;
    ts.reserve(partition.blocks.size());
    for (const auto& block : partition.blocks) {
        const auto& res = solver.solve(block);
        ts.push_back(res->t);  // feasibility established by the caller
    }
    return balance(inst, action, ts);
}

struct SweepBest {
    bool found = false;
    Rational payment;
    unsigned long long index = 0;
    Partition partition;
};

void consider(SweepBest& best, const Rational& payment, unsigned long long index,
              const Partition& partition) {
    if (!best.found || payment < best.payment ||
        (payment == best.payment && index < best.index)) {
        best.found = true;
        best.payment = payment;
        best.index = index;
        best.partition = partition;
    }
}

}  // namespace

AmbiguousContract balance(const Instance& inst, int action,
                          const std::vector<PaymentFunction>& ts) {
    check_action(inst, action);
    if (ts.empty()) throw std::invalid_argument("balance needs at least one payment function");
    std::vector<Rational> expected;
    expected.reserve(ts.size());
    Rational theta;
    for (const PaymentFunction& t : ts) {
        expected.push_back(expected_payment(inst, action, t));
        if (expected.back() > theta || expected.size() == 1) theta = std::max(theta, expected.back());
    }
    AmbiguousContract out;
    out.action = action;
    out.support.reserve(ts.size());
    for (size_t j = 0; j < ts.size(); ++j) {
        Rational shift = theta - expected[j];
        PaymentFunction shifted = ts[j];
        if (!shift.is_zero())
            for (Rational& p : shifted.payments) p += shift;
        out.support.push_back(std::move(shifted));
    }
    return out;
}

AmbiguousContract balance_multiplicative_sop(const Instance& inst, int action,
                                             const std::vector<PaymentFunction>& sops) {
    check_action(inst, action);
    if (sops.empty()) throw std::invalid_argument("balance needs at least one payment function");
    std::vector<Rational> expected;
    expected.reserve(sops.size());
    Rational theta;
    for (const PaymentFunction& t : sops) {
        check_payment(inst, t);
        int positive = 0;
        for (const Rational& p : t.payments) {
            if (p.sign() < 0) throw BalanceError("payment function has a negative entry");
            if (p.sign() > 0) ++positive;
        }
        if (positive != 1)
            throw BalanceError("multiplicative balancing requires single-outcome payment functions");
        expected.push_back(expected_payment(inst, action, t));
        if (expected.back().is_zero())
            throw BalanceError("SOP pays nothing in expectation for the recommended action; "
                               "no scaling can equalize it");
        theta = std::max(theta, expected.back());
    }
    AmbiguousContract out;
    out.action = action;
    out.support.reserve(sops.size());
    for (size_t j = 0; j < sops.size(); ++j) {
        Rational rho = theta / expected[j];  // >= 1 by choice of theta
        PaymentFunction scaled = sops[j];
        for (Rational& p : scaled.payments) p *= rho;
        out.support.push_back(std::move(scaled));
    }
    if (!is_ic(inst, out, action)) {
        std::string detail;
        Rational u_target = agent_utility_ambiguous(inst, action, out);
        for (int a : best_responses(inst, out))
            if (a != action) {
                detail = "action " + std::to_string(a + 1) + " gives the agent " +
                         agent_utility_ambiguous(inst, a, out).str() + " > " + u_target.str();
                break;
            }
        throw BalanceError("scaled collection is not incentive compatible: " + detail);
    }
    return out;
}

mpz_class stirling2(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("negative Stirling argument");
    if (n == 0 && k == 0) return 1;
    if (n == 0 || k == 0) return 0;
    if (k > n) return 0;
    std::vector<mpz_class> row(k + 1, 0);
    row[0] = 1;  // S(0, 0)
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j) row[j] = row[j] * j + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

mpz_class partition_count(int ground_size, int k) {
    if (k < 1) throw std::invalid_argument("partition count needs k >= 1");
    mpz_class total = 0;
    for (int j = 0; j <= std::min(ground_size, k); ++j) total += stirling2(ground_size, j);
    return total;
}

PartitionStream::PartitionStream(std::vector<int> ground, int k)
    : ground_(std::move(ground)), k_(k), rgs_(ground_.size(), 0) {
    if (k < 1) throw std::invalid_argument("partition stream needs k >= 1");
    std::sort(ground_.begin(), ground_.end());
}

Partition PartitionStream::current() const {
    Partition p;
    p.blocks.resize(k_);
    for (size_t idx = 0; idx < ground_.size(); ++idx) p.blocks[rgs_[idx]].push_back(ground_[idx]);
    return p;
}

std::optional<Partition> PartitionStream::next() {
    if (done_) return std::nullopt;
    if (first_) {
        first_ = false;
        return current();
    }
    const int g = static_cast<int>(rgs_.size());
    int pos = g - 1;
    for (; pos >= 1; --pos) {
        int max_prefix = 0;
        for (int j = 0; j < pos; ++j) max_prefix = std::max(max_prefix, rgs_[j]);
        if (rgs_[pos] < std::min(max_prefix + 1, k_ - 1)) break;
    }
    if (pos < 1) {
        done_ = true;
        return std::nullopt;
    }
    ++rgs_[pos];
    for (int j = pos + 1; j < g; ++j) rgs_[j] = 0;
    return current();
}

std::vector<Partition> all_partitions(std::vector<int> ground, int k) {
    std::vector<Partition> out;
    PartitionStream stream(std::move(ground), k);
    while (auto p = stream.next()) out.push_back(std::move(*p));
    return out;
}

std::optional<AmbiguousContract> optimal_for_partition(const Instance& inst, int action,
                                                       const Partition& partition, bool monotone) {
    check_action(inst, action);
    check_partition(inst, action, partition);
    BlockSolver solver(inst, action, monotone);
    if (!partition_payment(solver, partition)) return std::nullopt;
    return assemble_contract(inst, action, solver, partition);
}

std::optional<ActionOptimum> optimal_for_action(const Instance& inst, int action, int k,
                                                const SolveOptions& opts) {
    check_action(inst, action);
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    std::vector<int> ground = other_actions(inst, action);

    mpz_class count = partition_count(static_cast<int>(ground.size()), k);
    bool over_ceiling = count > opts.partition_ceiling;
    if (over_ceiling && !opts.force)
        throw PartitionCeilingExceeded(count.get_str(), opts.partition_ceiling);

    SweepBest best;
    unsigned long long examined = 0;

    if (opts.threads > 1 && !over_ceiling && count > 1) {
        std::vector<Partition> partitions = all_partitions(ground, k);
        examined = partitions.size();
        int workers = std::min<int>(opts.threads, static_cast<int>(partitions.size()));
        std::vector<SweepBest> local(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                BlockSolver solver(inst, action, opts.monotone);
                for (size_t idx = w; idx < partitions.size(); idx += workers) {
                    auto payment = partition_payment(solver, partitions[idx]);
                    if (payment) consider(local[w], *payment, idx, partitions[idx]);
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const SweepBest& lb : local)
            if (lb.found) consider(best, lb.payment, lb.index, lb.partition);
    } else {
        BlockSolver solver(inst, action, opts.monotone);
        PartitionStream stream(ground, k);
        while (auto partition = stream.next()) {
            auto payment = partition_payment(solver, *partition);
            if (payment) consider(best, *payment, examined, *partition);
            ++examined;
        }
    }

    if (!best.found) return std::nullopt;
    BlockSolver solver(inst, action, opts.monotone);
    ActionOptimum out;
    out.contract = assemble_contract(inst, action, solver, best.partition);
    out.partition = std::move(best.partition);
    out.payment = best.payment;
    out.utility = expected_reward(inst, action) - best.payment;
    out.partitions_examined = examined;
    return out;
}

SolveReport optimal_contract(const Instance& inst, int k, const SolveOptions& opts) {
    SolveReport report;
    report.k = k;
    report.monotone = opts.monotone;
    int best_action = -1;
    for (int action = 0; action < inst.num_actions(); ++action) {
        auto res = optimal_for_action(inst, action, k, opts);
        ActionSummary summary;
        summary.action = action;
        summary.implementable = res.has_value();
        if (res) {
            summary.utility = res->utility;
            summary.payment = res->payment;
            report.partitions_examined += res->partitions_examined;
            if (best_action < 0 || res->utility > report.principal_utility) {
                best_action = action;
                report.principal_utility = res->utility;
                report.expected_payment = res->payment;
                report.contract = std::move(res->contract);
                report.winning_partition = std::move(res->partition);
            }
        }
        report.actions.push_back(std::move(summary));
    }
    return report;
}

bool is_implementable_k(const Instance& inst, int action, int k, bool monotone,
                        const SolveOptions& opts) {
    check_action(inst, action);
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    std::vector<int> ground = other_actions(inst, action);
    // A cheaper action with the identical distribution blocks every k.
    for (int other : ground)
        if (inst.probs[other] == inst.probs[action] && inst.costs[other] < inst.costs[action])
            return false;
    mpz_class count = partition_count(static_cast<int>(ground.size()), k);
    if (count > opts.partition_ceiling && !opts.force)
        throw PartitionCeilingExceeded(count.get_str(), opts.partition_ceiling);
    BlockSolver solver(inst, action, monotone);
    PartitionStream stream(ground, k);
    while (auto partition = stream.next())
        if (partition_payment(solver, *partition)) return true;
    return false;
}

std::optional<ActionOptimum> optimal_unrestricted_for_action(const Instance& inst, int action,
                                                             bool monotone) {
    check_action(inst, action);
    std::vector<int> ground = other_actions(inst, action);
    Partition singletons;
    singletons.blocks.reserve(std::max<size_t>(1, ground.size()));
    for (int a : ground) singletons.blocks.push_back({a});
    if (singletons.blocks.empty()) singletons.blocks.push_back({});
    BlockSolver solver(inst, action, monotone);
    auto payment = partition_payment(solver, singletons);
    if (!payment) return std::nullopt;
    ActionOptimum out;
    out.contract = assemble_contract(inst, action, solver, singletons);
    out.partition = std::move(singletons);
    out.payment = *payment;
    out.utility = expected_reward(inst, action) - *payment;
    out.partitions_examined = 1;
    return out;
}

SolveReport optimal_unrestricted(const Instance& inst, bool monotone) {
    SolveReport report;
    report.k = std::max(1, inst.num_actions() - 1);
    report.monotone = monotone;
    int best_action = -1;
    for (int action = 0; action < inst.num_actions(); ++action) {
        auto res = optimal_unrestricted_for_action(inst, action, monotone);
        ActionSummary summary;
        summary.action = action;
        summary.implementable = res.has_value();
        if (res) {
            summary.utility = res->utility;
            summary.payment = res->payment;
            report.partitions_examined += res->partitions_examined;
            if (best_action < 0 || res->utility > report.principal_utility) {
                best_action = action;
                report.principal_utility = res->utility;
                report.expected_payment = res->payment;
                report.contract = std::move(res->contract);
                report.winning_partition = std::move(res->partition);
            }
        }
        report.actions.push_back(std::move(summary));
    }
    return report;
}

LinearContractChoice best_linear_contract(const Subinstance& sub) {
    const Instance& inst = sub.base();
    const int m = inst.num_outcomes();
    std::vector<Rational> reward_of;
    reward_of.reserve(sub.actions().size());
    for (int a : sub.actions()) reward_of.push_back(expected_reward(inst, a));

    // Candidate slopes: the agent's choice changes only where two utility
    // lines alpha * R_i - c_i cross, so the principal's optimum is attained
    // at a crossing or at the interval ends.
    std::vector<Rational> candidates = {Rational(0), Rational(1)};
    const auto& acts = sub.actions();
    for (size_t i = 0; i < acts.size(); ++i)
        for (size_t j = i + 1; j < acts.size(); ++j) {
            if (reward_of[i] == reward_of[j]) continue;
            Rational alpha = (inst.costs[acts[i]] - inst.costs[acts[j]]) /
                             (reward_of[i] - reward_of[j]);
            if (alpha >= Rational(0) && alpha <= Rational(1)) candidates.push_back(alpha);
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    LinearContractChoice best;
    bool have = false;
    for (const Rational& alpha : candidates) {
        Rational top;
        bool first = true;
        for (size_t i = 0; i < acts.size(); ++i) {
            Rational u = alpha * reward_of[i] - inst.costs[acts[i]];
            if (first || u > top) {
                top = u;
                first = false;
            }
        }
        // Agent ties break in the principal's favor.
        int pick = -1;
        Rational pick_utility;
        for (size_t i = 0; i < acts.size(); ++i) {
            Rational u = alpha * reward_of[i] - inst.costs[acts[i]];
            if (u != top) continue;
            Rational up = (Rational(1) - alpha) * reward_of[i];
            if (pick < 0 || up > pick_utility) {
                pick = acts[i];
                pick_utility = up;
            }
        }
        if (!have || pick_utility > best.utility) {
            have = true;
            best.action = pick;
            best.alpha = alpha;
            best.utility = pick_utility;
        }
    }
    best.t.payments.resize(m);
    for (int j = 0; j < m; ++j) best.t.payments[j] = best.alpha * inst.rewards[j];
    return best;
}

AmbiguousContract approx_contract(const Instance& inst, int k) {
    const int n = inst.num_actions();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("approx_contract needs 1 <= k <= n-1");

    SolveReport unrestricted = optimal_unrestricted(inst, false);
    if (!unrestricted.contract || unrestricted.principal_utility.sign() <= 0) {
        // Nothing to approximate: the zero contract already matches the bound.
        AmbiguousContract trivial;
        trivial.support.assign(k, zero_payment(inst));
        std::vector<int> br = best_responses(inst, trivial);
        trivial.action = br.front();
        for (int a : br)
            if (expected_reward(inst, a) > expected_reward(inst, trivial.action)) trivial.action = a;
        return trivial;
    }
    const int a_star = unrestricted.contract->action;

    // Competing actions sorted by cost (stable on index).
    std::vector<int> others = other_actions(inst, a_star);
    std::stable_sort(others.begin(), others.end(),
                     [&](int a, int b) { return inst.costs[a] < inst.costs[b]; });

    std::vector<int> low(others.begin(), others.begin() + (n - k));
    std::vector<int> sub_actions = low;
    sub_actions.push_back(a_star);
    LinearContractChoice classic = best_linear_contract(Subinstance(inst, sub_actions));

    std::vector<PaymentFunction> funcs;
    int recommended;
    if (classic.action == a_star) {
        // The classic contract guards the low-cost block; reuse the
        // unrestricted protection functions for the k-1 high-cost actions.
        const auto opt = optimal_unrestricted_for_action(inst, a_star, false);
        funcs.push_back(classic.t);
        for (int idx = n - k; idx < n - 1; ++idx) {
            int high = others[idx];
            const auto& ground = opt->partition.blocks;
            for (size_t b = 0; b < ground.size(); ++b)
                if (ground[b].size() == 1 && ground[b][0] == high) {
                    funcs.push_back(opt->contract.support[b]);
                    break;
                }
        }
        recommended = a_star;
    } else {
        // A low-cost action answers the classic contract; a flat payment
        // equal to its cost guards everything costlier.
        funcs.push_back(classic.t);
        PaymentFunction flat = constant_payment(inst, inst.costs[classic.action]);
        while (static_cast<int>(funcs.size()) < k) funcs.push_back(flat);
        recommended = classic.action;
    }
    return balance(inst, recommended, funcs);
}

Rational succinctness_gap(const Instance& inst, int k, const SolveOptions& opts) {
    SolveReport unrestricted = optimal_unrestricted(inst, opts.monotone);
    if (!unrestricted.contract)
        throw GapUndefined("no action is implementable with an unrestricted ambiguous contract");
    if (unrestricted.principal_utility.is_zero())
        throw GapUndefined("unrestricted optimum is 0; the gap ratio is undefined");
    SolveReport restricted = optimal_contract(inst, k, opts);
    if (!restricted.contract) return Rational(0);
    return restricted.principal_utility / unrestricted.principal_utility;
}

std::string solve_report_to_json(const SolveReport& report, int indent) {
    nlohmann::json j;
    j["k"] = report.k;
    j["monotone"] = report.monotone;
    j["found"] = report.contract.has_value();
    j["partitions_examined"] = report.partitions_examined;
    if (report.contract) {
        j["action"] = report.contract->action + 1;
        j["utility"] = report.principal_utility.str();
        j["payment"] = report.expected_payment.str();
        nlohmann::json support = nlohmann::json::array();
        for (const PaymentFunction& t : report.contract->support) {
            nlohmann::json row = nlohmann::json::array();
            for (const Rational& p : t.payments) row.push_back(p.str());
            support.push_back(std::move(row));
        }
        j["support"] = std::move(support);
        if (report.winning_partition) {
            nlohmann::json blocks = nlohmann::json::array();
            for (const auto& block : report.winning_partition->blocks) {
                nlohmann::json b = nlohmann::json::array();
                for (int a : block) b.push_back(a + 1);
                blocks.push_back(std::move(b));
            }
            j["partition"] = std::move(blocks);
        }
    }
    nlohmann::json actions = nlohmann::json::array();
    for (const ActionSummary& s : report.actions) {
        nlohmann::json row;
        row["action"] = s.action + 1;
        row["implementable"] = s.implementable;
        if (s.implementable) {
            row["utility"] = s.utility.str();
            row["payment"] = s.payment.str();
        } else {
            row["utility"] = nullptr;
            row["payment"] = nullptr;
        }
        actions.push_back(std::move(row));
    }
    j["actions"] = std::move(actions);
    return indent >= 0 ? j.dump(indent) : j.dump();
}

}  // namespace accord
