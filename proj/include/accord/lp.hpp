#pragma once

#include "accord/model.hpp"
#include "accord/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace accord {

enum class RowSense { Ge, Le, Eq };

struct LpRow {
    std::vector<Rational> coeffs;
    RowSense sense = RowSense::Ge;
    Rational rhs;
};

// min objective.x subject to the rows, with every variable bounded below
// by zero.
struct LinearProgram {
    std::vector<Rational> objective;
    std::vector<LpRow> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rational> values;     // when Optimal; satisfies every row exactly
    Rational objective_value;         // when Optimal
    std::vector<Rational> duals;      // per row, when Optimal
    std::vector<Rational> farkas;     // per row, when Infeasible
};

// Exact two-phase simplex with Bland's pivot rule; terminates on every
// well-formed input. Throws std::invalid_argument on ragged dimensions.
LpOutcome solve_lp(const LinearProgram& lp);

// Plain-text dump ("min ...", "row_k: lhs >= rhs") for diffing in tests.
std::string lp_to_text(const LinearProgram& lp);

// MIN-PAY-LP(i): m payment variables, objective p_i.t, and one IC row
// p_i.t - p_i'.t >= c_i - c_i' per competing action i' of the subinstance.
LinearProgram build_min_pay_lp(const Subinstance& sub, int action);

// Same plus the m-1 monotonicity rows t_j - t_{j-1} >= 0 in reward order.
LinearProgram build_monotone_min_pay_lp(const Subinstance& sub, int action);

struct MinPayContract {
    PaymentFunction t;
    Rational value;
};

// Empty iff the (monotone) min-pay LP is infeasible; otherwise a payment
// function attaining the minimum expected payment for the action, and that
// value. Only the value is canonical; the vertex is whichever one the
// solver lands on.
std::optional<MinPayContract> min_pay_contract(const Subinstance& sub, int action, bool monotone);
std::optional<MinPayContract> min_pay_contract(const Instance& inst, int action, bool monotone);

bool is_implementable_classic(const Subinstance& sub, int action, bool monotone);
bool is_implementable_classic(const Instance& inst, int action, bool monotone);

// For an action with an infeasible (non-monotone) min-pay LP: the blocking
// convex combination over competing actions, as (action, weight) pairs with
// weights >= 0 summing to 1, matching the target's distribution exactly at
// a strictly lower cost. Empty when the LP is feasible.
std::optional<std::vector<std::pair<int, Rational>>> infeasibility_certificate(
    const Subinstance& sub, int action);

}  // namespace accord
