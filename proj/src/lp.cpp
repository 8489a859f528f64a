#include "accord/lp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace accord {

namespace {

// Dense tableau over exact rationals. Every row is brought to b >= 0 and
// receives a slack (Le), a surplus (Ge), and an artificial where the slack
// cannot seed the basis (Ge, Eq). Phase 1 minimizes the artificial sum;
// phase 2 bars artificials from entering and keeps them only so duals can
// be read off their columns.
struct Tableau {
    int num_structural = 0;
    int num_cols = 0;                        // excluding rhs
    std::vector<std::vector<Rational>> rows; // each of size num_cols + 1 (rhs last)
    std::vector<int> basis;                  // basic column per row
    std::vector<int> slack_col;              // -1 if none
    std::vector<int> art_col;                // -1 if none
    std::vector<int> ident_col;              // +e_r column with cost 0 in phase 2
    std::vector<int> flip;                   // +1, or -1 if the row was negated

    Rational& rhs(int r) { return rows[r][num_cols]; }
};

Tableau build_tableau(const LinearProgram& lp) {
    const int s = lp.num_vars();
    const int m = static_cast<int>(lp.rows.size());
    for (const LpRow& row : lp.rows)
        if (static_cast<int>(row.coeffs.size()) != s)
            throw std::invalid_argument("LP row length does not match variable count");

    Tableau t;
    t.num_structural = s;
    std::vector<std::vector<Rational>> a(m);
    std::vector<Rational> b(m);
    std::vector<RowSense> sense(m);
    t.flip.assign(m, 1);
    for (int r = 0; r < m; ++r) {
        a[r] = lp.rows[r].coeffs;
        b[r] = lp.rows[r].rhs;
        sense[r] = lp.rows[r].sense;
        if (b[r].sign() < 0) {
            for (Rational& c : a[r]) c = -c;
            b[r] = -b[r];
            if (sense[r] == RowSense::Ge)
                sense[r] = RowSense::Le;
            else if (sense[r] == RowSense::Le)
                sense[r] = RowSense::Ge;
            t.flip[r] = -1;
        }
    }

    t.slack_col.assign(m, -1);
    t.art_col.assign(m, -1);
    t.ident_col.assign(m, -1);
    int ncols = s;
    for (int r = 0; r < m; ++r)
        if (sense[r] != RowSense::Eq) t.slack_col[r] = ncols++;
    for (int r = 0; r < m; ++r)
        if (sense[r] != RowSense::Le) t.art_col[r] = ncols++;
    t.num_cols = ncols;

    t.rows.assign(m, std::vector<Rational>(ncols + 1));
    t.basis.assign(m, -1);
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < s; ++j) t.rows[r][j] = a[r][j];
        if (t.slack_col[r] >= 0)
            t.rows[r][t.slack_col[r]] = (sense[r] == RowSense::Le) ? Rational(1) : Rational(-1);
        if (t.art_col[r] >= 0) t.rows[r][t.art_col[r]] = Rational(1);
        t.rows[r][ncols] = b[r];
        if (sense[r] == RowSense::Le) {
            t.basis[r] = t.slack_col[r];
            t.ident_col[r] = t.slack_col[r];
        } else {
            t.basis[r] = t.art_col[r];
            t.ident_col[r] = t.art_col[r];
        }
    }
    return t;
}

void pivot(Tableau& t, int r, int j) {
    const int m = static_cast<int>(t.rows.size());
    Rational inv = Rational(1) / t.rows[r][j];
    for (Rational& cell : t.rows[r]) cell *= inv;
    for (int rr = 0; rr < m; ++rr) {
        if (rr == r || t.rows[rr][j].is_zero()) continue;
        Rational factor = t.rows[rr][j];
        for (int c = 0; c <= t.num_cols; ++c) t.rows[rr][c] -= factor * t.rows[r][c];
    }
    t.basis[r] = j;
}

std::vector<Rational> reduced_costs(const Tableau& t, const std::vector<Rational>& cost) {
    std::vector<Rational> red = cost;
    const int m = static_cast<int>(t.rows.size());
    for (int r = 0; r < m; ++r) {
        const Rational& cb = cost[t.basis[r]];
        if (cb.is_zero()) continue;
        for (int c = 0; c < t.num_cols; ++c)
            if (!t.rows[r][c].is_zero()) red[c] -= cb * t.rows[r][c];
    }
    return red;
}

Rational objective_of(const Tableau& t, const std::vector<Rational>& cost) {
    Rational z;
    const int m = static_cast<int>(t.rows.size());
    for (int r = 0; r < m; ++r) {
        const Rational& cb = cost[t.basis[r]];
        if (!cb.is_zero()) z += cb * t.rows[r][t.num_cols];
    }
    return z;
}

// Bland: entering = lowest-index column with negative reduced cost; leaving
// = lowest-index basic variable among minimum-ratio rows. Returns false on
// an unbounded ray.
bool run_simplex(Tableau& t, const std::vector<Rational>& cost, const std::vector<bool>& barred) {
    const int m = static_cast<int>(t.rows.size());
    while (true) {
        std::vector<Rational> red = reduced_costs(t, cost);
        int enter = -1;
        for (int j = 0; j < t.num_cols; ++j) {
            if (barred[j]) continue;
            if (red[j].sign() < 0) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return true;
        int leave = -1;
        Rational best_ratio;
        for (int r = 0; r < m; ++r) {
            if (t.rows[r][enter].sign() <= 0) continue;
            Rational ratio = t.rows[r][t.num_cols] / t.rows[r][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && t.basis[r] < t.basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return false;
        pivot(t, leave, enter);
    }
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp) {
    Tableau t = build_tableau(lp);
    const int m = static_cast<int>(lp.rows.size());
    const int s = lp.num_vars();
    LpOutcome out;

    bool any_artificial = false;
    for (int r = 0; r < m; ++r) any_artificial |= t.art_col[r] >= 0;

    std::vector<bool> barred(t.num_cols, false);
    if (any_artificial) {
        std::vector<Rational> phase1_cost(t.num_cols);
        for (int r = 0; r < m; ++r)
            if (t.art_col[r] >= 0) phase1_cost[t.art_col[r]] = Rational(1);
        run_simplex(t, phase1_cost, barred);  // bounded below by 0, never unbounded
        Rational w = objective_of(t, phase1_cost);
        if (w.sign() > 0) {
            out.status = LpStatus::Infeasible;
            std::vector<Rational> red = reduced_costs(t, phase1_cost);
            out.farkas.resize(m);
            for (int r = 0; r < m; ++r) {
                Rational y = (t.art_col[r] >= 0) ? Rational(1) - red[t.art_col[r]]
                                                 : -red[t.ident_col[r]];
                out.farkas[r] = Rational(t.flip[r]) * y;
            }
            return out;
        }
        for (int r = 0; r < m; ++r)
            if (t.art_col[r] >= 0) barred[t.art_col[r]] = true;
    }

    std::vector<Rational> phase2_cost(t.num_cols);
    for (int j = 0; j < s; ++j) phase2_cost[j] = lp.objective[j];
    if (!run_simplex(t, phase2_cost, barred)) {
        out.status = LpStatus::Unbounded;
        return out;
    }

    out.status = LpStatus::Optimal;
    out.values.assign(s, Rational(0));
    for (int r = 0; r < m; ++r)
        if (t.basis[r] < s) out.values[t.basis[r]] = t.rows[r][t.num_cols];
    out.objective_value = objective_of(t, phase2_cost);
    std::vector<Rational> red = reduced_costs(t, phase2_cost);
    out.duals.resize(m);
    for (int r = 0; r < m; ++r)
        out.duals[r] = Rational(t.flip[r]) * -red[t.ident_col[r]];
    return out;
}

std::string lp_to_text(const LinearProgram& lp) {
    std::ostringstream os;
    auto terms = [&](const std::vector<Rational>& coeffs) {
        for (int j = 0; j < static_cast<int>(coeffs.size()); ++j) {
            if (j > 0) os << " + ";
            os << coeffs[j].str() << " t" << (j + 1);
        }
    };
    os << "min ";
    terms(lp.objective);
    os << "\n";
    for (int r = 0; r < static_cast<int>(lp.rows.size()); ++r) {
        os << "row_" << r << ": ";
        terms(lp.rows[r].coeffs);
        switch (lp.rows[r].sense) {
            case RowSense::Ge: os << " >= "; break;
            case RowSense::Le: os << " <= "; break;
            case RowSense::Eq: os << " = "; break;
        }
        os << lp.rows[r].rhs.str() << "\n";
    }
    return os.str();
}

LinearProgram build_min_pay_lp(const Subinstance& sub, int action) {
    if (!sub.contains(action)) throw std::out_of_range("target action not in subinstance");
    const Instance& inst = sub.base();
    const int m = inst.num_outcomes();
    LinearProgram lp;
    lp.objective = inst.probs[action];
    lp.objective.resize(m);
    for (int other : sub.actions()) {
        if (other == action) continue;
        LpRow row;
        row.coeffs.resize(m);
        for (int j = 0; j < m; ++j) row.coeffs[j] = inst.probs[action][j] - inst.probs[other][j];
        row.sense = RowSense::Ge;
        row.rhs = inst.costs[action] - inst.costs[other];
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

LinearProgram build_monotone_min_pay_lp(const Subinstance& sub, int action) {
    LinearProgram lp = build_min_pay_lp(sub, action);
    const int m = sub.num_outcomes();
    for (int j = 1; j < m; ++j) {
        LpRow row;
        row.coeffs.assign(m, Rational(0));
        row.coeffs[j] = Rational(1);
        row.coeffs[j - 1] = Rational(-1);
        row.sense = RowSense::Ge;
        row.rhs = Rational(0);
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

std::optional<MinPayContract> min_pay_contract(const Subinstance& sub, int action, bool monotone) {
    LinearProgram lp = monotone ? build_monotone_min_pay_lp(sub, action)
                                : build_min_pay_lp(sub, action);
    LpOutcome res = solve_lp(lp);
    if (res.status == LpStatus::Infeasible) return std::nullopt;
    if (res.status == LpStatus::Unbounded)
        throw std::runtime_error("min-pay LP unbounded; instance is malformed");
    return MinPayContract{PaymentFunction{std::move(res.values)}, res.objective_value};
}

std::optional<MinPayContract> min_pay_contract(const Instance& inst, int action, bool monotone) {
    std::vector<int> all(inst.num_actions());
    for (int i = 0; i < inst.num_actions(); ++i) all[i] = i;
    return min_pay_contract(Subinstance(inst, all), action, monotone);
}

bool is_implementable_classic(const Subinstance& sub, int action, bool monotone) {
    return min_pay_contract(sub, action, monotone).has_value();
}

bool is_implementable_classic(const Instance& inst, int action, bool monotone) {
    return min_pay_contract(inst, action, monotone).has_value();
}

std::optional<std::vector<std::pair<int, Rational>>> infeasibility_certificate(
    const Subinstance& sub, int action) {
    LinearProgram lp = build_min_pay_lp(sub, action);
    LpOutcome res = solve_lp(lp);
    if (res.status != LpStatus::Infeasible) return std::nullopt;
    Rational total;
    for (const Rational& l : res.farkas) total += l;
    if (total.sign() <= 0)
        throw std::runtime_error("degenerate infeasibility certificate");
    std::vector<std::pair<int, Rational>> cert;
    int row = 0;
    for (int other : sub.actions()) {
        if (other == action) continue;
        cert.emplace_back(other, res.farkas[row] / total);
        ++row;
    }
    return cert;
}

}  // namespace accord
