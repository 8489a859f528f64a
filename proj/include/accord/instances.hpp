#pragma once

#include "accord/model.hpp"
#include "accord/rational.hpp"

#include <stdexcept>
#include <string>

namespace accord {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// The 4-action / 5-outcome instance separating classic, 2-ambiguous, and
// unrestricted ambiguous optima (1 vs 10/9 vs 4/3).
Instance gen_separation();

// The 5-action / 4-outcome instance on which multiplicative balancing of
// min-pay contracts breaks incentive compatibility while additive
// balancing reaches utility 40.
Instance gen_additive_vs_multiplicative();

// Parameters of the succinctness-gap family. The family pits k-ambiguous
// contracts (utility at most 1) against (k+1)-ambiguous ones (utility
// close to the target welfare). The last action is the target.
struct GapParams {
    int n = 3;
    int k = 1;
    Rational gamma{1, 100};
    Rational epsilon{1, 100};
};

Instance gen_gap_instance(const GapParams& params);

// Seed-stable random instance: integer weights in [0, 100] normalized per
// row; action 1 is forced to zero cost and zero reward; costs and rewards
// come out sorted.
Instance random_instance(int n, int m, unsigned long long seed);

// Strict parse of the canonical instance JSON; rejects malformed rational
// literals, shape errors, and every validate_instance violation, naming
// the offending location.
Instance parse_instance(const std::string& json_text);

std::string serialize_instance(const Instance& inst, int indent = 2);

}  // namespace accord
