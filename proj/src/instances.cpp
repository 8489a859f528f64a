#include "accord/instances.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>

namespace accord {

namespace {

Rational R(long num, long den = 1) { return Rational(num, den); }

std::vector<Rational> row(std::initializer_list<Rational> values) { return values; }

}  // namespace

Instance gen_separation() {
    Instance inst;
    inst.provenance = "separation";
    inst.rewards = row({R(0), R(0), R(0), R(0), R(4)});
    inst.costs = row({R(0), R(0), R(0), R(2, 3)});
    inst.probs = {
        row({R(1, 4), R(0), R(1, 12), R(5, 12), R(1, 4)}),
        row({R(1, 4), R(1, 12), R(0), R(5, 12), R(1, 4)}),
        row({R(1, 4), R(1, 4), R(1, 4), R(0), R(1, 4)}),
        row({R(0), R(1, 6), R(1, 6), R(1, 6), R(1, 2)}),
    };
    return inst;
}

Instance gen_additive_vs_multiplicative() {
    Instance inst;
    inst.provenance = "additive-vs-multiplicative";
    inst.rewards = row({R(0), R(33), R(66), R(124)});
    inst.costs = row({R(0), R(0), R(0), R(2, 3), R(4, 3)});
    inst.probs = {
        row({R(1), R(0), R(0), R(0)}),
        row({R(1, 3), R(5, 12), R(1, 12), R(1, 6)}),
        row({R(5, 12), R(1, 4), R(1, 6), R(1, 6)}),
        row({R(1, 3), R(1, 3), R(1, 6), R(1, 6)}),
        row({R(0), R(3, 4), R(1, 4), R(0)}),
    };
    return inst;
}

Instance gen_gap_instance(const GapParams& params) {
    const int n = params.n;
    const int k = params.k;
    if (n < 3) throw std::invalid_argument("gap instance needs n >= 3");
    if (k < 1 || k > n - 2) throw std::invalid_argument("gap instance needs 1 <= k <= n-2");
    const Rational& gamma = params.gamma;
    const Rational& eps = params.epsilon;
    if (gamma <= R(0) || gamma >= R(1, 2))
        throw std::invalid_argument("gamma must lie strictly between 0 and 1/2");
    if (eps <= R(0) || eps >= R(1, 2))
        throw std::invalid_argument("epsilon must lie strictly between 0 and 1/2");

    const int tilde_n = (n - 2) / k + 2;
    const int n_real = (tilde_n - 2) * k + 2;
    const Rational delta = eps * pow(gamma, tilde_n - 2) / Rational(k);
    if (delta <= R(0) || delta >= Rational(1, 4L * k))
        throw std::invalid_argument("derived delta outside (0, 1/(4k))");

    Instance inst;
    std::ostringstream tag;
    tag << "gap(n=" << n << ",k=" << k << ",gamma=" << gamma << ",epsilon=" << eps << ")";
    inst.provenance = tag.str();

    const int m = k + 2;
    inst.rewards.assign(m, R(0));
    inst.rewards[m - 1] = R(1) / pow(gamma, tilde_n - 2);

    auto group_cost = [&](int i) {
        return R(1) / pow(gamma, i - 2) - Rational(i - 1) + Rational(i - 2) * gamma;
    };

    // Zero-cost action spreading over the first k outcomes.
    std::vector<Rational> base(m, R(0));
    for (int o = 0; o < k; ++o) base[o] = Rational(1, k);
    inst.costs.push_back(R(0));
    inst.probs.push_back(base);

    // Dummy copies keep the action count at n without moving any optimum.
    for (int d = 0; d < n - n_real; ++d) {
        inst.costs.push_back(R(0));
        inst.probs.push_back(base);
    }

    for (int i = 2; i <= tilde_n - 1; ++i) {
        Rational mid = R(1) - pow(gamma, tilde_n - i) - Rational(2 * k - 2) * delta;
        if (mid.sign() < 0)
            throw std::invalid_argument("probability cell 1 - gamma^(n~-i) - (2k-2)delta is negative");
        for (int j = 1; j <= k; ++j) {
            std::vector<Rational> p(m, R(0));
            for (int o = 0; o < k; ++o)
                if (o != j - 1) p[o] = Rational(2) * delta;
            p[k] = mid;
            p[k + 1] = pow(gamma, tilde_n - i);
            inst.costs.push_back(group_cost(i));
            inst.probs.push_back(std::move(p));
        }
    }

    std::vector<Rational> target(m, R(0));
    for (int o = 0; o < k; ++o) target[o] = delta;
    target[k + 1] = R(1) - Rational(k) * delta;
    inst.costs.push_back(group_cost(tilde_n));
    inst.probs.push_back(std::move(target));
    return inst;
}

Instance random_instance(int n, int m, unsigned long long seed) {
    if (n < 1 || m < 1) throw std::invalid_argument("random instance needs n, m >= 1");
    std::mt19937_64 rng(seed);
    auto draw = [&](int bound) { return static_cast<long>(rng() % (bound + 1)); };

    Instance inst;
    std::ostringstream tag;
    tag << "random(n=" << n << ",m=" << m << ",seed=" << seed << ")";
    inst.provenance = tag.str();

    std::vector<long> rewards(m, 0);
    for (int j = 1; j < m; ++j) rewards[j] = draw(100);
    std::sort(rewards.begin(), rewards.end());
    for (long r : rewards) inst.rewards.push_back(Rational(r));

    std::vector<long> costs(n, 0);
    for (int i = 1; i < n; ++i) costs[i] = draw(100);
    std::sort(costs.begin(), costs.end());
    for (long c : costs) inst.costs.push_back(Rational(c));

    // Action 1 sits on the zero-reward outcome: zero cost, zero reward.
    std::vector<Rational> first(m, R(0));
    first[0] = R(1);
    inst.probs.push_back(std::move(first));
    for (int i = 1; i < n; ++i) {
        std::vector<long> weights(m, 0);
        long total = 0;
        while (total == 0) {
            for (int j = 0; j < m; ++j) {
                weights[j] = draw(100);
                total += weights[j];
            }
        }
        std::vector<Rational> p;
        p.reserve(m);
        for (int j = 0; j < m; ++j) p.push_back(Rational(weights[j], total));
        inst.probs.push_back(std::move(p));
    }
    return inst;
}

namespace {

Rational parse_rational_at(const nlohmann::json& node, const std::string& where) {
    if (!node.is_string())
        throw ParseError(where + ": expected a rational string, got " + node.dump());
    try {
        return Rational::from_string(node.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("instance file must be a JSON object");
    for (const char* key : {"costs", "rewards", "probs"})
        if (!j.contains(key) || !j[key].is_array())
            throw ParseError(std::string("missing or non-array field '") + key + "'");

    Instance inst;
    for (size_t i = 0; i < j["costs"].size(); ++i)
        inst.costs.push_back(parse_rational_at(j["costs"][i], "costs[" + std::to_string(i + 1) + "]"));
    for (size_t i = 0; i < j["rewards"].size(); ++i)
        inst.rewards.push_back(
            parse_rational_at(j["rewards"][i], "rewards[" + std::to_string(i + 1) + "]"));
    for (size_t i = 0; i < j["probs"].size(); ++i) {
        const auto& jrow = j["probs"][i];
        std::string where = "probs[" + std::to_string(i + 1) + "]";
        if (!jrow.is_array()) throw ParseError(where + ": expected an array row");
        std::vector<Rational> p;
        for (size_t c = 0; c < jrow.size(); ++c)
            p.push_back(parse_rational_at(jrow[c], where + "[" + std::to_string(c + 1) + "]"));
        inst.probs.push_back(std::move(p));
    }
    if (j.contains("provenance") && j["provenance"].is_string())
        inst.provenance = j["provenance"].get<std::string>();

    std::vector<Violation> violations = validate_instance(inst);
    if (!violations.empty()) {
        const Violation& v = violations.front();
        throw ParseError(v.location + ": " + v.message + " [" + v.rule + "]");
    }
    return inst;
}

std::string serialize_instance(const Instance& inst, int indent) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json costs = nlohmann::ordered_json::array();
    for (const Rational& c : inst.costs) costs.push_back(c.str());
    nlohmann::ordered_json rewards = nlohmann::ordered_json::array();
    for (const Rational& r : inst.rewards) rewards.push_back(r.str());
    nlohmann::ordered_json probs = nlohmann::ordered_json::array();
    for (const auto& prow : inst.probs) {
        nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
        for (const Rational& p : prow) jrow.push_back(p.str());
        probs.push_back(std::move(jrow));
    }
    j["costs"] = std::move(costs);
    j["rewards"] = std::move(rewards);
    j["probs"] = std::move(probs);
    if (!inst.provenance.empty()) j["provenance"] = inst.provenance;
    return (indent >= 0 ? j.dump(indent) : j.dump()) + "\n";
}

}  // namespace accord
