#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "causalbet/digraph.hpp"
#include "causalbet/errors.hpp"
#include "causalbet/probspace.hpp"
#include "causalbet/rational.hpp"
#include "causalbet/relation.hpp"

namespace causalbet {

// Unordered three-element subset, stored ascending.
struct Triad {
    ElementId a = 0, b = 0, c = 0;

    static Triad of(ElementId i, ElementId j, ElementId k) {
        if (i == j || i == k || j == k) {
            throw std::invalid_argument("Triad: elements must be pairwise distinct");
        }
        Triad t{i, j, k};
        if (t.a > t.b) std::swap(t.a, t.b);
        if (t.b > t.c) std::swap(t.b, t.c);
        if (t.a > t.b) std::swap(t.a, t.b);
        return t;
    }

    bool contains(ElementId e) const { return e == a || e == b || e == c; }
    bool contains(const Pair& p) const { return contains(p.lo) && contains(p.hi); }

    auto operator<=>(const Triad&) const = default;
};

inline std::string to_string(const Triad& t) {
    return "{" + std::to_string(t.a) + "," + std::to_string(t.b) + "," + std::to_string(t.c) + "}";
}

// Perturbation scales of the construction. Every probability the witness
// assigns differs from the fair-coin value by less than epsilon, and rank
// steps are worth delta each.
struct ConstructionParams {
    int m = 0;
    Rational epsilon, delta;
};

inline bool params_within_bounds(const ConstructionParams& p) {
    const Rational m2(BigInt(p.m) * p.m);
    const Rational eps_cap = Rational(1) / (m2 * Rational(BigInt(1) << (2 * p.m)));
    return p.epsilon.sign() > 0 && p.epsilon < eps_cap && p.delta.sign() > 0 &&
           p.delta < p.epsilon / m2;
}

// epsilon = 1/(m^2 4^m + 1) and delta = epsilon/(m^2 + 1): the simplest
// rationals strictly inside the open intervals 0 < epsilon < 1/(m^2 4^m),
// 0 < delta < epsilon/m^2.
inline ConstructionParams choose_params(int m) {
    if (m < 1) {
        throw std::invalid_argument("choose_params: ground set must be nonempty");
    }
    ConstructionParams p;
    p.m = m;
    p.epsilon = Rational(1, BigInt(m) * m * (BigInt(1) << (2 * m)) + 1);
    p.delta = p.epsilon / Rational(BigInt(m) * m + 1);
    return p;
}

// Target intersection probabilities of the witness: pair_moment is the
// intended P(E_i E_j) for each pair, triple_moment the intended P(E_i E_j E_k)
// for each three-element subset.
struct MomentTables {
    std::map<Pair, Rational> pair_moment;
    std::map<Triad, Rational> triple_moment;
};

// pair_moment(P) = 1/4 + delta * rank(P). Injectivity of the rank makes all
// values pairwise distinct, which is what lets a rotated triple fail the
// screening-off equality later. Every value lies in (1/4, 1/4 + epsilon/2).
inline std::map<Pair, Rational> build_pair_moments(const std::map<Pair, int>& rank,
                                                   const ConstructionParams& params) {
    const Rational quarter(1, 4);
    const Rational half_eps = params.epsilon / 2;
    std::map<Pair, Rational> out;
    std::set<int> seen;
    for (const auto& [pair, r] : rank) {
        if (!seen.insert(r).second) {
            throw std::invalid_argument("build_pair_moments: rank is not injective");
        }
        Rational value = quarter + params.delta * Rational(r);
        if (!(value > quarter && value < quarter + half_eps)) {
            throw std::logic_error("build_pair_moments: value outside (1/4, 1/4 + eps/2)");
        }
        out.emplace(pair, std::move(value));
    }
    return out;
}

namespace detail {

// The unique middle element of {i,j,k} in R, if the 3-set hosts a triple.
inline std::optional<ElementId> middle_of(const TernaryRelation& R, const Triad& t) {
    std::optional<ElementId> middle;
    const ElementId ids[3] = {t.a, t.b, t.c};
    for (int mi = 0; mi < 3; ++mi) {
        const ElementId mid = ids[mi];
        const ElementId x = ids[(mi + 1) % 3];
        const ElementId y = ids[(mi + 2) % 3];
        if (R.contains({x, mid, y}) || R.contains({y, mid, x})) {
            if (middle) {
                throw std::invalid_argument("relation hosts two middles on " + to_string(t));
            }
            middle = mid;
        }
    }
    return middle;
}

}  // namespace detail

// For a 3-set whose middle j is in the relation, the target is pinned to
// 2 b({i,j}) b({j,k}) so that conditioning on E_j renders E_i and E_k exactly
// independent. For unrelated 3-sets the target is chosen from the candidates
// 1/8 + epsilon q/5, q = 1..4, skipping the (at most three) products that
// would accidentally satisfy screening-off for some ordering. Every value
// lies in (1/8, 1/8 + epsilon).
inline std::map<Triad, Rational> build_triple_moments(const TernaryRelation& R,
                                                      const std::map<Pair, Rational>& pair_moment,
                                                      const ConstructionParams& params) {
    const int m = params.m;
    const Rational eighth(1, 8);
    std::map<Triad, Rational> out;
    for (ElementId i = 1; i <= m; ++i) {
        for (ElementId j = i + 1; j <= m; ++j) {
            for (ElementId k = j + 1; k <= m; ++k) {
                const Triad t = Triad::of(i, j, k);
                Rational value;
                if (auto middle = detail::middle_of(R, t)) {
                    const ElementId x = *middle == i ? j : i;
                    const ElementId y = *middle == k ? j : k;
                    value = Rational(2) * pair_moment.at(Pair::of(x, *middle)) *
                            pair_moment.at(Pair::of(*middle, y));
                } else {
                    const Rational forbidden[3] = {
                        Rational(2) * pair_moment.at(Pair::of(i, j)) *
                            pair_moment.at(Pair::of(j, k)),
                        Rational(2) * pair_moment.at(Pair::of(j, k)) *
                            pair_moment.at(Pair::of(k, i)),
                        Rational(2) * pair_moment.at(Pair::of(k, i)) *
                            pair_moment.at(Pair::of(i, j)),
                    };
                    for (int q = 1; q <= 4; ++q) {
                        Rational candidate = eighth + params.epsilon * Rational(q, 5);
                        if (candidate != forbidden[0] && candidate != forbidden[1] &&
                            candidate != forbidden[2]) {
                            value = std::move(candidate);
                            break;
                        }
                    }
                }
                if (!(value > eighth && value < eighth + params.epsilon)) {
                    throw std::logic_error("build_triple_moments: value outside (1/8, 1/8 + eps)");
                }
                out.emplace(t, std::move(value));
            }
        }
    }
    return out;
}

// Compact witness over sample space {0,1}^m: atoms are indicator vectors of
// subsets W, encoded as bitmasks with bit i-1 set iff element i is in W. All
// atoms with |W| >= 4 share the default weight 2^-m; the 1 + m + C(m,2) +
// C(m,3) smaller subsets carry explicit exceptional weights.
class StructuredSpace {
public:
    StructuredSpace(ConstructionParams params, MomentTables tables, Rational empty_weight,
                    std::map<ElementId, Rational> singleton_weight,
                    std::map<Pair, Rational> pair_weight, std::map<Triad, Rational> triple_weight)
        : params_(std::move(params)),
          tables_(std::move(tables)),
          default_weight_(Rational::pow2(-params_.m)),
          empty_weight_(std::move(empty_weight)),
          singleton_weight_(std::move(singleton_weight)),
          pair_weight_(std::move(pair_weight)),
          triple_weight_(std::move(triple_weight)) {}

    int ground_size() const { return params_.m; }
    const ConstructionParams& params() const { return params_; }
    const MomentTables& tables() const { return tables_; }
    const Rational& default_weight() const { return default_weight_; }
    const Rational& empty_weight() const { return empty_weight_; }
    const std::map<ElementId, Rational>& singleton_weights() const { return singleton_weight_; }
    const std::map<Pair, Rational>& pair_weights() const { return pair_weight_; }
    const std::map<Triad, Rational>& triple_weights() const { return triple_weight_; }

    Rational weight_of_mask(std::uint32_t mask) const {
        std::vector<ElementId> members;
        for (int i = 1; i <= params_.m; ++i) {
            if (mask & (std::uint32_t(1) << (i - 1))) {
                members.push_back(i);
            }
        }
        switch (members.size()) {
            case 0: return empty_weight_;
            case 1: return singleton_weight_.at(members[0]);
            case 2: return pair_weight_.at(Pair::of(members[0], members[1]));
            case 3: return triple_weight_.at(Triad::of(members[0], members[1], members[2]));
            default: return default_weight_;
        }
    }

private:
    ConstructionParams params_;
    MomentTables tables_;
    Rational default_weight_;
    Rational empty_weight_;
    std::map<ElementId, Rational> singleton_weight_;
    std::map<Pair, Rational> pair_weight_;
    std::map<Triad, Rational> triple_weight_;
};

namespace detail {

// Weight assembly from the moment tables alone. Size-3 subsets absorb the
// triple-moment excess over 1/8; size-2 and size-1 subsets then compensate so
// the pair and singleton moments come out exactly; the empty set absorbs the
// remainder so the total mass is exactly 1.
inline StructuredSpace assemble_weights(const ConstructionParams& params, MomentTables tables) {
    const int m = params.m;
    const Rational d = Rational::pow2(-m);
    const Rational quarter(1, 4);
    const Rational eighth(1, 8);

    std::map<Triad, Rational> w3;
    for (const auto& [t, gamma] : tables.triple_moment) {
        w3.emplace(t, d + (gamma - eighth));
    }

    std::map<Pair, Rational> w2;
    for (const auto& [p, beta] : tables.pair_moment) {
        Rational excess3 = 0;
        for (ElementId k = 1; k <= m; ++k) {
            if (!p.contains(k)) {
                excess3 += w3.at(Triad::of(p.lo, p.hi, k)) - d;
            }
        }
        w2.emplace(p, d + (beta - quarter) - excess3);
    }

    std::map<ElementId, Rational> w1;
    for (ElementId i = 1; i <= m; ++i) {
        Rational excess = 0;
        for (const auto& [p, w] : w2) {
            if (p.contains(i)) {
                excess += w - d;
            }
        }
        for (const auto& [t, w] : w3) {
            if (t.contains(i)) {
                excess += w - d;
            }
        }
        w1.emplace(i, d - excess);
    }

    Rational rest = 0;
    for (const auto& [i, w] : w1) rest += w;
    for (const auto& [p, w] : w2) rest += w;
    for (const auto& [t, w] : w3) rest += w;
    const BigInt default_atoms = (BigInt(1) << m) - 1 - m - (BigInt(m) * (m - 1)) / 2 -
                                 (BigInt(m) * (m - 1) * (m - 2)) / 6;
    rest += Rational(default_atoms) * d;
    Rational w0 = Rational(1) - rest;

    // Bound chains implied by the parameter caps; a violation is a bug, not
    // a property of the input.
    const Rational& eps = params.epsilon;
    const Rational m_eps = Rational(m) * eps;
    const Rational m2_eps = Rational(BigInt(m) * m) * eps;
    for (const auto& [t, w] : w3) {
        if (!(w > d && w < d + eps)) {
            throw std::logic_error("assemble_weights: triple weight outside (2^-m, 2^-m + eps)");
        }
    }
    for (const auto& [p, w] : w2) {
        if (!(w > d - m_eps && w < d + eps)) {
            throw std::logic_error("assemble_weights: pair weight outside bounds");
        }
    }
    for (const auto& [i, w] : w1) {
        if (!(w > d - m2_eps && w < d + m2_eps)) {
            throw std::logic_error("assemble_weights: singleton weight outside bounds");
        }
        if (w.sign() <= 0) {
            throw std::logic_error("assemble_weights: nonpositive singleton weight");
        }
    }
    for (const auto& [p, w] : w2) {
        if (w.sign() <= 0) {
            throw std::logic_error("assemble_weights: nonpositive pair weight");
        }
    }
    if (w0.sign() <= 0) {
        throw std::logic_error("assemble_weights: nonpositive empty-set weight");
    }

    return StructuredSpace(params, std::move(tables), std::move(w0), std::move(w1), std::move(w2),
                           std::move(w3));
}

}  // namespace detail

// Assigns all atom weights from the moment tables. R only cross-checks that
// the tables encode exactly the relation's screening pattern.
inline StructuredSpace build_weights(const TernaryRelation& R, const ConstructionParams& params,
                                     const MomentTables& tables) {
    for (const auto& [t, gamma] : tables.triple_moment) {
        const auto middle = detail::middle_of(R, t);
        const ElementId ids[3] = {t.a, t.b, t.c};
        for (int mi = 0; mi < 3; ++mi) {
            const ElementId mid = ids[mi];
            const ElementId x = ids[(mi + 1) % 3];
            const ElementId y = ids[(mi + 2) % 3];
            const Rational product = Rational(2) * tables.pair_moment.at(Pair::of(x, mid)) *
                                     tables.pair_moment.at(Pair::of(mid, y));
            const bool pinned = middle && *middle == mid;
            if (pinned != (gamma == product)) {
                throw std::invalid_argument("build_weights: tables do not match the relation on " +
                                            to_string(t));
            }
        }
    }
    return detail::assemble_weights(params, tables);
}

// P of the intersection of the listed events, in closed form: the default
// mass of all supersets plus the exceptional corrections. No 2^m enumeration.
inline Rational moment(const StructuredSpace& space, const std::vector<ElementId>& indices) {
    if (indices.size() > 3) {
        throw UnsupportedOrder("moment: closed form maintained only up to 3 indices");
    }
    std::set<ElementId> distinct(indices.begin(), indices.end());
    if (distinct.size() != indices.size()) {
        throw std::invalid_argument("moment: repeated index");
    }
    for (ElementId e : distinct) {
        if (e < 1 || e > space.ground_size()) {
            throw std::out_of_range("moment: index outside ground set");
        }
    }

    const Rational d = space.default_weight();
    Rational result = Rational::pow2(-int(distinct.size()));
    if (distinct.empty()) {
        result += space.empty_weight() - d;
    }
    for (const auto& [i, w] : space.singleton_weights()) {
        bool superset = distinct.size() <= 1 && (distinct.empty() || *distinct.begin() == i);
        if (superset) {
            result += w - d;
        }
    }
    auto contains_all = [&](auto&& holder) {
        for (ElementId e : distinct) {
            if (!holder.contains(e)) {
                return false;
            }
        }
        return true;
    };
    for (const auto& [p, w] : space.pair_weights()) {
        if (distinct.size() <= 2 && contains_all(p)) {
            result += w - d;
        }
    }
    for (const auto& [t, w] : space.triple_weights()) {
        if (contains_all(t)) {
            result += w - d;
        }
    }
    return result;
}

// Explicit space with 2^m atoms labelled by bitmask, plus the coordinate
// events E_1..E_m (E_i holds the atoms whose bit i-1 is set).
struct ExpandedWitness {
    ProbabilitySpace space;
    std::vector<Event> events;
};

inline ExpandedWitness expand(const StructuredSpace& space, int max_ground_size = 20) {
    const int m = space.ground_size();
    if (m > max_ground_size) {
        throw TooLarge("expand: ground set of " + std::to_string(m) + " exceeds limit " +
                       std::to_string(max_ground_size));
    }
    const std::uint32_t atom_count = std::uint32_t(1) << m;
    std::vector<std::pair<std::string, Rational>> atoms;
    atoms.reserve(atom_count);
    for (std::uint32_t mask = 0; mask < atom_count; ++mask) {
        atoms.emplace_back(std::to_string(mask), space.weight_of_mask(mask));
    }
    ProbabilitySpace expanded = ProbabilitySpace::from_weights(std::move(atoms));
    std::vector<Event> events;
    events.reserve(std::size_t(m));
    for (int i = 1; i <= m; ++i) {
        std::set<int> members;
        for (std::uint32_t mask = 0; mask < atom_count; ++mask) {
            if (mask & (std::uint32_t(1) << (i - 1))) {
                members.insert(int(mask));
            }
        }
        events.emplace_back("E" + std::to_string(i), std::move(members), int(atom_count));
    }
    return {std::move(expanded), std::move(events)};
}

struct NotRealizable : std::runtime_error {
    RealizabilityCertificate certificate;
    explicit NotRealizable(RealizabilityCertificate cert)
        : std::runtime_error(std::string("relation is not realizable: ") +
                             verdict_name(cert.verdict)),
          certificate(std::move(cert)) {}
};

// Full pipeline: decide realizability, rank the pair digraph, derive the
// moment tables, assemble weights, and verify the moment identities exactly
// before returning.
inline StructuredSpace construct_witness(const TernaryRelation& R) {
    RealizabilityCertificate cert = decide_realizability(R);
    if (cert.verdict != Verdict::AbstractCausal) {
        throw NotRealizable(std::move(cert));
    }
    const int m = R.ground_size();
    const ConstructionParams params = choose_params(m);
    MomentTables tables;
    tables.pair_moment = build_pair_moments(*cert.rank, params);
    tables.triple_moment = build_triple_moments(R, tables.pair_moment, params);
    StructuredSpace space = build_weights(R, params, tables);

    const Rational half(1, 2);
    for (ElementId i = 1; i <= m; ++i) {
        if (moment(space, {i}) != half) {
            throw std::logic_error("construct_witness: singleton moment differs from 1/2");
        }
    }
    for (const auto& [p, beta] : space.tables().pair_moment) {
        if (moment(space, {p.lo, p.hi}) != beta) {
            throw std::logic_error("construct_witness: pair moment mismatch");
        }
    }
    for (const auto& [t, gamma] : space.tables().triple_moment) {
        if (moment(space, {t.a, t.b, t.c}) != gamma) {
            throw std::logic_error("construct_witness: triple moment mismatch");
        }
    }
    if (moment(space, {}) != Rational(1)) {
        throw std::logic_error("construct_witness: total mass differs from 1");
    }
    return space;
}

}  // namespace causalbet
