#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causalbet/errors.hpp"
#include "causalbet/rational.hpp"
#include "causalbet/relation.hpp"

namespace causalbet {

// Finite probability space: an ordered list of atoms with exact nonnegative
// weights summing to one. Zero-weight atoms are allowed (empirical inputs);
// constructed witnesses never produce them.
class ProbabilitySpace {
public:
    static ProbabilitySpace from_weights(std::vector<std::pair<std::string, Rational>> atoms) {
        Rational total = 0;
        for (const auto& [label, w] : atoms) {
            if (w.sign() < 0) {
                throw std::invalid_argument("ProbabilitySpace: negative weight at atom '" +
                                            label + "'");
            }
            total += w;
        }
        if (total != Rational(1)) {
            throw std::invalid_argument("ProbabilitySpace: weights sum to " + total.str() +
                                        ", not 1/1");
        }
        return ProbabilitySpace(std::move(atoms));
    }

    int atom_count() const { return int(atoms_.size()); }
    const std::string& label(int idx) const { return atoms_.at(std::size_t(idx)).first; }
    const Rational& weight(int idx) const { return atoms_.at(std::size_t(idx)).second; }

private:
    explicit ProbabilitySpace(std::vector<std::pair<std::string, Rational>> atoms)
        : atoms_(std::move(atoms)) {}
    std::vector<std::pair<std::string, Rational>> atoms_;
};

// Named event: a set of atom indices of some space.
class Event {
public:
    Event(std::string name, std::set<int> members, int atom_count)
        : name_(std::move(name)), members_(std::move(members)) {
        for (int idx : members_) {
            if (idx < 0 || idx >= atom_count) {
                throw std::out_of_range("Event '" + name_ + "': atom index " +
                                        std::to_string(idx) + " outside 0.." +
                                        std::to_string(atom_count - 1));
            }
        }
    }

    const std::string& name() const { return name_; }
    const std::set<int>& members() const { return members_; }

private:
    std::string name_;
    std::set<int> members_;
};

inline Rational probability(const ProbabilitySpace& space, const Event& e) {
    Rational p = 0;
    for (int idx : e.members()) {
        p += space.weight(idx);
    }
    return p;
}

namespace detail {

inline Rational intersection_probability(const ProbabilitySpace& space, const Event& a,
                                         const Event& b) {
    Rational p = 0;
    for (int idx : a.members()) {
        if (b.members().count(idx)) {
            p += space.weight(idx);
        }
    }
    return p;
}

inline Rational intersection_probability(const ProbabilitySpace& space, const Event& a,
                                         const Event& b, const Event& c) {
    Rational p = 0;
    for (int idx : a.members()) {
        if (b.members().count(idx) && c.members().count(idx)) {
            p += space.weight(idx);
        }
    }
    return p;
}

}  // namespace detail

// P(a | given) = P(a ∩ given) / P(given).
inline Rational conditional(const ProbabilitySpace& space, const Event& a, const Event& given) {
    Rational pg = probability(space, given);
    if (pg.is_zero()) {
        throw ConditionOnNull("conditional: P(" + given.name() + ") = 0");
    }
    return detail::intersection_probability(space, a, given) / pg;
}

// P(ab) / (P(a) P(b)); equals 1 exactly when a and b are independent.
inline Rational correlation_ratio(const ProbabilitySpace& space, const Event& a, const Event& b) {
    Rational pa = probability(space, a);
    Rational pb = probability(space, b);
    if (pa.is_zero() || pb.is_zero()) {
        throw ConditionOnNull("correlation_ratio: event of probability 0");
    }
    return detail::intersection_probability(space, a, b) / (pa * pb);
}

struct ComparedPair {
    Rational lhs, rhs;
};

// Exact evaluation of the five conditions that make B causally between A and
// C, together with every quantity compared. Conditions whose conditionals are
// ill-defined report false rather than erroring, so extraction totalizes over
// arbitrary spaces.
struct CbBreakdown {
    bool endpoints_correlated = false;  // P(AC)   > P(A) P(C)
    bool predicts_c = false;            // P(C|B)  > P(C|A)
    bool predicts_a = false;            // P(A|B)  > P(A|C)
    bool screens_off = false;           // P(AC|B) = P(A|B) P(C|B)
    bool proper_middle = false;         // P(B-A) > 0 and P(B-C) > 0
    bool conditionals_defined = false;  // P(A), P(B), P(C) all positive

    ComparedPair correlation;                    // P(AC) vs P(A) P(C)
    std::optional<ComparedPair> prediction_c;    // P(C|B) vs P(C|A)
    std::optional<ComparedPair> prediction_a;    // P(A|B) vs P(A|C)
    std::optional<ComparedPair> screening;       // P(AC|B) vs P(A|B) P(C|B)
    Rational b_minus_a, b_minus_c;               // both must be positive

    bool causally_between() const {
        return endpoints_correlated && predicts_c && predicts_a && screens_off && proper_middle;
    }
};

namespace detail {

inline CbBreakdown breakdown_from(const Rational& pa, const Rational& pb, const Rational& pc,
                                  const Rational& pab, const Rational& pac, const Rational& pbc,
                                  const Rational& pabc) {
    CbBreakdown r;
    r.b_minus_a = pb - pab;
    r.b_minus_c = pb - pbc;
    r.proper_middle = r.b_minus_a.sign() > 0 && r.b_minus_c.sign() > 0;
    r.correlation = {pac, pa * pc};
    r.endpoints_correlated = r.correlation.lhs > r.correlation.rhs;
    r.conditionals_defined = pa.sign() > 0 && pb.sign() > 0 && pc.sign() > 0;
    if (pb.sign() > 0 && pa.sign() > 0) {
        r.prediction_c = {pbc / pb, pac / pa};
        r.predicts_c = r.prediction_c->lhs > r.prediction_c->rhs;
    }
    if (pb.sign() > 0 && pc.sign() > 0) {
        r.prediction_a = {pab / pb, pac / pc};
        r.predicts_a = r.prediction_a->lhs > r.prediction_a->rhs;
    }
    if (pb.sign() > 0) {
        r.screening = {pabc / pb, (pab / pb) * (pbc / pb)};
        r.screens_off = r.screening->lhs == r.screening->rhs;
    }
    return r;
}

}  // namespace detail

inline CbBreakdown causal_breakdown(const ProbabilitySpace& space, const Event& a, const Event& b,
                                    const Event& c) {
    using detail::intersection_probability;
    return detail::breakdown_from(probability(space, a), probability(space, b),
                                  probability(space, c),
                                  intersection_probability(space, a, b),
                                  intersection_probability(space, a, c),
                                  intersection_probability(space, b, c),
                                  intersection_probability(space, a, b, c));
}

// All ordered triples over the event family that satisfy the five conditions.
// Elements of the result are 1-based positions in X. Events must be pairwise
// distinct as atom sets.
inline TernaryRelation extract_cb(const ProbabilitySpace& space, const std::vector<Event>& X) {
    const int n = int(X.size());
    {
        std::set<std::set<int>> extents;
        for (const Event& e : X) {
            if (!extents.insert(e.members()).second) {
                throw DuplicateEvents("extract_cb: event '" + e.name() +
                                      "' duplicates another event's atom set");
            }
        }
    }

    // Memoize intersection masses over unordered index sets; each ordered
    // triple is then a constant number of exact comparisons.
    std::vector<Rational> p1(std::size_t(n), Rational(0));
    std::map<std::pair<int, int>, Rational> p2;
    std::map<std::array<int, 3>, Rational> p3;
    for (int i = 0; i < n; ++i) {
        p1[std::size_t(i)] = probability(space, X[std::size_t(i)]);
        for (int j = i + 1; j < n; ++j) {
            p2[{i, j}] = detail::intersection_probability(space, X[std::size_t(i)],
                                                          X[std::size_t(j)]);
            for (int k = j + 1; k < n; ++k) {
                p3[{i, j, k}] = detail::intersection_probability(
                    space, X[std::size_t(i)], X[std::size_t(j)], X[std::size_t(k)]);
            }
        }
    }
    auto pair_mass = [&](int i, int j) { return p2.at({std::min(i, j), std::max(i, j)}); };
    auto triple_mass = [&](int i, int j, int k) {
        std::array<int, 3> key{i, j, k};
        std::sort(key.begin(), key.end());
        return p3.at(key);
    };

    TernaryRelation result(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (i == j || i == k || j == k) {
                    continue;
                }
                CbBreakdown br = detail::breakdown_from(
                    p1[std::size_t(i)], p1[std::size_t(j)], p1[std::size_t(k)], pair_mass(i, j),
                    pair_mass(i, k), pair_mass(j, k), triple_mass(i, j, k));
                if (br.causally_between()) {
                    result.add({i + 1, j + 1, k + 1});
                }
            }
        }
    }
    return result;
}

}  // namespace causalbet
