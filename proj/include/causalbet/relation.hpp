#pragma once

#include <compare>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causalbet {

// Ground set elements are 1..m.
using ElementId = int;

// Ordered triple of elements. Repeated elements are representable on purpose:
// the axiom checker classifies them as violations instead of the constructor
// rejecting them.
struct Triple {
    ElementId a = 0, b = 0, c = 0;

    auto operator<=>(const Triple&) const = default;

    Triple reversed() const { return {c, b, a}; }
    Triple rotated() const { return {c, a, b}; }
    bool all_distinct() const { return a != b && a != c && b != c; }
};

inline std::string to_string(const Triple& t) {
    return "(" + std::to_string(t.a) + "," + std::to_string(t.b) + "," + std::to_string(t.c) + ")";
}

// Finite ternary relation on ground set {1..m}. Triples are a set: duplicates
// collapse, iteration is lexicographic.
class TernaryRelation {
public:
    TernaryRelation() = default;
    explicit TernaryRelation(int ground_size) : m_(ground_size) {
        if (ground_size < 0) {
            throw std::invalid_argument("TernaryRelation: negative ground size");
        }
    }
    TernaryRelation(int ground_size, std::initializer_list<Triple> triples)
        : TernaryRelation(ground_size) {
        for (const Triple& t : triples) {
            add(t);
        }
    }

    int ground_size() const { return m_; }
    const std::set<Triple>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }
    bool contains(const Triple& t) const { return triples_.count(t) != 0; }

    void add(const Triple& t) {
        for (ElementId e : {t.a, t.b, t.c}) {
            if (e < 1 || e > m_) {
                throw std::out_of_range("TernaryRelation: element " + std::to_string(e) +
                                        " outside 1.." + std::to_string(m_));
            }
        }
        triples_.insert(t);
    }

    TernaryRelation reversal_closure() const {
        TernaryRelation r = *this;
        for (const Triple& t : triples_) {
            r.triples_.insert(t.reversed());
        }
        return r;
    }

    bool operator==(const TernaryRelation&) const = default;

private:
    int m_ = 0;
    std::set<Triple> triples_;
};

// The three defining axioms of a betweenness.
enum class Axiom { Distinctness, ReversalClosure, RotationExclusion };

inline const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::Distinctness: return "distinctness";
        case Axiom::ReversalClosure: return "reversal-closure";
        case Axiom::RotationExclusion: return "rotation-exclusion";
    }
    return "?";
}

struct Violation {
    Axiom axiom = Axiom::Distinctness;
    Triple triple;  // the member triple that witnesses the violation

    auto operator<=>(const Violation&) const = default;
};

struct BetweennessReport {
    bool is_betweenness = false;
    std::vector<Violation> violations;  // empty iff is_betweenness
};

struct NotABetweenness : std::runtime_error {
    BetweennessReport report;
    explicit NotABetweenness(BetweennessReport r)
        : std::runtime_error("relation is not a betweenness (" +
                             std::to_string(r.violations.size()) + " violation(s))"),
          report(std::move(r)) {}
};

// Tests the three axioms on every triple: elements pairwise distinct, the
// reversal (c,b,a) present, the rotation (c,a,b) absent. Reports every
// violation in deterministic (triple, axiom) order.
inline BetweennessReport check_betweenness(const TernaryRelation& R) {
    BetweennessReport report;
    for (const Triple& t : R.triples()) {
        if (!t.all_distinct()) {
            report.violations.push_back({Axiom::Distinctness, t});
        }
        if (!R.contains(t.reversed())) {
            report.violations.push_back({Axiom::ReversalClosure, t});
        }
        if (R.contains(t.rotated())) {
            report.violations.push_back({Axiom::RotationExclusion, t});
        }
    }
    report.is_betweenness = report.violations.empty();
    return report;
}

struct TransitivityReport {
    bool transitive = false;
    // Premise pairs ((A,B,C),(A,D,B)) whose conclusion (A,D,C) is missing.
    std::vector<std::pair<Triple, Triple>> violations;
};

// Chain property: (A,B,C) and (A,D,B) in R imply (A,D,C) in R. Only defined
// for betweennesses.
inline TransitivityReport check_transitivity(const TernaryRelation& R) {
    if (BetweennessReport rep = check_betweenness(R); !rep.is_betweenness) {
        throw NotABetweenness(std::move(rep));
    }
    TransitivityReport report;
    for (const Triple& outer : R.triples()) {
        for (const Triple& inner : R.triples()) {
            if (inner.a == outer.a && inner.c == outer.b &&
                !R.contains({outer.a, inner.b, outer.c})) {
                report.violations.emplace_back(outer, inner);
            }
        }
    }
    report.transitive = report.violations.empty();
    return report;
}

// Number of elements lying between a and b: |{d : (a,d,b) in R}|.
inline int middle_count(const TernaryRelation& R, ElementId a, ElementId b) {
    if (a == b) {
        throw std::invalid_argument("middle_count: endpoints must differ");
    }
    int count = 0;
    for (const Triple& t : R.triples()) {
        if (t.a == a && t.c == b) {
            ++count;
        }
    }
    return count;
}

}  // namespace causalbet
