#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "causalbet/errors.hpp"
#include "causalbet/relation.hpp"

namespace causalbet {

// Injective placement of every ground-set element on positions 1..m.
struct OrderWitness {
    std::map<ElementId, int> position;
};

struct OrderVerdict {
    std::optional<OrderWitness> witness;
    bool sat() const { return witness.has_value(); }
};

// True iff every triple's middle element lands strictly between its
// endpoints under t (in either direction). t must cover the ground set.
inline bool verify_order(const TernaryRelation& R, const OrderWitness& t) {
    auto pos = [&](ElementId e) {
        auto it = t.position.find(e);
        if (it == t.position.end()) {
            throw std::invalid_argument("verify_order: no position for element " +
                                        std::to_string(e));
        }
        return it->second;
    };
    for (ElementId e = 1; e <= R.ground_size(); ++e) {
        pos(e);
    }
    for (const Triple& tr : R.triples()) {
        const int pa = pos(tr.a), pb = pos(tr.b), pc = pos(tr.c);
        if (!((pa < pb && pb < pc) || (pc < pb && pb < pa))) {
            return false;
        }
    }
    return true;
}

namespace detail {

// Backtracking state for the total-ordering search. Works on arbitrary
// ternary relations; a triple with repeated elements can never be satisfied
// and short-circuits the whole search.
class OrderSearch {
public:
    explicit OrderSearch(const TernaryRelation& R) : m_(R.ground_size()) {
        for (const Triple& t : R.triples()) {
            triples_.push_back(t);
        }
        by_element_.resize(std::size_t(m_) + 1);
        for (std::size_t ti = 0; ti < triples_.size(); ++ti) {
            const Triple& t = triples_[ti];
            for (ElementId e : {t.a, t.b, t.c}) {
                auto& list = by_element_[std::size_t(e)];
                if (list.empty() || list.back() != int(ti)) {
                    list.push_back(int(ti));
                }
            }
        }
        // Most-constrained element first, smaller id on ties.
        order_.resize(std::size_t(m_));
        std::iota(order_.begin(), order_.end(), 1);
        std::stable_sort(order_.begin(), order_.end(), [&](ElementId x, ElementId y) {
            return by_element_[std::size_t(x)].size() > by_element_[std::size_t(y)].size();
        });
        pos_.assign(std::size_t(m_) + 1, 0);
        used_.assign(std::size_t(m_) + 1, false);
    }

    OrderVerdict run() {
        for (const Triple& t : triples_) {
            if (!t.all_distinct()) {
                return {};  // unsatisfiable regardless of placement
            }
        }
        if (!assign(0)) {
            return {};
        }
        OrderWitness w;
        for (ElementId e = 1; e <= m_; ++e) {
            w.position[e] = pos_[std::size_t(e)];
        }
        return {std::move(w)};
    }

private:
    bool assign(std::size_t k) {
        if (k == order_.size()) {
            return true;
        }
        const ElementId e = order_[k];
        for (int p = 1; p <= m_; ++p) {
            if (used_[std::size_t(p)]) {
                continue;
            }
            pos_[std::size_t(e)] = p;
            used_[std::size_t(p)] = true;
            if (consistent(e) && assign(k + 1)) {
                return true;
            }
            pos_[std::size_t(e)] = 0;
            used_[std::size_t(p)] = false;
        }
        return false;
    }

    bool consistent(ElementId e) const {
        for (int ti : by_element_[std::size_t(e)]) {
            if (!feasible(triples_[std::size_t(ti)])) {
                return false;
            }
        }
        return true;
    }

    // Partial feasibility of one triple: 0 means unassigned. The middle is
    // forbidden from sitting outside the span of the assigned endpoints.
    bool feasible(const Triple& t) const {
        const int pa = pos_[std::size_t(t.a)];
        const int pb = pos_[std::size_t(t.b)];
        const int pc = pos_[std::size_t(t.c)];
        if (pa && pb && pc) {
            return (pa < pb && pb < pc) || (pc < pb && pb < pa);
        }
        if (pa && pb) {
            return pa < pb ? free_above(pb) : free_below(pb);
        }
        if (pb && pc) {
            return pc < pb ? free_above(pb) : free_below(pb);
        }
        if (pa && pc) {  // some free slot strictly inside the span
            for (int p = std::min(pa, pc) + 1; p < std::max(pa, pc); ++p) {
                if (!used_[std::size_t(p)]) {
                    return true;
                }
            }
            return false;
        }
        return true;
    }

    bool free_above(int p) const {
        for (int q = p + 1; q <= m_; ++q) {
            if (!used_[std::size_t(q)]) {
                return true;
            }
        }
        return false;
    }
    bool free_below(int p) const {
        for (int q = 1; q < p; ++q) {
            if (!used_[std::size_t(q)]) {
                return true;
            }
        }
        return false;
    }

    int m_;
    std::vector<Triple> triples_;
    std::vector<std::vector<int>> by_element_;
    std::vector<ElementId> order_;
    std::vector<int> pos_;
    std::vector<bool> used_;
};

}  // namespace detail

// Backtracking decision for total orderability. Accepts arbitrary ternary
// relations; UNSAT only after exhaustive search, and any witness verifies.
inline OrderVerdict solve_order(const TernaryRelation& R) {
    return detail::OrderSearch(R).run();
}

// Oracle: enumerate all m! placements in lexicographic order and return the
// first that verifies. Same verdict contract as solve_order.
inline OrderVerdict brute_force_order(const TernaryRelation& R, int max_ground_size = 10) {
    const int m = R.ground_size();
    if (m > max_ground_size) {
        throw TooLarge("brute_force_order: ground set of " + std::to_string(m) +
                       " exceeds limit " + std::to_string(max_ground_size));
    }
    std::vector<int> positions(std::size_t(m), 0);
    std::iota(positions.begin(), positions.end(), 1);
    do {
        OrderWitness w;
        for (ElementId e = 1; e <= m; ++e) {
            w.position[e] = positions[std::size_t(e - 1)];
        }
        if (verify_order(R, w)) {
            return {std::move(w)};
        }
    } while (std::next_permutation(positions.begin(), positions.end()));
    return {};
}

}  // namespace causalbet
