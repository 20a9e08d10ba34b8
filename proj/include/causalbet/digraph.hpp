#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "causalbet/relation.hpp"

namespace causalbet {

// Unordered two-element subset of the ground set, stored smaller-first.
struct Pair {
    ElementId lo = 0, hi = 0;

    static Pair of(ElementId i, ElementId j) {
        if (i == j) {
            throw std::invalid_argument("Pair: elements must differ");
        }
        return i < j ? Pair{i, j} : Pair{j, i};
    }

    bool contains(ElementId e) const { return e == lo || e == hi; }
    ElementId other(ElementId e) const { return e == lo ? hi : lo; }

    auto operator<=>(const Pair&) const = default;
};

inline std::string to_string(const Pair& p) {
    return "{" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "}";
}

inline int shared_count(const Pair& u, const Pair& v) {
    return int(v.contains(u.lo)) + int(v.contains(u.hi));
}

// Directed graph whose vertex set is all C(m,2) two-element subsets of
// {1..m}; every edge joins two pairs sharing exactly one element.
class PairDigraph {
public:
    explicit PairDigraph(int ground_size) : m_(ground_size) {
        if (ground_size < 0) {
            throw std::invalid_argument("PairDigraph: negative ground size");
        }
        for (ElementId i = 1; i <= m_; ++i) {
            for (ElementId j = i + 1; j <= m_; ++j) {
                index_.emplace(Pair{i, j}, int(vertices_.size()));
                vertices_.push_back(Pair{i, j});
            }
        }
        succ_.resize(vertices_.size());
    }

    int ground_size() const { return m_; }
    int vertex_count() const { return int(vertices_.size()); }
    const std::vector<Pair>& vertices() const { return vertices_; }

    int index_of(const Pair& p) const {
        auto it = index_.find(p);
        if (it == index_.end()) {
            throw std::out_of_range("PairDigraph: " + to_string(p) + " is not a vertex");
        }
        return it->second;
    }
    const Pair& pair_at(int idx) const { return vertices_.at(std::size_t(idx)); }

    void add_edge(const Pair& from, const Pair& to) {
        if (shared_count(from, to) != 1) {
            throw std::invalid_argument("PairDigraph: edge " + to_string(from) + "->" +
                                        to_string(to) + " must share exactly one element");
        }
        if (succ_[std::size_t(index_of(from))].insert(index_of(to)).second) {
            ++edge_count_;
        }
    }

    bool has_edge(const Pair& from, const Pair& to) const {
        return succ_[std::size_t(index_of(from))].count(index_of(to)) != 0;
    }

    const std::set<int>& successors(int idx) const { return succ_.at(std::size_t(idx)); }
    int edge_count() const { return edge_count_; }

    std::vector<std::pair<Pair, Pair>> edges() const {
        std::vector<std::pair<Pair, Pair>> out;
        for (int u = 0; u < vertex_count(); ++u) {
            for (int v : succ_[std::size_t(u)]) {
                out.emplace_back(pair_at(u), pair_at(v));
            }
        }
        return out;  // already sorted: vertices and successor sets are ordered
    }

private:
    int m_;
    std::vector<Pair> vertices_;
    std::map<Pair, int> index_;
    std::vector<std::set<int>> succ_;
    int edge_count_ = 0;
};

// Digraph derived from a betweenness: one edge ({a,b},{a,c}) per (a,b,c) in R.
// Reversal closure contributes the mirrored edge ({c,b},{c,a}) automatically.
inline PairDigraph derived_digraph(const TernaryRelation& R) {
    if (BetweennessReport rep = check_betweenness(R); !rep.is_betweenness) {
        throw NotABetweenness(std::move(rep));
    }
    PairDigraph g(R.ground_size());
    for (const Triple& t : R.triples()) {
        g.add_edge(Pair::of(t.a, t.b), Pair::of(t.a, t.c));
    }
    return g;
}

// Iterative depth-first search for a directed cycle. Vertices are explored in
// lexicographic order, so the result is deterministic; the returned cycle is
// rotated to start at its smallest vertex. Consecutive entries (including the
// wrap-around) are edges.
inline std::optional<std::vector<Pair>> find_cycle(const PairDigraph& G) {
    enum : unsigned char { White, Gray, Black };
    const int n = G.vertex_count();
    std::vector<unsigned char> color(std::size_t(n), White);
    std::vector<int> path;

    struct Frame {
        int vertex;
        std::set<int>::const_iterator next;
    };

    for (int start = 0; start < n; ++start) {
        if (color[std::size_t(start)] != White) {
            continue;
        }
        std::vector<Frame> stack;
        color[std::size_t(start)] = Gray;
        path.push_back(start);
        stack.push_back({start, G.successors(start).begin()});
        while (!stack.empty()) {
            Frame& frame = stack.back();
            if (frame.next == G.successors(frame.vertex).end()) {
                color[std::size_t(frame.vertex)] = Black;
                path.pop_back();
                stack.pop_back();
                continue;
            }
            int w = *frame.next++;
            if (color[std::size_t(w)] == Gray) {
                auto begin = std::find(path.begin(), path.end(), w);
                std::vector<int> cycle(begin, path.end());
                auto smallest = std::min_element(cycle.begin(), cycle.end());
                std::rotate(cycle.begin(), smallest, cycle.end());
                std::vector<Pair> pairs;
                pairs.reserve(cycle.size());
                for (int v : cycle) {
                    pairs.push_back(G.pair_at(v));
                }
                return pairs;
            }
            if (color[std::size_t(w)] == White) {
                color[std::size_t(w)] = Gray;
                path.push_back(w);
                stack.push_back({w, G.successors(w).begin()});
            }
        }
    }
    return std::nullopt;
}

struct CyclicGraph : std::runtime_error {
    std::vector<Pair> cycle;
    explicit CyclicGraph(std::vector<Pair> c)
        : std::runtime_error("digraph contains a directed cycle of length " +
                             std::to_string(c.size())),
          cycle(std::move(c)) {}
};

// Bijection vertices -> 1..C(m,2) with rank(from) > rank(to) along every
// edge. Kahn-style: sinks are ranked first, the lexicographically smallest
// available pair always next, so the result is deterministic.
inline std::map<Pair, int> topological_rank(const PairDigraph& G) {
    const int n = G.vertex_count();
    std::vector<int> out_degree(std::size_t(n), 0);
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        out_degree[std::size_t(u)] = int(G.successors(u).size());
        for (int v : G.successors(u)) {
            preds[std::size_t(v)].push_back(u);
        }
    }
    std::set<int> ready;
    for (int v = 0; v < n; ++v) {
        if (out_degree[std::size_t(v)] == 0) {
            ready.insert(v);
        }
    }
    std::map<Pair, int> rank;
    int next_rank = 1;
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        rank.emplace(G.pair_at(v), next_rank++);
        for (int u : preds[std::size_t(v)]) {
            if (--out_degree[std::size_t(u)] == 0) {
                ready.insert(u);
            }
        }
    }
    if (int(rank.size()) != n) {
        auto cycle = find_cycle(G);
        throw CyclicGraph(cycle ? *cycle : std::vector<Pair>{});
    }
    return rank;
}

enum class Verdict { AbstractCausal, NotBetweenness, Cyclic };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::AbstractCausal: return "abstract-causal";
        case Verdict::NotBetweenness: return "not-betweenness";
        case Verdict::Cyclic: return "cyclic";
    }
    return "?";
}

// Decision with an independently checkable certificate: a monotone rank when
// the relation is realizable, the axiom violations or an explicit cycle when
// it is not.
struct RealizabilityCertificate {
    Verdict verdict = Verdict::NotBetweenness;
    std::optional<std::map<Pair, int>> rank;   // AbstractCausal
    std::optional<std::vector<Pair>> cycle;    // Cyclic
    BetweennessReport report;
};

inline RealizabilityCertificate decide_realizability(const TernaryRelation& R) {
    RealizabilityCertificate cert;
    cert.report = check_betweenness(R);
    if (!cert.report.is_betweenness) {
        cert.verdict = Verdict::NotBetweenness;
        return cert;
    }
    PairDigraph g = derived_digraph(R);
    if (auto cycle = find_cycle(g)) {
        cert.verdict = Verdict::Cyclic;
        cert.cycle = std::move(cycle);
        return cert;
    }
    cert.verdict = Verdict::AbstractCausal;
    cert.rank = topological_rank(g);
    return cert;
}

}  // namespace causalbet
