#pragma once

// Shared fixtures, instance generators, and independent oracles. The oracles
// deliberately avoid the library's evaluation paths: the extraction oracle
// compares cross-multiplied masses instead of calling conditional(), and the
// moment oracle enumerates all 2^m atoms instead of using the closed form.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "causalbet/cli.hpp"
#include "causalbet/digraph.hpp"
#include "causalbet/io.hpp"
#include "causalbet/orderability.hpp"
#include "causalbet/probspace.hpp"
#include "causalbet/rational.hpp"
#include "causalbet/relation.hpp"
#include "causalbet/witness.hpp"

namespace testutil {

using namespace causalbet;

inline std::string fixture_path(const std::string& name) {
    return std::string(CAUSALBET_FIXTURE_DIR) + "/" + name;
}

// ---- fixtures ----

// Reichenbach's relation: 2 is between every other pair of {1, 3, 4}.
inline TernaryRelation reichenbach() {
    TernaryRelation R(4);
    for (Triple t : {Triple{1, 2, 3}, Triple{1, 2, 4}, Triple{4, 2, 3}}) {
        R.add(t);
        R.add(t.reversed());
    }
    return R;
}

// {(DAB),(DBC),(DCA)} with D=4: derived digraph has the 3-cycle
// {4,1}->{4,2}->{4,3}->{4,1}.
inline TernaryRelation cycle3_relation() {
    TernaryRelation R(4);
    for (Triple t : {Triple{4, 1, 2}, Triple{4, 2, 3}, Triple{4, 3, 1}}) {
        R.add(t);
        R.add(t.reversed());
    }
    return R;
}

// {(CAB),(DBC),(ACD),(BDA)}: derived digraph has the 4-cycle
// {1,2}->{2,3}->{3,4}->{4,1}->{1,2}.
inline TernaryRelation cycle4_relation() {
    TernaryRelation R(4);
    for (Triple t : {Triple{3, 1, 2}, Triple{4, 2, 3}, Triple{1, 3, 4}, Triple{2, 4, 1}}) {
        R.add(t);
        R.add(t.reversed());
    }
    return R;
}

// Metric betweenness of collinear integer points; element i+1 stands for
// points[i].
inline TernaryRelation collinear_relation(const std::vector<long long>& points) {
    const int n = int(points.size());
    TernaryRelation R(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (i == j || i == k || j == k) {
                    continue;
                }
                const long long a = points[std::size_t(i)], b = points[std::size_t(j)],
                                c = points[std::size_t(k)];
                if ((a < b && b < c) || (c < b && b < a)) {
                    R.add({i + 1, j + 1, k + 1});
                }
            }
        }
    }
    return R;
}

// ---- deterministic randomness ----

using Rng = std::mt19937_64;

// Inclusive-range draw; avoids std::uniform_int_distribution, whose output
// differs across standard libraries.
inline int rand_int(Rng& rng, int lo, int hi) {
    return lo + int(rng() % std::uint64_t(hi - lo + 1));
}

inline bool rand_percent(Rng& rng, int percent) { return rand_int(rng, 1, 100) <= percent; }

inline std::vector<int> random_permutation(Rng& rng, int n) {
    std::vector<int> perm(std::size_t(n), 0);
    std::iota(perm.begin(), perm.end(), 1);
    for (int i = n - 1; i > 0; --i) {
        std::swap(perm[std::size_t(i)], perm[std::size_t(rand_int(rng, 0, i))]);
    }
    return perm;
}

// ---- instance generators ----

// Betweenness induced by a hidden random total order: each 3-subset may
// contribute its order-middle triple (plus reversal). Totally orderable by
// construction, hence abstract-causal.
inline TernaryRelation random_order_betweenness(Rng& rng, int m, int keep_percent = 60) {
    const std::vector<int> pos = random_permutation(rng, m);
    TernaryRelation R(m);
    for (int i = 1; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) {
            for (int k = j + 1; k <= m; ++k) {
                if (!rand_percent(rng, keep_percent)) {
                    continue;
                }
                std::array<int, 3> ids{i, j, k};
                std::sort(ids.begin(), ids.end(), [&](int x, int y) {
                    return pos[std::size_t(x - 1)] < pos[std::size_t(y - 1)];
                });
                R.add({ids[0], ids[1], ids[2]});
                R.add({ids[2], ids[1], ids[0]});
            }
        }
    }
    return R;
}

// Betweenness built directly against a random pair ranking: within each
// 3-subset the only admissible middle is the element outside the lowest-
// ranked pair, so every derived edge descends in rank and the digraph is
// acyclic. Not totally orderable in general.
inline TernaryRelation random_acyclic_betweenness(Rng& rng, int m, int keep_percent = 60) {
    std::vector<Pair> pairs;
    for (int i = 1; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) {
            pairs.push_back(Pair::of(i, j));
        }
    }
    std::map<Pair, int> rank;
    const std::vector<int> shuffled = random_permutation(rng, int(pairs.size()));
    for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
        rank[pairs[idx]] = shuffled[idx];
    }
    TernaryRelation R(m);
    for (int i = 1; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) {
            for (int k = j + 1; k <= m; ++k) {
                if (!rand_percent(rng, keep_percent)) {
                    continue;
                }
                const std::array<Pair, 3> sides{Pair::of(i, j), Pair::of(i, k), Pair::of(j, k)};
                const Pair endpoints =
                    *std::min_element(sides.begin(), sides.end(), [&](const Pair& a,
                                                                      const Pair& b) {
                        return rank.at(a) < rank.at(b);
                    });
                const int middle = endpoints.contains(i) ? (endpoints.contains(j) ? k : j) : i;
                R.add({endpoints.lo, middle, endpoints.hi});
                R.add({endpoints.hi, middle, endpoints.lo});
            }
        }
    }
    return R;
}

// Arbitrary ternary relation: distinct-element triples, no reversal closure.
inline TernaryRelation random_arbitrary_relation(Rng& rng, int m, int triple_count) {
    TernaryRelation R(m);
    for (int n = 0; n < triple_count; ++n) {
        int a = rand_int(rng, 1, m), b = rand_int(rng, 1, m), c = rand_int(rng, 1, m);
        if (a == b || a == c || b == c) {
            --n;
            continue;
        }
        R.add({a, b, c});
    }
    return R;
}

inline ProbabilitySpace random_space(Rng& rng, int max_atoms = 8) {
    const int n = rand_int(rng, 2, max_atoms);
    std::vector<long long> counts(std::size_t(n), 0);
    long long total = 0;
    for (auto& c : counts) {
        c = rand_int(rng, 1, 30);
        total += c;
    }
    std::vector<std::pair<std::string, Rational>> atoms;
    for (int i = 0; i < n; ++i) {
        atoms.emplace_back("s" + std::to_string(i), Rational(counts[std::size_t(i)], total));
    }
    return ProbabilitySpace::from_weights(std::move(atoms));
}

inline std::vector<Event> random_events(Rng& rng, const ProbabilitySpace& space,
                                        int max_events = 5) {
    const int want = rand_int(rng, 3, max_events);
    std::set<std::set<int>> extents;
    std::vector<Event> events;
    int attempts = 0;
    while (int(events.size()) < want && attempts < 200) {
        ++attempts;
        std::set<int> members;
        for (int a = 0; a < space.atom_count(); ++a) {
            if (rand_int(rng, 0, 1) == 1) {
                members.insert(a);
            }
        }
        if (!extents.insert(members).second) {
            continue;
        }
        events.emplace_back("X" + std::to_string(events.size() + 1), std::move(members),
                            space.atom_count());
    }
    return events;
}

// ---- independent oracles ----

// Mass of the intersection of the given events, summed straight off the atom
// list.
inline Rational oracle_mass(const ProbabilitySpace& space, const std::vector<const Event*>& es) {
    Rational total = 0;
    for (int a = 0; a < space.atom_count(); ++a) {
        bool in_all = true;
        for (const Event* e : es) {
            if (!e->members().count(a)) {
                in_all = false;
                break;
            }
        }
        if (in_all) {
            total += space.weight(a);
        }
    }
    return total;
}

// Literal transcription of the five conditions with divisions cleared by
// cross-multiplication — a separate evaluation path from the library's.
inline bool oracle_causally_between(const ProbabilitySpace& space, const Event& A, const Event& B,
                                    const Event& C) {
    const Rational pa = oracle_mass(space, {&A});
    const Rational pb = oracle_mass(space, {&B});
    const Rational pc = oracle_mass(space, {&C});
    const Rational pab = oracle_mass(space, {&A, &B});
    const Rational pac = oracle_mass(space, {&A, &C});
    const Rational pbc = oracle_mass(space, {&B, &C});
    const Rational pabc = oracle_mass(space, {&A, &B, &C});

    const bool c5 = (pb - pab).sign() > 0 && (pb - pbc).sign() > 0;
    const bool c1 = pac > pa * pc;
    // P(C|B) > P(C|A), defined only when P(B) > 0 and P(A) > 0
    const bool c2 = pb.sign() > 0 && pa.sign() > 0 && pbc * pa > pac * pb;
    // P(A|B) > P(A|C), defined only when P(B) > 0 and P(C) > 0
    const bool c3 = pb.sign() > 0 && pc.sign() > 0 && pab * pc > pac * pb;
    // P(AC|B) = P(A|B)·P(C|B), defined only when P(B) > 0
    const bool c4 = pb.sign() > 0 && pabc * pb == pab * pbc;
    return c1 && c2 && c3 && c4 && c5;
}

inline TernaryRelation oracle_extract(const ProbabilitySpace& space,
                                      const std::vector<Event>& X) {
    const int n = int(X.size());
    TernaryRelation R(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (i != j && i != k && j != k &&
                    oracle_causally_between(space, X[std::size_t(i)], X[std::size_t(j)],
                                            X[std::size_t(k)])) {
                    R.add({i + 1, j + 1, k + 1});
                }
            }
        }
    }
    return R;
}

// Brute-force moment: enumerate all 2^m atoms of the structured space.
inline Rational oracle_moment(const StructuredSpace& space, const std::vector<ElementId>& idx) {
    std::uint32_t need = 0;
    for (ElementId e : idx) {
        need |= std::uint32_t(1) << (e - 1);
    }
    Rational total = 0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << space.ground_size()); ++mask) {
        if ((mask & need) == need) {
            total += space.weight_of_mask(mask);
        }
    }
    return total;
}

}  // namespace testutil
