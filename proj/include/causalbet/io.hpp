#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causalbet/digraph.hpp"
#include "causalbet/errors.hpp"
#include "causalbet/probspace.hpp"
#include "causalbet/rational.hpp"
#include "causalbet/relation.hpp"
#include "causalbet/witness.hpp"

namespace causalbet {

namespace detail {

// Strips an end-of-line comment and surrounding whitespace.
inline std::string clean_line(std::string line) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
    }
    const char* ws = " \t\r\n";
    const auto first = line.find_first_not_of(ws);
    if (first == std::string::npos) {
        return "";
    }
    const auto last = line.find_last_not_of(ws);
    return line.substr(first, last - first + 1);
}

inline long long parse_int(const std::string& token, int line_no, const std::string& what) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(token, &used);
    } catch (const std::exception&) {
        throw ParseError(line_no, "expected " + what + ", got '" + token + "'");
    }
    if (used != token.size()) {
        throw ParseError(line_no, "trailing characters after " + what + " in '" + token + "'");
    }
    return value;
}

}  // namespace detail

struct ParsedRelation {
    TernaryRelation relation{0};
    // Source line of each triple; closure-added reversals inherit the line of
    // the triple that forced them.
    std::map<Triple, int> line_of;
};

// Text format: first nonblank line `m <size>`, then one `a b c` triple per
// line. `#` starts a comment; blank lines are ignored.
inline ParsedRelation parse_relation(std::istream& in, bool close_reversal = false) {
    std::optional<int> m;
    std::vector<std::pair<Triple, int>> triples;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::clean_line(raw);
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) {
            tokens.push_back(tok);
        }
        if (!m) {
            if (tokens.size() != 2 || tokens[0] != "m") {
                throw ParseError(line_no, "expected header 'm <size>'");
            }
            const long long size = detail::parse_int(tokens[1], line_no, "ground-set size");
            if (size < 0 || size > 1'000'000) {
                throw ParseError(line_no, "ground-set size out of range: " + tokens[1]);
            }
            m = int(size);
            continue;
        }
        if (tokens.size() != 3) {
            throw ParseError(line_no, "expected three element ids, got " +
                                          std::to_string(tokens.size()) + " fields");
        }
        ElementId ids[3];
        for (int i = 0; i < 3; ++i) {
            const long long v = detail::parse_int(tokens[std::size_t(i)], line_no, "element id");
            if (v < 1 || v > *m) {
                throw ParseError(line_no, "element id " + tokens[std::size_t(i)] +
                                              " outside 1.." + std::to_string(*m));
            }
            ids[i] = ElementId(v);
        }
        triples.emplace_back(Triple{ids[0], ids[1], ids[2]}, line_no);
    }
    if (!m) {
        throw ParseError(line_no, "missing header 'm <size>'");
    }
    ParsedRelation out;
    out.relation = TernaryRelation(*m);
    for (const auto& [t, ln] : triples) {
        out.relation.add(t);
        out.line_of.emplace(t, ln);
        if (close_reversal) {
            out.relation.add(t.reversed());
            out.line_of.emplace(t.reversed(), ln);
        }
    }
    return out;
}

inline void write_relation(std::ostream& out, const TernaryRelation& R) {
    out << "m " << R.ground_size() << "\n";
    for (const Triple& t : R.triples()) {
        out << t.a << " " << t.b << " " << t.c << "\n";
    }
}

// Serializable witness: parameters, moment tables, and (optionally) the full
// atom list. The atoms are redundant — the tables determine them — and are
// included only for human inspection and external tooling.
struct SpaceDump {
    ConstructionParams params;
    MomentTables tables;
    std::optional<std::vector<std::pair<std::uint32_t, Rational>>> atoms;
};

inline SpaceDump make_dump(const StructuredSpace& space, bool include_atoms) {
    SpaceDump dump;
    dump.params = space.params();
    dump.tables = space.tables();
    if (include_atoms) {
        const std::uint32_t n = std::uint32_t(1) << space.ground_size();
        dump.atoms.emplace();
        dump.atoms->reserve(n);
        for (std::uint32_t mask = 0; mask < n; ++mask) {
            dump.atoms->emplace_back(mask, space.weight_of_mask(mask));
        }
    }
    return dump;
}

inline void write_space_dump(std::ostream& out, const SpaceDump& dump) {
    nlohmann::ordered_json j;
    j["m"] = dump.params.m;
    j["epsilon"] = dump.params.epsilon.str();
    j["delta"] = dump.params.delta.str();
    auto beta = nlohmann::ordered_json::array();
    for (const auto& [p, value] : dump.tables.pair_moment) {
        beta.push_back({p.lo, p.hi, value.str()});
    }
    j["beta"] = std::move(beta);
    auto gamma = nlohmann::ordered_json::array();
    for (const auto& [t, value] : dump.tables.triple_moment) {
        gamma.push_back({t.a, t.b, t.c, value.str()});
    }
    j["gamma"] = std::move(gamma);
    if (dump.atoms) {
        auto atoms = nlohmann::ordered_json::array();
        for (const auto& [mask, weight] : *dump.atoms) {
            atoms.push_back({std::to_string(mask), weight.str()});
        }
        j["atoms"] = std::move(atoms);
    }
    out << j.dump(2) << "\n";
}

namespace detail {

inline Rational json_rational(const nlohmann::json& v, const std::string& where) {
    if (!v.is_string()) {
        throw ParseError(0, where + ": rationals must be \"num/den\" strings");
    }
    try {
        return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ParseError(0, where + ": " + e.what());
    }
}

}  // namespace detail

inline SpaceDump read_space_dump(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("m") || !j.contains("epsilon") || !j.contains("delta") ||
        !j.contains("beta") || !j.contains("gamma")) {
        throw ParseError(0, "space dump must contain m, epsilon, delta, beta, gamma");
    }
    SpaceDump dump;
    if (!j["m"].is_number_integer()) {
        throw ParseError(0, "m must be an integer");
    }
    dump.params.m = j["m"].get<int>();
    if (dump.params.m < 1 || dump.params.m > 30) {
        throw ParseError(0, "m outside supported range 1..30");
    }
    dump.params.epsilon = detail::json_rational(j["epsilon"], "epsilon");
    dump.params.delta = detail::json_rational(j["delta"], "delta");
    if (!params_within_bounds(dump.params)) {
        throw ParseError(0, "epsilon/delta outside the construction bounds");
    }
    if (!j["beta"].is_array()) {
        throw ParseError(0, "beta must be an array");
    }
    for (const auto& entry : j["beta"]) {
        if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
            !entry[1].is_number_integer()) {
            throw ParseError(0, "beta entries must be [i, j, \"num/den\"]");
        }
        const int i = entry[0].get<int>(), k = entry[1].get<int>();
        if (i < 1 || i > dump.params.m || k < 1 || k > dump.params.m || i == k) {
            throw ParseError(0, "beta entry indices out of range");
        }
        if (!dump.tables.pair_moment
                 .emplace(Pair::of(i, k), detail::json_rational(entry[2], "beta value"))
                 .second) {
            throw ParseError(0, "duplicate beta entry for " + to_string(Pair::of(i, k)));
        }
    }
    if (!j["gamma"].is_array()) {
        throw ParseError(0, "gamma must be an array");
    }
    for (const auto& entry : j["gamma"]) {
        if (!entry.is_array() || entry.size() != 4 || !entry[0].is_number_integer() ||
            !entry[1].is_number_integer() || !entry[2].is_number_integer()) {
            throw ParseError(0, "gamma entries must be [i, j, k, \"num/den\"]");
        }
        const int a = entry[0].get<int>(), b = entry[1].get<int>(), c = entry[2].get<int>();
        if (a < 1 || a > dump.params.m || b < 1 || b > dump.params.m || c < 1 ||
            c > dump.params.m || a == b || a == c || b == c) {
            throw ParseError(0, "gamma entry indices out of range");
        }
        if (!dump.tables.triple_moment
                 .emplace(Triad::of(a, b, c), detail::json_rational(entry[3], "gamma value"))
                 .second) {
            throw ParseError(0, "duplicate gamma entry for " + to_string(Triad::of(a, b, c)));
        }
    }
    // Completeness and the per-table windows; the weight bounds follow from
    // these, so a dump passing here always assembles.
    const int m = dump.params.m;
    const Rational quarter(1, 4), eighth(1, 8);
    const Rational beta_cap = quarter + dump.params.epsilon / 2;
    const Rational gamma_cap = eighth + dump.params.epsilon;
    if (dump.tables.pair_moment.size() != std::size_t(m) * (m - 1) / 2) {
        throw ParseError(0, "beta must cover every two-element subset exactly once");
    }
    if (dump.tables.triple_moment.size() != std::size_t(m) * (m - 1) * (m - 2) / 6) {
        throw ParseError(0, "gamma must cover every three-element subset exactly once");
    }
    for (const auto& [p, value] : dump.tables.pair_moment) {
        if (!(value > quarter && value < beta_cap)) {
            throw ParseError(0, "beta value for " + to_string(p) + " outside (1/4, 1/4 + eps/2)");
        }
    }
    for (const auto& [t, value] : dump.tables.triple_moment) {
        if (!(value > eighth && value < gamma_cap)) {
            throw ParseError(0, "gamma value for " + to_string(t) + " outside (1/8, 1/8 + eps)");
        }
    }
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) {
            throw ParseError(0, "atoms must be an array");
        }
        dump.atoms.emplace();
        for (const auto& entry : j["atoms"]) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string()) {
                throw ParseError(0, "atom entries must be [\"bitmask\", \"num/den\"]");
            }
            const std::string mask_str = entry[0].get<std::string>();
            unsigned long mask = 0;
            try {
                std::size_t used = 0;
                mask = std::stoul(mask_str, &used);
                if (used != mask_str.size()) {
                    throw std::invalid_argument(mask_str);
                }
            } catch (const std::exception&) {
                throw ParseError(0, "atom bitmask must be a decimal string, got '" + mask_str +
                                        "'");
            }
            dump.atoms->emplace_back(std::uint32_t(mask),
                                     detail::json_rational(entry[1], "atom weight"));
        }
    }
    return dump;
}

// Rebuilds the structured space from a dump, cross-checking any listed atoms
// against the weights the tables determine.
inline StructuredSpace space_from_dump(const SpaceDump& dump) {
    StructuredSpace space = detail::assemble_weights(dump.params, dump.tables);
    if (dump.atoms) {
        const std::uint64_t expect = std::uint64_t(1) << dump.params.m;
        if (dump.atoms->size() != expect) {
            throw ParseError(0, "atom list has " + std::to_string(dump.atoms->size()) +
                                    " entries, expected " + std::to_string(expect));
        }
        for (const auto& [mask, weight] : *dump.atoms) {
            if (mask >= expect) {
                throw ParseError(0, "atom bitmask " + std::to_string(mask) + " out of range");
            }
            if (weight != space.weight_of_mask(mask)) {
                throw ParseError(0, "atom " + std::to_string(mask) +
                                        " weight disagrees with the moment tables");
            }
        }
    }
    return space;
}

// CSV ingest: header `atom,weight`, one atom per row. Weights are exact
// num/den fractions or integer counts; the column is normalized by its exact
// total, so counts need not sum to one.
inline ProbabilitySpace parse_space_csv(std::istream& in) {
    std::string raw;
    int line_no = 0;
    bool saw_header = false;
    std::vector<std::pair<std::string, Rational>> atoms;
    Rational total = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::clean_line(raw);
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(line_no, "expected 'atom,weight'");
        }
        const std::string left = detail::clean_line(line.substr(0, comma));
        const std::string right = detail::clean_line(line.substr(comma + 1));
        if (!saw_header) {
            if (left != "atom" || right != "weight") {
                throw ParseError(line_no, "expected header 'atom,weight'");
            }
            saw_header = true;
            continue;
        }
        if (left.empty()) {
            throw ParseError(line_no, "empty atom label");
        }
        Rational w;
        try {
            w = Rational::parse(right);
        } catch (const std::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (w.sign() < 0) {
            throw ParseError(line_no, "negative weight " + right);
        }
        total += w;
        atoms.emplace_back(left, std::move(w));
    }
    if (!saw_header) {
        throw ParseError(line_no, "missing header 'atom,weight'");
    }
    if (atoms.empty()) {
        throw ParseError(line_no, "no atoms listed");
    }
    if (total.is_zero()) {
        throw ParseError(line_no, "weights sum to zero; cannot normalize");
    }
    for (auto& [label, w] : atoms) {
        w = w / total;
    }
    return ProbabilitySpace::from_weights(std::move(atoms));
}

// Event definitions: `name: i1 i2 i3 …` with zero-based atom indices.
inline std::vector<Event> parse_events(std::istream& in, int atom_count) {
    std::string raw;
    int line_no = 0;
    std::vector<Event> events;
    std::set<std::string> names;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::clean_line(raw);
        if (line.empty()) {
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw ParseError(line_no, "expected 'name: i1 i2 ...'");
        }
        const std::string name = detail::clean_line(line.substr(0, colon));
        if (name.empty()) {
            throw ParseError(line_no, "empty event name");
        }
        if (!names.insert(name).second) {
            throw ParseError(line_no, "duplicate event name '" + name + "'");
        }
        std::istringstream fields(line.substr(colon + 1));
        std::set<int> members;
        for (std::string tok; fields >> tok;) {
            const long long idx = detail::parse_int(tok, line_no, "atom index");
            if (idx < 0 || idx >= atom_count) {
                throw ParseError(line_no, "atom index " + tok + " outside 0.." +
                                              std::to_string(atom_count - 1));
            }
            members.insert(int(idx));
        }
        events.emplace_back(name, std::move(members), atom_count);
    }
    return events;
}

// DOT export of a pair digraph: every vertex listed (isolated ones included),
// then every edge, both in ascending order.
inline void write_dot(std::ostream& out, const PairDigraph& G) {
    out << "digraph G {\n";
    for (int v = 0; v < G.vertex_count(); ++v) {
        out << "  \"" << to_string(G.pair_at(v)) << "\";\n";
    }
    for (const auto& [from, to] : G.edges()) {
        out << "  \"" << to_string(from) << "\" -> \"" << to_string(to) << "\";\n";
    }
    out << "}\n";
}

// Renders a directed cycle the way the underlying triples spell it: each pair
// leads with the element it shares with its predecessor, and the opening pair
// is repeated at the end to close the loop.
inline std::string format_cycle(const std::vector<Pair>& cycle) {
    const auto render = [&](std::size_t i) {
        const Pair& cur = cycle[i];
        const Pair& prev = cycle[(i + cycle.size() - 1) % cycle.size()];
        ElementId lead = cur.lo;
        if (cycle.size() > 1 && shared_count(prev, cur) == 1) {
            lead = prev.contains(cur.lo) ? cur.lo : cur.hi;
        }
        return "{" + std::to_string(lead) + "," + std::to_string(cur.other(lead)) + "}";
    };
    std::string out;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        out += render(i);
        out += "->";
    }
    out += render(0);
    return out;
}

}  // namespace causalbet
