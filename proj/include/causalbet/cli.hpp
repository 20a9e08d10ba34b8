#pragma once

#include <iostream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "causalbet/digraph.hpp"
#include "causalbet/errors.hpp"
#include "causalbet/io.hpp"
#include "causalbet/orderability.hpp"
#include "causalbet/probspace.hpp"
#include "causalbet/relation.hpp"
#include "causalbet/witness.hpp"

// Command implementations behind the causalbet binary. Exit-code contract:
// 0 success/realizable/SAT, 1 betweenness-axiom failure, 2 cycle/unrealizable/
// UNSAT/round-trip mismatch, 3 parse or IO trouble.
namespace causalbet::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_axioms = 1;
inline constexpr int exit_unrealizable = 2;
inline constexpr int exit_bad_input = 3;

namespace detail {

inline void print_violations(std::ostream& out, const BetweennessReport& report,
                             const std::map<Triple, int>& line_of) {
    for (const Violation& v : report.violations) {
        out << "not-betweenness: " << axiom_name(v.axiom);
        if (auto it = line_of.find(v.triple); it != line_of.end()) {
            out << " violated at line " << it->second;
        } else {
            out << " violated by " << to_string(v.triple);
        }
        out << "\n";
    }
}

// Prints the certificate of a failed decision and maps it to an exit code.
inline int report_failure(std::ostream& err, const RealizabilityCertificate& cert,
                          const std::map<Triple, int>& line_of) {
    if (cert.verdict == Verdict::NotBetweenness) {
        print_violations(err, cert.report, line_of);
        return exit_axioms;
    }
    err << "cyclic: " << format_cycle(*cert.cycle) << "\n";
    return exit_unrealizable;
}

}  // namespace detail

inline int cmd_check(std::istream& in, std::ostream& out, bool close_reversal = false,
                     std::ostream& err = std::cerr) {
    try {
        ParsedRelation parsed = parse_relation(in, close_reversal);
        RealizabilityCertificate cert = decide_realizability(parsed.relation);
        if (cert.verdict == Verdict::AbstractCausal) {
            out << "abstract-causal\n";
            return exit_ok;
        }
        return detail::report_failure(out, cert, parsed.line_of);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    }
}

inline int cmd_witness(std::istream& in, std::ostream& out, bool close_reversal = false,
                       int expand_limit = 20, std::ostream& err = std::cerr) {
    ParsedRelation parsed;
    try {
        parsed = parse_relation(in, close_reversal);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    }
    try {
        StructuredSpace space = construct_witness(parsed.relation);
        write_space_dump(out, make_dump(space, space.ground_size() <= expand_limit));
        return exit_ok;
    } catch (const NotRealizable& e) {
        return detail::report_failure(err, e.certificate, parsed.line_of);
    }
}

inline int cmd_extract(std::istream& space_in, std::istream* events_in, std::ostream& out,
                       int expand_limit = 20, std::ostream& err = std::cerr) {
    try {
        // Buffer the space input so the format sniff (JSON object vs CSV)
        // works on non-seekable streams.
        std::ostringstream buffer;
        buffer << space_in.rdbuf();
        const std::string text = buffer.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) {
            throw ParseError(1, "empty space input");
        }

        ProbabilitySpace space = ProbabilitySpace::from_weights({{"", Rational(1)}});
        std::vector<Event> events;
        if (text[first] == '{') {
            if (events_in != nullptr) {
                err << "error: a space dump defines its own events; "
                       "drop the events file\n";
                return exit_bad_input;
            }
            std::istringstream json_in(text);
            ExpandedWitness expanded = expand(space_from_dump(read_space_dump(json_in)),
                                              expand_limit);
            space = std::move(expanded.space);
            events = std::move(expanded.events);
        } else {
            if (events_in == nullptr) {
                err << "error: CSV spaces need an events file\n";
                return exit_bad_input;
            }
            std::istringstream csv_in(text);
            space = parse_space_csv(csv_in);
            events = parse_events(*events_in, space.atom_count());
        }
        write_relation(out, extract_cb(space, events));
        return exit_ok;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const DuplicateEvents& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const TooLarge& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    }
}

inline int cmd_order(std::istream& in, std::ostream& out, bool close_reversal = false,
                     bool brute_force = false, std::ostream& err = std::cerr) {
    try {
        ParsedRelation parsed = parse_relation(in, close_reversal);
        OrderVerdict verdict =
            brute_force ? brute_force_order(parsed.relation) : solve_order(parsed.relation);
        if (!verdict.sat()) {
            out << "UNSAT\n";
            return exit_unrealizable;
        }
        out << "SAT\n";
        for (const auto& [element, position] : verdict.witness->position) {
            out << element << " " << position << "\n";
        }
        return exit_ok;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const TooLarge& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    }
}

inline int cmd_roundtrip(std::istream& in, std::ostream& out, bool close_reversal = false,
                         int expand_limit = 20, std::ostream& err = std::cerr) {
    try {
        ParsedRelation parsed = parse_relation(in, close_reversal);
        RealizabilityCertificate cert = decide_realizability(parsed.relation);
        if (cert.verdict != Verdict::AbstractCausal) {
            return detail::report_failure(out, cert, parsed.line_of);
        }
        ExpandedWitness expanded = expand(construct_witness(parsed.relation), expand_limit);
        TernaryRelation extracted = extract_cb(expanded.space, expanded.events);
        if (extracted == parsed.relation) {
            out << "pass\n";
            return exit_ok;
        }
        out << "fail\n";
        return exit_unrealizable;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const TooLarge& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    }
}

inline int cmd_export_dot(std::istream& in, std::ostream& out, bool close_reversal = false,
                          std::ostream& err = std::cerr) {
    try {
        ParsedRelation parsed = parse_relation(in, close_reversal);
        write_dot(out, derived_digraph(parsed.relation));
        return exit_ok;
    } catch (const NotABetweenness& e) {
        detail::print_violations(err, e.report, {});
        return exit_axioms;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_bad_input;
    }
}

}  // namespace causalbet::cli
