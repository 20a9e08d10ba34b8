#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "causalbet/cli.hpp"
#include "helpers.hpp"

using namespace causalbet;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string relation_text(const TernaryRelation& R) {
    std::ostringstream out;
    write_relation(out, R);
    return out.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

RunResult run_check(const std::string& input, bool close = false) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::cmd_check(in, out, close, err);
    return {code, out.str(), err.str()};
}

RunResult run_witness(const std::string& input, int expand_limit = 20) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::cmd_witness(in, out, false, expand_limit, err);
    return {code, out.str(), err.str()};
}

RunResult run_extract(const std::string& space, const std::string* events,
                      int expand_limit = 20) {
    std::istringstream space_in(space);
    std::ostringstream out, err;
    int code = -1;
    if (events != nullptr) {
        std::istringstream events_in(*events);
        code = cli::cmd_extract(space_in, &events_in, out, expand_limit, err);
    } else {
        code = cli::cmd_extract(space_in, nullptr, out, expand_limit, err);
    }
    return {code, out.str(), err.str()};
}

RunResult run_order(const std::string& input, bool brute = false) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::cmd_order(in, out, false, brute, err);
    return {code, out.str(), err.str()};
}

RunResult run_roundtrip(const std::string& input, int expand_limit = 20) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::cmd_roundtrip(in, out, false, expand_limit, err);
    return {code, out.str(), err.str()};
}

RunResult run_export_dot(const std::string& input) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::cmd_export_dot(in, out, false, err);
    return {code, out.str(), err.str()};
}

std::string csv_text(const ProbabilitySpace& space) {
    std::ostringstream out;
    out << "atom,weight\n";
    for (int i = 0; i < space.atom_count(); ++i) {
        out << space.label(i) << "," << space.weight(i).str() << "\n";
    }
    return out.str();
}

std::string events_text(const std::vector<Event>& events) {
    std::ostringstream out;
    for (const Event& e : events) {
        out << e.name() << ":";
        for (int idx : e.members()) {
            out << " " << idx;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

TEST_CASE("check classifies relations and picks exit codes") {
    SECTION("realizable input") {
        const RunResult r = run_check(relation_text(testutil::reichenbach()));
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out == "abstract-causal\n");
        CHECK(r.err.empty());
    }
    SECTION("three-cycle") {
        const RunResult r = run_check(relation_text(testutil::cycle3_relation()));
        CHECK(r.code == cli::exit_unrealizable);
        CHECK(r.out == "cyclic: {4,1}->{4,2}->{4,3}->{4,1}\n");
    }
    SECTION("four-cycle") {
        const RunResult r = run_check(relation_text(testutil::cycle4_relation()));
        CHECK(r.code == cli::exit_unrealizable);
        CHECK(r.out == "cyclic: {1,2}->{2,3}->{3,4}->{4,1}->{1,2}\n");
    }
    SECTION("axiom violation points at the offending line") {
        const RunResult r = run_check("m 3\n1 1 2\n");
        CHECK(r.code == cli::exit_axioms);
        CHECK(first_line(r.out) == "not-betweenness: distinctness violated at line 2");
    }
    SECTION("parse trouble") {
        const RunResult r = run_check("m 3\n1 2\n");
        CHECK(r.code == cli::exit_bad_input);
        CHECK(r.err == "error: line 2: expected three element ids, got 2 fields\n");
    }
    SECTION("reversal closure flag") {
        const std::string half = "m 4\n1 2 3\n1 2 4\n4 2 3\n";
        CHECK(run_check(half).code == cli::exit_axioms);
        const RunResult closed = run_check(half, true);
        CHECK(closed.code == cli::exit_ok);
        CHECK(closed.out == "abstract-causal\n");
    }
}

TEST_CASE("witness emits a valid deterministic dump") {
    const std::string input = relation_text(testutil::reichenbach());
    const RunResult r = run_witness(input);
    REQUIRE(r.code == cli::exit_ok);
    CHECK(r.out.find("\"epsilon\": \"1/4097\"") != std::string::npos);
    CHECK(r.out.find("\"atoms\"") != std::string::npos);
    CHECK(run_witness(input).out == r.out);  // byte-identical reruns

    SECTION("dump parses back and rebuilds") {
        std::istringstream dump_in(r.out);
        const StructuredSpace space = space_from_dump(read_space_dump(dump_in));
        CHECK(space.ground_size() == 4);
    }
    SECTION("atoms appear only under the expansion limit") {
        const RunResult trimmed = run_witness(input, 3);
        CHECK(trimmed.code == cli::exit_ok);
        CHECK(trimmed.out.find("\"atoms\"") == std::string::npos);
    }
    SECTION("cycle diagnostics go to stderr") {
        const RunResult bad = run_witness(relation_text(testutil::cycle3_relation()));
        CHECK(bad.code == cli::exit_unrealizable);
        CHECK(bad.out.empty());
        CHECK(bad.err == "cyclic: {4,1}->{4,2}->{4,3}->{4,1}\n");
    }
    SECTION("axiom diagnostics go to stderr") {
        const RunResult bad = run_witness("m 3\n1 1 2\n");
        CHECK(bad.code == cli::exit_axioms);
        CHECK(first_line(bad.err) == "not-betweenness: distinctness violated at line 2");
    }
    SECTION("parse trouble") {
        CHECK(run_witness("m 3\nx y z\n").code == cli::exit_bad_input);
    }
}

TEST_CASE("witness dumps feed straight into extract") {
    const std::string dump = run_witness(relation_text(testutil::reichenbach())).out;
    const RunResult r = run_extract(dump, nullptr);
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out == relation_text(testutil::reichenbach()));

    SECTION("dumps refuse a separate events file") {
        const std::string events = "A: 0\n";
        const RunResult clash = run_extract(dump, &events);
        CHECK(clash.code == cli::exit_bad_input);
        CHECK(clash.err.find("events") != std::string::npos);
    }
}

TEST_CASE("extract consumes CSV spaces with explicit events") {
    SECTION("expanded witness via the CSV path") {
        const ExpandedWitness w = expand(construct_witness(testutil::reichenbach()));
        const std::string space = csv_text(w.space);
        const std::string events = events_text(w.events);
        const RunResult r = run_extract(space, &events);
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out == relation_text(testutil::reichenbach()));
    }
    SECTION("CSV without events is an error") {
        const std::string space = "atom,weight\na,1\nb,1\n";
        const RunResult r = run_extract(space, nullptr);
        CHECK(r.code == cli::exit_bad_input);
        CHECK(r.err.find("events") != std::string::npos);
    }
    SECTION("empty space input is an error") {
        const std::string events = "A: 0\n";
        CHECK(run_extract("  \n", &events).code == cli::exit_bad_input);
    }
    SECTION("duplicate event extents are an error") {
        const std::string space = "atom,weight\na,1\nb,1\n";
        const std::string events = "A: 0\nB: 0\n";
        const RunResult r = run_extract(space, &events);
        CHECK(r.code == cli::exit_bad_input);
        CHECK(r.err.rfind("error:", 0) == 0);
    }
    SECTION("agrees with the extraction oracle on random spaces") {
        testutil::Rng rng(513202);
        for (int trial = 0; trial < 10; ++trial) {
            const ProbabilitySpace space = testutil::random_space(rng);
            const std::vector<Event> events = testutil::random_events(rng, space);
            if (events.size() < 3) {
                continue;
            }
            const std::string events_src = events_text(events);
            const RunResult r = run_extract(csv_text(space), &events_src);
            REQUIRE(r.code == cli::exit_ok);
            CHECK(r.out == relation_text(testutil::oracle_extract(space, events)));
        }
    }
}

TEST_CASE("order reports satisfying assignments or UNSAT") {
    SECTION("orderable relation") {
        const TernaryRelation R = testutil::collinear_relation({0, 1, 2, 3, 4});
        const RunResult r = run_order(relation_text(R));
        REQUIRE(r.code == cli::exit_ok);
        std::istringstream lines(r.out);
        std::string verdict;
        std::getline(lines, verdict);
        CHECK(verdict == "SAT");
        OrderWitness witness;
        int element = 0, position = 0;
        while (lines >> element >> position) {
            witness.position[element] = position;
        }
        CHECK(witness.position.size() == 5);
        CHECK(verify_order(R, witness));
    }
    SECTION("unorderable relation") {
        const std::string input = relation_text(testutil::reichenbach());
        for (bool brute : {false, true}) {
            const RunResult r = run_order(input, brute);
            CHECK(r.code == cli::exit_unrealizable);
            CHECK(r.out == "UNSAT\n");
        }
    }
    SECTION("empty relation is trivially orderable") {
        const RunResult r = run_order("m 3\n");
        CHECK(r.code == cli::exit_ok);
        CHECK(first_line(r.out) == "SAT");
    }
    SECTION("brute force respects its size cap") {
        CHECK(run_order("m 11\n", true).code == cli::exit_bad_input);
        CHECK(run_order("m 11\n", false).code == cli::exit_ok);
    }
    SECTION("parse trouble") {
        CHECK(run_order("m 3\n1 2 3 4\n").code == cli::exit_bad_input);
    }
}

TEST_CASE("roundtrip confirms construct-then-extract identity") {
    SECTION("named example") {
        const RunResult r = run_roundtrip(relation_text(testutil::reichenbach()));
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out == "pass\n");
    }
    SECTION("empty relation") {
        const RunResult r = run_roundtrip("m 5\n");
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out == "pass\n");
    }
    SECTION("generated acyclic instance") {
        testutil::Rng rng(77);
        const TernaryRelation R = testutil::random_acyclic_betweenness(rng, 5);
        const RunResult r = run_roundtrip(relation_text(R));
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out == "pass\n");
    }
    SECTION("cyclic input short-circuits") {
        const RunResult r = run_roundtrip(relation_text(testutil::cycle3_relation()));
        CHECK(r.code == cli::exit_unrealizable);
        CHECK(r.out == "cyclic: {4,1}->{4,2}->{4,3}->{4,1}\n");
    }
    SECTION("axiom violation short-circuits") {
        CHECK(run_roundtrip("m 3\n1 1 2\n").code == cli::exit_axioms);
    }
    SECTION("expansion limit is enforced") {
        const RunResult r = run_roundtrip("m 5\n", 3);
        CHECK(r.code == cli::exit_bad_input);
        CHECK(r.err.rfind("error:", 0) == 0);
    }
}

TEST_CASE("fixture files drive the commands") {
    const auto slurp = [](const std::string& name) {
        std::ifstream in(testutil::fixture_path(name));
        REQUIRE(in.good());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    SECTION("check") {
        CHECK(run_check(slurp("reichenbach.rel")).out == "abstract-causal\n");
        CHECK(run_check(slurp("cycle3.rel")).out == "cyclic: {4,1}->{4,2}->{4,3}->{4,1}\n");
        CHECK(run_check(slurp("cycle4.rel")).out ==
              "cyclic: {1,2}->{2,3}->{3,4}->{4,1}->{1,2}\n");
        CHECK(run_check(slurp("bad_distinct.rel")).code == cli::exit_axioms);
    }
    SECTION("order") {
        CHECK(first_line(run_order(slurp("collinear5.rel")).out) == "SAT");
    }
    SECTION("extract on the common-cause space") {
        const std::string events = slurp("common_cause.events");
        const RunResult r = run_extract(slurp("common_cause.csv"), &events);
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out == "m 3\n1 2 3\n3 2 1\n");
    }
}

TEST_CASE("export-dot renders the derived digraph") {
    SECTION("chain") {
        const RunResult r = run_export_dot("m 3\n1 2 3\n3 2 1\n");
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out ==
              "digraph G {\n"
              "  \"{1,2}\";\n"
              "  \"{1,3}\";\n"
              "  \"{2,3}\";\n"
              "  \"{1,2}\" -> \"{1,3}\";\n"
              "  \"{2,3}\" -> \"{1,3}\";\n"
              "}\n");
    }
    SECTION("cyclic digraphs still export") {
        const RunResult r = run_export_dot(relation_text(testutil::cycle3_relation()));
        CHECK(r.code == cli::exit_ok);
        CHECK(r.out.find("-> \"{1,4}\";") != std::string::npos);
    }
    SECTION("non-betweenness input is rejected") {
        const RunResult r = run_export_dot("m 3\n1 1 2\n");
        CHECK(r.code == cli::exit_axioms);
        CHECK(first_line(r.err) == "not-betweenness: distinctness violated by (1,1,2)");
    }
    SECTION("parse trouble") {
        CHECK(run_export_dot("m 3\n1 2 nine\n").code == cli::exit_bad_input);
    }
}
