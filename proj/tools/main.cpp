// causalbet: decide whether a ternary relation is an abstract causal
// betweenness, build an exact probability-space witness, extract the
// causal-betweenness relation of a space, and solve total orderability.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "causalbet/cli.hpp"

namespace {

// Runs fn with the resolved streams; "-" selects stdin/stdout.
template <typename Fn>
int with_streams(const std::string& in_path, const std::string& out_path, Fn&& fn) {
    std::ifstream fin;
    std::istream* in = &std::cin;
    if (in_path != "-") {
        fin.open(in_path);
        if (!fin) {
            std::cerr << "error: cannot open " << in_path << "\n";
            return causalbet::cli::exit_bad_input;
        }
        in = &fin;
    }
    std::ofstream fout;
    std::ostream* out = &std::cout;
    if (out_path != "-") {
        fout.open(out_path);
        if (!fout) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return causalbet::cli::exit_bad_input;
        }
        out = &fout;
    }
    return fn(*in, *out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"abstract causal betweenness toolkit"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output = "-";
    std::string events_path;
    bool close_reversal = false;
    bool brute_force = false;
    int expand_limit = 20;
    int rc = 0;

    const auto add_relation_input = [&](CLI::App* cmd) {
        cmd->add_option("input", input, "relation file, or - for stdin")->capture_default_str();
        cmd->add_flag("--close-reversal", close_reversal,
                      "add the reversal of every ingested triple");
    };
    const auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("-o,--output", output, "output file, or - for stdout")
            ->capture_default_str();
    };

    auto* check = app.add_subcommand(
        "check", "classify a relation: abstract-causal, not-betweenness, or cyclic");
    add_relation_input(check);
    add_output(check);
    check->callback([&] {
        rc = with_streams(input, output, [&](std::istream& in, std::ostream& out) {
            return causalbet::cli::cmd_check(in, out, close_reversal);
        });
    });

    auto* witness = app.add_subcommand(
        "witness", "construct an exact probability-space witness for a relation");
    add_relation_input(witness);
    add_output(witness);
    witness->add_option("--expand-limit", expand_limit,
                        "largest ground-set size whose atoms are listed in the dump")
        ->capture_default_str();
    witness->callback([&] {
        rc = with_streams(input, output, [&](std::istream& in, std::ostream& out) {
            return causalbet::cli::cmd_witness(in, out, close_reversal, expand_limit);
        });
    });

    auto* extract = app.add_subcommand(
        "extract", "extract the causal-betweenness relation of a probability space");
    extract->add_option("input", input, "space dump (JSON) or CSV file, or - for stdin")
        ->capture_default_str();
    extract->add_option("--events", events_path, "events file (CSV spaces only)");
    extract->add_option("--expand-limit", expand_limit,
                        "largest ground-set size a dump may expand to")
        ->capture_default_str();
    add_output(extract);
    extract->callback([&] {
        rc = with_streams(input, output, [&](std::istream& in, std::ostream& out) {
            if (events_path.empty()) {
                return causalbet::cli::cmd_extract(in, nullptr, out, expand_limit);
            }
            std::ifstream events(events_path);
            if (!events) {
                std::cerr << "error: cannot open " << events_path << "\n";
                return causalbet::cli::exit_bad_input;
            }
            return causalbet::cli::cmd_extract(in, &events, out, expand_limit);
        });
    });

    auto* order = app.add_subcommand("order", "find a total order realizing the relation");
    add_relation_input(order);
    add_output(order);
    order->add_flag("--brute-force", brute_force, "enumerate permutations instead of searching");
    order->callback([&] {
        rc = with_streams(input, output, [&](std::istream& in, std::ostream& out) {
            return causalbet::cli::cmd_order(in, out, close_reversal, brute_force);
        });
    });

    auto* roundtrip = app.add_subcommand(
        "roundtrip", "construct a witness and verify its extracted relation matches");
    add_relation_input(roundtrip);
    add_output(roundtrip);
    roundtrip->add_option("--expand-limit", expand_limit,
                          "largest ground-set size the round trip may expand")
        ->capture_default_str();
    roundtrip->callback([&] {
        rc = with_streams(input, output, [&](std::istream& in, std::ostream& out) {
            return causalbet::cli::cmd_roundtrip(in, out, close_reversal, expand_limit);
        });
    });

    auto* export_dot =
        app.add_subcommand("export-dot", "write the derived pair digraph in DOT format");
    add_relation_input(export_dot);
    add_output(export_dot);
    export_dot->callback([&] {
        rc = with_streams(input, output, [&](std::istream& in, std::ostream& out) {
            return causalbet::cli::cmd_export_dot(in, out, close_reversal);
        });
    });

    CLI11_PARSE(app, argc, argv);
    return rc;
}
