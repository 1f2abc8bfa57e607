// Command-line front end. Stages communicate through files:
//
//   flowminer generate --flows lib.json --mode mm-i --seed 7 -o traces.txt
//   flowminer mine traces.txt --slice -o patterns.json
//   flowminer eval --patterns patterns.json --flows lib.json

#include "flowminer/flowminer.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace flowminer;

void write_output(const std::string &path, const std::string &content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out{ path, std::ios::binary };
    if (!out) {
        throw error{ "cannot write '" + path + "'" };
    }
    out << content;
    if (!out) {
        throw error{ "write to '" + path + "' failed" };
    }
}

TraceSet read_inputs(const std::vector<std::string> &paths) {
    TraceSet all;
    for (const std::string &path : paths) {
        TraceSet part = path == "-" ? read_traces(std::cin, "<stdin>") : read_traces_file(path);
        for (Trace &t : part.traces) {
            t.validate();
            all.traces.push_back(std::move(t));
        }
    }
    return all;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{ "Mine message-flow specifications from concurrent execution traces" };
    app.require_subcommand(1);

    // generate
    auto *gen = app.add_subcommand("generate", "Execute ground-truth flow paths into synthetic traces");
    std::string gen_flows, gen_out, gen_meta, gen_mode = "sm-ni";
    GenConfig cfg;
    bool gen_addresses = false;
    gen->add_option("--flows", gen_flows, "Flow library (JSON)")->required()->check(CLI::ExistingFile);
    gen->add_option("--mode", gen_mode, "sm-ni, sm-i or mm-i")->check(CLI::IsMember({ "sm-ni", "sm-i", "mm-i" }));
    gen->add_option("--instances", cfg.instances_per_pattern, "Instances of every path per trace")->check(CLI::PositiveNumber);
    gen->add_option("--traces", cfg.num_traces, "Number of traces")->check(CLI::PositiveNumber);
    gen->add_option("--seed", cfg.seed, "Random seed");
    gen->add_option("--max-batch", cfg.max_batch, "Largest number of messages per step (mm-i)")->check(CLI::PositiveNumber);
    gen->add_option("--max-active", cfg.max_active, "Cap on concurrently started instances, 0 = unbounded");
    gen->add_flag("--addresses", gen_addresses, "Give every instance an address");
    gen->add_option("--address-pool", cfg.address_pool, "Number of distinct addresses")->check(CLI::PositiveNumber);
    gen->add_option("-o,--output", gen_out, "Trace file (default stdout)");
    gen->add_option("--metadata", gen_meta, "Write the generation metadata sidecar here");

    // slice
    auto *slc = app.add_subcommand("slice", "Split traces into per-address sub-traces");
    std::vector<std::string> slc_in;
    std::string slc_out, slc_policy = "own";
    slc->add_option("traces", slc_in, "Trace files")->required();
    slc->add_option("--noaddr-policy", slc_policy, "own, broadcast or drop")->check(CLI::IsMember({ "own", "broadcast", "drop" }));
    slc->add_option("-o,--output", slc_out, "Output trace file (default stdout)");

    // mine
    auto *mine = app.add_subcommand("mine", "Mine sequential patterns");
    std::vector<std::string> mine_in;
    std::string mine_out, mine_policy = "own", mine_causality = "dest-src";
    bool mine_slice = false, mine_no_rule4 = false;
    double mine_conf = 1.0;
    unsigned mine_jobs = 1;
    mine->add_option("traces", mine_in, "Trace files")->required();
    mine->add_flag("--slice", mine_slice, "Slice traces by address before mining");
    mine->add_option("--noaddr-policy", mine_policy, "own, broadcast or drop")->check(CLI::IsMember({ "own", "broadcast", "drop" }));
    mine->add_option("--confidence", mine_conf, "Confidence threshold; below 1.0 is experimental")->check(CLI::Range(0.0, 1.0));
    mine->add_option("--causality", mine_causality, "dest-src, src-dest or off")->check(CLI::IsMember({ "dest-src", "src-dest", "off" }));
    mine->add_flag("--no-rule4", mine_no_rule4, "Disable evidence-oriented chaining");
    mine->add_option("--jobs", mine_jobs, "Worker threads")->check(CLI::PositiveNumber);
    mine->add_option("-o,--output", mine_out, "Pattern file (default stdout)");

    // baseline
    auto *base = app.add_subcommand("baseline", "Mine alternating patterns and chain them");
    std::vector<std::string> base_in;
    std::string base_out, base_policy = "own";
    bool base_slice = false;
    base->add_option("traces", base_in, "Trace files")->required();
    base->add_flag("--slice", base_slice, "Slice traces by address first");
    base->add_option("--noaddr-policy", base_policy, "own, broadcast or drop")->check(CLI::IsMember({ "own", "broadcast", "drop" }));
    base->add_option("-o,--output", base_out, "Pattern file (default stdout)");

    // eval
    auto *ev = app.add_subcommand("eval", "Score mined patterns against the flow library");
    std::string ev_patterns, ev_flows, ev_out, ev_tool = "flowminer";
    bool ev_strict = false;
    ev->add_option("--patterns", ev_patterns, "Pattern file")->required()->check(CLI::ExistingFile);
    ev->add_option("--flows", ev_flows, "Flow library (JSON)")->required()->check(CLI::ExistingFile);
    ev->add_option("-o,--output", ev_out, "JSON report");
    ev->add_option("--tool", ev_tool, "Label in the summary table");
    ev->add_flag("--strict-validity", ev_strict, "Require the witness path to contain every pattern message");

    // export-dot
    auto *dot = app.add_subcommand("export-dot", "Render flows or patterns as a DOT graph");
    std::string dot_flows, dot_patterns, dot_out;
    auto *dot_flows_opt = dot->add_option("--flows", dot_flows, "Flow library (JSON)")->check(CLI::ExistingFile);
    dot->add_option("--patterns", dot_patterns, "Pattern file")->check(CLI::ExistingFile)->excludes(dot_flows_opt);
    dot->add_option("-o,--output", dot_out, "DOT file (default stdout)");

    // paths
    auto *paths = app.add_subcommand("paths", "Write the ground-truth paths of a flow library as a pattern file");
    std::string paths_flows, paths_out;
    paths->add_option("--flows", paths_flows, "Flow library (JSON)")->required()->check(CLI::ExistingFile);
    paths->add_option("-o,--output", paths_out, "Pattern file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const GroundTruth gt = enumerate_paths(read_flow_library_file(gen_flows));
            cfg.mode = gen_mode_from_string(gen_mode);
            cfg.address_mode = gen_addresses ? AddressMode::per_instance : AddressMode::none;
            const GeneratedTraces out = generate(gt, cfg);
            write_output(gen_out, format_traces(out.traces));
            if (!gen_meta.empty()) {
                write_output(gen_meta, metadata_to_json(out.metadata, gt).dump(2) + "\n");
            }
        } else if (*slc) {
            const TraceSet sliced = slice_set(read_inputs(slc_in), no_address_policy_from_string(slc_policy));
            write_output(slc_out, format_traces(sliced));
        } else if (*mine) {
            PipelineOptions opts;
            opts.slice = mine_slice;
            opts.no_address = no_address_policy_from_string(mine_policy);
            opts.mining.confidence = mine_conf;
            opts.mining.causality = causality_from_string(mine_causality);
            opts.mining.jobs = mine_jobs;
            opts.chaining.evidence_rule = !mine_no_rule4;
            if (mine_conf < 1.0) {
                std::cerr << "flowminer: note: confidence below 1.0 is experimental; patterns are no longer invariants\n";
            }
            const TraceSet traces = read_inputs(mine_in);
            if (traces.empty()) {
                throw error{ "no traces to mine" };
            }
            const PipelineResult result = run_flowminer(traces, opts);
            write_output(mine_out, patterns_to_json(result.patterns).dump(2) + "\n");
        } else if (*base) {
            const auto patterns = run_baseline(read_inputs(base_in), base_slice, no_address_policy_from_string(base_policy));
            write_output(base_out, patterns_to_json(patterns).dump(2) + "\n");
        } else if (*ev) {
            const GroundTruth gt = enumerate_paths(read_flow_library_file(ev_flows));
            const auto mined = read_patterns_file(ev_patterns);
            const auto report = evaluate(sequences_of(mined), gt.sequences, ev_strict ? ValidityMode::strict : ValidityMode::literal);
            if (!ev_out.empty()) {
                write_output(ev_out, eval_report_to_json(report, gt).dump(2) + "\n");
            }
            std::cout << eval_summary(report, ev_tool);
        } else if (*dot) {
            if (!dot_flows.empty()) {
                std::string text;
                for (const FlowSpec &f : read_flow_library_file(dot_flows)) {
                    text += export_dot(f);
                }
                write_output(dot_out, text);
            } else if (!dot_patterns.empty()) {
                auto patterns = read_patterns_file(dot_patterns);
                sort_patterns(patterns);
                write_output(dot_out, export_dot(patterns));
            } else {
                throw error{ "export-dot needs --flows or --patterns" };
            }
        } else if (*paths) {
            const GroundTruth gt = enumerate_paths(read_flow_library_file(paths_flows));
            write_output(paths_out, patterns_to_json(ground_truth_patterns(gt)).dump(2) + "\n");
        }
    } catch (const std::exception &e) {
        std::cerr << "flowminer: error: " << e.what() << '\n';
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
