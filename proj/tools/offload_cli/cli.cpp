#include "cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "offload/error.hpp"
#include "offload/report.hpp"
#include "offload/scenario.hpp"

namespace offload::cli {
namespace {

struct Options {
    std::string format = "table";
    std::string out_path;
    std::uint64_t seed = 0;

    std::string scenario_path;
    std::string mode;
    std::string crash;
    bool trace = false;

    std::vector<std::string> splits;
    std::vector<std::size_t> vm_counts;

    std::string decision;
    std::string sequence;
    std::string graph_path;
    std::optional<double> bandwidth_mbps;
    std::optional<double> latency_s;

    std::string validate_path;
    bool canonical = false;
};

bool is_graph_file(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    return ext == ".graph" || ext == ".txt" || ext == ".edges";
}

std::string cmd_simulate(const Options& o, OutputFormat format) {
    auto scenario = load_scenario(o.scenario_path);
    RunMode mode = scenario.mode;
    if (!o.mode.empty()) {
        auto parsed = parse_run_mode(o.mode);
        if (!parsed) throw ParseError("expected sequential, distributed or both", 0, "--mode");
        mode = *parsed;
    }
    std::optional<CrashEvent> crash;
    if (!o.crash.empty()) crash = parse_crash_flag(o.crash);
    return render(run_simulate(scenario, mode, crash), format, o.trace);
}

std::string cmd_resend_sweep(const Options& o, OutputFormat format) {
    auto scenario = load_scenario(o.scenario_path);
    std::vector<std::vector<double>> splits;
    for (const auto& s : o.splits) splits.push_back(parse_split_flag(s));
    return render(run_resend_sweep(scenario, splits), format);
}

std::string cmd_energy_compare(const Options& o, OutputFormat format) {
    auto scenario = load_scenario(o.scenario_path);
    auto counts = o.vm_counts.empty() ? std::vector<std::size_t>{1, 2} : o.vm_counts;
    return render(run_energy_compare(scenario, counts), format);
}

std::string cmd_partition(const Options& o, OutputFormat format) {
    std::optional<DecisionInputs> inputs;
    std::optional<MethodSequence> sequence;
    std::optional<CallGraph> graph;
    NetworkSpec network{100.0, 0.0};

    if (!o.scenario_path.empty()) {
        auto scenario = load_scenario(o.scenario_path);
        inputs = scenario.decision_inputs;
        sequence = scenario.method_sequence;
        graph = scenario.graph;
        network = scenario.network;
    }
    if (!o.decision.empty()) inputs = parse_decision_flag(o.decision);
    if (!o.sequence.empty()) sequence = parse_sequence_flag(o.sequence);
    if (!o.graph_path.empty()) {
        graph = parse_edge_list(read_text_file(o.graph_path));
        if (auto v = validate_graph(*graph); !v.ok()) throw InvalidGraphError("invalid graph", v.messages());
    }
    if (o.bandwidth_mbps) network.bandwidth_mbps = *o.bandwidth_mbps;
    if (o.latency_s) network.latency = *o.latency_s;
    return render(run_partition(inputs, sequence, graph, network), format);
}

std::string cmd_validate(const Options& o, OutputFormat format, int& exit_code) {
    std::vector<std::string> violations;
    std::string canonical;
    try {
        if (is_graph_file(o.validate_path)) {
            auto graph = parse_edge_list(read_text_file(o.validate_path));
            violations = validate_graph(graph).messages();
            if (violations.empty()) canonical = to_edge_list(graph);
        } else {
            canonical = to_json(load_scenario(o.validate_path));
        }
    } catch (const ValidationError& e) {
        violations = e.violations();
    }
    exit_code = violations.empty() ? kExitOk : kExitInvalidInput;
    if (o.canonical && violations.empty()) return canonical;
    return render_validation(o.validate_path, violations, format);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Mobile-to-cloud offloading simulator and partition toolkit", "offload"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", o.out_path, "Write the report to this file instead of stdout");
    app.add_option("--seed", o.seed, "Reserved; every run is deterministic");

    auto* simulate = app.add_subcommand("simulate", "Run sequential and/or distributed offloading");
    simulate->add_option("scenario", o.scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--mode", o.mode, "sequential | distributed | both (default: the scenario's mode)");
    simulate->add_option("--crash", o.crash, "Crash one VM: <vm>@<fraction> or <vm>@t=<seconds>");
    simulate->add_flag("--trace", o.trace, "Include the event trace");

    auto* sweep = app.add_subcommand("resend-sweep", "Worst-case resend for splits of the offloadable data");
    sweep->add_option("scenario", o.scenario_path, "Scenario JSON file")->required();
    sweep->add_option("--split", o.splits, "Percentages per VM, e.g. 60,10 (repeatable)")->required();

    auto* energy = app.add_subcommand("energy-compare", "Cloud energy of one workload on different VM counts");
    energy->add_option("scenario", o.scenario_path, "Scenario JSON file")->required();
    energy->add_option("--vms", o.vm_counts, "VM counts to compare (default 1,2)")->delimiter(',');

    auto* partition = app.add_subcommand("partition", "Offloading decision and best method interval");
    partition->add_option("scenario", o.scenario_path, "Scenario JSON file supplying defaults");
    partition->add_option("--decision", o.decision, "\"C=.. M=.. S=.. (or F=..) D=.. B=.. P_c=.. P_i=.. P_tr=..\"");
    partition->add_option("--sequence", o.sequence, "\"M,C,I,R;M,C,I,R;...\" in seconds");
    partition->add_option("--graph", o.graph_path, "Edge-list graph file for per-chain advice");
    partition->add_option("--bandwidth-mbps", o.bandwidth_mbps, "Bandwidth for graph-derived costs (default 100)");
    partition->add_option("--latency-s", o.latency_s, "Latency for graph-derived costs (default 0)");

    auto* validate = app.add_subcommand("validate", "Check a scenario or edge-list graph file");
    validate->add_option("file", o.validate_path, "Scenario JSON or .graph file")->required();
    validate->add_flag("--canonical", o.canonical, "Print the canonical form when valid");

    std::vector<const char*> argv{"offload"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    const auto format = *parse_format(o.format);
    int exit_code = kExitOk;
    std::string report;
    try {
        if (simulate->parsed()) report = cmd_simulate(o, format);
        else if (sweep->parsed()) report = cmd_resend_sweep(o, format);
        else if (energy->parsed()) report = cmd_energy_compare(o, format);
        else if (partition->parsed()) report = cmd_partition(o, format);
        else report = cmd_validate(o, format, exit_code);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSimulation;
    }

    if (o.out_path.empty()) {
        out << report;
    } else {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!(file << report)) {
            err << "error: cannot write '" << o.out_path << "'\n";
            return kExitSimulation;
        }
    }
    return exit_code;
}

}  // namespace offload::cli
