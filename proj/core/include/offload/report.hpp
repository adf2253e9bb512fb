#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "offload/energy.hpp"
#include "offload/engine.hpp"
#include "offload/partition.hpp"
#include "offload/scenario.hpp"

namespace offload {

enum class OutputFormat { Table, Json, Csv };

std::optional<OutputFormat> parse_format(std::string_view text);

struct ModeRun {
    OffloadMode mode = OffloadMode::Distributed;
    SimReport sim;
    EnergyReport energy;
};

/// One row of a resend sweep: a split of the application across VMs and the
/// data a single crash forces the device to send again.
struct ResendRow {
    std::vector<double> split_percent;
    double offloadable_percent = 0.0;
    Bytes application_bytes = 0;
    std::string worst_vm;
    Bytes max_resend_bytes = 0;
    double max_resend_percent = 0.0;
    Bytes simulated_resend_bytes = 0;  // crash injected on worst_vm
};

struct EnergyRow {
    std::size_t vm_count = 0;
    Seconds makespan = 0.0;
    double cloud_kwh = 0.0;
};

/// Results of one CLI command. Emitters only format these fields; nothing
/// is recomputed while printing.
struct ReportBundle {
    std::string command;
    std::string scenario;
    std::vector<ModeRun> runs;
    std::optional<double> improvement_percent;
    std::vector<ResendRow> resend_rows;
    std::vector<EnergyRow> energy_rows;
    std::optional<Seconds> energy_horizon;
    std::optional<double> energy_relative_spread;
    std::vector<std::string> warnings;
};

struct ChainAdvice {
    std::string chain;
    MethodSequence sequence;
    OffloadInterval best;
};

struct PartitionReport {
    std::optional<DecisionInputs> inputs;
    std::optional<double> energy_saved;
    std::optional<double> energy_saved_speedup;
    std::optional<MethodSequence> sequence;
    std::optional<IntervalUtilities> utilities;
    std::optional<OffloadInterval> best_interval;
    std::optional<ChainDecomposition> decomposition;
    std::vector<ChainAdvice> chain_advice;

    std::string energy_recommendation() const;
    std::string interval_recommendation() const;
};

/// Runs the requested modes of a scenario. `crash` overrides the scenario's
/// own crash event when set.
ReportBundle run_simulate(const Scenario& scenario, RunMode mode, const std::optional<CrashEvent>& crash);

/// Replays each split of the scenario's application bytes over as many VMs
/// as the split has entries. Throws ValidationError when a split does not
/// sum to the scenario's offloadable percentage.
ReportBundle run_resend_sweep(const Scenario& scenario, const std::vector<std::vector<double>>& splits);

/// Runs the scenario workload on the first k VMs for every requested k and
/// integrates host energy over a common horizon (the longest makespan).
/// Runs execute concurrently; rows keep the request order.
/// Throws SimulationError when a count exceeds the fleet.
ReportBundle run_energy_compare(const Scenario& scenario, const std::vector<std::size_t>& vm_counts);

/// Throws ValidationError listing every missing input when neither decision
/// inputs, a method sequence nor a graph is available.
PartitionReport run_partition(const std::optional<DecisionInputs>& inputs,
                              const std::optional<MethodSequence>& sequence,
                              const std::optional<CallGraph>& graph, const NetworkSpec& network);

/// Parses `C=1000 M=100 S=1000 D=1 B=1 P_c=0.9 P_i=0.3 P_tr=1.3` (spaces
/// or commas between pairs). S or F may be omitted, not both. Throws
/// ValidationError naming every missing symbol, ParseError on bad tokens.
DecisionInputs parse_decision_flag(std::string_view text);

/// Parses `M,C,I,R;M,C,I,R;...`. Throws ParseError.
MethodSequence parse_sequence_flag(std::string_view text);

/// Parses a comma-separated split such as `60,10`. Throws ParseError.
std::vector<double> parse_split_flag(std::string_view text);

std::string render(const ReportBundle& bundle, OutputFormat format, bool with_trace = false);
std::string render(const PartitionReport& report, OutputFormat format);
std::string render_validation(const std::string& subject, const std::vector<std::string>& violations,
                              OutputFormat format);

}  // namespace offload
