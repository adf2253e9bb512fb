#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "offload/callgraph.hpp"
#include "offload/energy.hpp"
#include "offload/engine.hpp"
#include "offload/partition.hpp"

namespace offload {

enum class RunMode { Sequential, Distributed, Both };

std::string_view to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view text);

struct DeviceSpec {
    DevicePowerProfile power;
    double mips = 1000.0;

    friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

/// Everything one simulation run needs.
struct Scenario {
    std::string name;
    CallGraph graph;
    DeviceSpec device;
    NetworkSpec network;
    std::vector<VmSpec> vm_fleet;  // sorted by id
    std::vector<Host> hosts;
    RunMode mode = RunMode::Both;
    std::optional<CrashEvent> crash;
    std::optional<DecisionInputs> decision_inputs;
    std::optional<MethodSequence> method_sequence;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr int kScenarioSchema = 1;

/// Every invariant the scenario violates, graph violations included.
std::vector<std::string> validate_scenario(const Scenario& scenario);

/// Parses a schema-1 scenario document. Omitted VM fields take the default
/// profile (10000 MIPS, 2 PE, 1024 MB); omitted hosts become a single host
/// with every VM and a capacity equal to the fleet's total MIPS * PE.
///
/// Throws ParseError (with line and field) on malformed text and
/// ValidationError listing every violation on an invalid scenario.
Scenario parse_scenario(std::string_view text);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical serialization: sorted keys, every default written out.
/// parse_scenario(to_json(s)) == s.
std::string to_json(const Scenario& scenario);

/// Parses `--crash` values: `<vm>@<fraction>` or `<vm>@t=<seconds>`.
/// Throws ParseError.
CrashEvent parse_crash_flag(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace offload
