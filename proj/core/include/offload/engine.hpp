#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "offload/callgraph.hpp"

namespace offload {

/// Executor id reserved for chains that stay on the mobile device.
inline constexpr std::string_view kDeviceId = "device";

/// Virtual machine profile. PE count and RAM are descriptive only: a chain
/// is a single instruction stream, so neither changes timing.
struct VmSpec {
    std::string id;
    double mips = 10000.0;
    unsigned pe_count = 2;
    unsigned ram_mb = 1024;

    friend bool operator==(const VmSpec&, const VmSpec&) = default;
};

struct NetworkSpec {
    double bandwidth_mbps = 1.0;
    Seconds latency = 0.0;

    /// bytes * 8 / bandwidth + latency.
    Seconds transfer_time(Bytes bytes) const;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

enum class OffloadMode { Sequential, Distributed };

std::string_view to_string(OffloadMode mode);
std::optional<OffloadMode> parse_mode(std::string_view text);

struct OffloadPlan {
    ChainDecomposition decomposition;
    std::map<std::string, std::string> vm_assignment;  // chain head id -> VM id or "device"
    OffloadMode mode = OffloadMode::Distributed;
    std::vector<VmSpec> fleet;  // sorted by id

    const std::string& vm_of(const Chain& chain) const;
};

/// Assigns chains to executors. Sequential mode puts every offloadable chain
/// on the first VM by id; distributed mode hands VMs out round-robin in id
/// order, walking chains stage by stage in decomposition order, so chains of
/// one parallel stage land on distinct VMs.
///
/// Throws InsufficientFleetError when a parallel stage has more offloadable
/// chains than the fleet has VMs, SimulationError for an empty fleet and
/// ValidationError for malformed VM specs.
OffloadPlan build_plan(const ChainDecomposition& decomposition, OffloadMode mode, std::vector<VmSpec> fleet);

/// Checks the plan invariants; returns all violations.
std::vector<std::string> validate_plan(const OffloadPlan& plan);

enum class CrashTrigger { AtTime, AtFraction };

/// Single VM failure. An at-fraction trigger fires when the VM has finished
/// that fraction of its assigned execution work in the crash-free run; for a
/// VM with one chain that is upload completion + fraction * execution time.
struct CrashEvent {
    std::string vm_id;
    CrashTrigger trigger = CrashTrigger::AtFraction;
    double value = 0.0;  // seconds or fraction in [0, 1]

    friend bool operator==(const CrashEvent&, const CrashEvent&) = default;
};

enum class EventKind {
    UploadStart,
    UploadEnd,
    ExecStart,
    ExecEnd,
    ReturnStart,
    ReturnEnd,
    ResendStart,
    ResendEnd,
    Abort,
    Crash,
    Reprovision,
};

std::string_view to_string(EventKind kind);

struct TraceEvent {
    Seconds time = 0.0;
    EventKind kind = EventKind::ExecStart;
    std::string chain;  // head id; empty for crash/reprovision
    std::string vm;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimReport {
    OffloadMode mode = OffloadMode::Distributed;
    Seconds makespan = 0.0;
    std::map<std::string, Bytes> per_vm_bytes;  // every fleet VM, first-time uploads only
    Bytes total_offloaded_bytes = 0;
    Bytes resend_bytes = 0;
    Seconds resend_time = 0.0;
    std::optional<Seconds> crash_time;  // resolved trigger time
    std::vector<TraceEvent> event_trace;

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

Bytes chain_upload_bytes(const CallGraph& graph, const Chain& chain);
/// Only the last method's result leaves the VM; intermediate results stay there.
Bytes chain_return_bytes(const CallGraph& graph, const Chain& chain);
Seconds chain_cloud_time(const CallGraph& graph, const Chain& chain);
Seconds chain_mobile_time(const CallGraph& graph, const Chain& chain);

/// Runs the plan as a discrete-event simulation.
///
/// Stages are barriers. Inside a stage, distributed mode runs every chain
/// concurrently while sequential mode runs them one after another. Offloaded
/// chains upload, execute, then return; device chains only execute. A crash
/// aborts whatever chain the VM is running, reprovisions the VM instantly and
/// restarts that chain from its first method, re-uploading all of its bytes.
/// At equal timestamps the crash is processed before any completion.
///
/// Throws SimulationError when the crash names a VM outside the fleet and
/// DomainError on an invalid trigger value or network.
SimReport simulate(const CallGraph& graph, const OffloadPlan& plan, const NetworkSpec& network,
                   const std::optional<CrashEvent>& crash = std::nullopt);

/// 100 * (sequential - distributed) / sequential. Throws DomainError when
/// sequential <= 0.
double improvement_percent(Seconds sequential, Seconds distributed);

struct ResendSummary {
    std::string vm_id;         // VM holding the most data; ties go to the smaller id
    Bytes bytes = 0;
    Bytes application_bytes = 0;
    double percent = 0.0;      // of application_bytes
};

/// Bytes each VM receives under the plan.
std::map<std::string, Bytes> planned_vm_bytes(const CallGraph& graph, const OffloadPlan& plan);

/// Worst-case data resent after one VM crash: the largest per-VM share,
/// relative to the upload bytes of the whole application.
ResendSummary max_resend(const CallGraph& graph, const OffloadPlan& plan);

}  // namespace offload
