#include "offload/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <tuple>

#include "offload/error.hpp"

namespace offload {

Seconds NetworkSpec::transfer_time(Bytes bytes) const {
    return static_cast<double>(bytes) * 8.0 / (bandwidth_mbps * 1e6) + latency;
}

std::string_view to_string(OffloadMode mode) {
    return mode == OffloadMode::Sequential ? "sequential" : "distributed";
}

std::optional<OffloadMode> parse_mode(std::string_view text) {
    if (text == "sequential") return OffloadMode::Sequential;
    if (text == "distributed") return OffloadMode::Distributed;
    return std::nullopt;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::UploadStart: return "upload_start";
        case EventKind::UploadEnd: return "upload_end";
        case EventKind::ExecStart: return "exec_start";
        case EventKind::ExecEnd: return "exec_end";
        case EventKind::ReturnStart: return "return_start";
        case EventKind::ReturnEnd: return "return_end";
        case EventKind::ResendStart: return "resend_start";
        case EventKind::ResendEnd: return "resend_end";
        case EventKind::Abort: return "abort";
        case EventKind::Crash: return "crash";
        case EventKind::Reprovision: return "reprovision";
    }
    return "unknown";
}

const std::string& OffloadPlan::vm_of(const Chain& chain) const {
    auto it = vm_assignment.find(chain.head());
    if (it == vm_assignment.end()) throw UnknownIdError(chain.head());
    return it->second;
}

Bytes chain_upload_bytes(const CallGraph& graph, const Chain& chain) {
    Bytes total = 0;
    for (const auto& id : chain.node_ids) total += graph.node(id).upload_bytes;
    return total;
}

Bytes chain_return_bytes(const CallGraph& graph, const Chain& chain) {
    return graph.node(chain.node_ids.back()).return_bytes;
}

Seconds chain_cloud_time(const CallGraph& graph, const Chain& chain) {
    Seconds total = 0.0;
    for (const auto& id : chain.node_ids) total += graph.node(id).cloud_time;
    return total;
}

Seconds chain_mobile_time(const CallGraph& graph, const Chain& chain) {
    Seconds total = 0.0;
    for (const auto& id : chain.node_ids) total += graph.node(id).mobile_time;
    return total;
}

// ---------------------------------------------------------------------------
// Planning

namespace {

std::vector<std::string> fleet_violations(const std::vector<VmSpec>& fleet) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& vm : fleet) {
        if (vm.id.empty()) out.push_back("VM id must not be empty");
        if (vm.id == kDeviceId) out.push_back("VM id 'device' is reserved");
        if (!seen.insert(vm.id).second) out.push_back("duplicate VM id '" + vm.id + "'");
        if (!std::isfinite(vm.mips) || vm.mips <= 0.0) out.push_back("VM '" + vm.id + "': mips must be > 0");
        if (vm.pe_count < 1) out.push_back("VM '" + vm.id + "': pe_count must be >= 1");
        if (vm.ram_mb < 1) out.push_back("VM '" + vm.id + "': ram_mb must be >= 1");
    }
    return out;
}

}  // namespace

OffloadPlan build_plan(const ChainDecomposition& decomposition, OffloadMode mode, std::vector<VmSpec> fleet) {
    if (fleet.empty()) throw SimulationError("VM fleet is empty");
    if (auto problems = fleet_violations(fleet); !problems.empty())
        throw ValidationError("invalid VM fleet", std::move(problems));
    std::sort(fleet.begin(), fleet.end(), [](const VmSpec& a, const VmSpec& b) { return a.id < b.id; });

    OffloadPlan plan;
    plan.decomposition = decomposition;
    plan.mode = mode;
    plan.fleet = std::move(fleet);

    if (mode == OffloadMode::Distributed) {
        for (std::size_t s = 0; s < decomposition.stages.size(); ++s) {
            std::size_t width = decomposition.stages[s].offloadable_width();
            if (width > plan.fleet.size()) throw InsufficientFleetError(s, width, plan.fleet.size());
        }
    }

    std::size_t next_vm = 0;
    for (const auto& stage : decomposition.stages) {
        for (const auto& chain : stage.chains) {
            std::string vm;
            if (!chain.offloadable) {
                vm = kDeviceId;
            } else if (mode == OffloadMode::Sequential) {
                vm = plan.fleet.front().id;
            } else {
                vm = plan.fleet[next_vm].id;
                next_vm = (next_vm + 1) % plan.fleet.size();
            }
            plan.vm_assignment.emplace(chain.head(), std::move(vm));
        }
    }
    return plan;
}

std::vector<std::string> validate_plan(const OffloadPlan& plan) {
    auto out = fleet_violations(plan.fleet);
    std::set<std::string> fleet_ids;
    for (const auto& vm : plan.fleet) fleet_ids.insert(vm.id);

    std::optional<std::string> sequential_vm;
    for (std::size_t s = 0; s < plan.decomposition.stages.size(); ++s) {
        std::set<std::string> stage_vms;
        const auto& stage = plan.decomposition.stages[s];
        for (const auto& chain : stage.chains) {
            auto it = plan.vm_assignment.find(chain.head());
            if (it == plan.vm_assignment.end()) {
                out.push_back("chain '" + chain.head() + "' has no assignment");
                continue;
            }
            const auto& vm = it->second;
            if (!chain.offloadable) {
                if (vm != kDeviceId) out.push_back("non-offloadable chain '" + chain.head() + "' must run on the device");
                continue;
            }
            if (!fleet_ids.count(vm)) {
                out.push_back("chain '" + chain.head() + "' assigned to unknown VM '" + vm + "'");
                continue;
            }
            if (plan.mode == OffloadMode::Sequential) {
                if (!sequential_vm) sequential_vm = vm;
                else if (*sequential_vm != vm) out.push_back("sequential plan uses more than one VM");
            } else if (stage.parallel() && !stage_vms.insert(vm).second) {
                out.push_back("stage " + std::to_string(s) + " puts two chains on VM '" + vm + "'");
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

enum class Phase { Upload, Exec, Return };

struct Lane {
    std::vector<const Chain*> queue;
    std::size_t next = 0;  // index of the active chain
    Phase phase = Phase::Exec;
    bool resending = false;
    unsigned token = 0;    // invalidates pending completions after an abort
    bool done = false;
};

struct Pending {
    Seconds time;
    int priority;  // crash before completion at equal times
    std::size_t seq;
    std::size_t lane;
    unsigned token;
    bool crash;

    bool operator>(const Pending& o) const {
        return std::tie(time, priority, seq) > std::tie(o.time, o.priority, o.seq);
    }
};

class Simulation {
public:
    Simulation(const CallGraph& graph, const OffloadPlan& plan, const NetworkSpec& network)
        : graph_(graph), plan_(plan), network_(network) {}

    SimReport run(std::optional<std::pair<std::string, Seconds>> crash) {
        report_.mode = plan_.mode;
        for (const auto& vm : plan_.fleet) report_.per_vm_bytes[vm.id] = 0;
        if (crash) {
            crash_vm_ = crash->first;
            push({crash->second, 0, 0, 0, 0, true});
        }

        Seconds now = 0.0;
        for (const auto& stage : plan_.decomposition.stages) {
            // A crash at the instant a stage begins hits idle VMs.
            while (!queue_.empty() && queue_.top().crash && queue_.top().time <= now) {
                auto ev = queue_.top();
                queue_.pop();
                handle_crash(ev.time);
            }
            now = run_stage(stage, now);
        }
        report_.makespan = now;
        for (const auto& [vm, bytes] : report_.per_vm_bytes) report_.total_offloaded_bytes += bytes;
        return std::move(report_);
    }

private:
    void push(Pending p) {
        p.seq = seq_++;
        queue_.push(p);
    }

    void log(Seconds t, EventKind kind, const Chain* chain, const std::string& vm) {
        report_.event_trace.push_back({t, kind, chain ? chain->head() : std::string{}, vm});
    }

    const Chain& active(const Lane& lane) const { return *lane.queue[lane.next]; }

    Seconds run_stage(const Stage& stage, Seconds start) {
        lanes_.clear();
        if (plan_.mode == OffloadMode::Sequential) {
            Lane lane;
            for (const auto& c : stage.chains) lane.queue.push_back(&c);
            lanes_.push_back(std::move(lane));
        } else {
            for (const auto& c : stage.chains) lanes_.push_back(Lane{{&c}});
        }

        std::size_t open = lanes_.size();
        for (std::size_t i = 0; i < lanes_.size(); ++i) begin_chain(i, start);

        Seconds end = start;
        while (open > 0) {
            auto ev = queue_.top();
            queue_.pop();
            end = std::max(end, ev.time);
            if (ev.crash) {
                handle_crash(ev.time);
                continue;
            }
            auto& lane = lanes_[ev.lane];
            if (ev.token != lane.token) continue;
            if (finish_phase(ev.lane, ev.time)) --open;
        }
        return end;
    }

    void begin_chain(std::size_t i, Seconds t) {
        const Chain& chain = active(lanes_[i]);
        if (plan_.vm_of(chain) == kDeviceId) {
            start_phase(i, Phase::Exec, t);
        } else {
            report_.per_vm_bytes[plan_.vm_of(chain)] += chain_upload_bytes(graph_, chain);
            start_phase(i, Phase::Upload, t);
        }
    }

    Seconds duration(const Chain& chain, Phase phase) const {
        const bool on_device = plan_.vm_of(chain) == kDeviceId;
        switch (phase) {
            case Phase::Upload: return network_.transfer_time(chain_upload_bytes(graph_, chain));
            case Phase::Exec: return on_device ? chain_mobile_time(graph_, chain) : chain_cloud_time(graph_, chain);
            case Phase::Return: return network_.transfer_time(chain_return_bytes(graph_, chain));
        }
        return 0.0;
    }

    void start_phase(std::size_t i, Phase phase, Seconds t) {
        auto& lane = lanes_[i];
        const Chain& chain = active(lane);
        const auto& vm = plan_.vm_of(chain);
        lane.phase = phase;
        EventKind kind = EventKind::ExecStart;
        if (phase == Phase::Upload) kind = lane.resending ? EventKind::ResendStart : EventKind::UploadStart;
        if (phase == Phase::Return) kind = EventKind::ReturnStart;
        log(t, kind, &chain, vm);
        push({t + duration(chain, phase), 1, 0, i, ++lane.token, false});
    }

    // Returns true when the lane has no more work.
    bool finish_phase(std::size_t i, Seconds t) {
        auto& lane = lanes_[i];
        const Chain& chain = active(lane);
        const auto& vm = plan_.vm_of(chain);
        switch (lane.phase) {
            case Phase::Upload:
                if (lane.resending) {
                    log(t, EventKind::ResendEnd, &chain, vm);
                    lane.resending = false;
                } else {
                    log(t, EventKind::UploadEnd, &chain, vm);
                }
                start_phase(i, Phase::Exec, t);
                return false;
            case Phase::Exec:
                log(t, EventKind::ExecEnd, &chain, vm);
                if (vm != kDeviceId) {
                    start_phase(i, Phase::Return, t);
                    return false;
                }
                break;
            case Phase::Return:
                log(t, EventKind::ReturnEnd, &chain, vm);
                break;
        }
        if (++lane.next == lane.queue.size()) {
            lane.done = true;
            return true;
        }
        begin_chain(i, t);
        return false;
    }

    void handle_crash(Seconds t) {
        report_.crash_time = t;
        log(t, EventKind::Crash, nullptr, crash_vm_);
        log(t, EventKind::Reprovision, nullptr, crash_vm_);
        for (std::size_t i = 0; i < lanes_.size(); ++i) {
            auto& lane = lanes_[i];
            if (lane.done) continue;
            const Chain& chain = active(lane);
            if (plan_.vm_of(chain) != crash_vm_) continue;
            log(t, EventKind::Abort, &chain, crash_vm_);
            ++lane.token;
            const Bytes bytes = chain_upload_bytes(graph_, chain);
            report_.resend_bytes += bytes;
            report_.resend_time += network_.transfer_time(bytes);
            lane.resending = true;
            start_phase(i, Phase::Upload, t);
        }
    }

    const CallGraph& graph_;
    const OffloadPlan& plan_;
    const NetworkSpec& network_;
    SimReport report_;
    std::vector<Lane> lanes_;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
    std::size_t seq_ = 0;
    std::string crash_vm_;
};

// Time at which `vm` has completed `fraction` of its execution work in a
// crash-free run.
Seconds resolve_fraction(const SimReport& clean, const std::string& vm, double fraction) {
    std::vector<std::pair<Seconds, Seconds>> spans;
    std::map<std::string, Seconds> open;
    for (const auto& ev : clean.event_trace) {
        if (ev.vm != vm) continue;
        if (ev.kind == EventKind::ExecStart) open[ev.chain] = ev.time;
        if (ev.kind == EventKind::ExecEnd) spans.emplace_back(open[ev.chain], ev.time);
    }
    if (spans.empty()) return 0.0;

    Seconds total = 0.0;
    for (const auto& [s, e] : spans) total += e - s;
    if (fraction >= 1.0) return spans.back().second;

    const Seconds target = fraction * total;
    Seconds done = 0.0;
    for (const auto& [s, e] : spans) {
        const Seconds len = e - s;
        if (target <= done + len) return s + (target - done);
        done += len;
    }
    return spans.back().second;
}

}  // namespace

SimReport simulate(const CallGraph& graph, const OffloadPlan& plan, const NetworkSpec& network,
                   const std::optional<CrashEvent>& crash) {
    if (!std::isfinite(network.bandwidth_mbps) || network.bandwidth_mbps <= 0.0)
        throw DomainError("network bandwidth must be finite and > 0");
    if (!std::isfinite(network.latency) || network.latency < 0.0)
        throw DomainError("network latency must be finite and >= 0");
    if (auto problems = validate_plan(plan); !problems.empty())
        throw ValidationError("invalid offload plan", std::move(problems));

    if (!crash) return Simulation(graph, plan, network).run(std::nullopt);

    const bool known = std::any_of(plan.fleet.begin(), plan.fleet.end(),
                                   [&](const VmSpec& vm) { return vm.id == crash->vm_id; });
    if (!known) throw SimulationError("crash references unknown VM '" + crash->vm_id + "'");

    Seconds at = 0.0;
    if (crash->trigger == CrashTrigger::AtTime) {
        if (!std::isfinite(crash->value) || crash->value < 0.0) throw DomainError("crash time must be >= 0");
        at = crash->value;
    } else {
        if (!(crash->value >= 0.0 && crash->value <= 1.0)) throw DomainError("crash fraction must be in [0, 1]");
        auto clean = Simulation(graph, plan, network).run(std::nullopt);
        at = resolve_fraction(clean, crash->vm_id, crash->value);
    }
    return Simulation(graph, plan, network).run(std::make_pair(crash->vm_id, at));
}

double improvement_percent(Seconds sequential, Seconds distributed) {
    if (!(sequential > 0.0)) throw DomainError("sequential time must be > 0");
    return 100.0 * (sequential - distributed) / sequential;
}

std::map<std::string, Bytes> planned_vm_bytes(const CallGraph& graph, const OffloadPlan& plan) {
    std::map<std::string, Bytes> out;
    for (const auto& vm : plan.fleet) out[vm.id] = 0;
    for (const auto& stage : plan.decomposition.stages) {
        for (const auto& chain : stage.chains) {
            const auto& vm = plan.vm_of(chain);
            if (vm != kDeviceId) out[vm] += chain_upload_bytes(graph, chain);
        }
    }
    return out;
}

ResendSummary max_resend(const CallGraph& graph, const OffloadPlan& plan) {
    ResendSummary out;
    for (const auto& [vm, bytes] : planned_vm_bytes(graph, plan)) {
        if (out.vm_id.empty() || bytes > out.bytes) {
            out.vm_id = vm;
            out.bytes = bytes;
        }
    }
    for (const auto& n : graph.nodes()) out.application_bytes += n.upload_bytes;
    if (out.application_bytes > 0)
        out.percent = static_cast<double>(out.bytes) * 100.0 / static_cast<double>(out.application_bytes);
    return out;
}

}  // namespace offload
