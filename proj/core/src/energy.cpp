#include "offload/energy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "offload/error.hpp"

namespace offload {
namespace {

enum class Activity { DeviceExec, VmExec, Transfer, Resend };

struct Interval {
    Seconds start;
    Seconds end;
    Activity activity;
    std::string vm;
};

bool is_start(EventKind k) {
    return k == EventKind::UploadStart || k == EventKind::ExecStart || k == EventKind::ReturnStart ||
           k == EventKind::ResendStart;
}

bool is_end(EventKind k) {
    return k == EventKind::UploadEnd || k == EventKind::ExecEnd || k == EventKind::ReturnEnd ||
           k == EventKind::ResendEnd || k == EventKind::Abort;
}

Activity activity_of(const TraceEvent& ev) {
    switch (ev.kind) {
        case EventKind::ExecStart: return ev.vm == kDeviceId ? Activity::DeviceExec : Activity::VmExec;
        case EventKind::ResendStart: return Activity::Resend;
        default: return Activity::Transfer;
    }
}

// Pairs every start event with the next end or abort of the same chain.
std::vector<Interval> intervals(const SimReport& sim) {
    std::vector<Interval> out;
    std::map<std::string, std::size_t> open;
    for (const auto& ev : sim.event_trace) {
        if (ev.chain.empty()) continue;
        if (is_start(ev.kind)) {
            open[ev.chain] = out.size();
            out.push_back({ev.time, ev.time, activity_of(ev), ev.vm});
        } else if (is_end(ev.kind)) {
            auto it = open.find(ev.chain);
            if (it == open.end()) continue;
            out[it->second].end = ev.time;
            open.erase(it);
        }
    }
    return out;
}

Seconds union_length(std::vector<std::pair<Seconds, Seconds>> spans) {
    std::sort(spans.begin(), spans.end());
    Seconds total = 0.0;
    Seconds cur_start = 0.0, cur_end = 0.0;
    bool any = false;
    for (const auto& [s, e] : spans) {
        if (!any || s > cur_end) {
            if (any) total += cur_end - cur_start;
            cur_start = s;
            cur_end = e;
            any = true;
        } else {
            cur_end = std::max(cur_end, e);
        }
    }
    if (any) total += cur_end - cur_start;
    return total;
}

}  // namespace

MobileEnergy mobile_energy(const SimReport& sim, const DevicePowerProfile& profile) {
    Seconds compute = 0.0, transmit = 0.0, resend = 0.0;
    std::vector<std::pair<Seconds, Seconds>> busy;
    for (const auto& iv : intervals(sim)) {
        const Seconds len = iv.end - iv.start;
        switch (iv.activity) {
            case Activity::DeviceExec: compute += len; break;
            case Activity::Transfer: transmit += len; break;
            case Activity::Resend: resend += len; break;
            case Activity::VmExec: continue;
        }
        busy.emplace_back(iv.start, iv.end);
    }
    const Seconds idle = std::max(0.0, sim.makespan - union_length(std::move(busy)));

    MobileEnergy out;
    out.compute_j = profile.p_compute * compute;
    out.idle_j = profile.p_idle * idle;
    out.transmit_j = profile.p_transmit * transmit;
    out.resend_j = profile.p_transmit * resend;
    return out;
}

double transfer_energy(Bytes bytes, const DevicePowerProfile& profile, const NetworkSpec& network) {
    return profile.p_transmit * network.transfer_time(bytes);
}

namespace {

std::vector<std::string> host_violations(const std::vector<Host>& hosts, const std::vector<VmSpec>& fleet) {
    std::vector<std::string> out;
    std::set<std::string> host_ids, placed, fleet_ids;
    for (const auto& vm : fleet) fleet_ids.insert(vm.id);
    for (const auto& h : hosts) {
        if (!host_ids.insert(h.id).second) out.push_back("duplicate host id '" + h.id + "'");
        if (!(h.power.p_static >= 0.0 && h.power.p_static <= h.power.p_max && std::isfinite(h.power.p_max)))
            out.push_back("host '" + h.id + "': need 0 <= p_static <= p_max");
        if (!std::isfinite(h.capacity_mips) || h.capacity_mips <= 0.0)
            out.push_back("host '" + h.id + "': capacity_mips must be > 0");
        for (const auto& vm : h.vm_ids) {
            if (!fleet_ids.count(vm)) out.push_back("host '" + h.id + "' places unknown VM '" + vm + "'");
            if (!placed.insert(vm).second) out.push_back("VM '" + vm + "' is placed on more than one host");
        }
    }
    return out;
}

}  // namespace

CloudEnergy cloud_energy(const SimReport& sim, const std::vector<VmSpec>& fleet, const std::vector<Host>& hosts,
                         std::optional<Seconds> horizon, std::vector<std::string>* warnings) {
    if (auto problems = host_violations(hosts, fleet); !problems.empty())
        throw ValidationError("invalid host configuration", std::move(problems));

    std::map<std::string, double> mips;
    for (const auto& vm : fleet) mips[vm.id] = vm.mips;
    std::map<std::string, std::size_t> host_of;
    for (std::size_t h = 0; h < hosts.size(); ++h)
        for (const auto& vm : hosts[h].vm_ids) host_of[vm] = h;

    CloudEnergy out;
    out.horizon = horizon.value_or(sim.makespan);
    if (!std::isfinite(out.horizon) || out.horizon < 0.0) throw DomainError("energy horizon must be >= 0");

    // (time, demand delta) per host
    std::vector<std::vector<std::pair<Seconds, double>>> deltas(hosts.size());
    for (const auto& iv : intervals(sim)) {
        if (iv.activity != Activity::VmExec) continue;
        auto h = host_of.find(iv.vm);
        if (h == host_of.end()) throw SimulationError("VM '" + iv.vm + "' runs work but is not placed on any host");
        auto m = mips.find(iv.vm);
        if (m == mips.end()) throw SimulationError("VM '" + iv.vm + "' is not in the fleet");
        const Seconds s = std::min(iv.start, out.horizon);
        const Seconds e = std::min(iv.end, out.horizon);
        if (e <= s) continue;
        deltas[h->second].emplace_back(s, m->second);
        deltas[h->second].emplace_back(e, -m->second);
    }

    for (std::size_t h = 0; h < hosts.size(); ++h) {
        const auto& host = hosts[h];
        auto& d = deltas[h];
        std::sort(d.begin(), d.end());

        double busy_integral = 0.0;  // utilization-seconds
        double demand = 0.0;
        bool overloaded = false;
        for (std::size_t i = 0; i < d.size();) {
            const Seconds t = d[i].first;
            while (i < d.size() && d[i].first == t) demand += d[i++].second;
            if (i == d.size()) break;
            const Seconds len = d[i].first - t;
            double util = demand / host.capacity_mips;
            if (util > 1.0 + 1e-12) overloaded = true;
            busy_integral += std::min(1.0, std::max(0.0, util)) * len;
        }
        if (overloaded && warnings) {
            std::ostringstream os;
            os << "host '" << host.id << "' demand exceeds capacity " << host.capacity_mips
               << " MIPS; utilization capped at 1";
            warnings->push_back(os.str());
        }
        const double joules =
            host.power.p_static * out.horizon + (host.power.p_max - host.power.p_static) * busy_integral;
        const double kwh = joules / kJoulesPerKwh;
        out.host_kwh[host.id] = kwh;
        out.total_kwh += kwh;
    }
    return out;
}

std::vector<std::string> profile_warnings(const DevicePowerProfile& profile) {
    std::vector<std::string> out;
    if (profile.p_idle > profile.p_compute)
        out.push_back("device idle power exceeds compute power");
    return out;
}

EnergyReport energy_report(const SimReport& sim, const DevicePowerProfile& profile, const std::vector<VmSpec>& fleet,
                           const std::vector<Host>& hosts, std::optional<Seconds> horizon) {
    for (double p : {profile.p_compute, profile.p_idle, profile.p_transmit})
        if (!std::isfinite(p) || p < 0.0) throw DomainError("device power values must be finite and >= 0");
    EnergyReport out;
    out.warnings = profile_warnings(profile);
    out.mobile = mobile_energy(sim, profile);
    out.cloud = cloud_energy(sim, fleet, hosts, horizon, &out.warnings);
    return out;
}

}  // namespace offload
