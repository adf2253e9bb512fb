#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "offload/engine.hpp"

namespace offload {

struct DevicePowerProfile {
    double p_compute = 0.9;   // W while running local methods
    double p_idle = 0.3;      // W while waiting on the cloud
    double p_transmit = 1.3;  // W while sending or receiving

    friend bool operator==(const DevicePowerProfile&, const DevicePowerProfile&) = default;
};

/// Linear host power: p_static + (p_max - p_static) * utilization.
struct HostPowerModel {
    double p_static = 100.0;
    double p_max = 250.0;

    friend bool operator==(const HostPowerModel&, const HostPowerModel&) = default;
};

struct Host {
    std::string id;
    HostPowerModel power;
    double capacity_mips = 0.0;  // MI/s the host can serve
    std::vector<std::string> vm_ids;

    friend bool operator==(const Host&, const Host&) = default;
};

struct MobileEnergy {
    double compute_j = 0.0;
    double idle_j = 0.0;
    double transmit_j = 0.0;  // first-time uploads and returns, including aborted partial transfers
    double resend_j = 0.0;    // re-uploads after a crash

    double total_j() const { return compute_j + idle_j + transmit_j + resend_j; }
};

struct CloudEnergy {
    std::map<std::string, double> host_kwh;
    double total_kwh = 0.0;
    Seconds horizon = 0.0;
};

struct EnergyReport {
    MobileEnergy mobile;
    CloudEnergy cloud;
    std::vector<std::string> warnings;
};

inline constexpr double kJoulesPerKwh = 3.6e6;

/// Device-side energy read off the event trace. Local execution is billed at
/// p_compute, every transfer at p_transmit, and the remaining time up to the
/// makespan, when the device has neither local work nor a transfer in
/// flight, at p_idle.
MobileEnergy mobile_energy(const SimReport& sim, const DevicePowerProfile& profile);

/// Transmit energy of shipping `bytes` once over `network`.
double transfer_energy(Bytes bytes, const DevicePowerProfile& profile, const NetworkSpec& network);

/// Host energy over [0, horizon] (default: the makespan). A VM demands its
/// full MIPS while executing; utilization is total demand over host capacity,
/// capped at 1 with a warning.
///
/// Throws SimulationError when a VM that runs work is not hosted, or is
/// hosted twice, and ValidationError for malformed hosts.
CloudEnergy cloud_energy(const SimReport& sim, const std::vector<VmSpec>& fleet, const std::vector<Host>& hosts,
                         std::optional<Seconds> horizon = std::nullopt,
                         std::vector<std::string>* warnings = nullptr);

/// Warnings about a device profile that is legal but implausible.
std::vector<std::string> profile_warnings(const DevicePowerProfile& profile);

EnergyReport energy_report(const SimReport& sim, const DevicePowerProfile& profile, const std::vector<VmSpec>& fleet,
                           const std::vector<Host>& hosts, std::optional<Seconds> horizon = std::nullopt);

}  // namespace offload
