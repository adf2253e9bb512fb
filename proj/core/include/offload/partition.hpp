#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "offload/callgraph.hpp"

namespace offload {

/// Inputs of the compute/idle/transmit energy-benefit model.
///
/// Every term comes out in joules: work in million
/// instructions, speeds in MIPS, data in megabits, bandwidth in Mbps and
/// powers in watts. Server speed may be given directly (`server_mips`) or as
/// a speedup over the device (`speedup`); when both are present they must
/// agree.
struct DecisionInputs {
    double work_mi = 0.0;                    // C
    double mobile_mips = 0.0;                // M
    std::optional<double> server_mips;       // S
    std::optional<double> speedup;           // F, S = F * M
    double data_megabits = 0.0;              // D
    double bandwidth_mbps = 0.0;             // B
    double p_compute = 0.0;                  // P_c
    double p_idle = 0.0;                     // P_i
    double p_transmit = 0.0;                 // P_tr

    /// Returns every violated invariant; empty when valid.
    std::vector<std::string> violations() const;

    friend bool operator==(const DecisionInputs&, const DecisionInputs&) = default;
};

/// Energy the device saves by offloading:
///     P_c * C/M - P_i * C/S - P_tr * D/B
/// Positive means offloading pays off. S falls back to F*M when only the
/// speedup is known. Throws DomainError for zero M, S or B, or invalid inputs.
double energy_saved(const DecisionInputs& in);

/// Same quantity written in terms of the speedup:
///     (C/M) * (P_c - P_i/F) - P_tr * D/B
/// F falls back to S/M when only the server speed is known. Throws DomainError.
double energy_saved_speedup(const DecisionInputs& in);

struct MethodCost {
    Seconds mobile = 0.0;   // M_j
    Seconds cloud = 0.0;    // C_j
    Seconds upload = 0.0;   // I_j
    Seconds ret = 0.0;      // R_j

    friend bool operator==(const MethodCost&, const MethodCost&) = default;
};

using MethodSequence = std::vector<MethodCost>;

struct IntervalUtilities {
    std::vector<double> utility;   // U_1..U_K, zero-based
    std::size_t best_end = 0;      // argmax k for U_1, zero-based
};

/// Interval-offload utilities by the recurrence
///
///     U_1 = max_k { sum_{j<=k} (M_j - C_j) - I_1 - R_k }
///     U_i = U_{i-1} - (M_{i-1} - C_{i-1} - I_{i-1}) - I_i
///
/// evaluated verbatim. U_i is the true best saving from start i only when
/// best_end >= i; use best_offload_interval for decisions.
/// Throws DomainError on an empty or non-finite sequence.
IntervalUtilities interval_utilities(const MethodSequence& seq);

struct OffloadInterval {
    std::size_t first = 0;  // zero-based, inclusive
    std::size_t last = 0;   // zero-based, inclusive
    double saving = 0.0;    // seconds; <= 0 means "do not offload"

    bool worthwhile() const noexcept { return saving > 0.0; }
};

/// Saving of offloading methods [first, last]:
///     sum_{j=first..last} (M_j - C_j) - I_first - R_last
double interval_saving(const MethodSequence& seq, std::size_t first, std::size_t last);

/// Best contiguous interval by exhaustive enumeration. Ties go to the shorter
/// interval, then the smaller start. Throws DomainError on an empty sequence.
OffloadInterval best_offload_interval(const MethodSequence& seq);

/// Builds a sequence from a path of methods: I_j and R_j are the transfer
/// times of each method's upload and return bytes over `bandwidth_mbps`.
MethodSequence sequence_from_chain(const CallGraph& graph, const Chain& chain, double bandwidth_mbps,
                                   Seconds latency = 0.0);

struct BreakEvenConfig {
    Seconds break_even_time = 1.0;
    Seconds offload_path_time = 0.0;
};

enum class BreakEvenAction { ContinueLocal, OffloadAndRestart };

struct BreakEvenDecision {
    BreakEvenAction action = BreakEvenAction::ContinueLocal;
    Seconds projected_total = 0.0;  // set only when offloading
};

/// Timeout policy: run locally until the break-even time elapses, then ship
/// the task and restart it remotely from the beginning.
/// Throws DomainError on negative elapsed time or a non-positive threshold.
BreakEvenDecision break_even_decision(Seconds local_elapsed, const BreakEvenConfig& config);

}  // namespace offload
