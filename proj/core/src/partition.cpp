#include "offload/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "offload/error.hpp"

namespace offload {
namespace {

constexpr double kSpeedTolerance = 1e-9;

void require_valid(const DecisionInputs& in) {
    auto problems = in.violations();
    if (!problems.empty()) {
        std::string msg = "invalid decision inputs:";
        for (const auto& p : problems) msg += " " + p + ";";
        throw DomainError(msg);
    }
}

double server_speed(const DecisionInputs& in) {
    return in.server_mips ? *in.server_mips : *in.speedup * in.mobile_mips;
}

double speedup_factor(const DecisionInputs& in) {
    return in.speedup ? *in.speedup : *in.server_mips / in.mobile_mips;
}

double transmit_energy(const DecisionInputs& in) { return in.p_transmit * in.data_megabits / in.bandwidth_mbps; }

}  // namespace

std::vector<std::string> DecisionInputs::violations() const {
    std::vector<std::string> out;
    auto check_positive = [&](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0) out.push_back(std::string(name) + " must be finite and > 0");
    };
    auto check_nonnegative = [&](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) out.push_back(std::string(name) + " must be finite and >= 0");
    };
    check_nonnegative(work_mi, "C");
    check_positive(mobile_mips, "M");
    check_nonnegative(data_megabits, "D");
    check_positive(bandwidth_mbps, "B");
    check_nonnegative(p_compute, "P_c");
    check_nonnegative(p_idle, "P_i");
    check_nonnegative(p_transmit, "P_tr");
    if (!server_mips && !speedup) out.push_back("one of S or F is required");
    if (server_mips) check_positive(*server_mips, "S");
    if (speedup) check_positive(*speedup, "F");
    if (server_mips && speedup && std::isfinite(*server_mips) && std::isfinite(*speedup)) {
        double expected = *speedup * mobile_mips;
        if (std::abs(*server_mips - expected) > kSpeedTolerance * std::max(std::abs(expected), 1e-300))
            out.push_back("S must equal F*M");
    }
    return out;
}

double energy_saved(const DecisionInputs& in) {
    require_valid(in);
    const double s = server_speed(in);
    return in.p_compute * in.work_mi / in.mobile_mips - in.p_idle * in.work_mi / s - transmit_energy(in);
}

double energy_saved_speedup(const DecisionInputs& in) {
    require_valid(in);
    const double f = speedup_factor(in);
    return in.work_mi / in.mobile_mips * (in.p_compute - in.p_idle / f) - transmit_energy(in);
}

namespace {

void require_sequence(const MethodSequence& seq) {
    if (seq.empty()) throw DomainError("method sequence is empty");
    for (const auto& m : seq) {
        for (double v : {m.mobile, m.cloud, m.upload, m.ret})
            if (!std::isfinite(v) || v < 0.0) throw DomainError("method sequence values must be finite and >= 0");
    }
}

}  // namespace

IntervalUtilities interval_utilities(const MethodSequence& seq) {
    require_sequence(seq);
    IntervalUtilities out;
    out.utility.resize(seq.size());

    double best = -std::numeric_limits<double>::infinity();
    double prefix = 0.0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        prefix += seq[k].mobile - seq[k].cloud;
        double value = prefix - seq.front().upload - seq[k].ret;
        if (value > best) {
            best = value;
            out.best_end = k;
        }
    }
    out.utility[0] = best;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const auto& prev = seq[i - 1];
        out.utility[i] = out.utility[i - 1] - (prev.mobile - prev.cloud - prev.upload) - seq[i].upload;
    }
    return out;
}

double interval_saving(const MethodSequence& seq, std::size_t first, std::size_t last) {
    double sum = 0.0;
    for (std::size_t j = first; j <= last; ++j) sum += seq[j].mobile - seq[j].cloud;
    return sum - seq[first].upload - seq[last].ret;
}

OffloadInterval best_offload_interval(const MethodSequence& seq) {
    require_sequence(seq);
    OffloadInterval best{0, 0, interval_saving(seq, 0, 0)};
    // Enumerate by length so the first maximum found is the shortest, then
    // the leftmost.
    for (std::size_t len = 1; len <= seq.size(); ++len) {
        for (std::size_t first = 0; first + len <= seq.size(); ++first) {
            double s = interval_saving(seq, first, first + len - 1);
            if (s > best.saving) best = {first, first + len - 1, s};
        }
    }
    return best;
}

MethodSequence sequence_from_chain(const CallGraph& graph, const Chain& chain, double bandwidth_mbps,
                                   Seconds latency) {
    if (!(bandwidth_mbps > 0.0)) throw DomainError("bandwidth must be > 0");
    MethodSequence seq;
    for (const auto& id : chain.node_ids) {
        const auto& n = graph.node(id);
        seq.push_back({n.mobile_time, n.cloud_time,
                       static_cast<double>(n.upload_bytes) * 8.0 / (bandwidth_mbps * 1e6) + latency,
                       static_cast<double>(n.return_bytes) * 8.0 / (bandwidth_mbps * 1e6) + latency});
    }
    return seq;
}

BreakEvenDecision break_even_decision(Seconds local_elapsed, const BreakEvenConfig& config) {
    if (!std::isfinite(config.break_even_time) || config.break_even_time <= 0.0)
        throw DomainError("break-even time must be finite and > 0");
    if (!std::isfinite(config.offload_path_time) || config.offload_path_time < 0.0)
        throw DomainError("offload path time must be finite and >= 0");
    if (!(local_elapsed >= 0.0)) throw DomainError("elapsed time must be >= 0");

    if (local_elapsed < config.break_even_time) return {BreakEvenAction::ContinueLocal, 0.0};
    return {BreakEvenAction::OffloadAndRestart, config.break_even_time + config.offload_path_time};
}

}  // namespace offload
