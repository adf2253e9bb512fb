#include "offload/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "offload/error.hpp"

namespace offload {

using nlohmann::json;

std::optional<OutputFormat> parse_format(std::string_view text) {
    if (text == "table") return OutputFormat::Table;
    if (text == "json") return OutputFormat::Json;
    if (text == "csv") return OutputFormat::Csv;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

ModeRun run_mode(const Scenario& s, const ChainDecomposition& decomposition, OffloadMode mode,
                 const std::vector<VmSpec>& fleet, const std::optional<CrashEvent>& crash) {
    ModeRun run;
    run.mode = mode;
    auto plan = build_plan(decomposition, mode, fleet);
    run.sim = simulate(s.graph, plan, s.network, crash);
    run.energy = energy_report(run.sim, s.device.power, s.vm_fleet, s.hosts);
    return run;
}

}  // namespace

ReportBundle run_simulate(const Scenario& scenario, RunMode mode, const std::optional<CrashEvent>& crash) {
    ReportBundle out;
    out.command = "simulate";
    out.scenario = scenario.name;
    const auto decomposition = extract_chains(scenario.graph);
    const auto& effective_crash = crash ? crash : scenario.crash;

    if (mode != RunMode::Distributed)
        out.runs.push_back(run_mode(scenario, decomposition, OffloadMode::Sequential, scenario.vm_fleet, effective_crash));
    if (mode != RunMode::Sequential)
        out.runs.push_back(run_mode(scenario, decomposition, OffloadMode::Distributed, scenario.vm_fleet, effective_crash));
    if (mode == RunMode::Both)
        out.improvement_percent = improvement_percent(out.runs[0].sim.makespan, out.runs[1].sim.makespan);

    std::set<std::string> seen;
    for (const auto& r : out.runs)
        for (const auto& w : r.energy.warnings)
            if (seen.insert(w).second) out.warnings.push_back(w);
    return out;
}

namespace {

std::string padded_id(const char* prefix, std::size_t i, std::size_t count) {
    std::string n = std::to_string(i);
    const std::size_t width = std::to_string(count).size();
    return prefix + std::string(width - n.size(), '0') + n;
}

}  // namespace

ReportBundle run_resend_sweep(const Scenario& scenario, const std::vector<std::vector<double>>& splits) {
    ReportBundle out;
    out.command = "resend-sweep";
    out.scenario = scenario.name;

    Bytes app_bytes = 0, offloadable_bytes = 0;
    for (const auto& n : scenario.graph.nodes()) {
        app_bytes += n.upload_bytes;
        if (n.offloadable) offloadable_bytes += n.upload_bytes;
    }
    if (app_bytes == 0) throw ValidationError("resend sweep", {"scenario graph carries no upload bytes"});
    const double offloadable_percent = static_cast<double>(offloadable_bytes) * 100.0 / static_cast<double>(app_bytes);

    std::vector<std::string> problems;
    for (std::size_t i = 0; i < splits.size(); ++i) {
        const auto& split = splits[i];
        const double sum = std::accumulate(split.begin(), split.end(), 0.0);
        if (split.empty() || std::any_of(split.begin(), split.end(), [](double x) { return !(x >= 0.0); }))
            problems.push_back("split " + std::to_string(i + 1) + " must list non-negative percentages");
        else if (std::abs(sum - offloadable_percent) > 1e-9 * std::max(1.0, offloadable_percent)) {
            std::ostringstream os;
            os << "split " << i + 1 << " sums to " << sum << "% but the application is " << offloadable_percent
               << "% offloadable";
            problems.push_back(os.str());
        }
    }
    if (!problems.empty()) throw ValidationError("split-sum mismatch", std::move(problems));

    const VmSpec profile = scenario.vm_fleet.front();
    for (const auto& split : splits) {
        const std::size_t k = split.size();
        std::vector<MethodNode> nodes;
        std::vector<CallEdge> edges;
        Bytes shared = 0;
        for (std::size_t i = 0; i < k; ++i) {
            MethodNode m;
            m.id = padded_id("share_", i + 1, k);
            m.offloadable = true;
            m.upload_bytes = static_cast<Bytes>(std::llround(split[i] * static_cast<double>(app_bytes) / 100.0));
            m.cloud_time = split[i] / 100.0;
            shared += m.upload_bytes;
            edges.push_back({"resident", m.id});
            edges.push_back({m.id, "resident_join"});
            nodes.push_back(std::move(m));
        }
        nodes.push_back({"resident", false, 0.0, 0.0, app_bytes > shared ? app_bytes - shared : 0, 0});
        nodes.push_back({"resident_join", false, 0.0, 0.0, 0, 0});
        CallGraph graph(std::move(nodes), std::move(edges), "resident");

        std::vector<VmSpec> fleet;
        for (std::size_t i = 0; i < k; ++i) {
            VmSpec vm = profile;
            vm.id = padded_id("vm", i + 1, k);
            fleet.push_back(std::move(vm));
        }
        auto plan = build_plan(extract_chains(graph), OffloadMode::Distributed, fleet);
        auto worst = max_resend(graph, plan);
        auto crashed = simulate(graph, plan, scenario.network, CrashEvent{worst.vm_id, CrashTrigger::AtFraction, 0.5});

        ResendRow row;
        row.split_percent = split;
        row.offloadable_percent = offloadable_percent;
        row.application_bytes = worst.application_bytes;
        row.worst_vm = worst.vm_id;
        row.max_resend_bytes = worst.bytes;
        row.max_resend_percent = worst.percent;
        row.simulated_resend_bytes = crashed.resend_bytes;
        out.resend_rows.push_back(std::move(row));
    }
    return out;
}

ReportBundle run_energy_compare(const Scenario& scenario, const std::vector<std::size_t>& vm_counts) {
    ReportBundle out;
    out.command = "energy-compare";
    out.scenario = scenario.name;
    if (vm_counts.empty()) throw ValidationError("energy compare", {"at least one VM count is required"});
    for (std::size_t k : vm_counts) {
        if (k == 0 || k > scenario.vm_fleet.size())
            throw SimulationError("requested " + std::to_string(k) + " VM(s) but the fleet has " +
                                  std::to_string(scenario.vm_fleet.size()));
    }

    const auto decomposition = extract_chains(scenario.graph);
    std::vector<std::future<SimReport>> pending;
    for (std::size_t k : vm_counts) {
        pending.push_back(std::async(std::launch::async, [&scenario, &decomposition, k] {
            std::vector<VmSpec> fleet(scenario.vm_fleet.begin(), scenario.vm_fleet.begin() + static_cast<long>(k));
            auto mode = k == 1 ? OffloadMode::Sequential : OffloadMode::Distributed;
            return simulate(scenario.graph, build_plan(decomposition, mode, std::move(fleet)), scenario.network);
        }));
    }
    std::vector<SimReport> sims;
    for (auto& f : pending) sims.push_back(f.get());

    Seconds horizon = 0.0;
    for (const auto& sim : sims) horizon = std::max(horizon, sim.makespan);
    out.energy_horizon = horizon;

    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < sims.size(); ++i) {
        std::vector<std::string> warnings;
        auto cloud = cloud_energy(sims[i], scenario.vm_fleet, scenario.hosts, horizon, &warnings);
        for (auto& w : warnings) out.warnings.push_back(std::move(w));
        out.energy_rows.push_back({vm_counts[i], sims[i].makespan, cloud.total_kwh});
        lo = i == 0 ? cloud.total_kwh : std::min(lo, cloud.total_kwh);
        hi = i == 0 ? cloud.total_kwh : std::max(hi, cloud.total_kwh);
    }
    out.energy_relative_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
    return out;
}

std::string PartitionReport::energy_recommendation() const {
    if (!energy_saved) return {};
    std::ostringstream os;
    if (*energy_saved > 0.0) os << "offload (saves " << std::setprecision(6) << *energy_saved << " J)";
    else os << "do not offload (costs " << std::setprecision(6) << -*energy_saved << " J)";
    return os.str();
}

std::string PartitionReport::interval_recommendation() const {
    if (!best_interval) return {};
    std::ostringstream os;
    if (best_interval->worthwhile())
        os << "offload methods " << best_interval->first + 1 << ".." << best_interval->last + 1 << " (saves "
           << std::setprecision(6) << best_interval->saving << " s)";
    else
        os << "do not offload (best interval " << best_interval->first + 1 << ".." << best_interval->last + 1
           << " saves " << std::setprecision(6) << best_interval->saving << " s)";
    return os.str();
}

PartitionReport run_partition(const std::optional<DecisionInputs>& inputs, const std::optional<MethodSequence>& sequence,
                              const std::optional<CallGraph>& graph, const NetworkSpec& network) {
    if (!inputs && !sequence && !graph)
        throw ValidationError("missing partition inputs",
                              {"decision inputs (C, M, S or F, D, B, P_c, P_i, P_tr)",
                               "method sequence (M_j, C_j, I_j, R_j)", "call graph"});
    PartitionReport out;
    if (inputs) {
        out.inputs = inputs;
        out.energy_saved = energy_saved(*inputs);
        out.energy_saved_speedup = energy_saved_speedup(*inputs);
    }
    if (sequence) {
        out.sequence = sequence;
        out.utilities = interval_utilities(*sequence);
        out.best_interval = best_offload_interval(*sequence);
    }
    if (graph) {
        out.decomposition = extract_chains(*graph);
        for (const auto& stage : out.decomposition->stages) {
            for (const auto& chain : stage.chains) {
                if (!chain.offloadable) continue;
                ChainAdvice advice;
                advice.chain = chain.head();
                advice.sequence = sequence_from_chain(*graph, chain, network.bandwidth_mbps, network.latency);
                advice.best = best_offload_interval(advice.sequence);
                out.chain_advice.push_back(std::move(advice));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flag parsing

namespace {

double parse_double(std::string_view tok, const std::string& field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("expected a number, got '" + std::string(tok) + "'", 0, field);
    return v;
}

std::vector<std::string_view> split_on(std::string_view text, std::string_view separators) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t j = text.find_first_of(separators, i);
        if (j == std::string_view::npos) j = text.size();
        auto piece = text.substr(i, j - i);
        while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
        while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
        if (!piece.empty()) out.push_back(piece);
        i = j + 1;
    }
    return out;
}

}  // namespace

DecisionInputs parse_decision_flag(std::string_view text) {
    std::map<std::string, double, std::less<>> values;
    for (auto pair : split_on(text, " ,")) {
        auto eq = pair.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected SYMBOL=value, got '" + std::string(pair) + "'", 0, "--decision");
        std::string key(pair.substr(0, eq));
        static const std::set<std::string> known{"C", "M", "S", "F", "D", "B", "P_c", "P_i", "P_tr"};
        if (!known.count(key)) throw ParseError("unknown symbol '" + key + "'", 0, "--decision");
        values[key] = parse_double(pair.substr(eq + 1), "--decision " + key);
    }
    std::vector<std::string> missing;
    for (const char* sym : {"C", "M", "D", "B", "P_c", "P_i", "P_tr"})
        if (!values.count(sym)) missing.push_back(sym);
    if (!values.count("S") && !values.count("F")) missing.push_back("S or F");
    if (!missing.empty()) throw ValidationError("missing decision inputs", std::move(missing));

    DecisionInputs in;
    in.work_mi = values["C"];
    in.mobile_mips = values["M"];
    if (values.count("S")) in.server_mips = values["S"];
    if (values.count("F")) in.speedup = values["F"];
    in.data_megabits = values["D"];
    in.bandwidth_mbps = values["B"];
    in.p_compute = values["P_c"];
    in.p_idle = values["P_i"];
    in.p_transmit = values["P_tr"];
    return in;
}

MethodSequence parse_sequence_flag(std::string_view text) {
    MethodSequence seq;
    for (auto entry : split_on(text, ";")) {
        auto parts = split_on(entry, ",");
        if (parts.size() != 4) throw ParseError("each method needs M,C,I,R; got '" + std::string(entry) + "'", 0, "--sequence");
        seq.push_back({parse_double(parts[0], "--sequence"), parse_double(parts[1], "--sequence"),
                       parse_double(parts[2], "--sequence"), parse_double(parts[3], "--sequence")});
    }
    if (seq.empty()) throw ParseError("empty method sequence", 0, "--sequence");
    return seq;
}

std::vector<double> parse_split_flag(std::string_view text) {
    std::vector<double> out;
    for (auto part : split_on(text, ",")) out.push_back(parse_double(part, "--split"));
    if (out.empty()) throw ParseError("empty split", 0, "--split");
    return out;
}

// ---------------------------------------------------------------------------
// Emitters

namespace {

std::string fixed(double v, int digits = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string significant(double v, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string split_text(const std::vector<double>& split) {
    std::ostringstream os;
    for (std::size_t i = 0; i < split.size(); ++i) os << (i ? "/" : "") << split[i];
    return os.str();
}

// Left-aligned first column, right-aligned rest.
std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) os << "  ";
            if (c == 0) os << std::left;
            else os << std::right;
            os << std::setw(static_cast<int>(width[c])) << cells[c];
        }
        os << '\n';
    };
    line(header);
    std::size_t total = 0;
    for (auto w : width) total += w;
    os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    for (const auto& r : rows) line(r);
    return os.str();
}

json trace_json(const std::vector<TraceEvent>& trace) {
    json out = json::array();
    for (const auto& ev : trace)
        out.push_back({{"t", ev.time}, {"kind", std::string(to_string(ev.kind))}, {"chain", ev.chain}, {"vm", ev.vm}});
    return out;
}

json run_json(const ModeRun& run, bool with_trace) {
    const auto& sim = run.sim;
    const auto& m = run.energy.mobile;
    json j;
    j["mode"] = std::string(to_string(run.mode));
    j["makespan_s"] = sim.makespan;
    j["per_vm_bytes"] = sim.per_vm_bytes;
    j["total_offloaded_bytes"] = sim.total_offloaded_bytes;
    j["resend_bytes"] = sim.resend_bytes;
    j["resend_time_s"] = sim.resend_time;
    j["crash_time_s"] = sim.crash_time ? json(*sim.crash_time) : json(nullptr);
    j["mobile_energy_j"] = {{"compute", m.compute_j},
                            {"idle", m.idle_j},
                            {"transmit", m.transmit_j},
                            {"resend", m.resend_j},
                            {"total", m.total_j()}};
    j["cloud_energy_kwh"] = {
        {"hosts", run.energy.cloud.host_kwh}, {"total", run.energy.cloud.total_kwh}, {"horizon_s", run.energy.cloud.horizon}};
    if (with_trace) j["events"] = trace_json(sim.event_trace);
    return j;
}

json bundle_json(const ReportBundle& b, bool with_trace) {
    json j;
    j["command"] = b.command;
    j["scenario"] = b.scenario;
    if (!b.runs.empty()) {
        j["runs"] = json::array();
        for (const auto& r : b.runs) j["runs"].push_back(run_json(r, with_trace));
    }
    if (b.improvement_percent) j["improvement_percent"] = *b.improvement_percent;
    if (!b.resend_rows.empty()) {
        j["resend_rows"] = json::array();
        for (const auto& r : b.resend_rows) {
            j["resend_rows"].push_back({{"split_percent", r.split_percent},
                                        {"offloadable_percent", r.offloadable_percent},
                                        {"application_bytes", r.application_bytes},
                                        {"worst_vm", r.worst_vm},
                                        {"max_resend_bytes", r.max_resend_bytes},
                                        {"max_resend_percent", r.max_resend_percent},
                                        {"simulated_resend_bytes", r.simulated_resend_bytes}});
        }
    }
    if (!b.energy_rows.empty()) {
        j["energy_rows"] = json::array();
        for (const auto& r : b.energy_rows)
            j["energy_rows"].push_back({{"vm_count", r.vm_count}, {"makespan_s", r.makespan}, {"cloud_kwh", r.cloud_kwh}});
        if (b.energy_horizon) j["horizon_s"] = *b.energy_horizon;
        if (b.energy_relative_spread) j["relative_spread"] = *b.energy_relative_spread;
    }
    j["warnings"] = b.warnings;
    return j;
}

}  // namespace

std::string render(const ReportBundle& b, OutputFormat format, bool with_trace) {
    if (format == OutputFormat::Json) return bundle_json(b, with_trace).dump(2) + "\n";

    std::ostringstream os;
    if (format == OutputFormat::Csv) {
        if (!b.runs.empty()) {
            os << "mode,makespan_s,total_offloaded_bytes,resend_bytes,resend_time_s,mobile_j,cloud_kwh\n";
            for (const auto& r : b.runs)
                os << to_string(r.mode) << ',' << significant(r.sim.makespan, 17) << ',' << r.sim.total_offloaded_bytes
                   << ',' << r.sim.resend_bytes << ',' << significant(r.sim.resend_time, 17) << ','
                   << significant(r.energy.mobile.total_j(), 17) << ',' << significant(r.energy.cloud.total_kwh, 17)
                   << '\n';
            if (b.improvement_percent) os << "improvement_percent," << significant(*b.improvement_percent, 17) << '\n';
        }
        if (!b.resend_rows.empty()) {
            os << "split_percent,offloadable_percent,worst_vm,max_resend_bytes,max_resend_percent,simulated_resend_bytes\n";
            for (const auto& r : b.resend_rows)
                os << csv_field(split_text(r.split_percent)) << ',' << significant(r.offloadable_percent, 17) << ','
                   << csv_field(r.worst_vm) << ',' << r.max_resend_bytes << ',' << significant(r.max_resend_percent, 17)
                   << ',' << r.simulated_resend_bytes << '\n';
        }
        if (!b.energy_rows.empty()) {
            os << "vm_count,makespan_s,cloud_kwh\n";
            for (const auto& r : b.energy_rows)
                os << r.vm_count << ',' << significant(r.makespan, 17) << ',' << significant(r.cloud_kwh, 17) << '\n';
        }
        return os.str();
    }

    os << "scenario: " << b.scenario << "\n\n";
    if (!b.runs.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : b.runs) {
            rows.push_back({std::string(to_string(r.mode)), fixed(r.sim.makespan),
                            std::to_string(r.sim.total_offloaded_bytes), std::to_string(r.sim.resend_bytes),
                            fixed(r.energy.mobile.total_j()), significant(r.energy.cloud.total_kwh)});
        }
        os << table({"mode", "makespan_s", "offloaded_B", "resend_B", "mobile_J", "cloud_kWh"}, rows);
        if (b.improvement_percent) os << "improvement: " << fixed(*b.improvement_percent) << "%\n";
        if (with_trace) {
            for (const auto& r : b.runs) {
                os << "\ntrace (" << to_string(r.mode) << ")\n";
                for (const auto& ev : r.sim.event_trace)
                    os << "  " << std::setw(12) << fixed(ev.time, 6) << "  " << std::left << std::setw(13)
                       << to_string(ev.kind) << std::right << "  " << (ev.chain.empty() ? "-" : ev.chain) << " @ "
                       << ev.vm << '\n';
            }
        }
    }
    if (!b.resend_rows.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : b.resend_rows) {
            std::vector<std::string> row{fixed(r.offloadable_percent) + "%"};
            row.push_back(split_text(r.split_percent));
            row.push_back(fixed(r.max_resend_percent) + "%");
            row.push_back(std::to_string(r.max_resend_bytes));
            row.push_back(r.worst_vm);
            rows.push_back(std::move(row));
        }
        os << table({"offloadable", "split_%", "max_resend", "max_resend_B", "worst_vm"}, rows);
    }
    if (!b.energy_rows.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : b.energy_rows)
            rows.push_back({std::to_string(r.vm_count), fixed(r.makespan), significant(r.cloud_kwh)});
        os << table({"vms", "makespan_s", "cloud_kWh"}, rows);
        if (b.energy_horizon) os << "horizon: " << fixed(*b.energy_horizon) << " s\n";
        if (b.energy_relative_spread) os << "relative spread: " << significant(*b.energy_relative_spread, 3) << '\n';
    }
    for (const auto& w : b.warnings) os << "warning: " << w << '\n';
    return os.str();
}

std::string render(const PartitionReport& p, OutputFormat format) {
    if (format == OutputFormat::Json) {
        json j = json::object();
        if (p.energy_saved) {
            j["energy_saved_j"] = *p.energy_saved;
            j["energy_saved_speedup_j"] = *p.energy_saved_speedup;
            j["energy_recommendation"] = p.energy_recommendation();
        }
        if (p.utilities) {
            j["utilities_s"] = p.utilities->utility;
            j["utilities_best_end"] = p.utilities->best_end + 1;
            j["best_interval"] = {{"first", p.best_interval->first + 1},
                                  {"last", p.best_interval->last + 1},
                                  {"saving_s", p.best_interval->saving}};
            j["interval_recommendation"] = p.interval_recommendation();
        }
        if (p.decomposition) {
            json stages = json::array();
            for (const auto& s : p.decomposition->stages) {
                json chains = json::array();
                for (const auto& c : s.chains) chains.push_back({{"nodes", c.node_ids}, {"offloadable", c.offloadable}});
                stages.push_back({{"kind", s.parallel() ? "parallel" : "serial"}, {"chains", chains}});
            }
            j["stages"] = stages;
            json advice = json::array();
            for (const auto& a : p.chain_advice)
                advice.push_back({{"chain", a.chain},
                                  {"first", a.best.first + 1},
                                  {"last", a.best.last + 1},
                                  {"saving_s", a.best.saving}});
            j["chain_advice"] = advice;
        }
        return j.dump(2) + "\n";
    }

    std::ostringstream os;
    if (format == OutputFormat::Csv) {
        os << "quantity,value\n";
        if (p.energy_saved) {
            os << "energy_saved_j," << significant(*p.energy_saved, 17) << '\n';
            os << "energy_saved_speedup_j," << significant(*p.energy_saved_speedup, 17) << '\n';
        }
        if (p.utilities) {
            for (std::size_t i = 0; i < p.utilities->utility.size(); ++i)
                os << "U_" << i + 1 << ',' << significant(p.utilities->utility[i], 17) << '\n';
            os << "best_first," << p.best_interval->first + 1 << '\n';
            os << "best_last," << p.best_interval->last + 1 << '\n';
            os << "best_saving_s," << significant(p.best_interval->saving, 17) << '\n';
        }
        for (const auto& a : p.chain_advice)
            os << "chain_" << a.chain << "_saving_s," << significant(a.best.saving, 17) << '\n';
        return os.str();
    }

    if (p.energy_saved) {
        os << "energy saved (compute/idle/transmit):  " << significant(*p.energy_saved) << " J\n";
        os << "energy saved (speedup form):           " << significant(*p.energy_saved_speedup) << " J\n";
        os << "recommendation: " << p.energy_recommendation() << "\n\n";
    }
    if (p.utilities) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < p.utilities->utility.size(); ++i) {
            const auto& m = (*p.sequence)[i];
            rows.push_back({std::to_string(i + 1), fixed(m.mobile), fixed(m.cloud), fixed(m.upload), fixed(m.ret),
                            fixed(p.utilities->utility[i])});
        }
        os << table({"method", "M_s", "C_s", "I_s", "R_s", "U_s"}, rows);
        os << "recurrence argmax end: " << p.utilities->best_end + 1 << '\n';
        os << "best interval: " << p.best_interval->first + 1 << ".." << p.best_interval->last + 1 << ", saving "
           << fixed(p.best_interval->saving) << " s\n";
        os << "recommendation: " << p.interval_recommendation() << "\n\n";
    }
    if (p.decomposition) {
        std::size_t idx = 0;
        for (const auto& s : p.decomposition->stages) {
            os << "stage " << idx++ << (s.parallel() ? " parallel:" : " serial:  ");
            for (const auto& c : s.chains) {
                os << " [";
                for (std::size_t i = 0; i < c.node_ids.size(); ++i) os << (i ? " " : "") << c.node_ids[i];
                os << (c.offloadable ? "]" : "]*");
            }
            os << '\n';
        }
        os << "(* = stays on device)\n";
        for (const auto& a : p.chain_advice)
            os << "chain " << a.chain << ": best interval " << a.best.first + 1 << ".." << a.best.last + 1
               << ", saving " << fixed(a.best.saving) << " s\n";
    }
    return os.str();
}

std::string render_validation(const std::string& subject, const std::vector<std::string>& violations,
                              OutputFormat format) {
    if (format == OutputFormat::Json) {
        json j = {{"subject", subject}, {"valid", violations.empty()}, {"violations", violations}};
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    if (format == OutputFormat::Csv) {
        os << "subject,violation\n";
        for (const auto& v : violations) os << csv_field(subject) << ',' << csv_field(v) << '\n';
        return os.str();
    }
    if (violations.empty()) {
        os << subject << ": valid\n";
    } else {
        os << subject << ": " << violations.size() << " violation(s)\n";
        for (const auto& v : violations) os << "  - " << v << '\n';
    }
    return os.str();
}

}  // namespace offload
