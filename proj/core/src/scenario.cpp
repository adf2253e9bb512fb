#include "offload/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "offload/error.hpp"

namespace offload {

using nlohmann::json;

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Sequential: return "sequential";
        case RunMode::Distributed: return "distributed";
        case RunMode::Both: return "both";
    }
    return "both";
}

std::optional<RunMode> parse_run_mode(std::string_view text) {
    if (text == "sequential") return RunMode::Sequential;
    if (text == "distributed") return RunMode::Distributed;
    if (text == "both") return RunMode::Both;
    return std::nullopt;
}

namespace {

// Walks a JSON object while tracking the JSON pointer for error messages and
// rejecting keys nobody asked for.
class Reader {
public:
    Reader(const json& value, std::string path) : value_(value), path_(std::move(path)) {
        if (!value_.is_object()) fail("expected an object");
    }

    /// Rejects keys that were never looked at.
    void done() const {
        for (const auto& [key, _] : value_.items())
            if (!seen_.count(key)) throw ParseError("unknown field", 0, path_ + "/" + key);
    }

    Reader(const Reader&) = delete;
    Reader& operator=(const Reader&) = delete;

    bool has(const std::string& key) {
        seen_.insert(key);
        return value_.contains(key);
    }

    const json& at(const std::string& key) {
        if (!has(key)) throw ParseError("missing required field", 0, child(key));
        return value_.at(key);
    }

    std::string child(const std::string& key) const { return path_ + "/" + key; }

    std::string string(const std::string& key) {
        const auto& v = at(key);
        if (!v.is_string()) throw ParseError("expected a string", 0, child(key));
        return v.get<std::string>();
    }

    double number(const std::string& key) { return as_number(at(key), child(key)); }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? as_number(value_.at(key), child(key)) : fallback;
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return as_number(value_.at(key), child(key));
    }

    std::uint64_t count(const std::string& key) { return as_count(at(key), child(key)); }

    std::uint64_t count_or(const std::string& key, std::uint64_t fallback) {
        return has(key) ? as_count(value_.at(key), child(key)) : fallback;
    }

    bool boolean(const std::string& key) {
        const auto& v = at(key);
        if (!v.is_boolean()) throw ParseError("expected true or false", 0, child(key));
        return v.get<bool>();
    }

    const json& array(const std::string& key) {
        const auto& v = at(key);
        if (!v.is_array()) throw ParseError("expected an array", 0, child(key));
        return v;
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ParseError("expected a number", 0, path);
        return v.get<double>();
    }

    static std::uint64_t as_count(const json& v, const std::string& path) {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_float()) {
            double d = v.get<double>();
            if (d >= 0.0 && std::floor(d) == d && d < 1.8e19) return static_cast<std::uint64_t>(d);
        }
        throw ParseError("expected a non-negative integer", 0, path);
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 0, path_); }

private:
    const json& value_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string index_path(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

CallGraph read_graph(const json& value, const std::string& path) {
    Reader r(value, path);
    std::vector<MethodNode> nodes;
    const auto& arr = r.array("nodes");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Reader n(arr[i], index_path(r.child("nodes"), i));
        MethodNode m;
        m.id = n.string("id");
        m.offloadable = n.boolean("offloadable");
        m.mobile_time = n.number("mobile_s");
        m.cloud_time = n.number("cloud_s");
        m.upload_bytes = n.count_or("upload_bytes", 0);
        m.return_bytes = n.count_or("return_bytes", 0);
        n.done();
        nodes.push_back(std::move(m));
    }
    std::vector<CallEdge> edges;
    if (r.has("edges")) {
        const auto& earr = r.array("edges");
        for (std::size_t i = 0; i < earr.size(); ++i) {
            const auto& e = earr[i];
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                throw ParseError("edge must be [\"caller\", \"callee\"]", 0, index_path(r.child("edges"), i));
            edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
        }
    }
    std::string root = r.string("root");
    r.done();
    return CallGraph(std::move(nodes), std::move(edges), std::move(root));
}

DecisionInputs read_decision(const json& value, const std::string& path) {
    Reader r(value, path);
    DecisionInputs in;
    in.work_mi = r.number("C");
    in.mobile_mips = r.number("M");
    in.server_mips = r.optional_number("S");
    in.speedup = r.optional_number("F");
    in.data_megabits = r.number("D");
    in.bandwidth_mbps = r.number("B");
    in.p_compute = r.number("P_c");
    in.p_idle = r.number("P_i");
    in.p_transmit = r.number("P_tr");
    r.done();
    return in;
}

MethodSequence read_sequence(const json& value, const std::string& path) {
    if (!value.is_array()) throw ParseError("expected an array", 0, path);
    MethodSequence seq;
    for (std::size_t i = 0; i < value.size(); ++i) {
        Reader r(value[i], index_path(path, i));
        seq.push_back({r.number("mobile_s"), r.number("cloud_s"), r.number("upload_s"), r.number("return_s")});
        r.done();
    }
    return seq;
}

Scenario read_scenario(const json& doc) {
    Reader r(doc, "");
    const auto& schema = r.at("schema");
    if (!schema.is_number_integer() || schema.get<int>() != kScenarioSchema)
        throw ParseError("unsupported schema; expected 1", 0, "/schema");

    Scenario s;
    s.name = r.string("name");
    if (r.has("mode")) {
        auto mode = parse_run_mode(r.string("mode"));
        if (!mode) throw ParseError("mode must be sequential, distributed or both", 0, "/mode");
        s.mode = *mode;
    }

    s.graph = read_graph(r.at("graph"), "/graph");

    if (r.has("device")) {
        Reader d(r.at("device"), "/device");
        s.device.mips = d.number_or("mips", s.device.mips);
        s.device.power.p_compute = d.number_or("p_compute_w", s.device.power.p_compute);
        s.device.power.p_idle = d.number_or("p_idle_w", s.device.power.p_idle);
        s.device.power.p_transmit = d.number_or("p_transmit_w", s.device.power.p_transmit);
        d.done();
    }

    {
        Reader n(r.at("network"), "/network");
        s.network.bandwidth_mbps = n.number("bandwidth_mbps");
        s.network.latency = n.number_or("latency_s", 0.0);
        n.done();
    }

    const auto& vms = r.array("vms");
    for (std::size_t i = 0; i < vms.size(); ++i) {
        Reader v(vms[i], index_path("/vms", i));
        VmSpec vm;
        vm.id = v.string("id");
        vm.mips = v.number_or("mips", vm.mips);
        vm.pe_count = static_cast<unsigned>(v.count_or("pe_count", vm.pe_count));
        vm.ram_mb = static_cast<unsigned>(v.count_or("ram_mb", vm.ram_mb));
        v.done();
        s.vm_fleet.push_back(std::move(vm));
    }
    std::sort(s.vm_fleet.begin(), s.vm_fleet.end(), [](const VmSpec& a, const VmSpec& b) { return a.id < b.id; });

    if (r.has("hosts")) {
        const auto& hosts = r.array("hosts");
        for (std::size_t i = 0; i < hosts.size(); ++i) {
            Reader h(hosts[i], index_path("/hosts", i));
            Host host;
            host.id = h.string("id");
            host.power.p_static = h.number_or("p_static_w", host.power.p_static);
            host.power.p_max = h.number_or("p_max_w", host.power.p_max);
            const auto& placed = h.array("vms");
            for (std::size_t j = 0; j < placed.size(); ++j) {
                if (!placed[j].is_string()) throw ParseError("expected a VM id", 0, index_path(h.child("vms"), j));
                host.vm_ids.push_back(placed[j].get<std::string>());
            }
            double default_capacity = 0.0;
            for (const auto& id : host.vm_ids)
                for (const auto& vm : s.vm_fleet)
                    if (vm.id == id) default_capacity += vm.mips * vm.pe_count;
            host.capacity_mips = h.number_or("capacity_mips", default_capacity);
            h.done();
            s.hosts.push_back(std::move(host));
        }
    } else {
        Host host;
        host.id = "host1";
        for (const auto& vm : s.vm_fleet) {
            host.vm_ids.push_back(vm.id);
            host.capacity_mips += vm.mips * vm.pe_count;
        }
        s.hosts.push_back(std::move(host));
    }

    if (r.has("crash")) {
        Reader c(r.at("crash"), "/crash");
        CrashEvent crash;
        crash.vm_id = c.string("vm");
        const bool by_time = c.has("at_time_s");
        const bool by_fraction = c.has("at_fraction");
        if (by_time == by_fraction) c.fail("exactly one of at_time_s or at_fraction is required");
        crash.trigger = by_time ? CrashTrigger::AtTime : CrashTrigger::AtFraction;
        crash.value = by_time ? c.number("at_time_s") : c.number("at_fraction");
        c.done();
        s.crash = crash;
    }

    if (r.has("decision_inputs")) s.decision_inputs = read_decision(r.at("decision_inputs"), "/decision_inputs");
    if (r.has("method_sequence")) s.method_sequence = read_sequence(r.at("method_sequence"), "/method_sequence");
    r.done();
    return s;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> out;
    if (s.name.empty()) out.push_back("name must not be empty");
    for (auto& m : validate_graph(s.graph).messages()) out.push_back("graph: " + m);

    for (double p : {s.device.power.p_compute, s.device.power.p_idle, s.device.power.p_transmit})
        if (!std::isfinite(p) || p < 0.0) out.push_back("device: power values must be finite and >= 0");
    if (!std::isfinite(s.device.mips) || s.device.mips <= 0.0) out.push_back("device: mips must be > 0");

    if (!std::isfinite(s.network.bandwidth_mbps) || s.network.bandwidth_mbps <= 0.0)
        out.push_back("network: bandwidth_mbps must be > 0");
    if (!std::isfinite(s.network.latency) || s.network.latency < 0.0) out.push_back("network: latency_s must be >= 0");

    if (s.vm_fleet.empty()) out.push_back("vms: fleet must not be empty");
    std::set<std::string> fleet_ids;
    for (const auto& vm : s.vm_fleet) {
        if (vm.id.empty() || vm.id == kDeviceId) out.push_back("vms: id '" + vm.id + "' is empty or reserved");
        if (!fleet_ids.insert(vm.id).second) out.push_back("vms: duplicate id '" + vm.id + "'");
        if (!std::isfinite(vm.mips) || vm.mips <= 0.0) out.push_back("vms: '" + vm.id + "' mips must be > 0");
        if (vm.pe_count < 1) out.push_back("vms: '" + vm.id + "' pe_count must be >= 1");
        if (vm.ram_mb < 1) out.push_back("vms: '" + vm.id + "' ram_mb must be >= 1");
    }

    std::set<std::string> host_ids;
    std::map<std::string, int> placements;
    for (const auto& h : s.hosts) {
        if (!host_ids.insert(h.id).second) out.push_back("hosts: duplicate id '" + h.id + "'");
        if (!(h.power.p_static >= 0.0 && h.power.p_static <= h.power.p_max && std::isfinite(h.power.p_max)))
            out.push_back("hosts: '" + h.id + "' needs 0 <= p_static_w <= p_max_w");
        if (!std::isfinite(h.capacity_mips) || h.capacity_mips <= 0.0)
            out.push_back("hosts: '" + h.id + "' capacity_mips must be > 0");
        for (const auto& vm : h.vm_ids) {
            if (!fleet_ids.count(vm)) out.push_back("hosts: '" + h.id + "' places unknown VM '" + vm + "'");
            ++placements[vm];
        }
    }
    for (const auto& id : fleet_ids) {
        if (placements[id] != 1)
            out.push_back("hosts: VM '" + id + "' must be placed exactly once (placed " +
                          std::to_string(placements[id]) + " times)");
    }

    if (s.crash) {
        if (!fleet_ids.count(s.crash->vm_id)) out.push_back("crash: unknown VM '" + s.crash->vm_id + "'");
        if (s.crash->trigger == CrashTrigger::AtFraction && !(s.crash->value >= 0.0 && s.crash->value <= 1.0))
            out.push_back("crash: at_fraction must be in [0, 1]");
        if (s.crash->trigger == CrashTrigger::AtTime && !(std::isfinite(s.crash->value) && s.crash->value >= 0.0))
            out.push_back("crash: at_time_s must be >= 0");
    }

    if (s.decision_inputs)
        for (auto& v : s.decision_inputs->violations()) out.push_back("decision_inputs: " + v);
    if (s.method_sequence) {
        if (s.method_sequence->empty()) out.push_back("method_sequence: must not be empty");
        for (const auto& m : *s.method_sequence)
            for (double v : {m.mobile, m.cloud, m.upload, m.ret})
                if (!std::isfinite(v) || v < 0.0) {
                    out.push_back("method_sequence: values must be finite and >= 0");
                    break;
                }
    }
    return out;
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        if (auto pos = msg.find("] "); pos != std::string::npos) msg = msg.substr(pos + 2);
        throw ParseError(msg, line_of(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    Scenario s = read_scenario(doc);
    if (auto problems = validate_scenario(s); !problems.empty())
        throw ValidationError("invalid scenario '" + s.name + "'", std::move(problems));
    return s;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text_file(path)); }

std::string to_json(const Scenario& s) {
    json doc;
    doc["schema"] = kScenarioSchema;
    doc["name"] = s.name;
    doc["mode"] = std::string(to_string(s.mode));

    json nodes = json::array();
    for (const auto& n : s.graph.nodes()) {
        nodes.push_back({{"id", n.id},
                         {"offloadable", n.offloadable},
                         {"mobile_s", n.mobile_time},
                         {"cloud_s", n.cloud_time},
                         {"upload_bytes", n.upload_bytes},
                         {"return_bytes", n.return_bytes}});
    }
    json edges = json::array();
    for (const auto& e : s.graph.edges()) edges.push_back(json::array({e.caller, e.callee}));
    doc["graph"] = {{"root", s.graph.root()}, {"nodes", nodes}, {"edges", edges}};

    doc["device"] = {{"mips", s.device.mips},
                     {"p_compute_w", s.device.power.p_compute},
                     {"p_idle_w", s.device.power.p_idle},
                     {"p_transmit_w", s.device.power.p_transmit}};
    doc["network"] = {{"bandwidth_mbps", s.network.bandwidth_mbps}, {"latency_s", s.network.latency}};

    json vms = json::array();
    for (const auto& vm : s.vm_fleet)
        vms.push_back({{"id", vm.id}, {"mips", vm.mips}, {"pe_count", vm.pe_count}, {"ram_mb", vm.ram_mb}});
    doc["vms"] = vms;

    json hosts = json::array();
    for (const auto& h : s.hosts) {
        hosts.push_back({{"id", h.id},
                         {"p_static_w", h.power.p_static},
                         {"p_max_w", h.power.p_max},
                         {"capacity_mips", h.capacity_mips},
                         {"vms", h.vm_ids}});
    }
    doc["hosts"] = hosts;

    if (s.crash) {
        json c = {{"vm", s.crash->vm_id}};
        c[s.crash->trigger == CrashTrigger::AtTime ? "at_time_s" : "at_fraction"] = s.crash->value;
        doc["crash"] = c;
    }
    if (s.decision_inputs) {
        const auto& d = *s.decision_inputs;
        json j = {{"C", d.work_mi}, {"M", d.mobile_mips}, {"D", d.data_megabits}, {"B", d.bandwidth_mbps},
                  {"P_c", d.p_compute}, {"P_i", d.p_idle}, {"P_tr", d.p_transmit}};
        if (d.server_mips) j["S"] = *d.server_mips;
        if (d.speedup) j["F"] = *d.speedup;
        doc["decision_inputs"] = j;
    }
    if (s.method_sequence) {
        json seq = json::array();
        for (const auto& m : *s.method_sequence)
            seq.push_back({{"mobile_s", m.mobile}, {"cloud_s", m.cloud}, {"upload_s", m.upload}, {"return_s", m.ret}});
        doc["method_sequence"] = seq;
    }
    return doc.dump(2) + "\n";
}

CrashEvent parse_crash_flag(std::string_view text) {
    auto at = text.rfind('@');
    if (at == std::string_view::npos || at == 0 || at + 1 == text.size())
        throw ParseError("crash flag must be <vm>@<fraction> or <vm>@t=<seconds>", 0, "--crash");
    CrashEvent crash;
    crash.vm_id = std::string(text.substr(0, at));
    std::string_view rest = text.substr(at + 1);
    crash.trigger = CrashTrigger::AtFraction;
    if (rest.substr(0, 2) == "t=") {
        crash.trigger = CrashTrigger::AtTime;
        rest.remove_prefix(2);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc{} || ptr != rest.data() + rest.size())
        throw ParseError("bad crash value '" + std::string(rest) + "'", 0, "--crash");
    crash.value = value;
    return crash;
}

}  // namespace offload
