#include "offload/callgraph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "offload/error.hpp"

namespace offload {

CallGraph::CallGraph(std::vector<MethodNode> nodes, std::vector<CallEdge> edges, std::string root)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), root_(std::move(root)) {
    std::stable_sort(nodes_.begin(), nodes_.end(),
                     [](const MethodNode& a, const MethodNode& b) { return a.id < b.id; });
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    for (const auto& e : edges_) {
        auto from = index_of(e.caller);
        auto to = index_of(e.callee);
        if (!from || !to) continue;
        out_[*from].push_back(*to);
        in_[*to].push_back(*from);
    }
}

std::optional<std::size_t> CallGraph::index_of(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const MethodNode& n, std::string_view key) { return n.id < key; });
    if (it == nodes_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

const MethodNode& CallGraph::node(std::string_view id) const {
    auto idx = index_of(id);
    if (!idx) throw UnknownIdError(std::string(id));
    return nodes_[*idx];
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::EmptyGraph: return "empty-graph";
        case ViolationKind::DuplicateId: return "duplicate-id";
        case ViolationKind::InvalidField: return "invalid-field";
        case ViolationKind::UnknownRoot: return "unknown-root";
        case ViolationKind::DanglingEdge: return "dangling-edge";
        case ViolationKind::Cycle: return "cycle";
        case ViolationKind::MultipleRoots: return "multiple-roots";
        case ViolationKind::Unreachable: return "unreachable";
    }
    return "unknown";
}

bool ValidationResult::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; });
}

std::vector<std::string> ValidationResult::messages() const {
    std::vector<std::string> out;
    out.reserve(violations.size());
    for (const auto& v : violations) out.push_back(std::string(to_string(v.kind)) + ": " + v.message);
    return out;
}

namespace {

bool valid_quantity(double x) { return std::isfinite(x) && x >= 0.0; }

bool valid_id(const std::string& id) {
    return !id.empty() && std::none_of(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c); });
}

// Iterative DFS; reports one message per back edge with the cycle spelled out.
void find_cycles(const CallGraph& g, std::vector<Violation>& out) {
    enum class Color { White, Grey, Black };
    const std::size_t n = g.size();
    std::vector<Color> color(n, Color::White);
    std::vector<std::size_t> path;
    std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, next successor slot)

    for (std::size_t start = 0; start < n; ++start) {
        if (color[start] != Color::White) continue;
        stack.emplace_back(start, 0);
        color[start] = Color::Grey;
        path.push_back(start);
        while (!stack.empty()) {
            auto& [u, slot] = stack.back();
            const auto& succ = g.successors(u);
            if (slot == succ.size()) {
                color[u] = Color::Black;
                path.pop_back();
                stack.pop_back();
                continue;
            }
            std::size_t v = succ[slot++];
            if (color[v] == Color::Grey) {
                auto from = std::find(path.begin(), path.end(), v);
                std::string msg;
                for (auto it = from; it != path.end(); ++it) msg += g.nodes()[*it].id + " -> ";
                msg += g.nodes()[v].id;
                out.push_back({ViolationKind::Cycle, msg});
            } else if (color[v] == Color::White) {
                color[v] = Color::Grey;
                path.push_back(v);
                stack.emplace_back(v, 0);
            }
        }
    }
}

std::vector<bool> reachable_from(const CallGraph& g, std::size_t start) {
    std::vector<bool> seen(g.size(), false);
    std::vector<std::size_t> work{start};
    seen[start] = true;
    while (!work.empty()) {
        std::size_t u = work.back();
        work.pop_back();
        for (std::size_t v : g.successors(u)) {
            if (!seen[v]) {
                seen[v] = true;
                work.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace

ValidationResult validate_graph(const CallGraph& graph) {
    ValidationResult result;
    auto& out = result.violations;
    const auto& nodes = graph.nodes();
    if (nodes.empty()) {
        out.push_back({ViolationKind::EmptyGraph, "graph has no nodes"});
        return result;
    }

    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (nodes[i].id == nodes[i - 1].id && (i < 2 || nodes[i - 2].id != nodes[i].id))
            out.push_back({ViolationKind::DuplicateId, "id '" + nodes[i].id + "' appears more than once"});
    }
    for (const auto& n : nodes) {
        if (!valid_id(n.id))
            out.push_back({ViolationKind::InvalidField, "node id '" + n.id + "' is empty or contains whitespace"});
        if (!valid_quantity(n.mobile_time))
            out.push_back({ViolationKind::InvalidField, "node '" + n.id + "': mobile_time must be finite and >= 0"});
        if (!valid_quantity(n.cloud_time))
            out.push_back({ViolationKind::InvalidField, "node '" + n.id + "': cloud_time must be finite and >= 0"});
    }

    auto root = graph.index_of(graph.root());
    if (!root) out.push_back({ViolationKind::UnknownRoot, "root '" + graph.root() + "' is not a node"});

    for (const auto& e : graph.edges()) {
        for (const auto* end : {&e.caller, &e.callee}) {
            if (!graph.contains(*end))
                out.push_back({ViolationKind::DanglingEdge,
                               "edge " + e.caller + " -> " + e.callee + " names missing node '" + *end + "'"});
        }
    }

    find_cycles(graph, out);

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (graph.in_degree(i) == 0 && (!root || i != *root))
            out.push_back({ViolationKind::MultipleRoots, "'" + nodes[i].id + "' has no callers but is not the root"});
    }

    if (root) {
        auto seen = reachable_from(graph, *root);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!seen[i])
                out.push_back({ViolationKind::Unreachable, "'" + nodes[i].id + "' is not reachable from the root"});
        }
    }
    return result;
}

std::size_t Stage::offloadable_width() const {
    return static_cast<std::size_t>(
        std::count_if(chains.begin(), chains.end(), [](const Chain& c) { return c.offloadable; }));
}

std::size_t ChainDecomposition::chain_count() const {
    std::size_t n = 0;
    for (const auto& s : stages) n += s.chains.size();
    return n;
}

std::size_t ChainDecomposition::max_parallel_width() const {
    std::size_t w = 0;
    for (const auto& s : stages) w = std::max(w, s.width());
    return w;
}

ChainDecomposition extract_chains(const CallGraph& graph) {
    auto check = validate_graph(graph);
    if (!check.ok()) throw InvalidGraphError("invalid call graph", check.messages());

    const auto& nodes = graph.nodes();
    const std::size_t n = nodes.size();

    auto continues = [&](std::size_t u, std::size_t v) {
        return graph.out_degree(u) == 1 && graph.in_degree(v) == 1 && nodes[u].offloadable == nodes[v].offloadable;
    };

    // Topological order; ties broken by id since nodes are sorted.
    std::vector<std::size_t> order;
    order.reserve(n);
    {
        std::vector<std::size_t> pending(n);
        std::set<std::size_t> ready;
        for (std::size_t i = 0; i < n; ++i) {
            pending[i] = graph.in_degree(i);
            if (pending[i] == 0) ready.insert(i);
        }
        while (!ready.empty()) {
            std::size_t u = *ready.begin();
            ready.erase(ready.begin());
            order.push_back(u);
            for (std::size_t v : graph.successors(u))
                if (--pending[v] == 0) ready.insert(v);
        }
    }

    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> chain_of(n, kNone);
    std::vector<Chain> chains;
    std::vector<std::size_t> level;

    for (std::size_t u : order) {
        const auto& preds = graph.predecessors(u);
        if (preds.size() == 1 && continues(preds.front(), u)) {
            std::size_t c = chain_of[preds.front()];
            chain_of[u] = c;
            chains[c].node_ids.push_back(nodes[u].id);
            continue;
        }
        std::size_t lvl = 0;
        for (std::size_t p : preds) lvl = std::max(lvl, level[chain_of[p]] + 1);
        chain_of[u] = chains.size();
        chains.push_back(Chain{{nodes[u].id}, nodes[u].offloadable});
        level.push_back(lvl);
    }

    std::map<std::size_t, std::vector<Chain>> by_level;
    for (std::size_t c = 0; c < chains.size(); ++c) by_level[level[c]].push_back(std::move(chains[c]));

    ChainDecomposition out;
    for (auto& [lvl, members] : by_level) {
        std::sort(members.begin(), members.end(), [](const Chain& a, const Chain& b) { return a.head() < b.head(); });
        Stage stage;
        stage.kind = members.size() > 1 ? StageKind::Parallel : StageKind::Serial;
        stage.chains = std::move(members);
        out.stages.push_back(std::move(stage));
    }
    return out;
}

namespace {

bool reaches(const CallGraph& g, std::size_t from, std::size_t to) {
    return reachable_from(g, from)[to];
}

}  // namespace

bool independent(const CallGraph& graph, std::string_view a, std::string_view b) {
    auto ia = graph.index_of(a);
    if (!ia) throw UnknownIdError(std::string(a));
    auto ib = graph.index_of(b);
    if (!ib) throw UnknownIdError(std::string(b));
    if (*ia == *ib) return false;
    return !reaches(graph, *ia, *ib) && !reaches(graph, *ib, *ia);
}

CallGraph subgraph(const CallGraph& graph, const std::vector<std::string>& ids) {
    std::set<std::string> keep(ids.begin(), ids.end());
    std::vector<MethodNode> nodes;
    for (const auto& id : keep) nodes.push_back(graph.node(id));
    std::vector<CallEdge> edges;
    for (const auto& e : graph.edges())
        if (keep.count(e.caller) && keep.count(e.callee)) edges.push_back(e);
    return CallGraph(std::move(nodes), std::move(edges), ids.empty() ? std::string{} : ids.front());
}

// ---------------------------------------------------------------------------
// Edge-list dialect

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line, const char* field) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("expected a number, got '" + std::string(tok) + "'", line, field);
    return value;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

}  // namespace

CallGraph parse_edge_list(std::string_view text) {
    std::vector<MethodNode> nodes;
    std::vector<CallEdge> edges;
    std::optional<std::string> root;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = tokenize(line);
        if (tok.empty()) continue;

        if (tok[0] == "node") {
            if (tok.size() != 7)
                throw ParseError("node line needs 6 fields: <id> <offloadable> <mobile_s> <cloud_s> <upload_B> <return_B>",
                                 line_no, "node");
            MethodNode m;
            m.id = std::string(tok[1]);
            if (tok[2] == "1") m.offloadable = true;
            else if (tok[2] == "0") m.offloadable = false;
            else throw ParseError("offloadable flag must be 0 or 1", line_no, "offloadable");
            m.mobile_time = parse_number<double>(tok[3], line_no, "mobile_s");
            m.cloud_time = parse_number<double>(tok[4], line_no, "cloud_s");
            m.upload_bytes = parse_number<Bytes>(tok[5], line_no, "upload_B");
            m.return_bytes = parse_number<Bytes>(tok[6], line_no, "return_B");
            nodes.push_back(std::move(m));
        } else if (tok[0] == "edge") {
            if (tok.size() != 3) throw ParseError("edge line needs <from> <to>", line_no, "edge");
            edges.push_back({std::string(tok[1]), std::string(tok[2])});
        } else if (tok[0] == "root") {
            if (tok.size() != 2) throw ParseError("root line needs <id>", line_no, "root");
            if (root) throw ParseError("root declared twice", line_no, "root");
            root = std::string(tok[1]);
        } else {
            throw ParseError("unknown directive '" + std::string(tok[0]) + "'", line_no);
        }
    }
    if (nodes.empty()) throw ParseError("no node lines found", line_no);

    if (!root) {
        std::set<std::string> callees;
        for (const auto& e : edges) callees.insert(e.callee);
        std::vector<std::string> candidates;
        for (const auto& m : nodes)
            if (!callees.count(m.id)) candidates.push_back(m.id);
        std::sort(candidates.begin(), candidates.end());
        // With zero or several candidates validation reports the problem.
        root = candidates.empty() ? nodes.front().id : candidates.front();
    }
    return CallGraph(std::move(nodes), std::move(edges), *root);
}

std::string to_edge_list(const CallGraph& graph) {
    std::ostringstream os;
    os << "root " << graph.root() << '\n';
    for (const auto& n : graph.nodes()) {
        os << "node " << n.id << ' ' << (n.offloadable ? 1 : 0) << ' ' << format_double(n.mobile_time) << ' '
           << format_double(n.cloud_time) << ' ' << n.upload_bytes << ' ' << n.return_bytes << '\n';
    }
    for (const auto& e : graph.edges()) os << "edge " << e.caller << ' ' << e.callee << '\n';
    return os.str();
}

}  // namespace offload
