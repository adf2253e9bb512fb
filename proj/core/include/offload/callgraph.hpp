#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace offload {

using Seconds = double;
using Bytes = std::uint64_t;

/// One method of the application.
struct MethodNode {
    std::string id;
    bool offloadable = false;
    Seconds mobile_time = 0.0;  // execution on the device
    Seconds cloud_time = 0.0;   // execution on a reference VM
    Bytes upload_bytes = 0;     // code + data shipped when offloaded
    Bytes return_bytes = 0;     // result shipped back

    friend bool operator==(const MethodNode&, const MethodNode&) = default;
};

struct CallEdge {
    std::string caller;
    std::string callee;

    friend bool operator==(const CallEdge&, const CallEdge&) = default;
    friend auto operator<=>(const CallEdge&, const CallEdge&) = default;
};

/// Call-link graph of an application.
///
/// Construction never throws on structural problems so that invalid graphs can
/// be loaded and reported by `validate_graph`. Nodes are kept sorted by id and
/// edges are sorted and deduplicated, which makes equality, hashing and every
/// derived report independent of input order. Immutable after construction.
class CallGraph {
public:
    CallGraph() = default;
    CallGraph(std::vector<MethodNode> nodes, std::vector<CallEdge> edges, std::string root);

    const std::vector<MethodNode>& nodes() const noexcept { return nodes_; }
    const std::vector<CallEdge>& edges() const noexcept { return edges_; }
    const std::string& root() const noexcept { return root_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Index into nodes(), or nullopt. With duplicate ids the first is found.
    std::optional<std::size_t> index_of(std::string_view id) const;
    bool contains(std::string_view id) const { return index_of(id).has_value(); }
    /// Throws UnknownIdError.
    const MethodNode& node(std::string_view id) const;

    /// Adjacency by node index. Dangling edges are left out.
    const std::vector<std::size_t>& successors(std::size_t index) const { return out_[index]; }
    const std::vector<std::size_t>& predecessors(std::size_t index) const { return in_[index]; }
    std::size_t out_degree(std::size_t index) const { return out_[index].size(); }
    std::size_t in_degree(std::size_t index) const { return in_[index].size(); }

    friend bool operator==(const CallGraph& a, const CallGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.root_ == b.root_;
    }

private:
    std::vector<MethodNode> nodes_;
    std::vector<CallEdge> edges_;
    std::string root_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

enum class ViolationKind {
    EmptyGraph,
    DuplicateId,
    InvalidField,
    UnknownRoot,
    DanglingEdge,
    Cycle,
    MultipleRoots,
    Unreachable,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool has(ViolationKind kind) const;
    std::vector<std::string> messages() const;
};

/// Checks every CallGraph invariant and reports all violations found.
ValidationResult validate_graph(const CallGraph& graph);

/// A path of methods with uniform offloadability.
struct Chain {
    std::vector<std::string> node_ids;
    bool offloadable = false;

    const std::string& head() const { return node_ids.front(); }

    friend bool operator==(const Chain&, const Chain&) = default;
};

enum class StageKind { Serial, Parallel };

struct Stage {
    StageKind kind = StageKind::Serial;
    std::vector<Chain> chains;  // exactly one for Serial

    bool parallel() const noexcept { return kind == StageKind::Parallel; }
    std::size_t width() const noexcept { return chains.size(); }
    std::size_t offloadable_width() const;

    friend bool operator==(const Stage&, const Stage&) = default;
};

struct ChainDecomposition {
    std::vector<Stage> stages;

    std::size_t chain_count() const;
    std::size_t max_parallel_width() const;

    friend bool operator==(const ChainDecomposition&, const ChainDecomposition&) = default;
};

/// Splits a valid graph into fork/join stages of independent chains.
///
/// An edge u->v keeps u and v in the same chain only when u has a single
/// callee, v has a single caller and both share offloadability. Chains are
/// then levelled by longest distance from the root chain; chains on the same
/// level cannot reach one another and form one stage, ordered by head id.
///
/// Throws InvalidGraphError when validate_graph fails.
ChainDecomposition extract_chains(const CallGraph& graph);

/// True iff no directed path connects `a` and `b` in either direction.
/// Throws UnknownIdError.
bool independent(const CallGraph& graph, std::string_view a, std::string_view b);

/// Induced subgraph over `ids`, rooted at the first id.
CallGraph subgraph(const CallGraph& graph, const std::vector<std::string>& ids);

/// Parses the plain-text edge-list dialect:
///
///     # comment
///     node <id> <offloadable:0|1> <mobile_s> <cloud_s> <upload_B> <return_B>
///     edge <from> <to>
///     root <id>            (optional; defaults to the unique node without callers)
///
/// Throws ParseError with the offending line number.
CallGraph parse_edge_list(std::string_view text);

/// Inverse of parse_edge_list; always writes an explicit root line.
std::string to_edge_list(const CallGraph& graph);

}  // namespace offload
