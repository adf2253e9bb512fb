#include <gtest/gtest.h>

#include <random>
#include <set>

#include "offload/callgraph.hpp"
#include "offload/error.hpp"
#include "oracles.hpp"

using namespace offload;

namespace {

MethodNode off(const std::string& id) { return {id, true, 1.0, 0.1, 100, 10}; }
MethodNode dev(const std::string& id) { return {id, false, 1.0, 0.0, 0, 0}; }

CallGraph diamond(bool mid_offloadable = true) {
    auto mid = mid_offloadable ? off : dev;
    return CallGraph({off("A"), mid("B"), mid("C"), off("D")}, {{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}}, "A");
}

std::vector<std::string> ids(const Stage& s) {
    std::vector<std::string> out;
    for (const auto& c : s.chains)
        for (const auto& id : c.node_ids) out.push_back(id);
    return out;
}

}  // namespace

TEST(CallGraph, SortsNodesAndCanonicalizesEdges) {
    CallGraph g({off("c"), off("a"), off("b")}, {{"b", "c"}, {"a", "b"}, {"a", "b"}}, "a");
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g.nodes()[0].id, "a");
    EXPECT_EQ(g.nodes()[2].id, "c");
    ASSERT_EQ(g.edges().size(), 2u);
    EXPECT_EQ(g.edges()[0], (CallEdge{"a", "b"}));
    EXPECT_EQ(g.out_degree(*g.index_of("a")), 1u);
    EXPECT_EQ(g.in_degree(*g.index_of("c")), 1u);
}

TEST(CallGraph, NodeLookupThrowsForUnknownId) {
    auto g = diamond();
    EXPECT_EQ(g.node("B").id, "B");
    EXPECT_FALSE(g.contains("Z"));
    EXPECT_THROW(g.node("Z"), UnknownIdError);
}

TEST(ValidateGraph, LinearChainIsValid) {
    CallGraph g({off("A"), off("B"), off("C")}, {{"A", "B"}, {"B", "C"}}, "A");
    EXPECT_TRUE(validate_graph(g).ok());
}

TEST(ValidateGraph, TwoNodeCycleIsReported) {
    CallGraph g({off("A"), off("B")}, {{"A", "B"}, {"B", "A"}}, "A");
    auto r = validate_graph(g);
    EXPECT_TRUE(r.has(ViolationKind::Cycle));
    bool named = false;
    for (const auto& m : r.messages()) named |= m.find("A") != std::string::npos && m.find("B") != std::string::npos;
    EXPECT_TRUE(named);
}

TEST(ValidateGraph, DiamondIsValid) { EXPECT_TRUE(validate_graph(diamond()).ok()); }

TEST(ValidateGraph, ReportsEveryStructuralProblem) {
    CallGraph g({off("A"), off("B"), off("C"), off("E")}, {{"A", "B"}, {"B", "X"}, {"C", "B"}}, "A");
    auto r = validate_graph(g);
    EXPECT_TRUE(r.has(ViolationKind::DanglingEdge));
    EXPECT_TRUE(r.has(ViolationKind::MultipleRoots));
    EXPECT_TRUE(r.has(ViolationKind::Unreachable));
    EXPECT_FALSE(r.has(ViolationKind::Cycle));
}

TEST(ValidateGraph, RejectsNegativeAndNonFiniteFields) {
    MethodNode bad = off("A");
    bad.mobile_time = -1.0;
    MethodNode nan = off("B");
    nan.cloud_time = std::numeric_limits<double>::quiet_NaN();
    CallGraph g({bad, nan}, {{"A", "B"}}, "A");
    EXPECT_TRUE(validate_graph(g).has(ViolationKind::InvalidField));
}

TEST(ValidateGraph, EmptyGraphAndUnknownRoot) {
    EXPECT_TRUE(validate_graph(CallGraph({}, {}, "A")).has(ViolationKind::EmptyGraph));
    EXPECT_TRUE(validate_graph(CallGraph({off("A")}, {}, "Q")).has(ViolationKind::UnknownRoot));
}

TEST(ValidateGraph, DuplicateIds) {
    EXPECT_TRUE(validate_graph(CallGraph({off("A"), off("A")}, {}, "A")).has(ViolationKind::DuplicateId));
}

TEST(ExtractChains, LinearGraphIsOneSerialChain) {
    CallGraph g({off("A"), off("B"), off("C")}, {{"A", "B"}, {"B", "C"}}, "A");
    auto d = extract_chains(g);
    ASSERT_EQ(d.stages.size(), 1u);
    EXPECT_EQ(d.stages[0].kind, StageKind::Serial);
    EXPECT_EQ(d.stages[0].chains[0].node_ids, (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_TRUE(d.stages[0].chains[0].offloadable);
    EXPECT_EQ(d.chain_count(), 1u);
}

TEST(ExtractChains, DiamondForksAndJoins) {
    auto d = extract_chains(diamond());
    ASSERT_EQ(d.stages.size(), 3u);
    EXPECT_EQ(ids(d.stages[0]), (std::vector<std::string>{"A"}));
    EXPECT_EQ(d.stages[1].kind, StageKind::Parallel);
    ASSERT_EQ(d.stages[1].width(), 2u);
    EXPECT_EQ(d.stages[1].chains[0].node_ids, (std::vector<std::string>{"B"}));
    EXPECT_EQ(d.stages[1].chains[1].node_ids, (std::vector<std::string>{"C"}));
    EXPECT_EQ(ids(d.stages[2]), (std::vector<std::string>{"D"}));
    EXPECT_EQ(d.max_parallel_width(), 2u);
}

TEST(ExtractChains, OffloadabilityBoundaryCutsChain) {
    CallGraph g({dev("A"), off("B"), off("C"), dev("D")}, {{"A", "B"}, {"B", "C"}, {"C", "D"}}, "A");
    auto d = extract_chains(g);
    ASSERT_EQ(d.stages.size(), 3u);
    EXPECT_FALSE(d.stages[0].chains[0].offloadable);
    EXPECT_EQ(d.stages[1].chains[0].node_ids, (std::vector<std::string>{"B", "C"}));
    EXPECT_TRUE(d.stages[1].chains[0].offloadable);
    EXPECT_FALSE(d.stages[2].chains[0].offloadable);
}

TEST(ExtractChains, MergeAndForkNodeIsSingletonSerial) {
    // A -> {B, C} -> M -> {E, F}
    CallGraph g({off("A"), off("B"), off("C"), off("M"), off("E"), off("F")},
                {{"A", "B"}, {"A", "C"}, {"B", "M"}, {"C", "M"}, {"M", "E"}, {"M", "F"}}, "A");
    auto d = extract_chains(g);
    ASSERT_EQ(d.stages.size(), 4u);
    EXPECT_EQ(d.stages[2].kind, StageKind::Serial);
    EXPECT_EQ(d.stages[2].chains[0].node_ids, (std::vector<std::string>{"M"}));
    EXPECT_EQ(d.stages[3].width(), 2u);
}

TEST(ExtractChains, FaceRecognitionShapeHasTwoParallelChains) {
    CallGraph g({dev("capture"), off("detect"), off("extract"), off("match"), off("load"), off("index"), dev("show")},
                {{"capture", "detect"},
                 {"detect", "extract"},
                 {"extract", "match"},
                 {"match", "show"},
                 {"capture", "load"},
                 {"load", "index"},
                 {"index", "show"}},
                "capture");
    auto d = extract_chains(g);
    std::size_t parallel = 0;
    for (const auto& s : d.stages)
        if (s.parallel()) {
            ++parallel;
            EXPECT_EQ(s.width(), 2u);
            EXPECT_EQ(s.chains[0].node_ids, (std::vector<std::string>{"detect", "extract", "match"}));
            EXPECT_EQ(s.chains[1].node_ids, (std::vector<std::string>{"load", "index"}));
        }
    EXPECT_EQ(parallel, 1u);
}

TEST(ExtractChains, ChainsInParallelStageSortedByHead) {
    CallGraph g({off("r"), off("z"), off("m"), off("a")}, {{"r", "z"}, {"r", "m"}, {"r", "a"}}, "r");
    auto d = extract_chains(g);
    ASSERT_EQ(d.stages.size(), 2u);
    EXPECT_EQ(ids(d.stages[1]), (std::vector<std::string>{"a", "m", "z"}));
}

TEST(ExtractChains, InvalidGraphThrows) {
    CallGraph g({off("A"), off("B")}, {{"A", "B"}, {"B", "A"}}, "A");
    EXPECT_THROW(extract_chains(g), InvalidGraphError);
}

TEST(ExtractChains, IsIdempotentOnEachStageSubgraph) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = oracle::random_dag(rng, 10);
        for (const auto& stage : extract_chains(g).stages) {
            for (const auto& chain : stage.chains) {
                auto again = extract_chains(subgraph(g, chain.node_ids));
                ASSERT_EQ(again.stages.size(), 1u);
                EXPECT_EQ(again.stages[0].chains[0], chain);
            }
        }
    }
}

TEST(Independent, DiamondPairs) {
    auto g = diamond();
    EXPECT_TRUE(independent(g, "B", "C"));
    EXPECT_FALSE(independent(g, "A", "D"));
    EXPECT_FALSE(independent(g, "D", "A"));
    EXPECT_FALSE(independent(g, "B", "B"));
    EXPECT_THROW(independent(g, "B", "Q"), UnknownIdError);
}

TEST(Independent, MatchesTransitiveClosureOnRandomDags) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = oracle::random_dag(rng, 10, 0.3);
        auto reach = oracle::transitive_closure(g);
        for (const auto& a : g.nodes())
            for (const auto& b : g.nodes())
                EXPECT_EQ(independent(g, a.id, b.id), oracle::independent(reach, a.id, b.id)) << a.id << " " << b.id;
    }
}

TEST(ExtractChains, PropertiesHoldOnRandomDags) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = oracle::random_dag(rng, 12, 0.25);
        auto d = extract_chains(g);
        auto reach = oracle::transitive_closure(g);

        std::multiset<std::string> seen;
        std::map<std::string, std::size_t> stage_of;
        for (std::size_t s = 0; s < d.stages.size(); ++s) {
            const auto& stage = d.stages[s];
            EXPECT_EQ(stage.parallel(), stage.width() > 1);
            for (const auto& c : stage.chains) {
                ASSERT_FALSE(c.node_ids.empty());
                for (std::size_t i = 0; i < c.node_ids.size(); ++i) {
                    seen.insert(c.node_ids[i]);
                    stage_of[c.node_ids[i]] = s;
                    EXPECT_EQ(g.node(c.node_ids[i]).offloadable, c.offloadable);
                    if (i > 0) EXPECT_TRUE(reach[c.node_ids[i - 1]][c.node_ids[i]]);
                }
            }
            for (std::size_t i = 0; i < stage.chains.size(); ++i)
                for (std::size_t j = i + 1; j < stage.chains.size(); ++j)
                    for (const auto& a : stage.chains[i].node_ids)
                        for (const auto& b : stage.chains[j].node_ids) EXPECT_TRUE(oracle::independent(reach, a, b));
        }
        EXPECT_EQ(seen.size(), g.size());
        EXPECT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), g.size());
        for (const auto& e : g.edges()) EXPECT_LE(stage_of[e.caller], stage_of[e.callee]);
    }
}

TEST(EdgeList, ParsesNodesEdgesAndComments) {
    auto g = parse_edge_list(
        "# diamond\n"
        "node a 0 0.1 0 0 0\n"
        "node b 1 0.8 0.2 500000 1000   # trailing comment\n"
        "node c 1 0.6 0.1 300000 1000\n"
        "\n"
        "edge a b\nedge a c\n");
    EXPECT_EQ(g.root(), "a");
    EXPECT_EQ(g.size(), 3u);
    EXPECT_TRUE(g.node("b").offloadable);
    EXPECT_EQ(g.node("b").upload_bytes, 500000u);
    EXPECT_DOUBLE_EQ(g.node("c").mobile_time, 0.6);
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
    try {
        parse_edge_list("node a 0 0 0 0 0\nnode b 2 0 0 0 0\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_edge_list("vertex a\n"), ParseError);
    EXPECT_THROW(parse_edge_list("node a 0 0 0 0\n"), ParseError);
    EXPECT_THROW(parse_edge_list("node a 0 x 0 0 0\n"), ParseError);
}

TEST(EdgeList, RoundTripsThroughText) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = oracle::random_dag(rng, 10);
        EXPECT_EQ(parse_edge_list(to_edge_list(g)), g);
    }
}
