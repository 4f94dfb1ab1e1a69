#include <doctest.h>

#include <filesystem>

#include "generators.hpp"
#include "oracles.hpp"
#include "ssqa/graph.hpp"
#include "ssqa/ingest.hpp"

using namespace ssqa;

namespace {

const std::filesystem::path kData = SSQA_TEST_DATA;

struct Built {
    Workbook workbook;
    ParsedFormulas formulas;
    DepGraph graph;
};

Built build(Workbook wb, std::uint64_t cap = kDefaultRangeCap) {
    Built b{std::move(wb), {}, {}};
    b.formulas = parse_formulas(b.workbook);
    b.graph = build_graph(b.workbook, b.formulas, cap);
    return b;
}

Built build_text(std::string_view fixture, std::uint64_t cap = kDefaultRangeCap) {
    return build(parse_fixture(fixture).workbook, cap);
}

std::set<oracle::CellEdge> edge_set(const DepGraph& g) {
    std::set<oracle::CellEdge> out;
    for (const auto& e : g.edges()) out.insert({g.address(e.from), g.address(e.to)});
    return out;
}

std::vector<std::filesystem::path> corpus_files() {
    std::vector<std::filesystem::path> out;
    for (const auto& dir : {kData, kData / "seeded"})
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.path().extension() == ".sfx" || entry.path().extension() == ".xlsx") out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("edges follow references and synthesize blanks") {
    auto b = build_text(R"([sheet: S]
A1 = 1
A2 = =A1+B9
A3 = =SUM(A1:A2)
[sheet: T]
A1 = =S!A3*2
)");
    const DepGraph& g = b.graph;
    CHECK(g.stored_count() == 4);
    REQUIRE(g.size() == 5);
    CHECK(g.is_synthesized(4));
    CHECK(g.address(4) == CellAddress{"S", 2, 9});
    std::set<oracle::CellEdge> expect{
        {{"S", 1, 1}, {"S", 1, 2}}, {{"S", 2, 9}, {"S", 1, 2}}, {{"S", 1, 1}, {"S", 1, 3}},
        {{"S", 1, 2}, {"S", 1, 3}}, {{"S", 1, 3}, {"T", 1, 1}},
    };
    CHECK(edge_set(g) == expect);
    CHECK(std::is_sorted(g.edges().begin(), g.edges().end()));
    auto a3 = *g.find({"S", 1, 3});
    CHECK(g.precedents(a3).size() == 2);
    CHECK(g.dependents(a3).size() == 1);
    CHECK(g.sccs().empty());
    CHECK(g.blind_spots().empty());
}

TEST_CASE("blind spots and capped ranges") {
    auto b = build_text(R"([sheet: S]
A1 = =INDIRECT("B1")
A2 = =OFFSET(A1,1,0)
A3 = =[1]Other!A1
A4 = =Missing!A1
A5 = =NoSuchName*2
A6 = =SUM(C:C)
C5 = 4
)",
                        1000);
    const DepGraph& g = b.graph;
    std::vector<BlindSpotReason> reasons;
    for (const auto& s : g.blind_spots()) reasons.push_back(s.reason);
    CHECK(reasons == std::vector{BlindSpotReason::Indirect, BlindSpotReason::Offset, BlindSpotReason::ExternalWorkbook,
                                 BlindSpotReason::UnknownSheet, BlindSpotReason::UnresolvedName});
    REQUIRE(g.capped_ranges().size() == 1);
    CHECK(g.capped_ranges()[0].owner == CellAddress{"S", 1, 6});
    // The capped whole column links only its stored cell.
    auto a6 = *g.find({"S", 1, 6});
    REQUIRE(g.precedents(a6).size() == 1);
    CHECK(g.address(g.precedents(a6)[0]) == CellAddress{"S", 3, 5});
}

TEST_CASE("cycles are found as components") {
    auto b = build_text(R"([sheet: S]
A1 = =A3+1
A2 = =A1
A3 = =A2
B1 = =B1
C1 = =A1
)");
    const auto& sccs = b.graph.sccs();
    REQUIRE(sccs.size() == 2);
    std::vector<CellAddress> first, second;
    for (auto id : sccs[0]) first.push_back(b.graph.address(id));
    for (auto id : sccs[1]) second.push_back(b.graph.address(id));
    // Listed by first member in reading order: A1 comes before B1.
    CHECK(first == std::vector<CellAddress>{{"S", 1, 1}, {"S", 1, 2}, {"S", 1, 3}});
    CHECK(second == std::vector<CellAddress>{{"S", 2, 1}});
    CHECK(find_cycles(b.graph) == sccs);
}

TEST_CASE("graph edges equal the text-scanning oracle on the corpus") {
    for (const auto& path : corpus_files()) {
        CAPTURE(path.filename().string());
        Built b = build(load_workbook(path).workbook);
        REQUIRE(b.workbook.cell_count() <= 500);
        CHECK(edge_set(b.graph) == oracle::scan_edges(b.workbook, kDefaultRangeCap));
        CHECK(edge_set(build(b.workbook, 8).graph) == oracle::scan_edges(b.workbook, 8));
    }
}

TEST_CASE("graph edges equal the oracle on random workbooks") {
    for (std::uint32_t seed = 1; seed <= 60; ++seed) {
        CAPTURE(seed);
        auto wb = parse_fixture(gen::random_workbook(seed, 90)).workbook;
        CHECK(edge_set(build(wb).graph) == oracle::scan_edges(wb, kDefaultRangeCap));
        CHECK(edge_set(build(wb, 10).graph) == oracle::scan_edges(wb, 10));
    }
}

TEST_CASE("Tarjan agrees with the closure oracle") {
    for (std::uint32_t seed = 1; seed <= 200; ++seed) {
        std::size_t nodes = 1 + seed % 40;
        double density = (seed % 31) / 100.0;
        auto adj = gen::random_graph(seed, nodes, density);
        std::set<std::set<std::size_t>> got;
        for (const auto& c : nontrivial_sccs(adj)) got.insert({c.begin(), c.end()});
        CAPTURE(seed);
        CHECK(got == oracle::closure_sccs(adj));
    }
}

TEST_CASE("Tarjan handles deep chains without recursion") {
    std::vector<std::vector<std::size_t>> adj(200000);
    for (std::size_t i = 0; i + 1 < adj.size(); ++i) adj[i].push_back(i + 1);
    CHECK(nontrivial_sccs(adj).empty());
    adj.back().push_back(0);
    auto sccs = nontrivial_sccs(adj);
    REQUIRE(sccs.size() == 1);
    CHECK(sccs[0].size() == adj.size());
}

TEST_CASE("roles partition the graph nodes") {
    auto b = build_text(R"([sheet: S]
A1 = "Revenue"
B1 = 100
B2 = =B1*2
B3 = =B2+C9
B4 = 7
B5 = "note"
B6 = =A1
)");
    RoleMap roles = classify(b.workbook, b.graph);
    CHECK(roles.size() == b.graph.size());
    CHECK(roles.at({"S", 1, 1}) == CellRole::Input);  // referenced text
    CHECK(roles.at({"S", 2, 1}) == CellRole::Input);
    CHECK(roles.at({"S", 2, 2}) == CellRole::Intermediate);
    CHECK(roles.at({"S", 2, 3}) == CellRole::Output);
    CHECK(roles.at({"S", 2, 4}) == CellRole::OrphanConstant);
    CHECK(roles.at({"S", 2, 5}) == CellRole::Label);
    CHECK(roles.at({"S", 3, 9}) == CellRole::OrphanConstant);  // synthesized blank

    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        auto r = build(parse_fixture(gen::random_workbook(seed, 90)).workbook);
        RoleMap rm = classify(r.workbook, r.graph);
        REQUIRE(rm.size() == r.graph.size());
        // Every stored cell gets exactly one role.
        REQUIRE(r.graph.stored_count() == r.workbook.cell_count());
        for (NodeId id = 0; id < r.graph.size(); ++id) {
            const Cell* cell = r.graph.is_synthesized(id) ? nullptr : r.workbook.find(r.graph.address(id));
            CellRole role = rm.at(r.graph.address(id));
            bool formula = cell != nullptr && cell->is_formula();
            CHECK(formula == (role == CellRole::Intermediate || role == CellRole::Output));
        }
    }
}

TEST_CASE("quotient conserves edges and matches the enumeration oracle") {
    ModuleMap map({{parse_region("A!*"), ModuleKind::Assumptions, 1, 1},
                   {parse_region("B!A1:C8"), ModuleKind::Computations, 1, 2},
                   {parse_region("B!A1:A2"), ModuleKind::SourceData, 1, 3},
                   {parse_region("C!B1:F4"), ModuleKind::Reports, 1, 4}},
                  MapProvenance::Manifest);
    for (std::uint32_t seed = 1; seed <= 40; ++seed) {
        CAPTURE(seed);
        auto b = build(parse_fixture(gen::random_workbook(seed, 90)).workbook);
        ModuleQuotient q = module_quotient(b.graph, map);
        CHECK(q.cross_count() + q.intra_count() == b.graph.edges().size());

        auto expected = oracle::enumerate_quotient(edge_set(b.graph), map);
        std::map<std::pair<ModuleLabel, ModuleLabel>, std::size_t> got;
        for (const auto& [label, n] : q.intra) got[{label, label}] += n;
        for (const auto& e : q.edges) {
            CHECK(e.from != e.to);
            got[{e.from, e.to}] += e.count;
            // The witness realizes the pair.
            CHECK(oracle::module_of(map, b.graph.address(e.witness.from)) == e.from);
            CHECK(oracle::module_of(map, b.graph.address(e.witness.to)) == e.to);
        }
        std::erase_if(got, [](const auto& kv) { return kv.second == 0; });
        CHECK(got == expected);
        CHECK(std::is_sorted(q.edges.begin(), q.edges.end(),
                             [](const auto& x, const auto& y) { return std::pair(x.from, x.to) < std::pair(y.from, y.to); }));
    }
}

TEST_CASE("quotient DOT output") {
    auto b = build_text("[sheet: In]\nA1 = 1\n[sheet: Out]\nA1 = =In!A1\nA2 = =A1\n");
    ModuleMap map({{parse_region("In!*"), ModuleKind::Assumptions, 1, 1},
                   {parse_region("Out!*"), ModuleKind::Reports, 1, 2}},
                  MapProvenance::Manifest);
    auto dot = quotient_to_dot(module_quotient(b.graph, map));
    CHECK(dot.find("digraph quotient {") == 0);
    CHECK(dot.find("\"Inputs/Assumptions\" -> \"Reports\" [label=\"1\"];") != std::string::npos);
    CHECK(dot.find("\"Reports\" [label=\"Reports\\nintra 1\"];") != std::string::npos);
}
