#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ssqa/formula.hpp"
#include "ssqa/module_map.hpp"
#include "ssqa/workbook.hpp"

namespace ssqa {

struct ParseFailure {
    CellAddress cell;
    std::string text;
    std::size_t offset = 0;
    std::string message;
};

struct ParsedFormulas {
    std::map<CellAddress, FormulaAst> asts;
    std::vector<ParseFailure> failures;

    const FormulaAst* find(const CellAddress& addr) const {
        auto it = asts.find(addr);
        return it == asts.end() ? nullptr : &it->second;
    }
};

/// Parses every formula cell against the workbook's defined names.
ParsedFormulas parse_formulas(const Workbook& workbook);

using NodeId = std::uint32_t;

struct Edge {
    NodeId from;  // precedent
    NodeId to;    // dependent
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class BlindSpotReason : std::uint8_t { Indirect, Offset, ExternalWorkbook, UnresolvedName, UnknownSheet };
std::string_view to_string(BlindSpotReason reason) noexcept;

/// A reference the graph cannot follow, with the formula cell that holds it.
struct BlindSpot {
    CellAddress owner;
    BlindSpotReason reason;
    std::string text;
};

/// A range too large to expand; its edges come from the stored cells inside it.
struct CappedRange {
    CellAddress owner;
    Region region;
};

/// Cell-precedent graph. Node ids follow workbook order (sheet, then reading
/// order) for stored cells; synthesized blank nodes follow, in address order.
class DepGraph {
public:
    const std::vector<CellAddress>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const CellAddress& address(NodeId id) const { return nodes_[id]; }
    bool is_synthesized(NodeId id) const { return id >= stored_count_; }
    std::size_t stored_count() const noexcept { return stored_count_; }
    std::optional<NodeId> find(const CellAddress& addr) const;

    /// Sorted, duplicate-free.
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<NodeId>& precedents(NodeId id) const { return precedents_[id]; }
    const std::vector<NodeId>& dependents(NodeId id) const { return dependents_[id]; }

    const std::vector<BlindSpot>& blind_spots() const noexcept { return blind_spots_; }
    const std::vector<CappedRange>& capped_ranges() const noexcept { return capped_; }
    /// Nontrivial strongly connected components, each sorted, listed by first member.
    const std::vector<std::vector<NodeId>>& sccs() const noexcept { return sccs_; }

private:
    friend DepGraph build_graph(const Workbook&, const ParsedFormulas&, std::uint64_t);

    std::vector<CellAddress> nodes_;
    std::unordered_map<CellAddress, NodeId> index_;
    std::size_t stored_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> precedents_;
    std::vector<std::vector<NodeId>> dependents_;
    std::vector<BlindSpot> blind_spots_;
    std::vector<CappedRange> capped_;
    std::vector<std::vector<NodeId>> sccs_;
};

/// Edge r→d for every precedent r of every parsed formula cell d. References
/// to empty in-grid cells get synthesized blank nodes.
DepGraph build_graph(const Workbook& workbook, const ParsedFormulas& formulas,
                     std::uint64_t range_cap = kDefaultRangeCap);

/// Strongly connected components with more than one member or a self-loop
/// (Tarjan, iterative). Works on any adjacency list.
std::vector<std::vector<std::size_t>> nontrivial_sccs(const std::vector<std::vector<std::size_t>>& adjacency);
std::vector<std::vector<NodeId>> find_cycles(const DepGraph& graph);

enum class CellRole : std::uint8_t { Input, Intermediate, Output, Label, OrphanConstant };
std::string_view to_string(CellRole role) noexcept;

/// Role of every graph node. Synthesized blanks are OrphanConstant.
RoleMap classify(const Workbook& workbook, const DepGraph& graph);

/// Module label of a cell; nullopt is the synthetic "Unassigned" module.
using ModuleLabel = std::optional<ModuleKind>;

struct QuotientEdge {
    ModuleLabel from;
    ModuleLabel to;
    std::size_t count = 0;
    Edge witness;  // first cell edge, in edge order, realizing this pair
};

struct ModuleQuotient {
    /// Cross-module pairs, ordered by (from, to) label.
    std::vector<QuotientEdge> edges;
    std::map<ModuleLabel, std::size_t> intra;

    std::size_t cross_count() const noexcept;
    std::size_t intra_count() const noexcept;
};

ModuleQuotient module_quotient(const DepGraph& graph, const ModuleMap& map);

/// DOT digraph of the quotient: nodes are modules, edge labels are counts.
std::string quotient_to_dot(const ModuleQuotient& quotient);

}  // namespace ssqa
