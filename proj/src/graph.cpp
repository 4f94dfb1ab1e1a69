#include "ssqa/graph.hpp"

#include <algorithm>
#include <set>

#include "ssqa/error.hpp"

namespace ssqa {

std::string_view to_string(BlindSpotReason reason) noexcept {
    switch (reason) {
    case BlindSpotReason::Indirect: return "INDIRECT";
    case BlindSpotReason::Offset: return "OFFSET";
    case BlindSpotReason::ExternalWorkbook: return "external-workbook";
    case BlindSpotReason::UnresolvedName: return "unresolved-name";
    case BlindSpotReason::UnknownSheet: return "unknown-sheet";
    }
    return "?";
}

std::string_view to_string(CellRole role) noexcept {
    switch (role) {
    case CellRole::Input: return "input";
    case CellRole::Intermediate: return "intermediate";
    case CellRole::Output: return "output";
    case CellRole::Label: return "label";
    case CellRole::OrphanConstant: return "orphan-constant";
    }
    return "?";
}

ParsedFormulas parse_formulas(const Workbook& workbook) {
    ParsedFormulas out;
    NameTable names(workbook);
    for (const auto& sheet : workbook.sheets()) {
        for (const auto& [key, cell] : sheet.cells) {
            const Formula* f = cell.formula();
            if (f == nullptr) continue;
            try {
                out.asts.emplace(cell.address, parse_formula(f->text, sheet.name, names));
            } catch (const FormulaError& e) {
                out.failures.push_back({cell.address, f->text, e.offset(), e.what()});
            }
        }
    }
    return out;
}

std::optional<NodeId> DepGraph::find(const CellAddress& addr) const {
    auto it = index_.find(addr);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

BlindSpotReason blind_reason(UnanalyzableReason r) {
    switch (r) {
    case UnanalyzableReason::Indirect: return BlindSpotReason::Indirect;
    case UnanalyzableReason::Offset: return BlindSpotReason::Offset;
    case UnanalyzableReason::ExternalWorkbook: return BlindSpotReason::ExternalWorkbook;
    default: return BlindSpotReason::UnresolvedName;
    }
}

}  // namespace

DepGraph build_graph(const Workbook& workbook, const ParsedFormulas& formulas, std::uint64_t range_cap) {
    DepGraph g;
    for (const auto& sheet : workbook.sheets()) {
        for (const auto& [key, cell] : sheet.cells) {
            g.index_.emplace(cell.address, static_cast<NodeId>(g.nodes_.size()));
            g.nodes_.push_back(cell.address);
        }
    }
    g.stored_count_ = g.nodes_.size();

    std::vector<Edge> edges;
    std::vector<std::pair<CellAddress, NodeId>> blank_edges;

    for (const auto& [owner, ast] : formulas.asts) {
        NodeId dependent = g.index_.at(owner);
        RefSet refs = extract_refs(ast, range_cap);
        std::set<std::string> unknown_sheets;
        auto canonical_sheet = [&](const std::string& sheet) -> const Sheet* {
            const Sheet* s = workbook.sheet(sheet);
            if (s == nullptr && unknown_sheets.insert(fold_name(sheet)).second)
                g.blind_spots_.push_back({owner, BlindSpotReason::UnknownSheet, quote_sheet_name(sheet)});
            return s;
        };

        for (const auto& ref : refs.cells) {
            const Sheet* s = canonical_sheet(ref.sheet);
            if (s == nullptr) continue;
            CellAddress addr{s->name, ref.column, ref.row};
            if (auto it = g.index_.find(addr); it != g.index_.end())
                edges.push_back({it->second, dependent});
            else
                blank_edges.emplace_back(std::move(addr), dependent);
        }
        for (const auto& u : refs.unanalyzable) {
            if (u.reason == UnanalyzableReason::RangeCap) continue;
            g.blind_spots_.push_back({owner, blind_reason(u.reason), u.text});
        }
        for (const auto& region : refs.large_ranges) {
            const Sheet* s = canonical_sheet(region.sheet);
            if (s == nullptr) continue;
            Region canonical{s->name, region.rect};
            g.capped_.push_back({owner, canonical});
            for (const auto& [key, cell] : s->cells)
                if (canonical.contains(cell.address)) edges.push_back({g.index_.at(cell.address), dependent});
        }
    }

    std::map<CellAddress, NodeId> blanks;
    for (const auto& [addr, to] : blank_edges) blanks.emplace(addr, 0);
    for (auto& [addr, id] : blanks) {
        id = static_cast<NodeId>(g.nodes_.size());
        g.index_.emplace(addr, id);
        g.nodes_.push_back(addr);
    }
    for (const auto& [addr, to] : blank_edges) edges.push_back({blanks.at(addr), to});

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges_ = std::move(edges);
    g.precedents_.assign(g.nodes_.size(), {});
    g.dependents_.assign(g.nodes_.size(), {});
    for (const auto& e : g.edges_) {
        g.dependents_[e.from].push_back(e.to);
        g.precedents_[e.to].push_back(e.from);
    }

    std::vector<std::vector<std::size_t>> adjacency(g.nodes_.size());
    for (const auto& e : g.edges_) adjacency[e.from].push_back(e.to);
    for (auto& comp : nontrivial_sccs(adjacency)) {
        std::vector<NodeId> ids(comp.begin(), comp.end());
        g.sccs_.push_back(std::move(ids));
    }
    return g;
}

std::vector<std::vector<std::size_t>> nontrivial_sccs(const std::vector<std::vector<std::size_t>>& adjacency) {
    const std::size_t n = adjacency.size();
    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;

    struct Frame {
        std::size_t node;
        std::size_t next_edge;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& succ = adjacency[f.node];
            if (f.next_edge < succ.size()) {
                std::size_t w = succ[f.next_edge++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            std::size_t v = f.node;
            call.pop_back();
            if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
            if (low[v] != index[v]) continue;
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            bool self_loop = comp.size() == 1 &&
                             std::find(adjacency[v].begin(), adjacency[v].end(), v) != adjacency[v].end();
            if (comp.size() > 1 || self_loop) {
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<NodeId>> find_cycles(const DepGraph& graph) { return graph.sccs(); }

RoleMap classify(const Workbook& workbook, const DepGraph& graph) {
    RoleMap roles;
    for (NodeId id = 0; id < graph.size(); ++id) {
        const CellAddress& addr = graph.address(id);
        const Cell* cell = graph.is_synthesized(id) ? nullptr : workbook.find(addr);
        CellRole role = CellRole::OrphanConstant;
        bool referenced = !graph.dependents(id).empty();
        if (cell != nullptr) {
            if (cell->is_formula())
                role = referenced ? CellRole::Intermediate : CellRole::Output;
            else if (referenced)
                role = CellRole::Input;
            else if (cell->is_text())
                role = CellRole::Label;
        }
        roles.emplace_hint(roles.end(), addr, role);
    }
    return roles;
}

std::size_t ModuleQuotient::cross_count() const noexcept {
    std::size_t n = 0;
    for (const auto& e : edges) n += e.count;
    return n;
}

std::size_t ModuleQuotient::intra_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [label, count] : intra) n += count;
    return n;
}

ModuleQuotient module_quotient(const DepGraph& graph, const ModuleMap& map) {
    std::vector<ModuleLabel> labels(graph.size());
    for (NodeId id = 0; id < graph.size(); ++id) labels[id] = map.module_of(graph.address(id));

    ModuleQuotient q;
    std::map<std::pair<ModuleLabel, ModuleLabel>, QuotientEdge> cross;
    for (const auto& e : graph.edges()) {
        const ModuleLabel& from = labels[e.from];
        const ModuleLabel& to = labels[e.to];
        if (from == to) {
            ++q.intra[from];
            continue;
        }
        auto [it, inserted] = cross.try_emplace({from, to}, QuotientEdge{from, to, 0, e});
        ++it->second.count;
    }
    for (auto& [key, edge] : cross) q.edges.push_back(std::move(edge));
    return q;
}

std::string quotient_to_dot(const ModuleQuotient& quotient) {
    std::set<ModuleLabel> labels;
    for (const auto& [label, count] : quotient.intra) labels.insert(label);
    for (const auto& e : quotient.edges) {
        labels.insert(e.from);
        labels.insert(e.to);
    }
    auto quoted = [](const ModuleLabel& l) { return "\"" + display_name(l) + "\""; };
    std::string out = "digraph quotient {\n  rankdir=LR;\n";
    for (const auto& l : labels) {
        auto it = quotient.intra.find(l);
        std::size_t intra = it == quotient.intra.end() ? 0 : it->second;
        out += "  " + quoted(l) + " [label=\"" + display_name(l) + "\\nintra " + std::to_string(intra) + "\"];\n";
    }
    for (const auto& e : quotient.edges)
        out += "  " + quoted(e.from) + " -> " + quoted(e.to) + " [label=\"" + std::to_string(e.count) + "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace ssqa
