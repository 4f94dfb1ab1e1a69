#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ssqa/error.hpp"
#include "ssqa/formula.hpp"
#include "ssqa/ingest.hpp"
#include "xml_dom.hpp"
#include "zip_archive.hpp"

namespace ssqa {

namespace {

using detail::XmlElement;

// Parts read by the loader or known to carry nothing the analysis needs.
constexpr std::string_view kQuietPrefixes[] = {
    "[Content_Types].xml", "_rels/",          "docProps/",       "xl/_rels/",      "xl/worksheets/",
    "xl/sharedStrings.xml", "xl/styles.xml",  "xl/theme/",       "xl/calcChain.xml", "xl/printerSettings/",
    "xl/pivotTables/",      "xl/pivotCache/", "xl/drawings/",    "xl/media/",      "xl/tables/",
    "xl/charts/",           "customXml/",     "xl/metadata.xml", "xl/persons/",    "xl/threadedComments/",
    "xl/comments",          "xl/ctrlProps/",  "xl/richData/",    "xl/webextensions/", "xl/workbook.xml",
};

std::string dir_of(const std::string& part) {
    auto slash = part.rfind('/');
    return slash == std::string::npos ? std::string() : part.substr(0, slash + 1);
}

std::string rels_path(const std::string& part) {
    auto slash = part.rfind('/');
    std::string dir = slash == std::string::npos ? std::string() : part.substr(0, slash + 1);
    std::string file = slash == std::string::npos ? part : part.substr(slash + 1);
    return dir + "_rels/" + file + ".rels";
}

// Resolves a relationship target against the directory of its source part.
std::string resolve_target(const std::string& base_dir, const std::string& target) {
    std::string joined = !target.empty() && target.front() == '/' ? target.substr(1) : base_dir + target;
    std::vector<std::string> parts;
    std::stringstream ss(joined);
    std::string seg;
    while (std::getline(ss, seg, '/')) {
        if (seg.empty() || seg == ".") continue;
        if (seg == "..") {
            if (!parts.empty()) parts.pop_back();
            continue;
        }
        parts.push_back(seg);
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "/" : "") + parts[i];
    return out;
}

struct Relationship {
    std::string target;
    std::string type;
};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string shared_string_text(const XmlElement& si) {
    std::string out;
    for (const auto& c : si.children) {
        if (c->name == "t")
            out += c->text;
        else if (c->name == "r")
            out += c->descendant_text("t");
    }
    return out;
}

class XlsxReader {
public:
    XlsxReader(std::string bytes, std::string source) : zip_(std::move(bytes), source), source_(std::move(source)) {}

    IngestReport read() {
        std::string workbook_part = find_workbook_part();
        if (!zip_.contains(workbook_part)) throw IngestError(workbook_part, 0, "missing workbook part");
        auto wb = xml(workbook_part);
        auto rels = relationships(workbook_part);
        load_shared_strings(workbook_part, rels);

        std::vector<std::string> sheet_names;  // by position, for localSheetId
        if (const auto* sheets = wb->child("sheets")) {
            for (const auto* s : sheets->children_named("sheet")) {
                const std::string* name = s->attribute("name");
                const std::string* rid = s->attribute("id");
                if (name == nullptr || rid == nullptr)
                    throw IngestError(workbook_part, 0, "sheet entry without name or relationship id");
                sheet_names.push_back(*name);
                auto rel = rels.find(*rid);
                if (rel == rels.end())
                    throw IngestError(workbook_part, 0, "sheet '" + *name + "' has no relationship " + *rid);
                if (!ends_with(rel->second.type, "/worksheet")) {
                    warn(rel->second.target, "sheet '" + *name + "' is not a worksheet; not analyzed");
                    continue;
                }
                if (const std::string* state = s->attribute("state"); state && *state != "visible")
                    warn(*name, "sheet is " + *state + "; analyzed like a visible sheet");
                try {
                    builder_.add_sheet(*name);
                } catch (const WorkbookError& e) {
                    throw IngestError(workbook_part, 0, e.what());
                }
                load_sheet(*name, rel->second.target);
            }
        }
        load_defined_names(*wb, sheet_names, workbook_part);
        scan_parts(workbook_part);
        return IngestReport{std::move(builder_).build(), std::move(warnings_)};
    }

private:
    void warn(std::string location, std::string message) {
        warnings_.push_back({std::move(location), std::move(message)});
    }

    std::unique_ptr<XmlElement> xml(const std::string& part) { return detail::parse_xml(zip_.read(part), part); }

    std::string find_workbook_part() {
        if (zip_.contains("_rels/.rels")) {
            auto root = xml("_rels/.rels");
            for (const auto* r : root->children_named("Relationship")) {
                const std::string* type = r->attribute("Type");
                const std::string* target = r->attribute("Target");
                if (type && target && ends_with(*type, "/officeDocument")) return resolve_target("", *target);
            }
        }
        return "xl/workbook.xml";
    }

    std::map<std::string, Relationship> relationships(const std::string& part) {
        std::map<std::string, Relationship> out;
        std::string path = rels_path(part);
        if (!zip_.contains(path)) return out;
        auto root = xml(path);
        for (const auto* r : root->children_named("Relationship")) {
            const std::string* id = r->attribute("Id");
            const std::string* target = r->attribute("Target");
            const std::string* type = r->attribute("Type");
            const std::string* mode = r->attribute("TargetMode");
            if (!id || !target) continue;
            std::string resolved = mode && *mode == "External" ? *target : resolve_target(dir_of(part), *target);
            out[*id] = Relationship{resolved, type ? *type : std::string()};
        }
        return out;
    }

    void load_shared_strings(const std::string& workbook_part, const std::map<std::string, Relationship>& rels) {
        std::string part;
        for (const auto& [id, rel] : rels)
            if (ends_with(rel.type, "/sharedStrings")) part = rel.target;
        if (part.empty()) part = dir_of(workbook_part) + "sharedStrings.xml";
        if (!zip_.contains(part)) return;
        auto root = xml(part);
        for (const auto* si : root->children_named("si")) shared_.push_back(shared_string_text(*si));
    }

    struct SharedMaster {
        std::string text;
        CellAddress anchor;
    };

    struct PendingCell {
        CellAddress address;
        std::optional<CellValue> value;
        std::optional<std::string> formula;
    };

    std::optional<CellValue> cell_value(const XmlElement& c, const std::string& type, const std::string& where) {
        if (type == "inlineStr") {
            const XmlElement* is = c.child("is");
            return is ? CellValue{Text{shared_string_text(*is)}} : CellValue{Blank{}};
        }
        const XmlElement* v = c.child("v");
        if (v == nullptr) return std::nullopt;
        const std::string& raw = v->text;
        if (type == "s") {
            std::size_t idx = 0;
            auto r = std::from_chars(raw.data(), raw.data() + raw.size(), idx);
            if (r.ec != std::errc{} || idx >= shared_.size())
                throw IngestError(where, 0, "shared string index '" + raw + "' out of range");
            return Text{shared_[idx]};
        }
        if (type == "str") return Text{raw};
        if (type == "b") return raw == "1" || raw == "true";
        if (type == "e") return ErrorLiteral{raw};
        if (type == "d") {
            warn(where, "ISO date value kept as text");
            return Text{raw};
        }
        double d = 0;
        auto r = std::from_chars(raw.data(), raw.data() + raw.size(), d);
        if (r.ec != std::errc{} || r.ptr != raw.data() + raw.size())
            throw IngestError(where, 0, "malformed number '" + raw + "'");
        return d;
    }

    void load_sheet(const std::string& sheet, const std::string& part) {
        auto root = xml(part);
        if (root->child("autoFilter") != nullptr) builder_.set_autofilters(true);

        std::map<std::string, SharedMaster> masters;
        std::vector<PendingCell> cells;
        if (const auto* data = root->child("sheetData")) {
            std::int32_t row_no = 0;
            for (const auto* row : data->children_named("row")) {
                if (const std::string* r = row->attribute("r"))
                    std::from_chars(r->data(), r->data() + r->size(), row_no);
                else
                    ++row_no;
                std::int32_t col_no = 0;
                for (const auto* c : row->children_named("c")) {
                    CellAddress addr{sheet, col_no + 1, row_no};
                    if (const std::string* r = c->attribute("r")) {
                        try {
                            addr = parse_a1(*r, sheet);
                        } catch (const AddressError& e) {
                            throw IngestError(part, 0, e.what());
                        }
                    }
                    col_no = addr.column;
                    read_cell(*c, addr, part, masters, cells);
                }
            }
        }
        apply_merges(*root, sheet, cells);
        for (auto& pc : cells) {
            try {
                if (pc.formula)
                    builder_.set_formula(pc.address, std::move(*pc.formula));
                else if (pc.value)
                    builder_.set_cell(pc.address, std::move(*pc.value));
            } catch (const WorkbookError& e) {
                throw IngestError(part, 0, e.what());
            }
        }
    }

    void read_cell(const XmlElement& c, const CellAddress& addr, const std::string& part,
                   std::map<std::string, SharedMaster>& masters, std::vector<PendingCell>& cells) {
        std::string type = c.attribute("t") ? *c.attribute("t") : "n";
        std::string where = to_string(addr);
        PendingCell pc{addr, std::nullopt, std::nullopt};
        if (const XmlElement* f = c.child("f")) {
            std::string ftype = f->attribute("t") ? *f->attribute("t") : "normal";
            std::string text = f->text;
            if (ftype == "shared") {
                const std::string* si = f->attribute("si");
                if (si == nullptr) throw IngestError(part, 0, "shared formula without index at " + where);
                if (!text.empty()) {
                    masters[*si] = SharedMaster{text, addr};
                } else if (auto m = masters.find(*si); m != masters.end()) {
                    text = shift_formula(m->second.text, addr.row - m->second.anchor.row,
                                         addr.column - m->second.anchor.column);
                } else {
                    warn(where, "shared formula " + *si + " has no anchor cell; cached value used");
                }
            } else if (ftype == "array") {
                warn(where, "array formula analyzed as an ordinary formula anchored here");
            } else if (ftype == "dataTable") {
                warn(where, "data table formula not analyzed; cached value used");
                text.clear();
            }
            if (!text.empty() && text.front() == '=') text.erase(0, 1);
            if (!text.empty()) pc.formula = std::move(text);
        }
        if (!pc.formula) pc.value = cell_value(c, type, where);
        if (pc.formula || pc.value) cells.push_back(std::move(pc));
    }

    void apply_merges(const XmlElement& root, const std::string& sheet, std::vector<PendingCell>& cells) {
        const XmlElement* merges = root.child("mergeCells");
        if (merges == nullptr) return;
        for (const auto* m : merges->children_named("mergeCell")) {
            const std::string* ref = m->attribute("ref");
            if (ref == nullptr) continue;
            Region region;
            try {
                region = parse_region(quote_sheet_name(sheet) + "!" + *ref);
            } catch (const AddressError&) {
                warn(sheet, "malformed merged range '" + *ref + "' ignored");
                continue;
            }
            const Rect& r = *region.rect;
            std::erase_if(cells, [&](const PendingCell& pc) {
                bool member = region.contains(pc.address);
                bool anchor = pc.address.column == r.first_column && pc.address.row == r.first_row;
                if (member && !anchor)
                    warn(to_string(pc.address), "content inside a merged range dropped; the anchor cell keeps it");
                return member && !anchor;
            });
        }
    }

    void load_defined_names(const XmlElement& wb, const std::vector<std::string>& sheet_names,
                            const std::string& part) {
        const XmlElement* names = wb.child("definedNames");
        if (names == nullptr) return;
        for (const auto* dn : names->children_named("definedName")) {
            const std::string* name = dn->attribute("name");
            if (name == nullptr || name->rfind("_xlnm.", 0) == 0) continue;
            std::string scope_sheet;
            if (const std::string* local = dn->attribute("localSheetId")) {
                std::size_t idx = 0;
                std::from_chars(local->data(), local->data() + local->size(), idx);
                if (idx < sheet_names.size()) scope_sheet = sheet_names[idx];
            }
            std::optional<Region> region;
            try {
                auto ast = parse_formula(dn->text, scope_sheet.empty() ? "" : scope_sheet);
                if (const auto* c = std::get_if<CellRef>(&ast.root->value))
                    region = Region{c->address.sheet, Rect{c->address.column, c->address.row, c->address.column,
                                                           c->address.row}};
                else if (const auto* r = std::get_if<RangeRef>(&ast.root->value))
                    region = r->region();
            } catch (const FormulaError&) {
            }
            if (!region || region->sheet.empty() || !builder_.has_sheet(region->sheet)) {
                warn(part, "defined name '" + *name + "' is not a plain cell or range reference; ignored");
                continue;
            }
            if (builder_.has_name(*name)) {
                warn(part, "defined name '" + *name + "' defined more than once; first definition kept");
                continue;
            }
            builder_.define_name(*name, *region);
        }
    }

    void scan_parts(const std::string& workbook_part) {
        for (const auto& name : zip_.names()) {
            if (name.rfind("xl/pivotTables/", 0) == 0 || name.rfind("xl/pivotCache/", 0) == 0)
                builder_.set_pivot_tables(true);
            if (name == workbook_part || name.back() == '/') continue;
            if (name.rfind("xl/externalLinks/", 0) == 0) {
                if (name.find("/_rels/") == std::string::npos)
                    warn(name, "external workbook link; references through it are not followed");
                continue;
            }
            if (ends_with(name, "vbaProject.bin")) {
                warn(name, "macros are not analyzed");
                continue;
            }
            if (name.rfind("xl/chartsheets/", 0) == 0) continue;
            bool quiet = std::any_of(std::begin(kQuietPrefixes), std::end(kQuietPrefixes),
                                     [&](std::string_view p) { return name.rfind(p, 0) == 0; });
            if (!quiet) warn(name, "unsupported part ignored");
        }
    }

    detail::ZipArchive zip_;
    std::string source_;
    WorkbookBuilder builder_;
    std::vector<std::string> shared_;
    std::vector<IngestWarning> warnings_;
};

}  // namespace

IngestReport load_xlsx_bytes(std::string bytes, const std::string& source_name) {
    return XlsxReader(std::move(bytes), source_name).read();
}

IngestReport load_xlsx(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(path.string(), 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_xlsx_bytes(buf.str(), path.string());
}

}  // namespace ssqa
