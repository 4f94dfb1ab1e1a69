#include "xml_dom.hpp"

#include <expat.h>

#include "ssqa/error.hpp"

namespace ssqa::detail {

namespace {

std::string local_name(const char* qualified) {
    std::string_view s(qualified);
    auto colon = s.rfind(':');
    return std::string(colon == std::string_view::npos ? s : s.substr(colon + 1));
}

struct BuildState {
    std::unique_ptr<XmlElement> root;
    std::vector<XmlElement*> stack;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<BuildState*>(user);
    auto el = std::make_unique<XmlElement>();
    el->name = local_name(name);
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) el->attributes.emplace_back(local_name(attrs[i]), attrs[i + 1]);
    XmlElement* raw = el.get();
    if (st->stack.empty())
        st->root = std::move(el);
    else
        st->stack.back()->children.push_back(std::move(el));
    st->stack.push_back(raw);
}

void on_end(void* user, const XML_Char*) { static_cast<BuildState*>(user)->stack.pop_back(); }

void on_text(void* user, const XML_Char* s, int len) {
    auto* st = static_cast<BuildState*>(user);
    if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

void collect_text(const XmlElement& el, std::string_view name, std::string& out) {
    for (const auto& c : el.children) {
        if (c->name == name)
            out += c->text;
        else
            collect_text(*c, name, out);
    }
}

}  // namespace

const std::string* XmlElement::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
        if (k == key) return &v;
    return nullptr;
}

const XmlElement* XmlElement::child(std::string_view n) const {
    for (const auto& c : children)
        if (c->name == n) return c.get();
    return nullptr;
}

std::vector<const XmlElement*> XmlElement::children_named(std::string_view n) const {
    std::vector<const XmlElement*> out;
    for (const auto& c : children)
        if (c->name == n) out.push_back(c.get());
    return out;
}

std::string XmlElement::descendant_text(std::string_view n) const {
    std::string out;
    collect_text(*this, n, out);
    return out;
}

bool XmlElement::has_descendant(std::string_view n) const {
    for (const auto& c : children)
        if (c->name == n || c->has_descendant(n)) return true;
    return false;
}

std::unique_ptr<XmlElement> parse_xml(std::string_view text, const std::string& part) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
    if (!parser) throw IngestError(part, 0, "cannot create XML parser");
    BuildState st;
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);
    if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
        throw IngestError(part, XML_GetCurrentLineNumber(parser.get()),
                          std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    if (!st.root) throw IngestError(part, 0, "empty XML document");
    return std::move(st.root);
}

}  // namespace ssqa::detail
