#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ssqa::detail {

/// Minimal element tree. Names and attribute keys are stored without their
/// namespace prefix ("r:id" → "id").
struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<std::unique_ptr<XmlElement>> children;
    std::string text;  // character data directly inside this element

    const std::string* attribute(std::string_view key) const;
    const XmlElement* child(std::string_view name) const;
    std::vector<const XmlElement*> children_named(std::string_view name) const;
    /// Concatenated text of this element and all descendants named `name`.
    std::string descendant_text(std::string_view name) const;
    bool has_descendant(std::string_view name) const;
};

/// Throws IngestError(part, line, ...) on malformed XML.
std::unique_ptr<XmlElement> parse_xml(std::string_view text, const std::string& part);

}  // namespace ssqa::detail
