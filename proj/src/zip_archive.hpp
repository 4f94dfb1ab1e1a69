#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ssqa::detail {

/// Read-only view of an in-memory ZIP archive (stored and deflated entries).
class ZipArchive {
public:
    /// Throws IngestError("not a ZIP archive") when no central directory is found.
    explicit ZipArchive(std::string bytes, std::string source = "<zip>");

    bool contains(const std::string& name) const { return entries_.count(name) != 0; }
    std::vector<std::string> names() const;
    /// Decompressed entry contents. Throws IngestError naming the entry.
    std::string read(const std::string& name) const;

private:
    struct Entry {
        std::uint16_t method = 0;
        std::uint32_t compressed_size = 0;
        std::uint32_t size = 0;
        std::uint32_t local_offset = 0;
    };

    std::string bytes_;
    std::string source_;
    std::map<std::string, Entry> entries_;
};

}  // namespace ssqa::detail
