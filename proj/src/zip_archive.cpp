#include "zip_archive.hpp"

#include <zlib.h>

#include "ssqa/error.hpp"

namespace ssqa::detail {

namespace {

constexpr std::uint32_t kEndOfCentralDir = 0x06054b50;
constexpr std::uint32_t kCentralHeader = 0x02014b50;
constexpr std::uint32_t kLocalHeader = 0x04034b50;

std::uint16_t u16(const std::string& b, std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                      (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t u32(const std::string& b, std::size_t at) {
    return static_cast<std::uint32_t>(u16(b, at)) | (static_cast<std::uint32_t>(u16(b, at + 2)) << 16);
}

}  // namespace

ZipArchive::ZipArchive(std::string bytes, std::string source) : bytes_(std::move(bytes)), source_(std::move(source)) {
    if (bytes_.size() < 22) throw IngestError(source_, 0, "not a ZIP archive");
    std::size_t eocd = std::string::npos;
    std::size_t lowest = bytes_.size() > 22 + 65535 ? bytes_.size() - 22 - 65535 : 0;
    for (std::size_t i = bytes_.size() - 22 + 1; i-- > lowest;) {
        if (u32(bytes_, i) == kEndOfCentralDir) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string::npos) throw IngestError(source_, 0, "not a ZIP archive");
    std::uint16_t count = u16(bytes_, eocd + 10);
    std::uint32_t dir_offset = u32(bytes_, eocd + 16);
    if (count == 0xFFFF || dir_offset == 0xFFFFFFFF) throw IngestError(source_, 0, "ZIP64 archives are not supported");

    std::size_t p = dir_offset;
    for (std::uint16_t k = 0; k < count; ++k) {
        if (p + 46 > bytes_.size() || u32(bytes_, p) != kCentralHeader)
            throw IngestError(source_, 0, "corrupt ZIP central directory");
        Entry e;
        e.method = u16(bytes_, p + 10);
        e.compressed_size = u32(bytes_, p + 20);
        e.size = u32(bytes_, p + 24);
        std::uint16_t name_len = u16(bytes_, p + 28);
        std::uint16_t extra_len = u16(bytes_, p + 30);
        std::uint16_t comment_len = u16(bytes_, p + 32);
        e.local_offset = u32(bytes_, p + 42);
        if (p + 46 + name_len > bytes_.size()) throw IngestError(source_, 0, "corrupt ZIP central directory");
        entries_.emplace(bytes_.substr(p + 46, name_len), e);
        p += 46u + name_len + extra_len + comment_len;
    }
}

std::vector<std::string> ZipArchive::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, e] : entries_) out.push_back(name);
    return out;
}

std::string ZipArchive::read(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw IngestError(name, 0, "missing part");
    const Entry& e = it->second;
    std::size_t h = e.local_offset;
    if (h + 30 > bytes_.size() || u32(bytes_, h) != kLocalHeader) throw IngestError(name, 0, "corrupt local header");
    std::size_t data = h + 30 + u16(bytes_, h + 26) + u16(bytes_, h + 28);
    if (data + e.compressed_size > bytes_.size()) throw IngestError(name, 0, "truncated entry");

    if (e.method == 0) return bytes_.substr(data, e.compressed_size);
    if (e.method != 8) throw IngestError(name, 0, "unsupported compression method " + std::to_string(e.method));

    std::string out(e.size, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw IngestError(name, 0, "inflate initialisation failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes_.data() + data));
    zs.avail_in = e.compressed_size;
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != e.size) throw IngestError(name, 0, "corrupt deflate stream");
    return out;
}

}  // namespace ssqa::detail
