#include "provsig/archive.hpp"

#include <algorithm>
#include <charconv>
#include <string_view>

#include "provsig/error.hpp"

namespace provsig {

namespace {

constexpr std::string_view kArMagic = "!<arch>\n";
constexpr std::size_t kHeaderSize = 60;

std::string_view field(ByteView header, std::size_t off, std::size_t len) {
    std::string_view f(reinterpret_cast<const char*>(header.data()) + off, len);
    while (!f.empty() && f.back() == ' ') {
        f.remove_suffix(1);
    }
    return f;
}

std::uint64_t parse_decimal(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw MalformedArchive("bad " + std::string(what) + " field '" + std::string(text) + "'");
    }
    return v;
}

std::string long_name(std::string_view table, std::uint64_t offset) {
    if (offset >= table.size()) {
        throw MalformedArchive("long name offset " + std::to_string(offset) + " outside the name table");
    }
    const std::string_view rest = table.substr(offset);
    const auto end = rest.find_first_of("\n");
    std::string_view name = rest.substr(0, end);
    if (name.ends_with('/')) {
        name.remove_suffix(1);
    }
    return std::string(name);
}

} // namespace

bool has_archive_magic(ByteView data) {
    return data.size() >= kArMagic.size() &&
           std::equal(kArMagic.begin(), kArMagic.end(), reinterpret_cast<const char*>(data.data()));
}

std::vector<ArchiveMember> parse_archive(ByteView data) {
    if (!has_archive_magic(data)) {
        throw MalformedArchive("bad magic");
    }
    std::vector<ArchiveMember> members;
    std::string_view names;
    std::size_t pos = kArMagic.size();
    while (pos < data.size()) {
        // A lone trailing newline pad is tolerated.
        if (data.size() - pos == 1 && data[pos] == '\n') {
            break;
        }
        if (data.size() - pos < kHeaderSize) {
            throw MalformedArchive("truncated member header at offset " + std::to_string(pos));
        }
        const ByteView header = data.subspan(pos, kHeaderSize);
        if (header[58] != '`' || header[59] != '\n') {
            throw MalformedArchive("bad member header terminator at offset " + std::to_string(pos));
        }
        const std::string_view raw_name = field(header, 0, 16);
        const std::uint64_t size = parse_decimal(field(header, 48, 10), "size");
        const std::size_t body = pos + kHeaderSize;
        if (size > data.size() - body) {
            throw MalformedArchive("member '" + std::string(raw_name) + "' truncated");
        }
        const ByteView contents = data.subspan(body, size);
        pos = body + size + (size % 2);

        if (raw_name == "/" || raw_name == "/SYM64/") {
            continue;
        }
        if (raw_name == "//") {
            names = {reinterpret_cast<const char*>(contents.data()), contents.size()};
            continue;
        }
        std::string name;
        if (raw_name.size() > 1 && raw_name.front() == '/') {
            name = long_name(names, parse_decimal(raw_name.substr(1), "long name offset"));
        } else {
            name = std::string(raw_name.ends_with('/') ? raw_name.substr(0, raw_name.size() - 1) : raw_name);
        }
        members.push_back({std::move(name), Bytes(contents.begin(), contents.end())});
    }
    return members;
}

} // namespace provsig
