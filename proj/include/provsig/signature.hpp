#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "provsig/hex_pattern.hpp"

namespace provsig {

enum class Target { text, comment, dynlib };

std::string_view to_string(Target t);

/// MD5 of a shared library's `.text`, with the section length.
struct Md5Record {
    std::string digest; // 32 lowercase hex chars
    std::uint64_t text_size = 0;

    friend bool operator==(const Md5Record&, const Md5Record&) = default;
};

/// One detection rule. Hex signatures target `.text` or `.comment`; MD5
/// signatures always target dynamic libraries.
struct Signature {
    std::string name;
    Target target = Target::text;
    std::variant<HexPattern, Md5Record> payload;

    [[nodiscard]] bool is_hex() const { return std::holds_alternative<HexPattern>(payload); }
    [[nodiscard]] const HexPattern& pattern() const { return std::get<HexPattern>(payload); }
    [[nodiscard]] const Md5Record& md5() const { return std::get<Md5Record>(payload); }

    friend bool operator==(const Signature&, const Signature&) = default;
};

} // namespace provsig
