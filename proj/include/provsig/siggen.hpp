#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "provsig/archive.hpp"
#include "provsig/elf.hpp"
#include "provsig/hex_pattern.hpp"
#include "provsig/signature.hpp"

namespace provsig {

inline constexpr std::size_t kMinSectionBytes = 16;
inline constexpr std::size_t kMaxPatternBytes = 255;
inline constexpr std::size_t kSegmentBytes = kMaxPatternBytes / 3; // 85
inline constexpr std::size_t kMinAnchorBytes = 2;
inline constexpr std::size_t kMinCommentBytes = 4;

/// Text section bytes with the relocation-patched positions marked.
struct MaskedText {
    Bytes bytes;
    std::vector<bool> masked;

    [[nodiscard]] std::size_t size() const { return bytes.size(); }
    [[nodiscard]] bool is_masked(std::size_t i) const { return masked[i]; }
};

MaskedText mask_text(ByteView section_bytes, std::span<const RelocationEntry> relocs);
MaskedText mask_text(const Section& section, std::span<const RelocationEntry> relocs);

/// Cell ranges [begin, end) kept from a section of n >= 256 bytes: the last
/// 85 cells of each third, where the final third absorbs n mod 3.
struct SegmentLayout {
    struct Range {
        std::size_t begin;
        std::size_t end;
    };
    std::array<Range, 3> segments;
    std::size_t first_gap;  // floor(n/3) - 85
    std::size_t second_gap; // first_gap + n mod 3
};

SegmentLayout three_segment_layout(std::size_t n);

enum class RejectReason { too_short, unanchorable };

struct BuiltPattern {
    HexPattern pattern;
    std::size_t section_offset = 0; // where a match of `pattern` begins inside the section
};

struct PatternRejection {
    RejectReason reason;
    std::string section;
    std::size_t section_size = 0;

    [[nodiscard]] std::string message() const;
};

using PatternResult = std::variant<BuiltPattern, PatternRejection>;

/// Whole section for n <= 255, three 85-cell segments joined by exact gaps
/// otherwise. Masked cells become `??`; edge `??` runs are trimmed.
PatternResult build_pattern(const MaskedText& masked, std::string_view section_name = {});

struct SigningResult {
    std::vector<Signature> signatures;
    std::vector<std::string> diagnostics; // rejected sections, skipped members
};

/// One text-target signature per qualifying `.text`/`.text.*` section of a
/// relocatable object, named `<origin>:<section>`.
SigningResult sign_object(const ElfImage& image, std::string_view origin);

/// sign_object over every relocatable ELF member, with `<origin>/<member>`
/// as the per-member origin. Other members are skipped with a diagnostic.
SigningResult sign_archive(std::span<const ArchiveMember> members, std::string_view origin);

/// MD5 of `.text` only, so relocation rewrites (prelinking) leave it stable.
/// Throws NoTextSection.
Signature sign_shared_lib(const ElfImage& image, std::string_view origin);

/// Literal comment-target signatures for each distinct string of at least
/// kMinCommentBytes bytes.
std::vector<Signature> sign_comments(std::span<const std::string> strings, std::string_view origin);

} // namespace provsig
