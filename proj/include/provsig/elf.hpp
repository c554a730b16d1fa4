#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace provsig {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class ElfClass { elf32, elf64 };

struct Section {
    std::string name;
    Bytes bytes; // empty for SHT_NOBITS
    std::uint64_t file_offset = 0;
    std::uint64_t flags = 0;
    std::uint32_t type = 0;
    std::uint32_t link = 0;
    std::uint32_t info = 0;
    std::uint64_t entsize = 0;
    std::uint64_t size = 0; // header size field, also meaningful for NOBITS
};

/// Structural view of one ELF file. Section indices match the file's section
/// header table, so `link`/`info` fields can be used to index `sections`.
struct ElfImage {
    ElfClass elf_class = ElfClass::elf64;
    std::uint16_t machine = 0;
    std::uint16_t type = 0;
    std::vector<Section> sections;
    std::vector<std::string> dynamic_needed;
    bool is_relocatable = false;
};

struct RelocationEntry {
    std::string section_name;
    std::uint64_t offset = 0;
    std::uint32_t reloc_type = 0;
    std::string symbol_name;
    std::uint32_t mask_len = 0;
    bool clamped = false; // mask range was cut at the section end
};

struct Relocations {
    std::vector<RelocationEntry> entries; // sorted by offset
    std::vector<std::string> warnings;
};

struct CommentStrings {
    std::vector<std::string> strings;
    bool unterminated_tail = false; // last string had no trailing NUL
};

/// Parses a little-endian ELF32/ELF64 file. Throws MalformedElf or UnsupportedElf.
ElfImage parse_elf(ByteView data);

/// True when `data` starts with the ELF magic.
bool has_elf_magic(ByteView data);

/// First section with exactly this name.
const Section* get_section(const ElfImage& image, std::string_view name);

/// `.text` and every `.text.*` section, in file order.
std::vector<const Section*> list_text_sections(const ElfImage& image);

/// Entries of `.rel<text_name>` and `.rela<text_name>`, with the byte count
/// each one patches in the text section.
Relocations parse_relocations(const ElfImage& image, std::string_view text_name);

/// Number of bytes a relocation of `reloc_type` overwrites on `machine`, or
/// 0 when the type patches nothing (R_*_NONE). Unknown types yield nullopt.
std::optional<std::uint32_t> relocation_mask_size(std::uint16_t machine, std::uint32_t reloc_type);

/// NUL-separated strings of the `.comment` section; empty strings dropped.
CommentStrings parse_comment(const ElfImage& image);
CommentStrings split_comment_bytes(ByteView bytes);

} // namespace provsig
