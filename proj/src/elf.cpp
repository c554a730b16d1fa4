#include "provsig/elf.hpp"

#include <algorithm>
#include <elf.h>

#include "byte_reader.hpp"
#include "provsig/error.hpp"

namespace provsig {

namespace {

using Reader = detail::LeReader<MalformedElf>;

constexpr std::uint8_t kElfMagic[4] = {0x7f, 'E', 'L', 'F'};

struct Layout {
    bool wide;
    std::uint64_t ehdr_size;
    std::uint64_t shdr_size;
};

Section read_section_header(const Reader& r, const Layout& lay, std::uint64_t off) {
    Section s;
    if (lay.wide) {
        s.type = r.u32(off + 4);
        s.flags = r.u64(off + 8);
        s.file_offset = r.u64(off + 24);
        s.size = r.u64(off + 32);
        s.link = r.u32(off + 40);
        s.info = r.u32(off + 44);
        s.entsize = r.u64(off + 56);
    } else {
        s.type = r.u32(off + 4);
        s.flags = r.u32(off + 8);
        s.file_offset = r.u32(off + 16);
        s.size = r.u32(off + 20);
        s.link = r.u32(off + 24);
        s.info = r.u32(off + 28);
        s.entsize = r.u32(off + 36);
    }
    return s;
}

std::vector<std::string> read_needed(const ElfImage& image) {
    std::vector<std::string> needed;
    const auto dyn = std::find_if(image.sections.begin(), image.sections.end(),
                                  [](const Section& s) { return s.type == SHT_DYNAMIC; });
    if (dyn == image.sections.end()) {
        return needed;
    }
    if (dyn->link >= image.sections.size()) {
        throw MalformedElf(".dynamic string table index " + std::to_string(dyn->link) + " out of range");
    }
    const Bytes& strtab = image.sections[dyn->link].bytes;
    const bool wide = image.elf_class == ElfClass::elf64;
    const std::uint64_t entry = wide ? 16 : 8;
    Reader r(dyn->bytes, ".dynamic");
    for (std::uint64_t off = 0; off + entry <= dyn->bytes.size(); off += entry) {
        const std::uint64_t tag = r.word(off, wide);
        const std::uint64_t val = r.word(off + entry / 2, wide);
        if (tag == DT_NULL) {
            break;
        }
        if (tag == DT_NEEDED) {
            needed.push_back(detail::string_at<MalformedElf>(strtab, val, ".dynstr"));
        }
    }
    return needed;
}

} // namespace

bool has_elf_magic(ByteView data) {
    return data.size() >= 4 && std::equal(std::begin(kElfMagic), std::end(kElfMagic), data.begin());
}

ElfImage parse_elf(ByteView data) {
    if (!has_elf_magic(data)) {
        throw MalformedElf("bad magic");
    }
    if (data.size() < EI_NIDENT) {
        throw MalformedElf("truncated identification");
    }
    ElfImage image;
    switch (data[EI_CLASS]) {
    case ELFCLASS32:
        image.elf_class = ElfClass::elf32;
        break;
    case ELFCLASS64:
        image.elf_class = ElfClass::elf64;
        break;
    default:
        throw UnsupportedElf("unknown class " + std::to_string(data[EI_CLASS]));
    }
    if (data[EI_DATA] == ELFDATA2MSB) {
        throw UnsupportedElf("big-endian encoding");
    }
    if (data[EI_DATA] != ELFDATA2LSB) {
        throw UnsupportedElf("unknown data encoding " + std::to_string(data[EI_DATA]));
    }

    const bool wide = image.elf_class == ElfClass::elf64;
    const Layout lay{wide, wide ? 64u : 52u, wide ? 64u : 40u};
    const Reader r(data, "ELF header");
    r.require(0, lay.ehdr_size);

    image.type = r.u16(16);
    image.machine = r.u16(18);
    image.is_relocatable = image.type == ET_REL;
    const std::uint64_t shoff = wide ? r.u64(40) : r.u32(32);
    const std::uint16_t shentsize = r.u16(wide ? 58 : 46);
    std::uint64_t shnum = r.u16(wide ? 60 : 48);
    std::uint64_t shstrndx = r.u16(wide ? 62 : 50);

    if (shoff == 0) {
        return image;
    }
    if (shentsize < lay.shdr_size) {
        throw MalformedElf("section header entry size " + std::to_string(shentsize) + " too small");
    }
    const Reader sr(data, "section headers");
    if (shnum == 0 || shstrndx == SHN_XINDEX) {
        // Extended numbering keeps the real values in section 0.
        const Section zero = read_section_header(sr, lay, shoff);
        if (shnum == 0) {
            shnum = zero.size;
        }
        if (shstrndx == SHN_XINDEX) {
            shstrndx = zero.link;
        }
    }
    sr.require(shoff, shnum * shentsize);
    if (shnum > 0 && shstrndx >= shnum) {
        throw MalformedElf("section name string table index " + std::to_string(shstrndx) + " out of range");
    }

    std::vector<std::uint32_t> name_offsets;
    image.sections.reserve(shnum);
    name_offsets.reserve(shnum);
    const Reader body(data, "section contents");
    for (std::uint64_t i = 0; i < shnum; ++i) {
        const std::uint64_t off = shoff + i * shentsize;
        Section s = read_section_header(sr, lay, off);
        name_offsets.push_back(sr.u32(off));
        if (s.type != SHT_NOBITS && s.type != SHT_NULL && s.size > 0) {
            const auto bytes = body.slice(s.file_offset, s.size);
            s.bytes.assign(bytes.begin(), bytes.end());
        }
        image.sections.push_back(std::move(s));
    }

    if (shstrndx != SHN_UNDEF) {
        const Bytes& names = image.sections[shstrndx].bytes;
        for (std::size_t i = 0; i < image.sections.size(); ++i) {
            if (i == 0 && name_offsets[i] == 0) {
                continue;
            }
            image.sections[i].name = detail::string_at<MalformedElf>(names, name_offsets[i], "section name");
        }
    }

    image.dynamic_needed = read_needed(image);
    return image;
}

const Section* get_section(const ElfImage& image, std::string_view name) {
    const auto it = std::find_if(image.sections.begin(), image.sections.end(),
                                 [&](const Section& s) { return s.name == name; });
    return it == image.sections.end() ? nullptr : &*it;
}

std::vector<const Section*> list_text_sections(const ElfImage& image) {
    std::vector<const Section*> out;
    for (const Section& s : image.sections) {
        if (s.name == ".text" || s.name.starts_with(".text.")) {
            out.push_back(&s);
        }
    }
    return out;
}

std::optional<std::uint32_t> relocation_mask_size(std::uint16_t machine, std::uint32_t reloc_type) {
    if (machine == EM_X86_64) {
        switch (reloc_type) {
        case R_X86_64_NONE:
            return 0;
        case R_X86_64_64:
        case R_X86_64_DTPMOD64:
        case R_X86_64_DTPOFF64:
        case R_X86_64_TPOFF64:
        case R_X86_64_PC64:
        case R_X86_64_GOTOFF64:
        case R_X86_64_GOT64:
        case R_X86_64_GOTPCREL64:
        case R_X86_64_GOTPC64:
        case R_X86_64_GOTPLT64:
        case R_X86_64_PLTOFF64:
        case R_X86_64_SIZE64:
        case R_X86_64_RELATIVE64:
            return 8;
        case R_X86_64_PC32:
        case R_X86_64_GOT32:
        case R_X86_64_PLT32:
        case R_X86_64_GOTPCREL:
        case R_X86_64_32:
        case R_X86_64_32S:
        case R_X86_64_TLSGD:
        case R_X86_64_TLSLD:
        case R_X86_64_DTPOFF32:
        case R_X86_64_GOTTPOFF:
        case R_X86_64_TPOFF32:
        case R_X86_64_GOTPC32:
        case R_X86_64_SIZE32:
        case R_X86_64_GOTPC32_TLSDESC:
        case 39: // R_X86_64_PC32_BND
        case 40: // R_X86_64_PLT32_BND
        case R_X86_64_GOTPCRELX:
        case R_X86_64_REX_GOTPCRELX:
            return 4;
        case R_X86_64_16:
        case R_X86_64_PC16:
        case R_X86_64_TLSDESC_CALL: // marks the 2-byte `call *(%rax)` the linker may rewrite
            return 2;
        case R_X86_64_8:
        case R_X86_64_PC8:
            return 1;
        default:
            return std::nullopt;
        }
    }
    if (machine == EM_386) {
        switch (reloc_type) {
        case R_386_NONE:
            return 0;
        case R_386_32:
        case R_386_PC32:
        case R_386_GOT32:
        case R_386_PLT32:
        case R_386_GOTOFF:
        case R_386_GOTPC:
        case R_386_TLS_TPOFF:
        case R_386_TLS_IE:
        case R_386_TLS_GOTIE:
        case R_386_TLS_LE:
        case R_386_TLS_GD:
        case R_386_TLS_LDM:
        case R_386_TLS_GD_32:
        case R_386_TLS_LDM_32:
        case R_386_TLS_LDO_32:
        case R_386_TLS_IE_32:
        case R_386_TLS_LE_32:
        case R_386_TLS_DTPMOD32:
        case R_386_TLS_DTPOFF32:
        case R_386_TLS_TPOFF32:
        case R_386_TLS_GOTDESC:
        case R_386_GOT32X:
            return 4;
        case R_386_16:
        case R_386_PC16:
        case R_386_TLS_DESC_CALL:
            return 2;
        case R_386_8:
        case R_386_PC8:
            return 1;
        default:
            return std::nullopt;
        }
    }
    return std::nullopt;
}

namespace {

std::string symbol_name(const ElfImage& image, const Section& rel, std::uint64_t sym_index) {
    if (sym_index == 0 || rel.link == 0 || rel.link >= image.sections.size()) {
        return {};
    }
    const Section& symtab = image.sections[rel.link];
    const bool wide = image.elf_class == ElfClass::elf64;
    const std::uint64_t sym_size = wide ? 24 : 16;
    const Reader r(symtab.bytes, symtab.name);
    const std::uint64_t off = sym_index * sym_size;
    const std::uint32_t name_off = r.u32(off);
    const std::uint8_t info = r.u8(off + (wide ? 4 : 12));
    const std::uint16_t shndx = r.u16(off + (wide ? 6 : 14));
    if (name_off == 0 && ELF64_ST_TYPE(info) == STT_SECTION && shndx < image.sections.size()) {
        return image.sections[shndx].name;
    }
    if (symtab.link >= image.sections.size()) {
        throw MalformedElf(symtab.name + ": string table index out of range");
    }
    return detail::string_at<MalformedElf>(image.sections[symtab.link].bytes, name_off, symtab.name);
}

void read_relocation_section(const ElfImage& image, const Section& rel, bool has_addend, const Section& text,
                             Relocations& out) {
    const bool wide = image.elf_class == ElfClass::elf64;
    const std::uint64_t record = (wide ? 16 : 8) + (has_addend ? (wide ? 8 : 4) : 0);
    if (rel.bytes.size() % record != 0) {
        throw MalformedElf(rel.name + ": size " + std::to_string(rel.bytes.size()) + " is not a multiple of " +
                           std::to_string(record));
    }
    const Reader r(rel.bytes, rel.name);
    const std::uint64_t text_len = text.bytes.size();
    for (std::uint64_t off = 0; off < rel.bytes.size(); off += record) {
        RelocationEntry e;
        e.section_name = text.name;
        e.offset = r.word(off, wide);
        const std::uint64_t info = r.word(off + (wide ? 8 : 4), wide);
        e.reloc_type = wide ? static_cast<std::uint32_t>(ELF64_R_TYPE(info)) : ELF32_R_TYPE(info);
        const std::uint64_t sym = wide ? ELF64_R_SYM(info) : ELF32_R_SYM(info);
        e.symbol_name = symbol_name(image, rel, sym);

        const auto mask = relocation_mask_size(image.machine, e.reloc_type);
        if (!mask) {
            out.warnings.push_back(rel.name + ": unknown relocation type " + std::to_string(e.reloc_type) +
                                   " at offset " + std::to_string(e.offset) + ", masking 8 bytes");
        }
        e.mask_len = mask.value_or(8);
        if (e.mask_len == 0) {
            continue;
        }
        if (e.offset >= text_len) {
            out.warnings.push_back(rel.name + ": relocation at offset " + std::to_string(e.offset) +
                                   " lies outside " + text.name + ", ignored");
            continue;
        }
        if (e.offset + e.mask_len > text_len) {
            e.mask_len = static_cast<std::uint32_t>(text_len - e.offset);
            e.clamped = true;
            out.warnings.push_back(rel.name + ": relocation at offset " + std::to_string(e.offset) +
                                   " clamped to the end of " + text.name);
        }
        out.entries.push_back(std::move(e));
    }
}

} // namespace

Relocations parse_relocations(const ElfImage& image, std::string_view text_name) {
    Relocations out;
    const Section* text = get_section(image, text_name);
    if (text == nullptr) {
        return out;
    }
    const std::string name(text_name);
    if (const Section* rel = get_section(image, ".rel" + name)) {
        read_relocation_section(image, *rel, false, *text, out);
    }
    if (const Section* rela = get_section(image, ".rela" + name)) {
        read_relocation_section(image, *rela, true, *text, out);
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const RelocationEntry& a, const RelocationEntry& b) { return a.offset < b.offset; });
    return out;
}

CommentStrings split_comment_bytes(ByteView bytes) {
    CommentStrings out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        if (bytes[i] == 0) {
            if (i > start) {
                out.strings.emplace_back(reinterpret_cast<const char*>(bytes.data() + start), i - start);
            }
            start = i + 1;
        }
    }
    if (start < bytes.size()) {
        out.strings.emplace_back(reinterpret_cast<const char*>(bytes.data() + start), bytes.size() - start);
        out.unterminated_tail = true;
    }
    return out;
}

CommentStrings parse_comment(const ElfImage& image) {
    const Section* comment = get_section(image, ".comment");
    if (comment == nullptr) {
        return {};
    }
    return split_comment_bytes(comment->bytes);
}

} // namespace provsig
