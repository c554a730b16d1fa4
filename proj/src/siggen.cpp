#include "provsig/siggen.hpp"

#include <algorithm>
#include <set>

#include "provsig/error.hpp"
#include "provsig/md5.hpp"

namespace provsig {

std::string_view to_string(Target t) {
    switch (t) {
    case Target::text:
        return "text";
    case Target::comment:
        return "comment";
    case Target::dynlib:
        return "dynlib";
    }
    return "?";
}

MaskedText mask_text(ByteView section_bytes, std::span<const RelocationEntry> relocs) {
    MaskedText out{Bytes(section_bytes.begin(), section_bytes.end()), std::vector<bool>(section_bytes.size(), false)};
    for (const RelocationEntry& r : relocs) {
        const std::uint64_t end = std::min<std::uint64_t>(r.offset + r.mask_len, out.size());
        for (std::uint64_t i = r.offset; i < end; ++i) {
            out.masked[i] = true;
        }
    }
    return out;
}

MaskedText mask_text(const Section& section, std::span<const RelocationEntry> relocs) {
    return mask_text(ByteView(section.bytes), relocs);
}

SegmentLayout three_segment_layout(std::size_t n) {
    const std::size_t third = n / 3;
    SegmentLayout layout{};
    layout.segments[0] = {third - kSegmentBytes, third};
    layout.segments[1] = {2 * third - kSegmentBytes, 2 * third};
    layout.segments[2] = {n - kSegmentBytes, n};
    layout.first_gap = third - kSegmentBytes;
    layout.second_gap = layout.first_gap + n % 3;
    return layout;
}

std::string PatternRejection::message() const {
    const std::string where = section.empty() ? std::string("section") : section;
    switch (reason) {
    case RejectReason::too_short:
        return where + ": too short for a signature (" + std::to_string(section_size) + " bytes)";
    case RejectReason::unanchorable:
        return where + ": no literal run of " + std::to_string(kMinAnchorBytes) + " bytes, signature rejected";
    }
    return where;
}

PatternResult build_pattern(const MaskedText& masked, std::string_view section_name) {
    const std::size_t n = masked.size();
    const PatternRejection too_short{RejectReason::too_short, std::string(section_name), n};
    if (n < kMinSectionBytes) {
        return too_short;
    }

    std::vector<SegmentLayout::Range> segments;
    if (n <= kMaxPatternBytes) {
        segments.push_back({0, n});
    } else {
        const SegmentLayout layout = three_segment_layout(n);
        segments.assign(layout.segments.begin(), layout.segments.end());
    }

    // A segment with no literal carries no information and is folded into
    // the surrounding gap; gaps before the first kept segment disappear.
    std::vector<PatternElement> elements;
    std::size_t section_offset = 0;
    std::size_t previous_end = 0;
    for (const auto& seg : segments) {
        bool has_literal = false;
        for (std::size_t i = seg.begin; i < seg.end && !has_literal; ++i) {
            has_literal = !masked.is_masked(i);
        }
        if (!has_literal) {
            continue;
        }
        if (elements.empty()) {
            section_offset = seg.begin;
        } else if (seg.begin > previous_end) {
            elements.push_back(PatternElement::skip(static_cast<std::uint32_t>(seg.begin - previous_end)));
        }
        for (std::size_t i = seg.begin; i < seg.end; ++i) {
            elements.push_back(masked.is_masked(i) ? PatternElement::any() : PatternElement::literal(masked.bytes[i]));
        }
        previous_end = seg.end;
    }

    const auto is_any = [](const PatternElement& e) { return e.kind == PatternElement::Kind::any_byte; };
    const auto lead = std::find_if_not(elements.begin(), elements.end(), is_any);
    section_offset += static_cast<std::size_t>(lead - elements.begin());
    elements.erase(elements.begin(), lead);
    while (!elements.empty() && is_any(elements.back())) {
        elements.pop_back();
    }

    HexPattern pattern(std::move(elements));
    if (pattern.non_gap_count() < kMinSectionBytes) {
        return too_short;
    }
    if (pattern.longest_literal_run() < kMinAnchorBytes) {
        return PatternRejection{RejectReason::unanchorable, std::string(section_name), n};
    }
    return BuiltPattern{std::move(pattern), section_offset};
}

SigningResult sign_object(const ElfImage& image, std::string_view origin) {
    SigningResult out;
    for (const Section* text : list_text_sections(image)) {
        const std::string name = std::string(origin) + ":" + text->name;
        Relocations relocs = parse_relocations(image, text->name);
        for (std::string& w : relocs.warnings) {
            out.diagnostics.push_back(std::string(origin) + ": " + w);
        }
        const PatternResult result = build_pattern(mask_text(*text, relocs.entries), name);
        if (const auto* built = std::get_if<BuiltPattern>(&result)) {
            out.signatures.push_back({name, Target::text, built->pattern});
        } else {
            out.diagnostics.push_back(std::get<PatternRejection>(result).message());
        }
    }
    return out;
}

SigningResult sign_archive(std::span<const ArchiveMember> members, std::string_view origin) {
    SigningResult out;
    for (const ArchiveMember& m : members) {
        const std::string member_origin = std::string(origin) + "/" + m.name;
        if (!has_elf_magic(m.bytes)) {
            out.diagnostics.push_back(member_origin + ": not an ELF object, skipped");
            continue;
        }
        try {
            const ElfImage image = parse_elf(m.bytes);
            if (!image.is_relocatable) {
                out.diagnostics.push_back(member_origin + ": not a relocatable object, skipped");
                continue;
            }
            SigningResult part = sign_object(image, member_origin);
            std::move(part.signatures.begin(), part.signatures.end(), std::back_inserter(out.signatures));
            std::move(part.diagnostics.begin(), part.diagnostics.end(), std::back_inserter(out.diagnostics));
        } catch (const Error& e) {
            out.diagnostics.push_back(member_origin + ": " + e.what() + ", skipped");
        }
    }
    return out;
}

Signature sign_shared_lib(const ElfImage& image, std::string_view origin) {
    const Section* text = get_section(image, ".text");
    if (text == nullptr) {
        throw NoTextSection(std::string(origin));
    }
    return {std::string(origin) + ":.text", Target::dynlib, Md5Record{md5_hex(text->bytes), text->bytes.size()}};
}

std::vector<Signature> sign_comments(std::span<const std::string> strings, std::string_view origin) {
    std::vector<Signature> out;
    std::set<std::string_view> seen;
    for (const std::string& s : strings) {
        if (s.size() < kMinCommentBytes || !seen.insert(s).second) {
            continue;
        }
        std::vector<PatternElement> elements;
        elements.reserve(s.size());
        for (const char c : s) {
            elements.push_back(PatternElement::literal(static_cast<std::uint8_t>(c)));
        }
        out.push_back({std::string(origin) + ":.comment#" + std::to_string(out.size()), Target::comment,
                       HexPattern(std::move(elements))});
    }
    return out;
}

} // namespace provsig
