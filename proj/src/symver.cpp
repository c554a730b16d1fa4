#include "provsig/symver.hpp"

#include <algorithm>
#include <charconv>
#include <elf.h>
#include <set>

#include "byte_reader.hpp"
#include "provsig/error.hpp"

namespace provsig {

namespace {

constexpr std::uint64_t kVerdefSize = 20;
constexpr std::uint64_t kVerdauxSize = 8;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<std::vector<std::uint64_t>> parse_dotted(std::string_view v) {
    std::vector<std::uint64_t> out;
    while (true) {
        const auto dot = v.find('.');
        const std::string_view part = v.substr(0, dot);
        std::uint64_t n = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), n);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
            return std::nullopt;
        }
        out.push_back(n);
        if (dot == std::string_view::npos) {
            return out;
        }
        v.remove_prefix(dot + 1);
    }
}

} // namespace

const std::vector<std::string>& default_labels() {
    static const std::vector<std::string> labels = {"GLIBC", "GLIBCXX", "GCC", "GFORTRAN",
                                                    "GOMP",  "MX",      "DAPL", "IBVERBS"};
    return labels;
}

std::vector<std::string> parse_label_list(std::string_view text) {
    std::vector<std::string> labels;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (!line.empty()) {
            labels.emplace_back(line);
        }
    }
    return labels;
}

std::vector<VersionDef> parse_verdef(const ElfImage& image) {
    std::vector<VersionDef> defs;
    const auto it = std::find_if(image.sections.begin(), image.sections.end(),
                                 [](const Section& s) { return s.type == SHT_GNU_verdef; });
    const Section* verdef = it != image.sections.end() ? &*it : get_section(image, ".gnu.version_d");
    if (verdef == nullptr || verdef->bytes.empty()) {
        return defs;
    }
    if (verdef->link >= image.sections.size()) {
        throw MalformedVerdef("string table index " + std::to_string(verdef->link) + " out of range");
    }
    const Bytes& strtab = image.sections[verdef->link].bytes;
    const detail::LeReader<MalformedVerdef> r(verdef->bytes, verdef->name);

    std::set<std::uint64_t> visited;
    std::uint64_t off = 0;
    while (true) {
        if (!visited.insert(off).second) {
            throw MalformedVerdef("cycle in version definition chain at offset " + std::to_string(off));
        }
        r.require(off, kVerdefSize);
        const std::uint16_t flags = r.u16(off + 2);
        const std::uint16_t aux_count = r.u16(off + 6);
        const std::uint32_t aux = r.u32(off + 12);
        const std::uint32_t next = r.u32(off + 16);
        if (aux_count == 0) {
            throw MalformedVerdef("definition at offset " + std::to_string(off) + " has no name");
        }
        const std::uint64_t aux_off = off + aux;
        r.require(aux_off, kVerdauxSize);
        const std::uint32_t name = r.u32(aux_off);
        defs.push_back({detail::string_at<MalformedVerdef>(strtab, name, "version name"), (flags & VER_FLG_BASE) != 0});
        if (next == 0) {
            break;
        }
        off = (off + next) & 0xffffffffu; // vd_next is a 32-bit link
    }
    if (verdef->info != 0 && defs.size() != verdef->info) {
        throw MalformedVerdef("chain has " + std::to_string(defs.size()) + " entries, header says " +
                              std::to_string(verdef->info));
    }
    return defs;
}

std::optional<LabelVersion> split_label(std::string_view def_name, std::span<const std::string> known_labels) {
    for (const std::string& label : known_labels) {
        if (def_name.size() <= label.size() + 1 || !def_name.starts_with(label) || def_name[label.size()] != '_') {
            continue;
        }
        const std::string_view version = def_name.substr(label.size() + 1);
        if (auto numeric = parse_dotted(version)) {
            return LabelVersion{label, std::string(version), std::move(*numeric)};
        }
    }
    return std::nullopt;
}

std::strong_ordering compare_versions(const LabelVersion& a, const LabelVersion& b) {
    if (a.label != b.label) {
        throw LabelMismatch(a.label, b.label);
    }
    const std::size_t n = std::max(a.numeric.size(), b.numeric.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t x = i < a.numeric.size() ? a.numeric[i] : 0;
        const std::uint64_t y = i < b.numeric.size() ? b.numeric[i] : 0;
        if (x != y) {
            return x <=> y;
        }
    }
    return std::strong_ordering::equal;
}

std::vector<LabelVersion> library_versions(std::span<const VersionDef> defs, std::span<const std::string> known_labels) {
    std::vector<LabelVersion> out;
    for (const std::string& label : known_labels) {
        const std::span<const std::string> one(&label, 1);
        std::optional<LabelVersion> best;
        for (const VersionDef& d : defs) {
            if (d.is_base) {
                continue;
            }
            auto v = split_label(d.name, one);
            if (!v) {
                continue;
            }
            // Ties keep the textually smaller spelling so results do not
            // depend on definition order ("2.1" vs "2.1.0").
            if (!best || compare_versions(*v, *best) > 0 ||
                (compare_versions(*v, *best) == 0 && v->version < best->version)) {
                best = std::move(v);
            }
        }
        if (best) {
            out.push_back(std::move(*best));
        }
    }
    return out;
}

std::vector<LabelVersion> library_versions(const ElfImage& image, std::span<const std::string> known_labels) {
    const std::vector<VersionDef> defs = parse_verdef(image);
    return library_versions(defs, known_labels);
}

} // namespace provsig
