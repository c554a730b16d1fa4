#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "provsig/elf.hpp"

namespace provsig {

struct VersionDef {
    std::string name;
    bool is_base = false; // the soname placeholder entry

    friend bool operator==(const VersionDef&, const VersionDef&) = default;
};

struct LabelVersion {
    std::string label;
    std::string version;
    std::vector<std::uint64_t> numeric;

    friend bool operator==(const LabelVersion&, const LabelVersion&) = default;
};

/// GNU C/C++/Fortran/OpenMP runtimes, Myrinet MX/DAPL and InfiniBand Verbs.
const std::vector<std::string>& default_labels();

/// One label per line; `#` starts a comment; surrounding blanks ignored.
std::vector<std::string> parse_label_list(std::string_view text);

/// Walks `.gnu.version_d`. Throws MalformedVerdef on broken links, cycles or
/// string indices out of range.
std::vector<VersionDef> parse_verdef(const ElfImage& image);

/// `<label>_<d>[.<d>...]` for one of the known labels, else nullopt.
std::optional<LabelVersion> split_label(std::string_view def_name, std::span<const std::string> known_labels);

/// Numeric, component-wise; missing components count as 0. Throws LabelMismatch.
std::strong_ordering compare_versions(const LabelVersion& a, const LabelVersion& b);

/// Highest non-base version of each known label present, in label-list order.
std::vector<LabelVersion> library_versions(const ElfImage& image, std::span<const std::string> known_labels);
std::vector<LabelVersion> library_versions(std::span<const VersionDef> defs, std::span<const std::string> known_labels);

} // namespace provsig
