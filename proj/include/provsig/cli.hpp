#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "provsig/elf.hpp"
#include "provsig/matcher.hpp"
#include "provsig/report.hpp"
#include "provsig/sigdb.hpp"
#include "provsig/symver.hpp"

namespace provsig {

/// Whole file contents. Throws IoError.
Bytes read_file(const std::filesystem::path& path);

struct ResolvedLibrary {
    std::string soname;
    std::optional<std::filesystem::path> path;
};

/// Looks each soname up in `search_paths`, first directory wins; symlinks are
/// followed to the real file. Sonames containing `/` are taken as paths.
std::vector<ResolvedLibrary> resolve_dynamic(std::span<const std::string> sonames,
                                             std::span<const std::filesystem::path> search_paths);

/// Splits a `:`-separated list such as the PROVSIG_PATH value; empty entries dropped.
std::vector<std::filesystem::path> split_search_path(std::string_view value);

struct ScanOptions {
    std::vector<std::filesystem::path> search_paths;
    bool dynamic = true;
    std::vector<std::string> labels = default_labels();
};

/// Compiles the database's text and comment signatures once and scans any
/// number of targets against them.
class Scanner {
  public:
    explicit Scanner(const Database& db);

    [[nodiscard]] ScanReport scan(const ElfImage& image, const std::string& target, const ScanOptions& options) const;

    /// Throws IoError, MalformedElf or UnsupportedElf.
    [[nodiscard]] ScanReport scan_file(const std::filesystem::path& path, const ScanOptions& options) const;

  private:
    void add_matches(const MatchSet& matches, const std::vector<std::size_t>& ids,
                     std::vector<PackageHit>& per_file) const;
    [[nodiscard]] std::vector<DynlibFinding> identify_library(const ResolvedLibrary& lib, const ScanOptions& options,
                                                              std::vector<std::string>& warnings) const;

    const Database& db_;
    std::vector<std::size_t> text_ids_;    // engine id -> database id
    std::vector<std::size_t> comment_ids_;
    CompiledEngine text_engine_;
    CompiledEngine comment_engine_;
};

/// `siggen <obj|lib|comment> <input>... --package <s> --version <s> -o <file>`.
/// Returns 0 on success, 1 on usage errors, 2 on I/O failure or when no
/// signature could be generated.
int run_siggen(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// `sigscan --db <dir> [--search-path <dir>]... [--no-dynamic]
/// [--format human|json] [--labels <file>] <binary>...`.
/// Returns 0 when every target was scanned, 1 on usage errors, 2 when the
/// database is unusable or any target could not be read.
int run_sigscan(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace provsig
