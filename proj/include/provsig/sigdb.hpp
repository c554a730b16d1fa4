#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "provsig/signature.hpp"

namespace provsig {

/// Signatures from one compiler or library release.
struct SignatureFile {
    std::string package;
    std::string version;
    std::vector<Signature> signatures;

    friend bool operator==(const SignatureFile&, const SignatureFile&) = default;
};

/// Text form:
///
///     provsig 1
///     package <name>
///     version <string>
///     <name>:<text|comment|dynlib>:<hex|md5>:<payload>
///
/// Throws std::invalid_argument when `sf` cannot be represented (empty
/// package, line breaks in a field, duplicate names).
std::string write_sigfile(const SignatureFile& sf);
void save_sigfile(const SignatureFile& sf, const std::filesystem::path& path);

/// Throws MalformedSigFile.
SignatureFile parse_sigfile(std::string_view text);

class Database {
  public:
    struct Location {
        std::size_t file;
        std::size_t signature;
    };

    Database() = default;
    explicit Database(std::vector<SignatureFile> files);

    [[nodiscard]] const std::vector<SignatureFile>& files() const { return files_; }
    [[nodiscard]] std::size_t size() const { return index_.size(); }
    [[nodiscard]] const Location& locate(std::size_t id) const { return index_[id]; }
    [[nodiscard]] const Signature& signature(std::size_t id) const;
    [[nodiscard]] const SignatureFile& file_of(std::size_t id) const { return files_[index_[id].file]; }

    /// Ids of all signatures with the given target, in id order.
    [[nodiscard]] std::vector<std::size_t> ids_for(Target target) const;

    /// File holding an MD5 signature with this digest and size.
    [[nodiscard]] std::optional<std::size_t> find_md5(std::string_view digest, std::uint64_t text_size) const;

  private:
    std::vector<SignatureFile> files_;
    std::vector<Location> index_;
    std::map<std::pair<std::string, std::uint64_t>, std::size_t> md5_index_;
};

struct LoadedDatabase {
    Database db;
    std::vector<std::string> warnings; // one per file that failed to load
};

/// Loads every `*.sig` in `dir` in file-name order. Broken files are skipped
/// with a warning; throws EmptyDatabase when none load and IoError when the
/// directory cannot be read.
LoadedDatabase load_db(const std::filesystem::path& dir);

} // namespace provsig
