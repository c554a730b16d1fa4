#include "provsig/sigdb.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "provsig/error.hpp"

namespace provsig {

namespace {

constexpr std::string_view kMagicLine = "provsig 1";

bool has_line_break(std::string_view s) { return s.find_first_of("\r\n") != std::string_view::npos; }

bool is_lower_hex(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

std::optional<Target> target_from(std::string_view s) {
    if (s == "text") {
        return Target::text;
    }
    if (s == "comment") {
        return Target::comment;
    }
    if (s == "dynlib") {
        return Target::dynlib;
    }
    return std::nullopt;
}

std::vector<std::string_view> split_colons(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto c = line.find(':', start);
        out.push_back(line.substr(start, c - start));
        if (c == std::string_view::npos) {
            return out;
        }
        start = c + 1;
    }
}

// Signature names may contain colons, so the line is split from the right:
// the kind field decides how many trailing fields belong to the payload.
std::optional<Signature> parse_signature_line(std::string_view line, std::size_t line_no) {
    const auto fields = split_colons(line);
    const std::size_t n = fields.size();
    const auto where = [&] { return "line " + std::to_string(line_no); };
    const auto join_name = [&](std::size_t count) {
        const std::size_t len = fields[count - 1].data() + fields[count - 1].size() - fields[0].data();
        return std::string(fields[0].data(), len);
    };

    Signature sig;
    std::string_view target;
    if (n >= 5 && fields[n - 3] == "md5") {
        target = fields[n - 4];
        sig.name = join_name(n - 4);
        const std::string_view digest = fields[n - 2];
        const std::string_view size = fields[n - 1];
        if (digest.size() != 32 || !is_lower_hex(digest)) {
            throw MalformedSigFile(where() + ": bad md5 digest '" + std::string(digest) + "'");
        }
        Md5Record rec{std::string(digest), 0};
        const auto [ptr, ec] = std::from_chars(size.data(), size.data() + size.size(), rec.text_size);
        if (size.empty() || ec != std::errc() || ptr != size.data() + size.size()) {
            throw MalformedSigFile(where() + ": bad text size '" + std::string(size) + "'");
        }
        sig.payload = std::move(rec);
    } else if (n >= 4 && fields[n - 2] == "hex") {
        target = fields[n - 3];
        sig.name = join_name(n - 3);
        try {
            sig.payload = HexPattern::parse(fields[n - 1]);
        } catch (const std::invalid_argument& e) {
            throw MalformedSigFile(where() + ": " + e.what());
        }
        if (fields[n - 1].find(' ') != std::string_view::npos) {
            throw MalformedSigFile(where() + ": spaces inside hex payload");
        }
    } else {
        return std::nullopt;
    }

    if (sig.name.empty()) {
        throw MalformedSigFile(where() + ": empty signature name");
    }
    const auto t = target_from(target);
    if (!t) {
        throw MalformedSigFile(where() + ": unknown target '" + std::string(target) + "'");
    }
    sig.target = *t;
    if (sig.is_hex()) {
        if (sig.target == Target::dynlib) {
            throw MalformedSigFile(where() + ": hex signatures cannot target dynlib");
        }
        const HexPattern& p = sig.pattern();
        if (p.empty()) {
            throw MalformedSigFile(where() + ": empty pattern");
        }
        if (const std::string err = p.structural_error(); !err.empty()) {
            throw MalformedSigFile(where() + ": " + err);
        }
        if (p.longest_literal_run() < 2) {
            throw MalformedSigFile(where() + ": pattern has no literal run of 2 bytes");
        }
    } else if (sig.target != Target::dynlib) {
        throw MalformedSigFile(where() + ": md5 signatures must target dynlib");
    }
    return sig;
}

} // namespace

std::string write_sigfile(const SignatureFile& sf) {
    if (sf.package.empty()) {
        throw std::invalid_argument("signature file needs a package name");
    }
    if (has_line_break(sf.package) || has_line_break(sf.version)) {
        throw std::invalid_argument("package and version must be single-line");
    }
    std::ostringstream out;
    out << kMagicLine << '\n' << "package " << sf.package << '\n' << "version " << sf.version << '\n';
    std::set<std::string_view> names;
    for (const Signature& sig : sf.signatures) {
        if (sig.name.empty() || has_line_break(sig.name) || sig.name.front() == '#' ||
            sig.name.starts_with("package ") || sig.name.starts_with("version ")) {
            throw std::invalid_argument("unrepresentable signature name '" + sig.name + "'");
        }
        if (!names.insert(sig.name).second) {
            throw std::invalid_argument("duplicate signature name '" + sig.name + "'");
        }
        out << sig.name << ':' << to_string(sig.target) << ':';
        if (sig.is_hex()) {
            out << "hex:" << sig.pattern().to_string();
        } else {
            out << "md5:" << sig.md5().digest << ':' << sig.md5().text_size;
        }
        out << '\n';
    }
    return out.str();
}

void save_sigfile(const SignatureFile& sf, const std::filesystem::path& path) {
    const std::string text = write_sigfile(sf);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f.flush()) {
        throw IoError("write to " + path.string() + " failed");
    }
}

SignatureFile parse_sigfile(std::string_view text) {
    SignatureFile sf;
    bool have_package = false;
    bool have_version = false;
    bool in_body = false;
    std::set<std::string> names;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.ends_with('\r')) {
            line.remove_suffix(1);
        }
        if (line_no == 1) {
            if (line != kMagicLine) {
                throw MalformedSigFile("first line must be '" + std::string(kMagicLine) + "'");
            }
            continue;
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!in_body && (line.starts_with("package ") || line.starts_with("version "))) {
            const std::string value(line.substr(8));
            bool& seen = line.front() == 'p' ? have_package : have_version;
            if (seen) {
                throw MalformedSigFile("line " + std::to_string(line_no) + ": repeated header key");
            }
            seen = true;
            (line.front() == 'p' ? sf.package : sf.version) = value;
            continue;
        }
        auto sig = parse_signature_line(line, line_no);
        if (!sig) {
            if (in_body) {
                throw MalformedSigFile("line " + std::to_string(line_no) + ": not a signature record");
            }
            continue; // unknown header key
        }
        in_body = true;
        if (!names.insert(sig->name).second) {
            throw MalformedSigFile("line " + std::to_string(line_no) + ": duplicate signature name " + sig->name);
        }
        sf.signatures.push_back(std::move(*sig));
    }
    if (line_no == 0) {
        throw MalformedSigFile("empty file");
    }
    if (!have_package || sf.package.empty()) {
        throw MalformedSigFile("missing package key");
    }
    if (!have_version) {
        throw MalformedSigFile("missing version key");
    }
    return sf;
}

Database::Database(std::vector<SignatureFile> files) : files_(std::move(files)) {
    for (std::size_t f = 0; f < files_.size(); ++f) {
        for (std::size_t s = 0; s < files_[f].signatures.size(); ++s) {
            index_.push_back({f, s});
            const Signature& sig = files_[f].signatures[s];
            if (!sig.is_hex()) {
                md5_index_.emplace(std::make_pair(sig.md5().digest, sig.md5().text_size), f);
            }
        }
    }
}

const Signature& Database::signature(std::size_t id) const {
    const Location& loc = index_.at(id);
    return files_[loc.file].signatures[loc.signature];
}

std::vector<std::size_t> Database::ids_for(Target target) const {
    std::vector<std::size_t> ids;
    for (std::size_t id = 0; id < index_.size(); ++id) {
        if (signature(id).target == target) {
            ids.push_back(id);
        }
    }
    return ids;
}

std::optional<std::size_t> Database::find_md5(std::string_view digest, std::uint64_t text_size) const {
    const auto it = md5_index_.find({std::string(digest), text_size});
    if (it == md5_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

LoadedDatabase load_db(const std::filesystem::path& dir) {
    std::error_code ec;
    std::vector<std::filesystem::path> paths;
    for (std::filesystem::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->path().extension() == ".sig" && it->is_regular_file()) {
            paths.push_back(it->path());
        }
    }
    if (ec) {
        throw IoError("cannot read database directory " + dir.string() + ": " + ec.message());
    }
    std::sort(paths.begin(), paths.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

    LoadedDatabase out;
    std::vector<SignatureFile> files;
    for (const auto& path : paths) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream buf;
        buf << f.rdbuf();
        if (!f) {
            out.warnings.push_back(path.string() + ": cannot read");
            continue;
        }
        try {
            files.push_back(parse_sigfile(buf.str()));
        } catch (const MalformedSigFile& e) {
            out.warnings.push_back(path.string() + ": " + e.what());
        }
    }
    if (files.empty()) {
        throw EmptyDatabase(dir.string());
    }
    out.db = Database(std::move(files));
    return out;
}

} // namespace provsig
