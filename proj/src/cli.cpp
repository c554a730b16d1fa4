#include "provsig/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "provsig/archive.hpp"
#include "provsig/error.hpp"
#include "provsig/siggen.hpp"
#include "provsig/symver.hpp"

namespace provsig {

namespace fs = std::filesystem;

Bytes read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path.string());
    }
    Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) {
        throw IoError("cannot read " + path.string());
    }
    return data;
}

std::vector<ResolvedLibrary> resolve_dynamic(std::span<const std::string> sonames,
                                             std::span<const fs::path> search_paths) {
    std::vector<ResolvedLibrary> out;
    for (const std::string& soname : sonames) {
        ResolvedLibrary lib{soname, std::nullopt};
        std::vector<fs::path> candidates;
        if (soname.find('/') != std::string::npos) {
            candidates.emplace_back(soname);
        } else {
            for (const fs::path& dir : search_paths) {
                candidates.push_back(dir / soname);
            }
        }
        for (const fs::path& c : candidates) {
            std::error_code ec;
            if (fs::is_regular_file(c, ec)) {
                const fs::path real = fs::canonical(c, ec);
                lib.path = ec ? c : real;
                break;
            }
        }
        out.push_back(std::move(lib));
    }
    return out;
}

std::vector<fs::path> split_search_path(std::string_view value) {
    std::vector<fs::path> out;
    while (true) {
        const auto sep = value.find(':');
        const std::string_view part = value.substr(0, sep);
        if (!part.empty()) {
            out.emplace_back(std::string(part));
        }
        if (sep == std::string_view::npos) {
            return out;
        }
        value.remove_prefix(sep + 1);
    }
}

namespace {

std::vector<Signature> signatures_for(const Database& db, const std::vector<std::size_t>& ids) {
    std::vector<Signature> sigs;
    sigs.reserve(ids.size());
    for (const std::size_t id : ids) {
        Signature s = db.signature(id);
        // Names only need to be unique per file; the engine wants them unique overall.
        s.name = std::to_string(id) + "\t" + s.name;
        sigs.push_back(std::move(s));
    }
    return sigs;
}

} // namespace

Scanner::Scanner(const Database& db)
    : db_(db),
      text_ids_(db.ids_for(Target::text)),
      comment_ids_(db.ids_for(Target::comment)),
      text_engine_(CompiledEngine::compile(signatures_for(db, text_ids_))),
      comment_engine_(CompiledEngine::compile(signatures_for(db, comment_ids_))) {}

void Scanner::add_matches(const MatchSet& matches, const std::vector<std::size_t>& ids,
                          std::vector<PackageHit>& per_file) const {
    for (const Match& m : matches) {
        PackageHit& hit = per_file[db_.locate(ids[m.signature_id]).file];
        ++hit.count;
        hit.total_bytes += m.span;
    }
}

std::vector<DynlibFinding> Scanner::identify_library(const ResolvedLibrary& lib, const ScanOptions& options,
                                                     std::vector<std::string>& warnings) const {
    const std::string path = lib.path->string();
    DynlibFinding unknown{lib.soname, path, FindingMethod::unknown, {}, {}};
    ElfImage image;
    try {
        image = parse_elf(read_file(*lib.path));
    } catch (const Error& e) {
        warnings.push_back(path + ": " + e.what());
        return {unknown};
    }

    std::vector<DynlibFinding> found;
    try {
        for (LabelVersion& v : library_versions(image, options.labels)) {
            found.push_back({lib.soname, path, FindingMethod::symver, std::move(v.label), std::move(v.version)});
        }
    } catch (const MalformedVerdef& e) {
        warnings.push_back(path + ": " + e.what());
    }
    if (!found.empty()) {
        return found;
    }

    // No symbol versioning: fall back to the checksum of .text.
    if (get_section(image, ".text") != nullptr) {
        const Signature sig = sign_shared_lib(image, lib.soname);
        if (const auto file = db_.find_md5(sig.md5().digest, sig.md5().text_size)) {
            return {{lib.soname, path, FindingMethod::md5, db_.files()[*file].package, db_.files()[*file].version}};
        }
    }
    return {unknown};
}

ScanReport Scanner::scan(const ElfImage& image, const std::string& target, const ScanOptions& options) const {
    ScanReport report;
    report.target = target;

    std::vector<PackageHit> per_file(db_.files().size());
    for (const Section* text : list_text_sections(image)) {
        add_matches(text_engine_.scan_all(text->bytes), text_ids_, per_file);
    }
    if (const Section* comment = get_section(image, ".comment")) {
        add_matches(match_comment(comment_engine_, comment->bytes), comment_ids_, per_file);
    }
    for (std::size_t f = 0; f < per_file.size(); ++f) {
        if (per_file[f].count > 0) {
            per_file[f].package = db_.files()[f].package;
            per_file[f].version = db_.files()[f].version;
            report.package_hits.push_back(per_file[f]);
        }
    }
    sort_package_hits(report.package_hits);

    if (options.dynamic) {
        for (const ResolvedLibrary& lib : resolve_dynamic(image.dynamic_needed, options.search_paths)) {
            if (!lib.path) {
                report.warnings.push_back(lib.soname + ": not found in search path");
                continue;
            }
            for (DynlibFinding& f : identify_library(lib, options, report.warnings)) {
                report.dynlib_findings.push_back(std::move(f));
            }
        }
    }
    return report;
}

ScanReport Scanner::scan_file(const fs::path& path, const ScanOptions& options) const {
    return scan(parse_elf(read_file(path)), path.string(), options);
}

namespace {

int parse_cli(CLI::App& app, std::vector<std::string> args, std::ostream& out, std::ostream& err, bool& done) {
    done = true;
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << app.get_name() << ": " << e.what() << "\n" << "Run with --help for usage.\n";
        return 1;
    }
    done = false;
    return 0;
}

void make_names_unique(std::vector<Signature>& sigs) {
    std::map<std::string, int> counts;
    std::set<std::string> taken;
    for (const Signature& s : sigs) {
        taken.insert(s.name);
    }
    std::set<std::string> used;
    for (Signature& s : sigs) {
        if (used.insert(s.name).second) {
            continue;
        }
        std::string candidate;
        do {
            candidate = s.name + "~" + std::to_string(++counts[s.name] + 1);
        } while (taken.count(candidate) != 0 || used.count(candidate) != 0);
        s.name = candidate;
        used.insert(candidate);
    }
}

void collect(SigningResult&& part, std::vector<Signature>& sigs, std::ostream& err) {
    for (const std::string& d : part.diagnostics) {
        err << "siggen: " << d << "\n";
    }
    std::move(part.signatures.begin(), part.signatures.end(), std::back_inserter(sigs));
}

std::vector<std::string> comments_of(const Bytes& data, const std::string& origin, std::ostream& err) {
    std::vector<std::string> strings;
    const auto take = [&](const ElfImage& image) {
        const auto c = parse_comment(image);
        strings.insert(strings.end(), c.strings.begin(), c.strings.end());
    };
    if (has_archive_magic(data)) {
        for (const ArchiveMember& m : parse_archive(data)) {
            if (!has_elf_magic(m.bytes)) {
                err << "siggen: " << origin << "/" << m.name << ": not an ELF object, skipped\n";
                continue;
            }
            take(parse_elf(m.bytes));
        }
    } else {
        take(parse_elf(data));
    }
    return strings;
}

} // namespace

int run_siggen(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate provenance signatures from compiler and library files", "siggen"};
    std::string mode;
    std::vector<std::string> inputs;
    std::string package;
    std::string version;
    std::string output;
    app.add_option("mode", mode, "obj: code snippets from .o/.a; lib: MD5 of a shared library's .text; "
                                 "comment: .comment strings")
        ->required()
        ->check(CLI::IsMember({"obj", "lib", "comment"}));
    app.add_option("inputs", inputs, "Input files")->required();
    app.add_option("--package", package, "Package name recorded in the signature file")->required();
    app.add_option("--version", version, "Package version recorded in the signature file")->required();
    app.add_option("-o,--output", output, "Signature file to write")->required();

    bool done = false;
    if (const int rc = parse_cli(app, std::move(args), out, err, done); done) {
        return rc;
    }

    std::vector<Signature> sigs;
    std::set<std::string> seen_comments;
    for (const std::string& input : inputs) {
        const std::string origin = fs::path(input).filename().string();
        Bytes data;
        try {
            data = read_file(input);
        } catch (const IoError& e) {
            err << "siggen: " << e.what() << "\n";
            return 2;
        }
        try {
            if (mode == "obj") {
                if (has_archive_magic(data)) {
                    collect(sign_archive(parse_archive(data), origin), sigs, err);
                } else if (has_elf_magic(data)) {
                    const ElfImage image = parse_elf(data);
                    if (!image.is_relocatable) {
                        err << "siggen: " << input << ": not a relocatable object, skipped\n";
                        continue;
                    }
                    collect(sign_object(image, origin), sigs, err);
                } else {
                    err << "siggen: " << input << ": not an ELF object or archive, skipped\n";
                }
            } else if (mode == "lib") {
                sigs.push_back(sign_shared_lib(parse_elf(data), origin));
            } else {
                for (Signature& s : sign_comments(comments_of(data, origin, err), origin)) {
                    if (seen_comments.insert(s.pattern().to_string()).second) {
                        sigs.push_back(std::move(s));
                    }
                }
            }
        } catch (const Error& e) {
            err << "siggen: " << input << ": " << e.what() << "\n";
        }
    }

    if (sigs.empty()) {
        err << "siggen: no signatures generated\n";
        return 2;
    }
    make_names_unique(sigs);
    try {
        save_sigfile({package, version, std::move(sigs)}, output);
    } catch (const IoError& e) {
        err << "siggen: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "siggen: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run_sigscan(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Identify the compilers and libraries a program binary was built with", "sigscan"};
    std::string db_dir;
    std::vector<std::string> search_paths;
    bool no_dynamic = false;
    std::string format = "human";
    std::string labels_file;
    std::vector<std::string> targets;
    app.add_option("--db", db_dir, "Signature database directory")->required();
    app.add_option("--search-path", search_paths, "Directory searched for needed shared libraries (repeatable)")
        ->allow_extra_args(false);
    app.add_flag("--no-dynamic", no_dynamic, "Skip shared library identification");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"human", "json"}));
    app.add_option("--labels", labels_file, "File of extra symbol-version labels, one per line");
    app.add_option("binaries", targets, "Program binaries to scan")->required();

    bool done = false;
    if (const int rc = parse_cli(app, std::move(args), out, err, done); done) {
        return rc;
    }

    ScanOptions options;
    options.dynamic = !no_dynamic;
    if (!labels_file.empty()) {
        try {
            const Bytes text = read_file(labels_file);
            for (std::string& l : parse_label_list({reinterpret_cast<const char*>(text.data()), text.size()})) {
                if (std::find(options.labels.begin(), options.labels.end(), l) == options.labels.end()) {
                    options.labels.push_back(std::move(l));
                }
            }
        } catch (const IoError& e) {
            err << "sigscan: " << e.what() << "\n";
            return 2;
        }
    }
    options.search_paths.assign(search_paths.begin(), search_paths.end());
    if (const char* env = std::getenv("PROVSIG_PATH")) {
        for (fs::path& p : split_search_path(env)) {
            options.search_paths.push_back(std::move(p));
        }
    }

    LoadedDatabase loaded;
    try {
        loaded = load_db(db_dir);
    } catch (const Error& e) {
        err << "sigscan: " << e.what() << "\n";
        return 2;
    }
    for (const std::string& w : loaded.warnings) {
        err << "sigscan: warning: " << w << "\n";
    }

    std::optional<Scanner> scanner;
    try {
        scanner.emplace(loaded.db);
    } catch (const Error& e) {
        err << "sigscan: cannot compile database: " << e.what() << "\n";
        return 2;
    }

    const ReportFormat fmt = format == "json" ? ReportFormat::json : ReportFormat::human;
    int rc = 0;
    for (const std::string& target : targets) {
        ScanReport report;
        try {
            report = scanner->scan_file(target, options);
        } catch (const Error& e) {
            err << "sigscan: " << target << ": " << e.what() << "\n";
            rc = 2;
            continue;
        }
        for (const std::string& w : report.warnings) {
            err << "sigscan: " << target << ": warning: " << w << "\n";
        }
        if (fmt == ReportFormat::human && targets.size() > 1) {
            out << target << ":\n";
        }
        out << format_report(report, fmt);
    }
    return rc;
}

} // namespace provsig
