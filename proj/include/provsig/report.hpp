#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace provsig {

struct PackageHit {
    std::string package;
    std::string version;
    std::uint64_t count = 0;
    std::uint64_t total_bytes = 0; // sum of match spans, gaps included

    friend bool operator==(const PackageHit&, const PackageHit&) = default;
};

enum class FindingMethod { symver, md5, unknown };

struct DynlibFinding {
    std::string soname;
    std::string path;
    FindingMethod method = FindingMethod::unknown;
    std::string name; // symbol-version label or package name
    std::string version;

    friend bool operator==(const DynlibFinding&, const DynlibFinding&) = default;
};

struct ScanReport {
    std::string target;
    std::vector<PackageHit> package_hits;
    std::vector<DynlibFinding> dynlib_findings;
    std::vector<std::string> warnings;

    friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

enum class ReportFormat { human, json };

/// Count descending, then bytes descending, then package, then version.
void sort_package_hits(std::vector<PackageHit>& hits);

/// Human form prints one `(<count> times, <bytes> bytes) <package> <version>`
/// line per hit, or `no matches`, then one line per dynamic library. JSON
/// form is a single-line document mirroring ScanReport.
std::string format_report(const ScanReport& report, ReportFormat format);

std::string to_json_text(const ScanReport& report);
/// Throws std::invalid_argument on text that is not a ScanReport document.
ScanReport report_from_json(const std::string& text);

} // namespace provsig
