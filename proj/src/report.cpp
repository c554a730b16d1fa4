#include "provsig/report.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace provsig {

namespace {

using nlohmann::json;

const char* method_name(FindingMethod m) {
    switch (m) {
    case FindingMethod::symver:
        return "symver";
    case FindingMethod::md5:
        return "md5";
    case FindingMethod::unknown:
        return "unknown";
    }
    return "unknown";
}

FindingMethod method_from(const std::string& s) {
    if (s == "symver") {
        return FindingMethod::symver;
    }
    if (s == "md5") {
        return FindingMethod::md5;
    }
    if (s == "unknown") {
        return FindingMethod::unknown;
    }
    throw std::invalid_argument("unknown finding method '" + s + "'");
}

} // namespace

void sort_package_hits(std::vector<PackageHit>& hits) {
    std::sort(hits.begin(), hits.end(), [](const PackageHit& a, const PackageHit& b) {
        return std::tie(b.count, b.total_bytes, a.package, a.version) <
               std::tie(a.count, a.total_bytes, b.package, b.version);
    });
}

std::string format_report(const ScanReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        return to_json_text(report) + "\n";
    }
    std::vector<PackageHit> hits = report.package_hits;
    sort_package_hits(hits);
    std::string out;
    for (const PackageHit& h : hits) {
        out += "(" + std::to_string(h.count) + " times, " + std::to_string(h.total_bytes) + " bytes) " + h.package;
        if (!h.version.empty()) {
            out += " " + h.version;
        }
        out += "\n";
    }
    if (hits.empty()) {
        out += "no matches\n";
    }
    for (const DynlibFinding& f : report.dynlib_findings) {
        out += f.path + ": ";
        if (f.method == FindingMethod::unknown) {
            out += "unknown\n";
            continue;
        }
        out += f.name;
        if (!f.version.empty()) {
            out += " " + f.version;
        }
        out += " [" + std::string(method_name(f.method)) + "]\n";
    }
    return out;
}

std::string to_json_text(const ScanReport& report) {
    json hits = json::array();
    for (const PackageHit& h : report.package_hits) {
        hits.push_back({{"package", h.package}, {"version", h.version}, {"count", h.count}, {"total_bytes", h.total_bytes}});
    }
    json libs = json::array();
    for (const DynlibFinding& f : report.dynlib_findings) {
        libs.push_back({{"soname", f.soname},
                        {"path", f.path},
                        {"method", method_name(f.method)},
                        {"name", f.name},
                        {"version", f.version}});
    }
    const json doc = {{"target", report.target},
                      {"package_hits", hits},
                      {"dynlib_findings", libs},
                      {"warnings", report.warnings}};
    return doc.dump();
}

ScanReport report_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        ScanReport r;
        r.target = doc.at("target").get<std::string>();
        for (const json& h : doc.at("package_hits")) {
            r.package_hits.push_back({h.at("package").get<std::string>(), h.at("version").get<std::string>(),
                                      h.at("count").get<std::uint64_t>(), h.at("total_bytes").get<std::uint64_t>()});
        }
        for (const json& f : doc.at("dynlib_findings")) {
            r.dynlib_findings.push_back({f.at("soname").get<std::string>(), f.at("path").get<std::string>(),
                                         method_from(f.at("method").get<std::string>()),
                                         f.at("name").get<std::string>(), f.at("version").get<std::string>()});
        }
        r.warnings = doc.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("not a scan report: ") + e.what());
    }
}

} // namespace provsig
