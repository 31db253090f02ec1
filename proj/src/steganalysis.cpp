#include "stegkit/steganalysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iterator>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

double gamma_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double gamma_continued_fraction(double a, double x) {
    constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

std::optional<TrailerFinding> find_zip_after(ByteView data, std::size_t from, HostFormat host) {
    static constexpr std::array<std::uint8_t, 4> kZip{0x50, 0x4B, 0x03, 0x04};
    if (from >= data.size()) return std::nullopt;
    const auto it = std::search(data.begin() + static_cast<std::ptrdiff_t>(from), data.end(), kZip.begin(), kZip.end());
    if (it == data.end()) return std::nullopt;
    return TrailerFinding{host, static_cast<std::size_t>(it - data.begin()), TrailerKind::Zip};
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

nlohmann::ordered_json report_json(const AnalysisReport& r) {
    nlohmann::ordered_json j;
    j["target"] = r.target;
    if (r.chi_square_p) {
        j["chi_square_p"] = *r.chi_square_p;
    } else {
        j["chi_square_p"] = nullptr;
    }
    j["signatures"] = nlohmann::ordered_json::array();
    for (const auto& f : r.signatures) {
        j["signatures"].push_back({{"host_format", to_string(f.host_format)},
                                   {"trailer_offset", f.trailer_offset},
                                   {"trailer_kind", to_string(f.trailer_kind)}});
    }
    j["verdict"] = to_string(r.verdict);
    return j;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "regularized_gamma_p needs a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double p = x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_continued_fraction(a, x);
    return std::clamp(p, 0.0, 1.0);
}

Histogram byte_histogram(ByteView samples) noexcept {
    Histogram h{};
    for (std::uint8_t s : samples) ++h[s];
    return h;
}

std::optional<ChiSquareResult> chi_square_histogram(const Histogram& hist) {
    double chi = 0.0;
    int kept = 0;
    for (std::size_t k = 0; k < 128; ++k) {
        const double observed = static_cast<double>(hist[2 * k]);
        const double expected = (observed + static_cast<double>(hist[2 * k + 1])) / 2.0;
        if (expected < kMinExpected) continue;
        chi += (observed - expected) * (observed - expected) / expected;
        ++kept;
    }
    if (kept < 2) return std::nullopt;
    ChiSquareResult r;
    r.statistic = chi;
    r.degrees_of_freedom = kept - 1;
    r.p = 1.0 - regularized_gamma_p(r.degrees_of_freedom / 2.0, chi / 2.0);
    return r;
}

std::optional<double> chi_square_attack(ByteView samples) {
    const auto r = chi_square_histogram(byte_histogram(samples));
    if (!r) return std::nullopt;
    return r->p;
}

std::optional<double> chi_square_attack(const RasterImage& image) {
    return chi_square_attack(ByteView(image.samples()));
}

std::optional<double> chi_square_windowed(ByteView samples, std::size_t window) {
    if (window == 0) return chi_square_attack(samples);
    std::optional<double> best;
    for (std::size_t off = 0; off < samples.size(); off += window) {
        const auto p = chi_square_attack(samples.subspan(off, std::min(window, samples.size() - off)));
        if (p && (!best || *p > *best)) best = p;
    }
    return best;
}

std::vector<TrailerFinding> signature_scan(ByteView data) {
    std::vector<TrailerFinding> findings;
    const auto trailer = scan_trailer(data);
    if (!trailer) return findings;
    findings.push_back(*trailer);

    // Inside a ZIP trailer further local headers belong to the same archive;
    // otherwise look for an archive hidden behind other appended bytes.
    if (trailer->trailer_kind != TrailerKind::Zip) {
        if (const auto zip = find_zip_after(data, trailer->trailer_offset + 1, trailer->host_format)) {
            findings.push_back(*zip);
        }
    }
    std::sort(findings.begin(), findings.end(),
              [](const auto& a, const auto& b) { return a.trailer_offset < b.trailer_offset; });
    findings.erase(std::unique(findings.begin(), findings.end()), findings.end());
    return findings;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Clean: return "clean";
        case Verdict::Suspicious: return "suspicious";
        case Verdict::StegoDetected: return "stego-detected";
    }
    return "?";
}

Verdict classify(const std::optional<double>& p, bool has_signatures, const Thresholds& t) noexcept {
    if (has_signatures || (p && *p >= t.detected)) return Verdict::StegoDetected;
    if (p && *p >= t.suspicious) return Verdict::Suspicious;
    return Verdict::Clean;
}

AnalysisReport analyze_bytes(std::string target, ByteView data, const AnalysisOptions& options) {
    AnalysisReport report;
    report.target = std::move(target);
    try {
        const RasterImage image = decode_bmp(data);
        report.chi_square_p = chi_square_windowed(ByteView(image.samples()), options.window);
    } catch (const Error&) {
        // not an image carrier; signature analysis only
    }
    report.signatures = signature_scan(data);
    report.verdict = classify(report.chi_square_p, !report.signatures.empty(), options.thresholds);
    return report;
}

std::vector<AnalysisReport> analyze_path(const std::filesystem::path& path, const AnalysisOptions& options) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(path, ec)) {
        return {analyze_bytes(path.string(), read_file(path), options)};
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path, ec)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) throw Error(ErrorCode::Io, "cannot list " + path.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    // Files are independent; analyse them in batches on worker threads and
    // keep the reports in path order.
    const std::size_t batch = std::max(1U, std::thread::hardware_concurrency());
    std::vector<AnalysisReport> reports;
    reports.reserve(files.size());
    for (std::size_t start = 0; start < files.size(); start += batch) {
        std::vector<std::future<AnalysisReport>> pending;
        for (std::size_t i = start; i < std::min(files.size(), start + batch); ++i) {
            pending.push_back(std::async(std::launch::async, [&options, file = files[i]] {
                return analyze_bytes(file.string(), read_file(file), options);
            }));
        }
        for (auto& f : pending) reports.push_back(f.get());
    }
    return reports;
}

std::string report_to_json(const AnalysisReport& report) { return report_json(report).dump(); }

std::string reports_to_json(const std::vector<AnalysisReport>& reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2);
}

std::string report_to_text(const AnalysisReport& report) {
    std::ostringstream out;
    out << report.target << ": " << to_string(report.verdict);
    if (report.chi_square_p) {
        out << " (chi-square p=" << *report.chi_square_p << ")";
    } else {
        out << " (chi-square n/a)";
    }
    out << '\n';
    for (const auto& f : report.signatures) {
        out << "  signature: " << to_string(f.trailer_kind) << " trailer after " << to_string(f.host_format)
            << " data at offset " << f.trailer_offset << '\n';
    }
    return out.str();
}

}  // namespace stegkit
