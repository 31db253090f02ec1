#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stegkit/bitcodec.hpp"
#include "stegkit/filesteg.hpp"
#include "stegkit/image.hpp"

namespace stegkit {

// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
// continued fraction otherwise. Throws InvalidArgument for a <= 0 or x < 0.
double regularized_gamma_p(double a, double x);

using Histogram = std::array<std::uint64_t, 256>;

Histogram byte_histogram(ByteView samples) noexcept;

struct ChiSquareResult {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double p = 0.0;  // probability that the pairs were equalised by embedding
};

// Pairs-of-values test. Pairs (2k, 2k+1) with expected count below
// kMinExpected are dropped. nullopt when fewer than two pairs remain.
inline constexpr double kMinExpected = 4.0;
std::optional<ChiSquareResult> chi_square_histogram(const Histogram& hist);

// Embedding probability over all sample bytes of the image, nullopt when the
// histogram is degenerate.
std::optional<double> chi_square_attack(const RasterImage& image);
std::optional<double> chi_square_attack(ByteView samples);

// Maximum p over consecutive non-overlapping windows of `window` bytes.
std::optional<double> chi_square_windowed(ByteView samples, std::size_t window);

// Trailer scan plus a sweep for ZIP local headers past the host boundary.
// Sorted by offset, no duplicates.
std::vector<TrailerFinding> signature_scan(ByteView data);

enum class Verdict { Clean, Suspicious, StegoDetected };
std::string_view to_string(Verdict v) noexcept;

struct Thresholds {
    double detected = 0.95;
    double suspicious = 0.5;
};

struct AnalysisOptions {
    Thresholds thresholds;
    std::size_t window = 0;  // 0 = whole image
};

struct AnalysisReport {
    std::string target;
    std::optional<double> chi_square_p;  // only for decodable BMP carriers
    std::vector<TrailerFinding> signatures;
    Verdict verdict = Verdict::Clean;
};

Verdict classify(const std::optional<double>& p, bool has_signatures, const Thresholds& t) noexcept;

AnalysisReport analyze_bytes(std::string target, ByteView data, const AnalysisOptions& options = {});

// A file yields one report; a directory yields one per regular file beneath
// it, ordered by path. Throws Io when the path cannot be read.
std::vector<AnalysisReport> analyze_path(const std::filesystem::path& path, const AnalysisOptions& options = {});

std::string report_to_json(const AnalysisReport& report);
std::string reports_to_json(const std::vector<AnalysisReport>& reports);
std::string report_to_text(const AnalysisReport& report);

}  // namespace stegkit
