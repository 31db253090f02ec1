#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <numbers>
#include <random>
#include <string>

#include "stegkit/audio.hpp"
#include "stegkit/bitcodec.hpp"
#include "stegkit/error.hpp"
#include "stegkit/image.hpp"

namespace stegkit::test {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(STEGKIT_FIXTURE_DIR) / name;
}

inline Bytes read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_bytes(const std::filesystem::path& p, ByteView data) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

// Error code thrown by fn, nullopt if it returned normally.
template <class Fn>
std::optional<ErrorCode> thrown_code(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
    Bytes b(n);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    return b;
}

inline std::string random_printable(std::mt19937_64& rng, std::size_t n) {
    std::string s(n, ' ');
    for (auto& c : s) c = static_cast<char>(0x20 + rng() % 95);
    return s;
}

inline RasterImage random_image(std::mt19937_64& rng, std::size_t w, std::size_t h, int channels) {
    return RasterImage(w, h, channels, random_bytes(rng, w * h * static_cast<std::size_t>(channels)));
}

inline WavAudio random_audio(std::mt19937_64& rng, std::size_t n) {
    WavAudio a;
    a.samples.resize(n);
    for (auto& s : a.samples) s = static_cast<std::int16_t>(rng());
    return a;
}

// Photograph-like test image: a smooth scene plus sensor noise, quantized to
// 8 bits and then passed through a per-channel tone curve. The curve leaves
// the comb-shaped histograms that real camera pipelines produce.
inline RasterImage natural_image(std::uint64_t seed, std::size_t w = 128, std::size_t h = 96, int channels = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.5);
    RasterImage img(w, h, channels);
    for (int c = 0; c < channels; ++c) {
        double fx[3], fy[3], ph[3], amp[3];
        for (int k = 0; k < 3; ++k) {
            fx[k] = 0.01 + 0.08 * uni(rng);
            fy[k] = 0.01 + 0.08 * uni(rng);
            ph[k] = 2 * std::numbers::pi * uni(rng);
            amp[k] = 20 + 40 * uni(rng);
        }
        const double base = 70 + 100 * uni(rng);
        const double gamma = 0.6 + 0.8 * uni(rng);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                double v = base + noise(rng);
                for (int k = 0; k < 3; ++k) v += amp[k] * std::sin(fx[k] * x + fy[k] * y + ph[k]);
                const double q = std::clamp(std::round(v), 0.0, 255.0);
                img.at(x, y, c) = static_cast<std::uint8_t>(std::lround(255.0 * std::pow(q / 255.0, gamma)));
            }
        }
    }
    return img;
}

}  // namespace stegkit::test
