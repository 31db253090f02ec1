#include "stegkit/audiosteg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

constexpr double kHeadroom = 0.9;

[[noreturn]] void throw_capacity(const Capacity& cap, std::size_t requested) {
    throw Error(ErrorCode::CapacityExceeded,
                "payload of " + std::to_string(requested) + " bytes exceeds usable capacity of " +
                    std::to_string(cap.usable) + " bytes (" + std::to_string(cap.total) + " raw)");
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
struct FftwPlanDestroy {
    void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
};

// Real-to-complex transform of a fixed size with its own scratch buffers.
class RealFft {
public:
    explicit RealFft(std::size_t n)
        : n_(n),
          in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
          out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))),
          plan_(fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE)) {
        if (!in_ || !out_ || !plan_) throw Error(ErrorCode::InvalidArgument, "FFT setup failed");
    }

    std::span<double> input() noexcept { return {in_.get(), n_}; }

    // |X[k]| for k = 0..n/2
    void magnitudes(std::vector<double>& out) {
        fftw_execute(plan_.get());
        out.resize(n_ / 2 + 1);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::hypot(out_.get()[k][0], out_.get()[k][1]);
    }

private:
    std::size_t n_;
    std::unique_ptr<double, FftwFree> in_;
    std::unique_ptr<fftw_complex, FftwFree> out_;
    std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwPlanDestroy> plan_;
};

}  // namespace

Capacity audio_lsb_capacity(const WavAudio& audio) noexcept {
    const std::size_t total = audio.samples.size() / 8;
    return {total, total > kFrameOverhead ? total - kFrameOverhead : 0};
}

WavAudio audio_lsb_embed(const WavAudio& audio, ByteView payload) {
    const Capacity cap = audio_lsb_capacity(audio);
    if (payload.size() > cap.usable || cap.total < kFrameOverhead) throw_capacity(cap, payload.size());

    BitStream bits(frame_payload(payload));
    WavAudio stego = audio;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const auto raw = static_cast<std::uint16_t>(stego.samples[i]);
        stego.samples[i] = static_cast<std::int16_t>((raw & 0xFFFEU) | (bits[i] ? 1U : 0U));
    }
    return stego;
}

Bytes audio_lsb_extract(const WavAudio& audio) {
    BitStream bits;
    for (std::int16_t s : audio.samples) bits.push(static_cast<std::uint16_t>(s) & 1U);
    return unframe_payload(bits.to_bytes(PadPolicy::DropTrailing));
}

void SpectroParams::validate() const {
    if (sample_rate == 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    if (!(f_min >= 0.0 && f_min < f_max)) throw Error(ErrorCode::InvalidArgument, "need 0 <= f_min < f_max");
    if (f_max > sample_rate / 2.0) throw Error(ErrorCode::InvalidArgument, "f_max exceeds the Nyquist frequency");
    if (samples_per_column == 0) throw Error(ErrorCode::InvalidArgument, "samples_per_column must be positive");
    if (fft_size < samples_per_column) throw Error(ErrorCode::InvalidArgument, "fft_size must be >= samples_per_column");
}

double row_frequency(std::size_t row, std::size_t height, const SpectroParams& params) noexcept {
    const double span = params.f_max - params.f_min;
    return params.f_min + static_cast<double>(height - 1 - row) / static_cast<double>(height - 1) * span;
}

WavAudio spectro_encode(const RasterImage& image, const SpectroParams& params) {
    params.validate();
    if (image.height() < 2) throw Error(ErrorCode::InvalidArgument, "image height must be at least 2");
    const RasterImage gray = to_grayscale(image);
    const std::size_t spc = params.samples_per_column;

    std::vector<double> mix(gray.width() * spc, 0.0);
    for (std::size_t r = 0; r < gray.height(); ++r) {
        const double omega = 2.0 * std::numbers::pi * row_frequency(r, gray.height(), params) / params.sample_rate;
        for (std::size_t c = 0; c < gray.width(); ++c) {
            const double amp = gray.at(c, r) / 255.0;
            if (amp == 0.0) continue;
            for (std::size_t n = c * spc; n < (c + 1) * spc; ++n) {
                mix[n] += amp * std::sin(omega * static_cast<double>(n));
            }
        }
    }

    double peak = 0.0;
    for (double v : mix) peak = std::max(peak, std::abs(v));

    WavAudio audio;
    audio.sample_rate = params.sample_rate;
    audio.samples.resize(mix.size(), 0);
    if (peak > 0.0) {
        const double scale = kHeadroom * 32767.0 / peak;
        for (std::size_t n = 0; n < mix.size(); ++n) {
            audio.samples[n] = static_cast<std::int16_t>(std::lround(mix[n] * scale));
        }
    }
    return audio;
}

RasterImage spectro_decode(const WavAudio& audio, std::size_t out_height, std::size_t out_width,
                           const SpectroParams& base_params) {
    SpectroParams params = base_params;
    params.sample_rate = audio.sample_rate;
    params.validate();
    if (out_height < 2 || out_width < 1) {
        throw Error(ErrorCode::InvalidArgument, "output raster must be at least 1 column by 2 rows");
    }
    const std::size_t n = audio.samples.size();
    const std::size_t win = params.fft_size;
    const std::size_t hop = params.samples_per_column;
    if (n < win) {
        throw Error(ErrorCode::AudioTooShort,
                    std::to_string(n) + " samples is shorter than one " + std::to_string(win) + "-sample window");
    }

    // Periodic Hann.
    std::vector<double> window(win);
    for (std::size_t i = 0; i < win; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(win)));
    }

    // Row r owns the band of width `step` centred on its frequency, clipped to
    // [f_min, f_max]; every row gets at least its nearest bin.
    const double bin_hz = static_cast<double>(audio.sample_rate) / static_cast<double>(win);
    const double step = (params.f_max - params.f_min) / static_cast<double>(out_height - 1);
    const std::size_t nbins = win / 2 + 1;
    std::vector<std::pair<std::size_t, std::size_t>> bands(out_height);
    for (std::size_t r = 0; r < out_height; ++r) {
        const double f = row_frequency(r, out_height, params);
        const double lo = std::max(params.f_min, f - step / 2.0);
        const double hi = std::min(params.f_max, f + step / 2.0);
        auto first = static_cast<std::size_t>(std::ceil(lo / bin_hz));
        auto last = static_cast<std::size_t>(std::floor(hi / bin_hz));
        if (first > last) first = last = static_cast<std::size_t>(std::lround(f / bin_hz));
        bands[r] = {std::min(first, nbins - 1), std::min(last, nbins - 1)};
    }

    // Frame m is centred on the middle of column m.
    const std::size_t frames = n / hop;
    std::vector<double> grid(frames * out_height, 0.0);  // [frame][row]
    RealFft fft(win);
    std::vector<double> mags;
    for (std::size_t m = 0; m < frames; ++m) {
        const auto centre = static_cast<std::ptrdiff_t>(m * hop + hop / 2);
        const std::ptrdiff_t start = centre - static_cast<std::ptrdiff_t>(win / 2);
        auto in = fft.input();
        for (std::size_t i = 0; i < win; ++i) {
            const std::ptrdiff_t idx = start + static_cast<std::ptrdiff_t>(i);
            const double s = (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n)) ? audio.samples[idx] : 0.0;
            in[i] = s * window[i];
        }
        fft.magnitudes(mags);
        for (std::size_t r = 0; r < out_height; ++r) {
            double best = 0.0;
            for (std::size_t k = bands[r].first; k <= bands[r].second; ++k) best = std::max(best, mags[k]);
            grid[m * out_height + r] = best;
        }
    }

    std::vector<double> cells(out_width * out_height, 0.0);
    for (std::size_t c = 0; c < out_width; ++c) {
        std::size_t m0 = c * frames / out_width;
        std::size_t m1 = (c + 1) * frames / out_width;
        if (m1 <= m0) {
            m0 = std::min(frames - 1, static_cast<std::size_t>((static_cast<double>(c) + 0.5) * frames / out_width));
            m1 = m0 + 1;
        }
        for (std::size_t m = m0; m < m1; ++m)
            for (std::size_t r = 0; r < out_height; ++r)
                cells[r * out_width + c] = std::max(cells[r * out_width + c], grid[m * out_height + r]);
    }

    const double peak = *std::max_element(cells.begin(), cells.end());
    RasterImage image(out_width, out_height, 1);
    if (peak > 0.0) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            image.samples()[i] = static_cast<std::uint8_t>(std::lround(cells[i] / peak * 255.0));
        }
    }
    return image;
}

}  // namespace stegkit
