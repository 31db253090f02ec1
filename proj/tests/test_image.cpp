#include "doctest.h"
#include "support.hpp"

#include <numeric>

#include "stegkit/imagesteg.hpp"

using namespace stegkit;
using stegkit::test::fixture;
using stegkit::test::read_bytes;
using stegkit::test::thrown_code;
using stegkit::test::to_bytes;

namespace {

std::uint32_t le32(const Bytes& b, std::size_t off) {
    return b[off] | (b[off + 1] << 8) | (b[off + 2] << 16) | (std::uint32_t{b[off + 3]} << 24);
}

// Direct 2-D sum, no separability, used as an independent reference.
std::array<double, 64> reference_dct(const std::array<double, 64>& f) {
    std::array<double, 64> out{};
    const double pi = std::numbers::pi;
    for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) {
            const double cu = u == 0 ? 1 / std::sqrt(2.0) : 1.0;
            const double cv = v == 0 ? 1 / std::sqrt(2.0) : 1.0;
            double s = 0;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    s += f[y * 8 + x] * std::cos((2 * x + 1) * u * pi / 16) * std::cos((2 * y + 1) * v * pi / 16);
            out[v * 8 + u] = 0.25 * cu * cv * s;
        }
    }
    return out;
}

std::array<double, 64> random_block(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-128.0, 127.0);
    std::array<double, 64> b{};
    for (auto& v : b) v = d(rng);
    return b;
}

CoeffPlane random_plane(std::mt19937_64& rng, std::size_t w, std::size_t h, int spread) {
    CoeffPlane p;
    p.width = w;
    p.height = h;
    p.blocks.resize(p.blocks_across() * p.blocks_down());
    std::uniform_int_distribution<int> d(-spread, spread);
    for (auto& blk : p.blocks)
        for (auto& v : blk) v = d(rng);
    return p;
}

}  // namespace

TEST_SUITE("bmp") {
    TEST_CASE("golden 2x2 24-bit file written by an independent encoder") {
        const RasterImage img = decode_bmp(read_bytes(fixture("tiny_2x2.bmp")));
        CHECK(img.width() == 2);
        CHECK(img.height() == 2);
        CHECK(img.channels() == 3);
        CHECK(img.samples() == Bytes{255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255});
    }

    TEST_CASE("golden 8-bit paletted file decodes to gray") {
        const RasterImage img = decode_bmp(read_bytes(fixture("gray_3x2.bmp")));
        CHECK(img.channels() == 1);
        CHECK(img.width() == 3);
        CHECK(img.height() == 2);
        CHECK(img.samples() == Bytes{0, 128, 255, 10, 20, 30});
    }

    TEST_CASE("1x1 24-bit row stride is 4 bytes") {
        const Bytes b = encode_bmp(RasterImage(1, 1, 3, Bytes{1, 2, 3}));
        CHECK(b.size() == 54 + 4);
        CHECK(le32(b, 2) == b.size());
        CHECK(decode_bmp(b).samples() == Bytes{1, 2, 3});
    }

    TEST_CASE("stride for odd widths") {
        for (std::size_t w = 1; w <= 9; ++w) {
            const std::size_t stride = (3 * w + 3) / 4 * 4;
            const Bytes b = encode_bmp(RasterImage(w, 2, 3));
            CHECK(b.size() == 54 + 2 * stride);
        }
    }

    TEST_CASE("encoded header") {
        std::mt19937_64 rng(3);
        const Bytes b = encode_bmp(test::random_image(rng, 5, 3, 3));
        CHECK(b[0] == 0x42);
        CHECK(b[1] == 0x4D);
        CHECK(le32(b, 2) == b.size());
        CHECK(le32(b, 14) == 40);
    }

    TEST_CASE("grayscale encoding carries an identity palette") {
        const Bytes b = encode_bmp(RasterImage(4, 4, 1));
        REQUIRE(b.size() >= 54 + 1024);
        CHECK(le32(b, 10) == 54 + 1024);
        for (int i = 0; i < 256; ++i) {
            const std::size_t off = 54 + 4 * static_cast<std::size_t>(i);
            CHECK(b[off] == i);
            CHECK(b[off + 1] == i);
            CHECK(b[off + 2] == i);
        }
    }

    TEST_CASE("property: decode(encode(img)) == img") {
        std::mt19937_64 rng(17);
        const RasterImage rgb = test::random_image(rng, 16, 16, 3);
        CHECK(decode_bmp(encode_bmp(rgb)) == rgb);
        for (int i = 0; i < 40; ++i) {
            const int ch = (rng() & 1) ? 3 : 1;
            const RasterImage img = test::random_image(rng, 1 + rng() % 23, 1 + rng() % 17, ch);
            CHECK(decode_bmp(encode_bmp(img)) == img);
        }
    }

    TEST_CASE("rejects non-bmp and unsupported variants") {
        CHECK(thrown_code([] { decode_bmp(to_bytes("PNG...")); }) == ErrorCode::UnsupportedBmp);
        CHECK(thrown_code([] { decode_bmp(read_bytes(fixture("cover.png"))); }) == ErrorCode::UnsupportedBmp);

        const Bytes good = encode_bmp(RasterImage(3, 3, 3));
        SUBCASE("compressed") {
            Bytes b = good;
            b[30] = 1;
            CHECK(thrown_code([&] { decode_bmp(b); }) == ErrorCode::UnsupportedBmp);
        }
        SUBCASE("16 bits per pixel") {
            Bytes b = good;
            b[28] = 16;
            CHECK(thrown_code([&] { decode_bmp(b); }) == ErrorCode::UnsupportedBmp);
        }
        SUBCASE("truncated pixel data") {
            Bytes b(good.begin(), good.end() - 1);
            CHECK(thrown_code([&] { decode_bmp(b); }) == ErrorCode::Truncated);
        }
        SUBCASE("truncated header") {
            Bytes b(good.begin(), good.begin() + 20);
            CHECK(thrown_code([&] { decode_bmp(b); }) == ErrorCode::Truncated);
        }
    }

    TEST_CASE("raster image rejects bad shapes") {
        CHECK(thrown_code([] { RasterImage(2, 2, 2); }) == ErrorCode::InvalidArgument);
        CHECK(thrown_code([] { RasterImage(2, 2, 3, Bytes(11)); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("luminance weights") {
        CHECK(luminance(255, 0, 0) == 76);
        CHECK(luminance(0, 255, 0) == 150);
        CHECK(luminance(0, 0, 255) == 29);
        CHECK(luminance(255, 255, 255) == 255);
    }
}

TEST_SUITE("lsb") {
    TEST_CASE("capacity") {
        const Capacity rgb = lsb_capacity(RasterImage(100, 100, 3));
        CHECK(rgb.total == 3750);
        CHECK(rgb.usable == 3738);
        CHECK(lsb_capacity(RasterImage(100, 100, 1)).total == 1250);
        CHECK(lsb_capacity(RasterImage(2, 2, 1)).usable == 0);
    }

    TEST_CASE("bit surgery") {
        Bytes cover{0x10, 0x11, 0x12, 0x13};
        BitStream bits;
        for (bool b : {true, false, true, false}) bits.push(b);
        write_lsbs(cover, bits);
        CHECK(cover == Bytes{0x11, 0x10, 0x13, 0x12});
    }

    TEST_CASE("capacity boundary") {
        std::mt19937_64 rng(1);
        const RasterImage img = test::random_image(rng, 20, 10, 3);  // 75 total, 63 usable
        const Capacity cap = lsb_capacity(img);
        REQUIRE(cap.usable == 63);
        const Bytes fits = test::random_bytes(rng, cap.usable);
        CHECK(lsb_extract(lsb_embed(img, fits)) == fits);

        try {
            lsb_embed(img, test::random_bytes(rng, cap.usable + 1));
            FAIL("expected CapacityExceeded");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::CapacityExceeded);
            const std::string msg = e.what();
            CHECK(msg.find("63") != std::string::npos);
            CHECK(msg.find("64") != std::string::npos);
        }
        CHECK(thrown_code([] { lsb_embed(RasterImage(2, 2, 1), {}); }) == ErrorCode::CapacityExceeded);
    }

    TEST_CASE("property: round trip touches only LSBs") {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 60; ++i) {
            const int ch = (rng() & 1) ? 3 : 1;
            const RasterImage img = test::random_image(rng, 8 + rng() % 40, 8 + rng() % 40, ch);
            const Bytes p = test::random_bytes(rng, rng() % (lsb_capacity(img).usable + 1));
            const RasterImage stego = lsb_embed(img, p);
            CHECK(lsb_extract(stego) == p);
            bool only_lsb = true;
            for (std::size_t k = 0; k < img.samples().size(); ++k) {
                const int x = img.samples()[k] ^ stego.samples()[k];
                only_lsb = only_lsb && (x == 0 || x == 1);
            }
            CHECK(only_lsb);
        }
    }

    TEST_CASE("all-zero image has no frame") {
        CHECK(thrown_code([] { lsb_extract(RasterImage(50, 50, 3)); }) == ErrorCode::NoMagic);
    }

    TEST_CASE("unembedded fixture images have no frame") {
        for (const char* name : {"cover.bmp", "tiny_2x2.bmp", "gray_3x2.bmp"}) {
            const RasterImage img = decode_bmp(read_bytes(fixture(name)));
            CHECK(thrown_code([&] { lsb_extract(img); }) == ErrorCode::NoMagic);
        }
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const RasterImage img = test::natural_image(seed, 64, 48);
            CHECK(thrown_code([&] { lsb_extract(img); }) == ErrorCode::NoMagic);
        }
    }

    TEST_CASE("stego survives the bmp codec") {
        const RasterImage cover = decode_bmp(read_bytes(fixture("cover.bmp")));
        const Bytes p = to_bytes("meet at noon");
        const Bytes file = encode_bmp(lsb_embed(cover, p));
        CHECK(lsb_extract(decode_bmp(file)) == p);

        const RasterImage gray = to_grayscale(cover);
        CHECK(lsb_extract(decode_bmp(encode_bmp(lsb_embed(gray, p)))) == p);
    }
}

TEST_SUITE("dct") {
    TEST_CASE("quantization table scaling") {
        const auto q50 = quant_table(50);
        CHECK(q50[0] == 16);
        CHECK(q50[63] == 99);
        const auto q100 = quant_table(100);
        CHECK(std::all_of(q100.begin(), q100.end(), [](auto v) { return v == 1; }));
        CHECK(quant_table(75)[0] == 8);
        CHECK(quant_table(10)[0] == 80);
        CHECK(quant_table(1)[63] == 4950);
        CHECK(thrown_code([] { quant_table(0); }) == ErrorCode::InvalidArgument);
        CHECK(thrown_code([] { quant_table(101); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("zig-zag is a permutation starting along the first row") {
        std::array<bool, 64> seen{};
        for (auto n : kZigZag) seen[n] = true;
        CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
        CHECK(kZigZag[0] == 0);
        CHECK(kZigZag[1] == 1);
        CHECK(kZigZag[2] == 8);
        CHECK(kZigZag[63] == 63);
    }

    TEST_CASE("forward transform matches the direct double sum") {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 20; ++i) {
            const auto b = random_block(rng);
            const auto got = forward_dct(b);
            const auto want = reference_dct(b);
            for (int k = 0; k < 64; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
        }
    }

    TEST_CASE("orthonormality and energy preservation") {
        std::mt19937_64 rng(37);
        for (int i = 0; i < 50; ++i) {
            const auto b = random_block(rng);
            const auto f = forward_dct(b);
            const auto back = inverse_dct(f);
            double max_err = 0, e_in = 0, e_out = 0;
            for (int k = 0; k < 64; ++k) {
                max_err = std::max(max_err, std::abs(back[k] - b[k]));
                e_in += b[k] * b[k];
                e_out += f[k] * f[k];
            }
            CHECK(max_err < 1e-9);
            CHECK(std::abs(e_out - e_in) / e_in < 1e-6);
        }
    }

    TEST_CASE("flat images") {
        const CoeffPlane mid = image_to_coeffs(RasterImage(16, 16, 1, Bytes(256, 128)), 75);
        REQUIRE(mid.blocks.size() == 4);
        for (const auto& blk : mid.blocks) CHECK(std::all_of(blk.begin(), blk.end(), [](int v) { return v == 0; }));

        const CoeffPlane white = image_to_coeffs(RasterImage(8, 8, 1, Bytes(64, 255)), 75);
        CHECK(white.blocks[0][0] > 0);
        CHECK(std::all_of(white.blocks[0].begin() + 1, white.blocks[0].end(), [](int v) { return v == 0; }));
    }

    TEST_CASE("all-zero plane is a constant 128 image") {
        CoeffPlane p;
        p.width = 13;
        p.height = 9;
        p.blocks.assign(4, CoeffBlock{});
        const RasterImage img = coeffs_to_image(p);
        CHECK(img.width() == 13);
        CHECK(img.height() == 9);
        CHECK(std::all_of(img.samples().begin(), img.samples().end(), [](auto v) { return v == 128; }));
    }

    TEST_CASE("block count and edge padding") {
        const CoeffPlane p = image_to_coeffs(RasterImage(17, 9, 3), 50);
        CHECK(p.blocks_across() == 3);
        CHECK(p.blocks_down() == 2);
        CHECK(p.blocks.size() == 6);
        // a 1x1 white image pads to a flat block
        const CoeffPlane one = image_to_coeffs(RasterImage(1, 1, 1, Bytes{255}), 50);
        CHECK(std::all_of(one.blocks[0].begin() + 1, one.blocks[0].end(), [](int v) { return v == 0; }));
    }

    TEST_CASE("reconstruction error stays within the quantization bound") {
        // Each dequantized coefficient is off by at most q/2 and every basis
        // function is bounded by 1/4, so a pixel moves at most sum(q)/8 plus
        // the final rounding.
        std::mt19937_64 rng(41);
        for (int quality : {10, 50, 75, 90, 100}) {
            const auto table = quant_table(quality);
            const double bound = std::accumulate(table.begin(), table.end(), 0.0) / 8.0 + 0.5;
            for (int i = 0; i < 10; ++i) {
                const RasterImage img = test::random_image(rng, 8, 8, 1);
                const RasterImage back = coeffs_to_image(image_to_coeffs(img, quality));
                int worst = 0;
                for (std::size_t k = 0; k < 64; ++k) worst = std::max(worst, std::abs(img.samples()[k] - back.samples()[k]));
                CHECK(worst <= bound);
            }
        }
        const RasterImage img = test::random_image(rng, 8, 8, 1);
        const RasterImage back = coeffs_to_image(image_to_coeffs(img, 100));
        for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(img.samples()[k] - back.samples()[k]) <= 4);
    }

    TEST_CASE("requantization is a fixed point on image-derived planes") {
        for (int quality : {25, 50, 75, 90}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const CoeffPlane plane = image_to_coeffs(test::natural_image(seed, 48, 40, 1), quality);
                const CoeffPlane once = image_to_coeffs(coeffs_to_image(plane), quality);
                const CoeffPlane twice = image_to_coeffs(coeffs_to_image(once), quality);
                CHECK(twice == once);
            }
        }
    }

    TEST_CASE("magnitude lsb rule") {
        CHECK(set_magnitude_lsb(2, true) == 3);
        CHECK(set_magnitude_lsb(-2, true) == -3);
        CHECK(set_magnitude_lsb(3, false) == 2);
        CHECK(set_magnitude_lsb(-3, false) == -2);
        CHECK(set_magnitude_lsb(-1, true) == -1);
        CHECK(set_magnitude_lsb(-1, false) == -2);
        CHECK(set_magnitude_lsb(100, true) == 101);
    }

    TEST_CASE("capacity counts coefficients outside {0, 1}") {
        CoeffPlane p;
        p.width = 8;
        p.height = 8;
        CoeffBlock blk{};
        for (std::size_t k = 0; k < 64; ++k) blk[k] = static_cast<std::int32_t>(k % 4) - 1;  // -1, 0, 1, 2
        p.blocks = {blk};
        CHECK(dct_capacity(p).total == 4);  // 32 coefficients carry bits
        CHECK(dct_capacity(p).usable == 0);

        CoeffPlane zero = p;
        zero.blocks = {CoeffBlock{}};
        CHECK(dct_capacity(zero).total == 0);
        CHECK(thrown_code([&] { dct_embed(zero, {}); }) == ErrorCode::CapacityExceeded);
        CHECK(thrown_code([&] { dct_embed(zero, to_bytes("x")); }) == ErrorCode::CapacityExceeded);
    }

    TEST_CASE("capacity boundary") {
        std::mt19937_64 rng(43);
        const CoeffPlane p = random_plane(rng, 32, 32, 20);
        const Capacity cap = dct_capacity(p);
        REQUIRE(cap.usable > 0);
        const Bytes fits = test::random_bytes(rng, cap.usable);
        CHECK(dct_extract(dct_embed(p, fits)) == fits);
        CHECK(thrown_code([&] { dct_embed(p, Bytes(cap.usable + 1)); }) == ErrorCode::CapacityExceeded);
    }

    TEST_CASE("property: embed keeps {0,1} in place and moves others by at most one") {
        std::mt19937_64 rng(47);
        for (int i = 0; i < 40; ++i) {
            const CoeffPlane p = random_plane(rng, 8 * (1 + rng() % 6), 8 * (1 + rng() % 6), 1 + static_cast<int>(rng() % 12));
            const Capacity cap = dct_capacity(p);
            if (cap.total < kFrameOverhead) continue;
            const Bytes payload = test::random_bytes(rng, rng() % (cap.usable + 1));
            const CoeffPlane s = dct_embed(p, payload);
            CHECK(dct_extract(s) == payload);
            bool ok = true;
            for (std::size_t b = 0; b < p.blocks.size(); ++b) {
                for (std::size_t k = 0; k < 64; ++k) {
                    const int before = p.blocks[b][k];
                    const int after = s.blocks[b][k];
                    if (before == 0 || before == 1) {
                        ok = ok && after == before;
                    } else {
                        ok = ok && after != 0 && after != 1;
                        ok = ok && (after < 0) == (before < 0);
                        ok = ok && std::abs(std::abs(after) - std::abs(before)) <= 1;
                    }
                }
            }
            CHECK(ok);
        }
    }

    TEST_CASE("extract errors") {
        std::mt19937_64 rng(53);
        const CoeffPlane p = random_plane(rng, 32, 32, 20);
        CHECK(thrown_code([&] { dct_extract(p); }) == ErrorCode::NoMagic);

        CoeffPlane s = dct_embed(p, to_bytes("a secret"));
        // flip the magnitude LSB of the first carrier past the 64-bit header
        int seen = 0;
        for (auto& blk : s.blocks) {
            for (auto& v : blk) {
                if (v == 0 || v == 1) continue;
                if (seen++ == 70) v = set_magnitude_lsb(v, (std::abs(v) & 1) == 0);
            }
        }
        CHECK(thrown_code([&] { dct_extract(s); }) == ErrorCode::CorruptFrame);
    }

    TEST_CASE("image pipeline round trip") {
        const RasterImage cover = decode_bmp(read_bytes(fixture("cover.bmp")));
        const CoeffPlane plane = image_to_coeffs(cover, 90);
        const Bytes p = to_bytes("hi");
        CHECK(dct_extract(dct_embed(plane, p)) == p);
        CHECK(coeffs_to_image(dct_embed(plane, p)).width() == cover.width());
    }
}

TEST_SUITE("scf") {
    TEST_CASE("exact layout") {
        CoeffPlane p;
        p.width = 8;
        p.height = 8;
        p.quality = 75;
        CoeffBlock blk{};
        blk[0] = -2;
        blk[1] = 300;
        p.blocks = {blk};
        const Bytes b = write_scf(p);
        REQUIRE(b.size() == 9 + 128);
        CHECK(Bytes(b.begin(), b.begin() + 13) == Bytes{'S', 'C', 'F', '1', 0, 8, 0, 8, 75, 0xFF, 0xFE, 0x01, 0x2C});
        CHECK(read_scf(b) == p);
    }

    TEST_CASE("property: round trip") {
        std::mt19937_64 rng(59);
        for (int i = 0; i < 20; ++i) {
            CoeffPlane p = random_plane(rng, 1 + rng() % 40, 1 + rng() % 40, 2000);
            p.quality = 1 + static_cast<int>(rng() % 100);
            CHECK(read_scf(write_scf(p)) == p);
        }
    }

    TEST_CASE("errors") {
        CoeffPlane p;
        p.width = 8;
        p.height = 8;
        p.blocks = {CoeffBlock{}};
        const Bytes good = write_scf(p);
        CHECK(thrown_code([] { read_scf(to_bytes("SCF2")); }) == ErrorCode::MalformedScf);
        CHECK(thrown_code([] { read_scf({}); }) == ErrorCode::MalformedScf);
        CHECK(thrown_code([&] { read_scf(ByteView(good).first(6)); }) == ErrorCode::Truncated);
        CHECK(thrown_code([&] { read_scf(ByteView(good).first(good.size() - 1)); }) == ErrorCode::Truncated);
        Bytes extra = good;
        extra.push_back(0);
        CHECK(thrown_code([&] { read_scf(extra); }) == ErrorCode::MalformedScf);
        Bytes badq = good;
        badq[8] = 0;
        CHECK(thrown_code([&] { read_scf(badq); }) == ErrorCode::MalformedScf);

        CoeffPlane big = p;
        big.blocks[0][5] = 40000;
        CHECK(thrown_code([&] { write_scf(big); }) == ErrorCode::InvalidArgument);
    }
}
