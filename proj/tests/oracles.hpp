#pragma once

// Reference computations written independently of the library, shared by
// the unit tests and the acceptance runner.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "stegkit/bitcodec.hpp"

namespace stegkit::test {

// Smallest sum(f * len) over all length assignments meeting Kraft's
// inequality. Any such assignment is realisable as a prefix code, so this is
// the optimum over every prefix code.
inline std::size_t brute_force_optimum(const std::vector<std::size_t>& freqs) {
    const std::size_t n = freqs.size();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::function<void(std::size_t, double, std::size_t)> go = [&](std::size_t i, double kraft, std::size_t cost) {
        if (kraft > 1.0 + 1e-12 || cost >= best) return;
        if (i == n) {
            best = cost;
            return;
        }
        for (int l = 1; l < static_cast<int>(n); ++l) go(i + 1, kraft + std::ldexp(1.0, -l), cost + freqs[i] * l);
    };
    go(0, 0.0, 0);
    return best;
}

// P(a, x) by integrating t^(a-1) e^-t / Gamma(a) over [0, x].
inline double quadrature_gamma_p(double a, double x) {
    if (x == 0) return 0;
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double lg = std::lgamma(a);
    auto f = [&](double t) { return t <= 0 ? 0.0 : std::exp((a - 1) * std::log(t) - t - lg); };
    return integrator.integrate(f, 0.0, x);
}

// Plain 32-bit accumulate and fold of big-endian words.
inline std::uint32_t naive_sum(ByteView d) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < d.size(); i += 2) {
        s += (std::uint32_t{d[i]} << 8) | (i + 1 < d.size() ? d[i + 1] : 0);
    }
    while (s >> 16) s = (s & 0xFFFF) + (s >> 16);
    return s;
}

// Both checksums of a raw IPv4 + TCP packet (20-byte IP header) verify.
inline bool packet_checksums_verify(ByteView pkt) {
    if (pkt.size() < 40) return false;
    if (naive_sum(pkt.first(20)) != 0xFFFF) return false;
    Bytes pseudo(pkt.begin() + 12, pkt.begin() + 20);
    const std::size_t tcp_len = pkt.size() - 20;
    pseudo.insert(pseudo.end(), {0, 6, static_cast<std::uint8_t>(tcp_len >> 8), static_cast<std::uint8_t>(tcp_len)});
    pseudo.insert(pseudo.end(), pkt.begin() + 20, pkt.end());
    return naive_sum(pseudo) == 0xFFFF;
}

}  // namespace stegkit::test
