#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "sapred/common.hpp"

namespace sapred::dsp {

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 FFT; x.size() must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& x, bool inverse = false) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) throw Error("fft size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = x[i + k];
                std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& v : x) v /= static_cast<double>(n);
}

// FFT of a real signal zero-padded to nfft (power of two).
inline std::vector<std::complex<double>> rfft(const std::vector<double>& x, std::size_t nfft) {
    std::vector<std::complex<double>> buf(nfft, {0.0, 0.0});
    for (std::size_t i = 0; i < x.size() && i < nfft; ++i) buf[i] = {x[i], 0.0};
    fft_inplace(buf);
    buf.resize(nfft / 2 + 1);
    return buf;
}

}  // namespace sapred::dsp
