#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dsp/fft.hpp"

namespace sapred::dsp {

struct Psd {
    std::vector<double> freq;  // Hz
    std::vector<double> power; // unit^2 / Hz, one-sided

    double df() const { return freq.size() > 1 ? freq[1] - freq[0] : 0.0; }

    // Integral of the PSD over [lo, hi] (trapezoid, linear interpolation at
    // the band edges), so adjacent bands add exactly.
    double band_power(double lo, double hi) const {
        if (freq.size() < 2 || hi <= lo) return 0.0;
        double fmax = freq.back();
        lo = std::max(lo, freq.front());
        hi = std::min(hi, fmax);
        if (hi <= lo) return 0.0;
        auto value_at = [&](double f) {
            double pos = (f - freq.front()) / df();
            std::size_t i = std::min(static_cast<std::size_t>(pos), freq.size() - 2);
            double w = pos - static_cast<double>(i);
            return power[i] * (1.0 - w) + power[i + 1] * w;
        };
        // integrate trapezoid between grid points, partial cells at the edges
        double total = 0;
        double d = df();
        std::size_t i0 = static_cast<std::size_t>(std::ceil((lo - freq.front()) / d - 1e-12));
        std::size_t i1 = static_cast<std::size_t>(std::floor((hi - freq.front()) / d + 1e-12));
        if (i0 > i1) {  // band inside one cell
            return 0.5 * (value_at(lo) + value_at(hi)) * (hi - lo);
        }
        double f0 = freq.front() + d * static_cast<double>(i0);
        double f1 = freq.front() + d * static_cast<double>(i1);
        if (lo < f0) total += 0.5 * (value_at(lo) + power[i0]) * (f0 - lo);
        for (std::size_t i = i0; i < i1; ++i) total += 0.5 * (power[i] + power[i + 1]) * d;
        if (hi > f1) total += 0.5 * (power[i1] + value_at(hi)) * (hi - f1);
        return total;
    }

    double total_power() const {
        double s = 0;
        for (std::size_t i = 0; i + 1 < power.size(); ++i) s += 0.5 * (power[i] + power[i + 1]) * df();
        return s;
    }
};

// Welch power spectral density: Hann-windowed, mean-removed segment
// periodograms averaged; one-sided density scaling so the integrated PSD
// approximates the signal variance (Parseval). A signal shorter than one
// window falls back to a single full-length segment.
inline Psd welch_psd(const std::vector<double>& x, double fs, double window_s = 4.0,
                     double overlap = 0.5, Warnings* warnings = nullptr) {
    if (x.empty()) throw Error("welch_psd: empty signal");
    std::size_t win = static_cast<std::size_t>(std::lround(window_s * fs));
    if (win < 8) win = 8;
    if (win > x.size()) {
        warn(warnings, "welch_psd: window longer than signal, using single segment");
        win = x.size();
    }
    std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                   std::lround(static_cast<double>(win) * (1.0 - overlap))));
    std::size_t nseg = x.size() >= win ? (x.size() - win) / hop + 1 : 1;

    std::vector<double> hann(win);
    double u = 0;  // window power sum
    for (std::size_t i = 0; i < win; ++i) {
        hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                       static_cast<double>(win - 1));
        u += hann[i] * hann[i];
    }

    std::size_t nfft = next_pow2(win);
    Psd psd;
    psd.power.assign(nfft / 2 + 1, 0.0);
    std::vector<double> seg(win);
    for (std::size_t s = 0; s < nseg; ++s) {
        std::size_t off = s * hop;
        double m = 0;
        for (std::size_t i = 0; i < win; ++i) m += x[off + i];
        m /= static_cast<double>(win);
        for (std::size_t i = 0; i < win; ++i) seg[i] = (x[off + i] - m) * hann[i];
        auto spec = rfft(seg, nfft);
        for (std::size_t k = 0; k < psd.power.size(); ++k) {
            double mag2 = std::norm(spec[k]);
            double scale = (k == 0 || k == nfft / 2) ? 1.0 : 2.0;  // one-sided doubling
            psd.power[k] += scale * mag2 / (fs * u);
        }
    }
    for (auto& p : psd.power) p /= static_cast<double>(nseg);
    psd.freq.resize(psd.power.size());
    for (std::size_t k = 0; k < psd.freq.size(); ++k)
        psd.freq[k] = fs * static_cast<double>(k) / static_cast<double>(nfft);
    return psd;
}

}  // namespace sapred::dsp
