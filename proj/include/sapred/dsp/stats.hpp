#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "sapred/common.hpp"

namespace sapred::dsp {

// Per-epoch descriptive statistics. Kurtosis is excess kurtosis (normal -> 0).
struct EpochStats {
    double mean = 0;
    double variance = 0;   // sample variance, n-1
    double skew = 0;       // m3 / m2^1.5
    double kurtosis = 0;   // m4 / m2^2 - 3
    double slope = 0;      // unit/s, OLS against time
    double rms = 0;
    double auc = 0;        // unit*s, trapezoidal
    double max_amplitude = 0;
    double time_to_max = 0;  // s from epoch start
};

inline EpochStats epoch_stats(const std::vector<double>& x, double fs) {
    const std::size_t n = x.size();
    if (n < 2) throw Error("epoch_stats needs at least 2 samples");
    EpochStats s;
    double sum = 0;
    for (double v : x) sum += v;
    s.mean = sum / static_cast<double>(n);

    double m2 = 0, m3 = 0, m4 = 0, ss = 0;
    for (double v : x) {
        double d = v - s.mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        ss += v * v;
    }
    double m2n = m2 / static_cast<double>(n);
    if (m2n > 1e-18 * (s.mean * s.mean + 1.0)) {
        s.variance = m2 / static_cast<double>(n - 1);
        s.skew = (m3 / static_cast<double>(n)) / std::pow(m2n, 1.5);
        s.kurtosis = (m4 / static_cast<double>(n)) / (m2n * m2n) - 3.0;
    }  // all-equal samples (up to rounding): variance/skew/kurtosis stay 0

    // OLS slope of x against time in seconds
    const double dt = 1.0 / fs;
    double tbar = 0.5 * dt * static_cast<double>(n - 1);
    double stt = 0, stx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double td = static_cast<double>(i) * dt - tbar;
        stt += td * td;
        stx += td * (x[i] - s.mean);
    }
    s.slope = stt > 0 ? stx / stt : 0.0;

    s.rms = std::sqrt(ss / static_cast<double>(n));
    double auc = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) auc += 0.5 * (x[i] + x[i + 1]) * dt;
    s.auc = auc;

    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (x[i] > x[imax]) imax = i;
    s.max_amplitude = x[imax];
    s.time_to_max = static_cast<double>(imax) * dt;
    return s;
}

// Sample Pearson correlation; nullopt when either input has zero variance.
inline std::optional<double> pearson_corr(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("pearson_corr needs equal lengths >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0 || syy <= 0) return std::nullopt;
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace sapred::dsp
