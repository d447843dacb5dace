#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dsp/peaks.hpp"
#include "sapred/dsp/savgol.hpp"

namespace sapred {

struct EdaConfig {
    double range_lo = -1.0, range_hi = 40.0;   // uS
    double max_slope = 0.5;                    // uS/s
    double max_curvature = 0.5;                // uS/s^2
    double deriv_window_s = 1.0;               // window for derivative estimates
    double smooth_window_s = 2.0;              // final Savitzky-Golay smoothing
    double tau_rise = 1.0, tau_decay = 3.75;   // Bateman time constants, s
    double scr_threshold = 0.01;               // uS, minimum SCR amplitude
    double tonic_grid_s = 10.0;                // trough-sampling grid for tonic
};

struct Scr {
    double onset = 0;      // s from signal start
    double amplitude = 0;  // uS, peak of the reconvolved response
    double area = 0;       // uS*s
};

struct EdaDecomposition {
    std::vector<double> tonic, phasic;  // same grid as input
    std::vector<Scr> scrs;
    bool fallback_used = false;
};

struct EdaCleanResult {
    std::vector<double> samples;
    std::vector<bool> rejected;  // samples that failed the range/slew screen
    std::size_t rejected_count = 0;
    bool low_quality = false;  // more than half the samples rejected
};

// k[n] = exp(-n dt / tau_decay) - exp(-n dt / tau_rise): the canonical SCR
// impulse response (fast rise, slow decay), truncated once it has decayed.
inline std::vector<double> bateman_kernel(double fs, double tau_rise, double tau_decay) {
    if (tau_decay <= tau_rise) throw Error("bateman kernel needs tau_decay > tau_rise");
    double dt = 1.0 / fs;
    std::size_t n = static_cast<std::size_t>(std::ceil(8.0 * tau_decay * fs));
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * dt;
        k[i] = std::exp(-t / tau_decay) - std::exp(-t / tau_rise);
    }
    return k;
}

// Range and slew-rate screening followed by Savitzky-Golay fill and smooth.
// Derivatives are estimated from local quadratic fits over ~1 s so sensor
// noise does not dominate the thresholds.
inline EdaCleanResult eda_clean(const std::vector<double>& x, double fs, const EdaConfig& cfg = {},
                                Warnings* warnings = nullptr) {
    if (fs < 4.0) throw Error("eda_clean needs fs >= 4 Hz");
    if (x.size() < 16) throw Error("eda_clean: signal too short");

    auto odd_window = [&](double seconds, int order) {
        int w = static_cast<int>(seconds * fs);
        if (w % 2 == 0) ++w;
        w = std::max(w, order + 2 + ((order + 2) % 2 == 0 ? 1 : 0));
        if (w >= static_cast<int>(x.size())) w = static_cast<int>(x.size()) - 1 - (x.size() % 2 == 0 ? 0 : 1);
        if (w % 2 == 0) --w;
        return w;
    };

    int dwin = odd_window(cfg.deriv_window_s, 2);
    auto d1 = dsp::savitzky_golay_fit(x, 2, dwin, 1, 1.0 / fs);
    auto d2 = dsp::savitzky_golay_fit(x, 2, dwin, 2, 1.0 / fs);

    EdaCleanResult out;
    out.rejected.assign(x.size(), false);
    std::vector<double> masked = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        bool bad = x[i] < cfg.range_lo || x[i] > cfg.range_hi ||
                   std::abs(d1[i]) > cfg.max_slope || std::abs(d2[i]) > cfg.max_curvature;
        if (bad) {
            masked[i] = missing_value();
            out.rejected[i] = true;
            ++out.rejected_count;
        }
    }
    if (out.rejected_count * 2 > x.size()) {
        out.low_quality = true;
        warn(warnings, "eda_clean: more than half the samples rejected");
    }

    int swin = odd_window(cfg.smooth_window_s, 3);
    out.samples = dsp::savitzky_golay_fit(masked, 3, swin, 0, 1.0 / fs);

    // gaps wider than the window: bridge linearly from the nearest filled values
    std::vector<std::size_t> holes;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        if (is_missing(out.samples[i])) holes.push_back(i);
    if (!holes.empty()) {
        for (std::size_t i : holes) {
            std::size_t a = i, b = i;
            while (a > 0 && is_missing(out.samples[a])) --a;
            while (b + 1 < out.samples.size() && is_missing(out.samples[b])) ++b;
            double va = is_missing(out.samples[a]) ? 0.0 : out.samples[a];
            double vb = is_missing(out.samples[b]) ? va : out.samples[b];
            if (is_missing(out.samples[a])) va = vb;
            double w = b > a ? static_cast<double>(i - a) / static_cast<double>(b - a) : 0.0;
            out.samples[i] = va * (1.0 - w) + vb * w;
        }
    }
    return out;
}

// Continuous decomposition: SC = driver (x) bateman + tonic. The tonic level
// threads through inter-impulse troughs; the driver comes from the exact
// discrete inverse of the Bateman kernel, clipped non-negative; SCRs are the
// reconvolved driver bursts above threshold.
inline EdaDecomposition eda_decompose(const std::vector<double>& sc, double fs,
                                      const EdaConfig& cfg = {}, Warnings* warnings = nullptr) {
    const std::size_t n = sc.size();
    if (n < static_cast<std::size_t>(4.0 * fs)) throw Error("eda_decompose: signal too short");
    const double dt = 1.0 / fs;

    EdaDecomposition out;

    // tonic: sample a trough per grid cell, interpolate, smooth
    std::size_t grid = std::max<std::size_t>(2, static_cast<std::size_t>(cfg.tonic_grid_s * fs));
    std::vector<std::pair<std::size_t, double>> knots;
    for (std::size_t start = 0; start < n; start += grid) {
        std::size_t stop = std::min(n, start + grid);
        std::size_t imin = start;
        for (std::size_t i = start; i < stop; ++i)
            if (sc[i] < sc[imin]) imin = i;
        knots.emplace_back(imin, sc[imin]);
    }
    out.tonic.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i <= knots.front().first) {
            out.tonic[i] = knots.front().second;
        } else if (i >= knots.back().first) {
            out.tonic[i] = knots.back().second;
        } else {
            std::size_t k = 0;
            while (knots[k + 1].first < i) ++k;
            double span = static_cast<double>(knots[k + 1].first - knots[k].first);
            double w = span > 0 ? static_cast<double>(i - knots[k].first) / span : 0.0;
            out.tonic[i] = knots[k].second * (1.0 - w) + knots[k + 1].second * w;
        }
    }
    {
        int w = static_cast<int>(cfg.tonic_grid_s * fs);
        if (w % 2 == 0) ++w;
        if (w < 5) w = 5;
        if (w < static_cast<int>(n)) out.tonic = dsp::savitzky_golay_fit(out.tonic, 2, w, 0, dt);
    }

    std::vector<double> phasic_raw(n);
    for (std::size_t i = 0; i < n; ++i) phasic_raw[i] = std::max(0.0, sc[i] - out.tonic[i]);

    const double a1 = std::exp(-dt / cfg.tau_decay);
    const double a2 = std::exp(-dt / cfg.tau_rise);
    auto kernel = bateman_kernel(fs, cfg.tau_rise, cfg.tau_decay);

    std::vector<double> driver(n, 0.0);
    if (std::abs(a1 - a2) < 1e-9) {
        // degenerate time constants: trough-to-peak analysis instead
        out.fallback_used = true;
        warn(warnings, "eda_decompose: kernel inversion degenerate, trough-to-peak fallback");
        auto peaks = dsp::find_peaks(phasic_raw, fs, cfg.scr_threshold, 1.0);
        for (const auto& p : peaks) {
            double trough = 0;
            for (std::size_t i = p.index; i-- > 0;) {
                if (i == 0 || (phasic_raw[i] <= phasic_raw[i - 1] && phasic_raw[i] <= phasic_raw[i + 1])) {
                    trough = phasic_raw[i];
                    break;
                }
            }
            double amp = p.amplitude - trough;
            if (amp >= cfg.scr_threshold) out.scrs.push_back({p.t, amp, amp * cfg.tau_decay});
        }
        out.phasic = phasic_raw;
        return out;
    }

    // exact discrete deconvolution: d[n] = (p[n+1] - (a1+a2) p[n] + a1 a2 p[n-1]) / (a1-a2)
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double prev = i > 0 ? phasic_raw[i - 1] : 0.0;
        double d = (phasic_raw[i + 1] - (a1 + a2) * phasic_raw[i] + a1 * a2 * prev) / (a1 - a2);
        driver[i] = std::max(0.0, d);
    }

    // segment the driver into bursts and keep those whose reconvolved
    // response clears the amplitude threshold
    double dmax = 0;
    for (double v : driver) dmax = std::max(dmax, v);
    double floor_level = std::max(1e-9, 1e-4 * dmax);
    std::size_t i = 0;
    while (i < n) {
        if (driver[i] <= floor_level) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && driver[j] > floor_level) ++j;
        // reconvolve the burst alone
        double peak = 0, area = 0;
        std::size_t horizon = std::min(n, j + kernel.size());
        for (std::size_t t = i; t < horizon; ++t) {
            double v = 0;
            std::size_t kmax = std::min(j, t + 1);
            for (std::size_t s = i; s < kmax; ++s) {
                std::size_t lag = t - s;
                if (lag < kernel.size()) v += driver[s] * kernel[lag];
            }
            peak = std::max(peak, v);
            area += v * dt;
        }
        if (peak >= cfg.scr_threshold)
            out.scrs.push_back({static_cast<double>(i) * dt, peak, area});
        i = j;
    }

    // phasic = driver (x) kernel; tonic re-derived so the parts add back up
    out.phasic.assign(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double v = 0;
        std::size_t lag_max = std::min(t + 1, kernel.size());
        for (std::size_t lag = 0; lag < lag_max; ++lag) v += driver[t - lag] * kernel[lag];
        out.phasic[t] = v;
    }
    for (std::size_t t = 0; t < n; ++t) out.tonic[t] = sc[t] - out.phasic[t];
    {
        int w = static_cast<int>(cfg.tonic_grid_s * fs);
        if (w % 2 == 0) ++w;
        if (w < 5) w = 5;
        if (w < static_cast<int>(n)) out.tonic = dsp::savitzky_golay_fit(out.tonic, 2, w, 0, dt);
    }
    return out;
}

struct EdaFeatures {
    double tonic_min = 0, tonic_max = 0, tonic_mean = 0;
    double phasic_min = 0, phasic_max = 0, phasic_mean = 0;
    std::optional<double> scr_mean_amplitude;
    double scr_sum_amplitude = 0;
    double scr_count = 0;
    double scr_auc = 0;
};

// Epoch summary over a whole-recording decomposition; the epoch window is in
// seconds relative to trace start.
inline EdaFeatures eda_features(const EdaDecomposition& d, double fs, double epoch_start,
                                double epoch_end) {
    EdaFeatures f;
    std::size_t i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(epoch_start * fs - 1e-9)));
    std::size_t i1 = std::min(d.tonic.size() - 1,
                              static_cast<std::size_t>(std::max(0.0, std::floor(epoch_end * fs + 1e-9))));
    if (i1 < i0 || d.tonic.empty()) throw Error("eda_features: empty epoch");

    auto span_stats = [&](const std::vector<double>& v, double& mn, double& mx, double& mean) {
        mn = mx = v[i0];
        double s = 0;
        for (std::size_t i = i0; i <= i1; ++i) {
            mn = std::min(mn, v[i]);
            mx = std::max(mx, v[i]);
            s += v[i];
        }
        mean = s / static_cast<double>(i1 - i0 + 1);
    };
    span_stats(d.tonic, f.tonic_min, f.tonic_max, f.tonic_mean);
    span_stats(d.phasic, f.phasic_min, f.phasic_max, f.phasic_mean);

    double amp_sum = 0;
    std::size_t count = 0;
    for (const auto& scr : d.scrs) {
        if (scr.onset < epoch_start || scr.onset > epoch_end) continue;
        amp_sum += scr.amplitude;
        f.scr_auc += scr.area;
        ++count;
    }
    f.scr_count = static_cast<double>(count);
    f.scr_sum_amplitude = amp_sum;
    if (count > 0) f.scr_mean_amplitude = amp_sum / static_cast<double>(count);
    return f;
}

}  // namespace sapred
