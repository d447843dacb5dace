#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dsp/filter.hpp"

namespace sapred {

struct EcgConfig {
    double refractory_s = 0.25;
    double detect_lo = 5.0, detect_hi = 25.0;  // detection band, Hz
    double integral_window_s = 0.15;
    // the conventional pNN50 counts successive differences above 50 ms;
    // set below=true for the complementary convention
    bool pnn50_below = false;
};

struct HrvFeatures {
    std::optional<double> heart_rate;  // bpm
    std::optional<double> sdsd;        // ms
    std::optional<double> pnn50;       // %
    std::optional<double> rmssd;       // ms
};

// Energy-based R-peak detector (derivative -> square -> moving integral with
// an adaptive signal/noise threshold and a refractory period). Input must
// already be band-passed 1-100 Hz with the powerline notch applied; returned
// beat times are local maxima of that input near each detection.
inline std::vector<double> detect_r_peaks(const std::vector<double>& ecg, double fs,
                                          const EcgConfig& cfg = {}) {
    const std::size_t n = ecg.size();
    if (n < 32) return {};

    dsp::FilterSpec band{dsp::FilterKind::BandPass, cfg.detect_lo, cfg.detect_hi, 2, true};
    std::vector<double> f = dsp::butterworth_filter(ecg, fs, band);

    std::vector<double> energy(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double d = (f[i + 1] - f[i - 1]) * 0.5 * fs;
        energy[i] = d * d;
    }
    // centred moving integral, so detections stay aligned with the R wave
    std::size_t half = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.integral_window_s * fs / 2));
    std::vector<double> integ(n, 0.0);
    double acc = 0;
    for (std::size_t i = 0; i < std::min(n, 2 * half + 1); ++i) acc += energy[i];
    for (std::size_t i = 0; i < n; ++i) {
        integ[i] = acc / static_cast<double>(2 * half + 1);
        std::size_t drop = i >= half ? i - half : 0;
        std::size_t add = i + half + 1;
        if (add < n) acc += energy[add];
        if (i >= half && drop < n) acc -= energy[drop];
    }

    // candidate integral peaks separated by the refractory period
    std::vector<std::size_t> cand;
    std::size_t refr = static_cast<std::size_t>(cfg.refractory_s * fs);
    std::size_t last = 0;
    bool have_last = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (integ[i] <= integ[i - 1] || integ[i] < integ[i + 1]) continue;
        if (have_last && i - last < refr) {
            if (integ[i] > integ[last]) cand.back() = last = i;
            continue;
        }
        cand.push_back(i);
        last = i;
        have_last = true;
    }
    if (cand.empty()) return {};

    // adaptive threshold, seeded from the first two seconds
    std::size_t seed_n = std::min(n, static_cast<std::size_t>(2.0 * fs));
    double seed_max = 0, seed_mean = 0;
    for (std::size_t i = 0; i < seed_n; ++i) {
        seed_max = std::max(seed_max, integ[i]);
        seed_mean += integ[i];
    }
    seed_mean /= static_cast<double>(seed_n);
    if (seed_max <= 0) return {};
    double spki = seed_max, npki = 0.5 * seed_mean;

    std::vector<std::size_t> beats_idx;
    for (std::size_t i : cand) {
        double h = integ[i];
        double threshold = npki + 0.25 * (spki - npki);
        if (h > threshold) {
            spki = 0.125 * h + 0.875 * spki;
            // refine onto the raw filtered ECG within +-75 ms
            std::size_t a = i >= static_cast<std::size_t>(0.075 * fs) ? i - static_cast<std::size_t>(0.075 * fs) : 0;
            std::size_t b = std::min(n - 1, i + static_cast<std::size_t>(0.075 * fs));
            std::size_t best = a;
            for (std::size_t k = a; k <= b; ++k)
                if (ecg[k] > ecg[best]) best = k;
            if (beats_idx.empty() || best - beats_idx.back() >= refr) beats_idx.push_back(best);
        } else {
            npki = 0.125 * h + 0.875 * npki;
        }
    }

    std::vector<double> beats;
    beats.reserve(beats_idx.size());
    for (std::size_t idx : beats_idx) beats.push_back(static_cast<double>(idx) / fs);
    return beats;
}

// Heart rate and beat-to-beat variability over one epoch. Fewer than 2 beats
// yields nothing; fewer than 3 yields heart rate only.
inline HrvFeatures hrv_features(const std::vector<double>& beat_times, double epoch_start,
                                double epoch_end, const EcgConfig& cfg = {}) {
    std::vector<double> beats;
    for (double t : beat_times)
        if (t >= epoch_start && t <= epoch_end) beats.push_back(t);

    HrvFeatures out;
    if (beats.size() < 2) return out;

    std::vector<double> nn(beats.size() - 1);
    for (std::size_t i = 0; i + 1 < beats.size(); ++i) nn[i] = beats[i + 1] - beats[i];
    out.heart_rate = 60.0 / mean_of(nn);

    if (beats.size() < 3) return out;
    std::vector<double> d(nn.size() - 1);
    for (std::size_t i = 0; i + 1 < nn.size(); ++i) d[i] = (nn[i + 1] - nn[i]) * 1000.0;  // ms
    double ms2 = 0;
    std::size_t over50 = 0;
    for (double v : d) {
        ms2 += v * v;
        bool above = std::abs(v) > 50.0;
        if (cfg.pnn50_below ? !above : above) ++over50;
    }
    out.rmssd = std::sqrt(ms2 / static_cast<double>(d.size()));
    out.sdsd = sample_sd(d);
    out.pnn50 = 100.0 * static_cast<double>(over50) / static_cast<double>(d.size());
    return out;
}

}  // namespace sapred
