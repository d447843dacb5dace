#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dsp/peaks.hpp"

namespace sapred {

struct RspConfig {
    double prominence_sd_factor = 0.1;  // breath peak prominence vs signal SD
    double min_breath_spacing_s = 1.0;
};

struct RspFeatures {
    double rate = 0;              // breaths/min
    double median_amplitude = 0;  // median peak height, signal units
    double tidal_proxy = 0;       // mean peak-to-preceding-trough excursion
    double minute_vent_proxy = 0; // rate * tidal_proxy
};

// Breath analysis over one epoch of a band-passed (0.05-3 Hz) respiration
// signal. Rate is normalised by the span between first and last peak to
// avoid edge bias in short epochs.
inline RspFeatures rsp_features(const std::vector<double>& x, double fs,
                                const RspConfig& cfg = {}, Warnings* warnings = nullptr) {
    const double epoch_len = static_cast<double>(x.size()) / fs;
    if (epoch_len < 10.0) throw Error("rsp_features needs an epoch of at least 10 s");

    double sd = sample_sd(x);
    double prom = cfg.prominence_sd_factor * sd;
    auto peaks = dsp::find_peaks(x, fs, prom, cfg.min_breath_spacing_s);

    RspFeatures out;
    if (peaks.empty()) {
        warn(warnings, "rsp_features: no breath peaks in epoch");
        return out;
    }

    if (peaks.size() >= 2) {
        double span = peaks.back().t - peaks.front().t;
        out.rate = 60.0 * static_cast<double>(peaks.size() - 1) / span;
    } else {
        out.rate = 60.0 * static_cast<double>(peaks.size()) / epoch_len;
    }

    std::vector<double> heights;
    for (const auto& p : peaks) heights.push_back(p.amplitude);
    std::sort(heights.begin(), heights.end());
    std::size_t mid = heights.size() / 2;
    out.median_amplitude = heights.size() % 2 == 1
                               ? heights[mid]
                               : 0.5 * (heights[mid - 1] + heights[mid]);

    // excursion against the preceding trough; peaks without one are skipped
    std::vector<double> negated(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) negated[i] = -x[i];
    auto troughs = dsp::find_peaks(negated, fs, prom, cfg.min_breath_spacing_s);
    double exc_sum = 0;
    std::size_t exc_n = 0;
    for (const auto& p : peaks) {
        const dsp::Peak* prev = nullptr;
        for (const auto& t : troughs)
            if (t.t < p.t) prev = &t;
        if (!prev) continue;
        exc_sum += p.amplitude - (-prev->amplitude);
        ++exc_n;
    }
    out.tidal_proxy = exc_n > 0 ? exc_sum / static_cast<double>(exc_n) : 0.0;
    out.minute_vent_proxy = out.rate * out.tidal_proxy;
    return out;
}

}  // namespace sapred
