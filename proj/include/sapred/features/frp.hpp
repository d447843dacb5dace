#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/features/montage.hpp"
#include "sapred/types.hpp"

namespace sapred {

struct FrpFeatures {
    std::optional<double> p100;          // uV, max over 0..200 ms post fixation
    std::optional<double> p100_latency;  // ms
    std::optional<double> n170;          // uV, mean from the P100 peak to 300 ms
    std::optional<double> cov_ratio;     // CoV(0..200ms) / CoV(-200..0ms)
};

// Fixation-related potentials: [-200, +300] ms segments around each fixation
// onset, per-segment baseline (the -200..0 ms mean) subtracted, averaged into
// an ERP per electrode. Segments that cross the epoch boundary are dropped;
// fewer than five usable fixations leaves the features missing.
inline std::map<std::string, FrpFeatures> frp_features(const SignalTrace& eeg,
                                                       const std::vector<double>& fixation_onsets,
                                                       double epoch_start, double epoch_end) {
    const double fs = eeg.fs;
    const long pre = static_cast<long>(std::lround(0.200 * fs));
    const long post = static_cast<long>(std::lround(0.300 * fs));
    const long seg_len = pre + post + 1;

    std::map<std::string, FrpFeatures> out;
    for (const char* electrode : Montage::frp_electrodes) {
        int ch = eeg.channel_index(electrode);
        FrpFeatures f;
        if (ch < 0) {
            out[electrode] = f;
            continue;
        }

        std::vector<double> erp(seg_len, 0.0);
        std::size_t used = 0;
        for (double onset : fixation_onsets) {
            if (onset - 0.200 < epoch_start || onset + 0.300 > epoch_end) continue;
            long centre = static_cast<long>(std::lround((onset - eeg.t0) * fs));
            long a = centre - pre, b = centre + post;
            if (a < 0 || b >= static_cast<long>(eeg.n_samples())) continue;
            const auto& x = eeg.samples[ch];
            double baseline = 0;
            for (long i = a; i <= centre; ++i) baseline += x[i];
            baseline /= static_cast<double>(centre - a + 1);
            for (long i = a; i <= b; ++i) erp[i - a] += x[i] - baseline;
            ++used;
        }
        if (used < 5) {
            out[electrode] = f;
            continue;
        }
        for (auto& v : erp) v /= static_cast<double>(used);

        // P100: max over 0..200 ms of the ERP
        long p100_end = std::min(seg_len - 1, pre + static_cast<long>(std::lround(0.200 * fs)));
        long imax = pre;
        for (long i = pre; i <= p100_end; ++i)
            if (erp[i] > erp[imax]) imax = i;
        f.p100 = erp[imax];
        f.p100_latency = 1000.0 * static_cast<double>(imax - pre) / fs;

        // N170: mean from the P100 peak to 300 ms
        double n170 = 0;
        for (long i = imax; i < seg_len; ++i) n170 += erp[i];
        f.n170 = n170 / static_cast<double>(seg_len - imax);

        // coefficient of variation over the FRP window vs the baseline window
        auto cov = [&](long a, long b) -> std::optional<double> {
            std::vector<double> w(erp.begin() + a, erp.begin() + b + 1);
            double m = mean_of(w), sd = sample_sd(w);
            if (std::abs(m) < 1e-300) return std::nullopt;  // zero-mean window
            return sd / std::abs(m);
        };
        auto cov_frp = cov(pre, p100_end);
        auto cov_base = cov(0, pre);
        if (cov_base && *cov_base >= 1e-12 && cov_frp) f.cov_ratio = *cov_frp / *cov_base;
        else if (!cov_base && cov_frp) f.cov_ratio = 0.0;  // baseline CoV diverges
        out[electrode] = f;
    }
    return out;
}

}  // namespace sapred
