#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "sapred/common.hpp"

namespace sapred::dsp {

struct Peak {
    double t = 0;          // seconds from signal start
    double amplitude = 0;
    std::size_t index = 0;
};

// Local maxima with topographic prominence >= min_prominence; among peaks
// closer than min_distance_s the taller one survives (ties: earlier time).
// Plateaus report their first sample.
inline std::vector<Peak> find_peaks(const std::vector<double>& x, double fs,
                                    double min_prominence = 0.0, double min_distance_s = 0.0) {
    const std::size_t n = x.size();
    std::vector<std::size_t> cand;
    std::size_t i = 1;
    while (n >= 3 && i < n - 1) {
        if (x[i] > x[i - 1]) {
            // walk over a possible plateau
            std::size_t j = i;
            while (j + 1 < n && x[j + 1] == x[i]) ++j;
            if (j + 1 < n && x[j + 1] < x[i]) cand.push_back(i);
            i = j + 1;
        } else {
            ++i;
        }
    }

    // prominence: lowest point between the peak and the nearest higher ground
    // on each side (or the signal edge), base = the higher of the two minima
    std::vector<Peak> peaks;
    for (std::size_t idx : cand) {
        double h = x[idx];
        double left_min = h;
        for (std::size_t k = idx; k-- > 0;) {
            if (x[k] > h) break;
            left_min = std::min(left_min, x[k]);
        }
        double right_min = h;
        for (std::size_t k = idx + 1; k < n; ++k) {
            if (x[k] > h) break;
            right_min = std::min(right_min, x[k]);
        }
        double prominence = h - std::max(left_min, right_min);
        if (prominence >= min_prominence)
            peaks.push_back({static_cast<double>(idx) / fs, h, idx});
    }

    if (min_distance_s > 0 && peaks.size() > 1) {
        // keep taller peaks first; suppress neighbours inside the exclusion zone
        std::vector<std::size_t> order(peaks.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (peaks[a].amplitude != peaks[b].amplitude)
                return peaks[a].amplitude > peaks[b].amplitude;
            return peaks[a].t < peaks[b].t;
        });
        std::vector<bool> keep(peaks.size(), true);
        for (std::size_t oi : order) {
            if (!keep[oi]) continue;
            for (std::size_t k = 0; k < peaks.size(); ++k) {
                if (k == oi || !keep[k]) continue;
                if (std::abs(peaks[k].t - peaks[oi].t) < min_distance_s) keep[k] = false;
            }
        }
        std::vector<Peak> filtered;
        for (std::size_t k = 0; k < peaks.size(); ++k)
            if (keep[k]) filtered.push_back(peaks[k]);
        peaks = std::move(filtered);
    }
    return peaks;
}

}  // namespace sapred::dsp
