#pragma once

#include <cmath>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dsp/filter.hpp"

namespace sapred::dsp {

// Rate conversion: anti-alias low-pass at 0.45*fs_out when downsampling, then
// linear interpolation onto the new uniform grid. Output spans the input
// duration to within one sample period.
inline std::vector<double> resample(const std::vector<double>& x, double fs_in, double fs_out) {
    if (fs_in <= 0 || fs_out <= 0) throw Error("resample rates must be positive");
    if (x.size() < 4) throw Error("resample needs at least 4 samples");
    if (fs_in == fs_out) return x;

    const std::vector<double>* src = &x;
    std::vector<double> filtered;
    if (fs_out < fs_in) {
        filtered = lowpass_zero_phase(x, fs_in, 0.45 * fs_out, 4);
        src = &filtered;
    }

    const double duration = static_cast<double>(x.size() - 1) / fs_in;
    const std::size_t n_out = static_cast<std::size_t>(std::floor(duration * fs_out + 1e-9)) + 1;
    std::vector<double> out(n_out);
    for (std::size_t k = 0; k < n_out; ++k) {
        double t = static_cast<double>(k) / fs_out;
        double pos = t * fs_in;
        std::size_t i = std::min(static_cast<std::size_t>(pos), x.size() - 2);
        double w = pos - static_cast<double>(i);
        out[k] = (*src)[i] * (1.0 - w) + (*src)[i + 1] * w;
    }
    return out;
}

}  // namespace sapred::dsp
