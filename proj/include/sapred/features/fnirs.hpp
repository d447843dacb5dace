#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dsp/filter.hpp"
#include "sapred/dsp/resample.hpp"
#include "sapred/dsp/stats.hpp"
#include "sapred/features/montage.hpp"
#include "sapred/types.hpp"

namespace sapred {

struct FnirsSeries {
    std::vector<double> hbo, hbr;  // uM changes, 5 Hz
};

struct FnirsResult {
    std::map<std::string, FnirsSeries> channels;
    double fs = 5.0;
    double t0 = 0;
};

constexpr double kFnirsFs = 5.0;

// Raw optode intensities -> hemoglobin concentration changes: resample to
// 5 Hz, dOD = -log10(I / I_mean) per wavelength, invert the 2x2 modified
// Beer-Lambert system (extinction * distance * DPF), then 0.01-0.5 Hz
// zero-phase band-pass. Intensity channels are named <channel>_<wavelength>.
inline FnirsResult fnirs_pipeline(const SignalTrace& raw, const Montage& montage,
                                  Warnings* warnings = nullptr, bool bandpass = true) {
    FnirsResult out;
    out.t0 = raw.t0;
    if (montage.fnirs_channels.empty()) throw Error("fnirs_pipeline: montage has no channels");

    for (const auto& def : montage.fnirs_channels) {
        const ExtinctionRow* e1 = montage.extinction_at(def.wavelength1_nm);
        const ExtinctionRow* e2 = montage.extinction_at(def.wavelength2_nm);
        if (!e1 || !e2)
            throw Error("fnirs_pipeline: no extinction coefficients for channel " + def.name);
        const double d_cm = def.distance_mm / 10.0;
        const double pl = d_cm * montage.dpf;  // effective path length, cm
        // dOD_l = pl * (eps_hbo_l * dHbO + eps_hbr_l * dHbR)
        const double a = pl * e1->eps_hbo, b = pl * e1->eps_hbr;
        const double c = pl * e2->eps_hbo, d = pl * e2->eps_hbr;
        const double det = a * d - b * c;
        if (std::abs(det) < 1e-12)
            throw Error("fnirs_pipeline: singular extinction matrix for channel " + def.name);

        auto wl_name = [&](double wl) {
            return def.name + "_" + std::to_string(static_cast<int>(std::lround(wl)));
        };
        int i1 = raw.channel_index(wl_name(def.wavelength1_nm));
        int i2 = raw.channel_index(wl_name(def.wavelength2_nm));
        if (i1 < 0 || i2 < 0) {
            warn(warnings, "fnirs_pipeline: intensity channels for " + def.name + " not recorded");
            continue;
        }

        auto delta_od = [&](int ch) {
            std::vector<double> x = raw.samples[ch];
            // non-positive intensities cannot be log-transformed; interpolate over them
            std::size_t bad = 0;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] <= 0) {
                    ++bad;
                    std::size_t l = i, r = i;
                    while (l > 0 && x[l] <= 0) --l;
                    while (r + 1 < x.size() && x[r] <= 0) ++r;
                    double vl = x[l] > 0 ? x[l] : (x[r] > 0 ? x[r] : 1.0);
                    double vr = x[r] > 0 ? x[r] : vl;
                    double w = r > l ? static_cast<double>(i - l) / static_cast<double>(r - l) : 0.0;
                    x[i] = vl * (1.0 - w) + vr * w;
                }
            if (bad > 0)
                warn(warnings, "fnirs_pipeline: " + std::to_string(bad) +
                                   " non-positive intensity samples interpolated");
            if (raw.fs != kFnirsFs) x = dsp::resample(x, raw.fs, kFnirsFs);
            double i0 = mean_of(x);
            for (auto& v : x) v = -std::log10(v / i0);
            return x;
        };

        std::vector<double> od1 = delta_od(i1), od2 = delta_od(i2);
        std::size_t n = std::min(od1.size(), od2.size());
        FnirsSeries series;
        series.hbo.resize(n);
        series.hbr.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            series.hbo[i] = (d * od1[i] - b * od2[i]) / det;
            series.hbr[i] = (-c * od1[i] + a * od2[i]) / det;
        }
        if (bandpass) {
            dsp::FilterSpec spec{dsp::FilterKind::BandPass, 0.01, 0.5, 4, true};
            series.hbo = dsp::butterworth_filter(series.hbo, kFnirsFs, spec);
            series.hbr = dsp::butterworth_filter(series.hbr, kFnirsFs, spec);
        }
        out.channels[def.name] = std::move(series);
    }
    return out;
}

// Forward Beer-Lambert map (test oracle and synthetic-data generator):
// intensities from chosen concentration series around a resting level.
inline std::vector<double> fnirs_forward_intensity(const std::vector<double>& hbo,
                                                   const std::vector<double>& hbr,
                                                   const FnirsChannelDef& def,
                                                   const ExtinctionRow& ext, double dpf,
                                                   double i_rest = 1000.0) {
    const double pl = def.distance_mm / 10.0 * dpf;
    std::vector<double> out(hbo.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double od = pl * (ext.eps_hbo * hbo[i] + ext.eps_hbr * hbr[i]);
        out[i] = i_rest * std::pow(10.0, -od);
    }
    return out;
}

// Epoch statistics for one chromophore series (window relative to t0).
inline dsp::EpochStats fnirs_epoch_stats(const std::vector<double>& series, double t0,
                                         double epoch_start, double epoch_end) {
    long i0 = static_cast<long>(std::ceil((epoch_start - t0) * kFnirsFs - 1e-9));
    long i1 = static_cast<long>(std::floor((epoch_end - t0) * kFnirsFs + 1e-9));
    i0 = std::max(i0, 0L);
    i1 = std::min(i1, static_cast<long>(series.size()) - 1);
    if (i1 - i0 + 1 < 2) throw Error("fnirs_epoch_stats: epoch too short");
    std::vector<double> x(series.begin() + i0, series.begin() + i1 + 1);
    return dsp::epoch_stats(x, kFnirsFs);
}

}  // namespace sapred
