#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dsp/filter.hpp"
#include "sapred/dsp/stats.hpp"
#include "sapred/dsp/welch.hpp"
#include "sapred/features/montage.hpp"
#include "sapred/types.hpp"

namespace sapred {

enum class EegBand { Delta, Theta, Alpha, Beta, Gamma };

struct BandRange {
    EegBand band;
    const char* name;
    double lo, hi;
};

// delta 1-4, theta 4-8, alpha 8-13, beta 13-30, gamma 30-50 Hz
inline const std::array<BandRange, 5>& eeg_bands() {
    static const std::array<BandRange, 5> bands = {{{EegBand::Delta, "delta", 1.0, 4.0},
                                                    {EegBand::Theta, "theta", 4.0, 8.0},
                                                    {EegBand::Alpha, "alpha", 8.0, 13.0},
                                                    {EegBand::Beta, "beta", 13.0, 30.0},
                                                    {EegBand::Gamma, "gamma", 30.0, 50.0}}};
    return bands;
}

constexpr double kEegTotalLo = 1.0, kEegTotalHi = 50.0;

// Optional artifact-rejection stage; identity unless a caller installs one.
using ArtifactHook = std::function<void(SignalTrace&)>;

// 0.5-50 Hz zero-phase band-pass per channel, then the artifact hook.
inline SignalTrace eeg_preprocess(const SignalTrace& raw, const ArtifactHook& hook = {}) {
    if (raw.fs < 128.0) throw Error("eeg_preprocess needs fs >= 128 Hz");
    SignalTrace out = raw;
    dsp::FilterSpec spec{dsp::FilterKind::BandPass, 0.5, 50.0, 4, true};
    for (auto& ch : out.samples) ch = dsp::butterworth_filter(ch, out.fs, spec);
    if (hook) hook(out);
    return out;
}

struct ScopePowers {
    std::map<std::string, double> absolute;  // band name -> power
    std::map<std::string, double> relative;  // band name -> band / total(1-50)
    double total = 0;
};

struct BandPowerSet {
    std::map<std::string, ScopePowers> scopes;  // "all" + region names
    std::optional<double> engagement_index;     // beta / (alpha + theta)
    std::optional<double> task_load_index;      // frontal theta / parietal alpha
};

// Welch band powers per channel averaged within each scope (overall and the
// four cortical regions), with relative power against the 1-50 Hz total.
inline BandPowerSet eeg_band_features(const SignalTrace& eeg, const Montage& montage,
                                      double epoch_start, double epoch_end,
                                      Warnings* warnings = nullptr) {
    BandPowerSet out;
    std::map<std::string, std::vector<int>> scope_channels;
    for (std::size_t c = 0; c < eeg.channels.size(); ++c)
        scope_channels["all"].push_back(static_cast<int>(c));
    for (const auto& [label, region] : montage.electrodes) {
        int idx = eeg.channel_index(label);
        if (idx >= 0) scope_channels[region_name(region)].push_back(idx);
    }

    // per-channel band powers, computed once and shared between scopes
    std::map<int, std::array<double, 6>> channel_powers;  // 5 bands + total
    for (int c : scope_channels["all"]) {
        auto x = eeg.slice(c, epoch_start, epoch_end);
        if (x.size() < 16) throw Error("eeg_band_features: epoch too short");
        auto psd = dsp::welch_psd(x, eeg.fs, 4.0, 0.5, warnings);
        std::array<double, 6> p{};
        for (std::size_t b = 0; b < 5; ++b)
            p[b] = psd.band_power(eeg_bands()[b].lo, eeg_bands()[b].hi);
        p[5] = psd.band_power(kEegTotalLo, kEegTotalHi);
        channel_powers[c] = p;
    }

    for (const auto& [scope, channels] : scope_channels) {
        if (channels.empty()) continue;
        ScopePowers sp;
        std::array<double, 6> avg{};
        for (int c : channels)
            for (std::size_t b = 0; b < 6; ++b) avg[b] += channel_powers[c][b];
        for (auto& v : avg) v /= static_cast<double>(channels.size());
        sp.total = avg[5];
        for (std::size_t b = 0; b < 5; ++b) {
            sp.absolute[eeg_bands()[b].name] = avg[b];
            sp.relative[eeg_bands()[b].name] = sp.total > 0 ? avg[b] / sp.total : 0.0;
        }
        out.scopes[scope] = std::move(sp);
    }

    const auto& all = out.scopes.at("all").absolute;
    double denom = all.at("alpha") + all.at("theta");
    if (denom > 0) out.engagement_index = all.at("beta") / denom;

    auto frontal = out.scopes.find("frontal");
    auto parietal = out.scopes.find("parietal");
    if (frontal != out.scopes.end() && parietal != out.scopes.end()) {
        double pa = parietal->second.absolute.at("alpha");
        if (pa > 0) out.task_load_index = frontal->second.absolute.at("theta") / pa;
    }
    return out;
}

// Correlation of each frontal electrode with the mean of the occipital trio.
inline std::map<std::string, std::optional<double>> eeg_connectivity(
    const SignalTrace& eeg, const Montage& montage, double epoch_start, double epoch_end) {
    auto occ_labels = montage.electrodes_in(Region::Occipital);
    std::vector<std::vector<double>> occ;
    for (const auto& label : occ_labels) {
        int idx = eeg.channel_index(label);
        if (idx >= 0) occ.push_back(eeg.slice(idx, epoch_start, epoch_end));
    }
    if (occ.empty()) throw Error("eeg_connectivity: no occipital channels present");
    std::vector<double> reference(occ[0].size(), 0.0);
    for (const auto& ch : occ)
        for (std::size_t i = 0; i < reference.size(); ++i) reference[i] += ch[i];
    for (auto& v : reference) v /= static_cast<double>(occ.size());

    std::map<std::string, std::optional<double>> out;
    for (const auto& label : montage.electrodes_in(Region::Frontal)) {
        int idx = eeg.channel_index(label);
        if (idx < 0) continue;
        auto x = eeg.slice(idx, epoch_start, epoch_end);
        out[label] = dsp::pearson_corr(x, reference);
    }
    return out;
}

}  // namespace sapred
