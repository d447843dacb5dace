#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapred/common.hpp"

namespace sapred {

enum class Modality { ECG, RSP, EDA, EEG, FNIRS, EYE };

inline const char* modality_name(Modality m) {
    switch (m) {
        case Modality::ECG: return "ecg";
        case Modality::RSP: return "rsp";
        case Modality::EDA: return "eda";
        case Modality::EEG: return "eeg";
        case Modality::FNIRS: return "fnirs";
        case Modality::EYE: return "eye";
    }
    return "?";
}

inline std::optional<Modality> modality_from_name(std::string_view s) {
    if (s == "ecg") return Modality::ECG;
    if (s == "rsp") return Modality::RSP;
    if (s == "eda") return Modality::EDA;
    if (s == "eeg") return Modality::EEG;
    if (s == "fnirs") return Modality::FNIRS;
    if (s == "eye") return Modality::EYE;
    return std::nullopt;
}

// One modality's multichannel recording. Channels share a fixed sampling
// rate and equal length; samples are stored channel-major.
struct SignalTrace {
    Modality modality = Modality::ECG;
    std::vector<std::string> channels;
    double fs = 0;  // Hz
    double t0 = 0;  // recording start, seconds
    std::vector<std::vector<double>> samples;  // [channel][time]

    std::size_t n_samples() const { return samples.empty() ? 0 : samples[0].size(); }
    double duration() const { return n_samples() > 1 ? (n_samples() - 1) / fs : 0.0; }
    double t_end() const { return t0 + duration(); }

    int channel_index(const std::string& label) const {
        auto it = std::find(channels.begin(), channels.end(), label);
        return it == channels.end() ? -1 : static_cast<int>(it - channels.begin());
    }

    void validate() const {
        if (fs <= 0) throw Error("trace fs must be > 0");
        if (channels.size() != samples.size()) throw Error("channel label/sample count mismatch");
        for (const auto& ch : samples)
            if (ch.size() != n_samples()) throw Error("ragged channels");
        for (const auto& ch : samples)
            for (double v : ch)
                if (!std::isfinite(v)) throw Error("non-finite sample in trace");
    }

    // Samples whose timestamps fall in [start, end]; clipped to the recording.
    std::vector<double> slice(int channel, double start, double end) const {
        std::vector<double> out;
        if (channel < 0 || channel >= static_cast<int>(samples.size())) return out;
        long i0 = static_cast<long>(std::ceil((start - t0) * fs - 1e-9));
        long i1 = static_cast<long>(std::floor((end - t0) * fs + 1e-9));
        i0 = std::max(i0, 0L);
        i1 = std::min(i1, static_cast<long>(n_samples()) - 1);
        if (i1 < i0) return out;
        out.assign(samples[channel].begin() + i0, samples[channel].begin() + i1 + 1);
        return out;
    }
};

enum class EventKind { ExperimentStart, TrialStart, TrialEnd, Fixation, Blink, Question, Other };

struct Event {
    double t = 0;  // seconds
    EventKind kind = EventKind::Other;
    // Payload fields; unused ones stay at defaults.
    int trial = 0;
    double duration = 0;  // fixation/blink, seconds
    double x = 0, y = 0;  // fixation position
    std::string question_id;
    int level = 0;
    bool correct = false;
    std::string raw_kind;  // original kind string for Other
};

// Timestamped event log; the epoching backbone. Kept sorted by time.
struct EventStream {
    std::vector<Event> events;

    // Sorts if needed; reports whether input was out of order.
    bool normalize() {
        bool sorted = std::is_sorted(events.begin(), events.end(),
                                     [](const Event& a, const Event& b) { return a.t < b.t; });
        if (!sorted)
            std::stable_sort(events.begin(), events.end(),
                             [](const Event& a, const Event& b) { return a.t < b.t; });
        return !sorted;
    }

    std::vector<const Event*> of_kind(EventKind k) const {
        std::vector<const Event*> out;
        for (const auto& e : events)
            if (e.kind == k) out.push_back(&e);
        return out;
    }
};

enum class EpochKind { PreExperimentBaseline, PreTrialBaseline, FullTrial, Final20s };

inline const char* epoch_name(EpochKind k) {
    switch (k) {
        case EpochKind::PreExperimentBaseline: return "pre_experiment";
        case EpochKind::PreTrialBaseline: return "pre_trial";
        case EpochKind::FullTrial: return "full_trial";
        case EpochKind::Final20s: return "final_20s";
    }
    return "?";
}

inline std::optional<EpochKind> epoch_from_name(std::string_view s) {
    if (s == "pre_experiment") return EpochKind::PreExperimentBaseline;
    if (s == "pre_trial") return EpochKind::PreTrialBaseline;
    if (s == "full_trial") return EpochKind::FullTrial;
    if (s == "final_20s") return EpochKind::Final20s;
    return std::nullopt;
}

struct EpochWindow {
    EpochKind kind = EpochKind::FullTrial;
    double start = 0, end = 0;  // seconds
    int trial = 0;              // 0 for the pre-experiment baseline
    bool clipped = false;

    double length() const { return end - start; }
};

// Baselining variant of a per-epoch feature value.
enum class Variant { Raw, Standardized, MinusPreTrial, DivPreTrial, MinusPreExp, DivPreExp };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Raw: return "raw";
        case Variant::Standardized: return "standardized";
        case Variant::MinusPreTrial: return "minus_pre_trial";
        case Variant::DivPreTrial: return "div_pre_trial";
        case Variant::MinusPreExp: return "minus_pre_exp";
        case Variant::DivPreExp: return "div_pre_exp";
    }
    return "?";
}

inline std::optional<Variant> variant_from_name(std::string_view s) {
    if (s == "raw") return Variant::Raw;
    if (s == "standardized") return Variant::Standardized;
    if (s == "minus_pre_trial") return Variant::MinusPreTrial;
    if (s == "div_pre_trial") return Variant::DivPreTrial;
    if (s == "minus_pre_exp") return Variant::MinusPreExp;
    if (s == "div_pre_exp") return Variant::DivPreExp;
    return std::nullopt;
}

constexpr Variant kAllVariants[] = {Variant::Raw,          Variant::Standardized,
                                    Variant::MinusPreTrial, Variant::DivPreTrial,
                                    Variant::MinusPreExp,   Variant::DivPreExp};

// Identifies one feature-matrix column. Canonical string form is
// <sensor>.<channel>.<feature>.<epoch>.<variant>, unique and parseable.
// Channel and feature labels must not contain '.'.
struct FeatureKey {
    Modality sensor = Modality::ECG;
    std::string channel = "all";
    std::string feature;
    EpochKind epoch = EpochKind::FullTrial;
    Variant variant = Variant::Raw;

    std::string str() const {
        std::string s = modality_name(sensor);
        s += '.';
        s += channel;
        s += '.';
        s += feature;
        s += '.';
        s += epoch_name(epoch);
        s += '.';
        s += variant_name(variant);
        return s;
    }

    static FeatureKey parse(std::string_view s) {
        std::vector<std::string_view> parts;
        std::size_t pos = 0;
        while (true) {
            std::size_t dot = s.find('.', pos);
            if (dot == std::string_view::npos) {
                parts.push_back(s.substr(pos));
                break;
            }
            parts.push_back(s.substr(pos, dot - pos));
            pos = dot + 1;
        }
        if (parts.size() != 5) throw Error("bad feature key '" + std::string(s) + "'");
        FeatureKey k;
        auto m = modality_from_name(parts[0]);
        auto e = epoch_from_name(parts[3]);
        auto v = variant_from_name(parts[4]);
        if (!m || !e || !v) throw Error("bad feature key '" + std::string(s) + "'");
        k.sensor = *m;
        k.channel = std::string(parts[1]);
        k.feature = std::string(parts[2]);
        k.epoch = *e;
        k.variant = *v;
        return k;
    }

    bool operator==(const FeatureKey& o) const {
        return sensor == o.sensor && channel == o.channel && feature == o.feature &&
               epoch == o.epoch && variant == o.variant;
    }
    bool operator<(const FeatureKey& o) const { return str() < o.str(); }
};

struct RowId {
    std::string participant;
    int trial = 0;
    bool operator==(const RowId& o) const { return participant == o.participant && trial == o.trial; }
    bool operator<(const RowId& o) const {
        return participant != o.participant ? participant < o.participant : trial < o.trial;
    }
};

// Trials x features grid; NaN marks missing. Columns are ordered by their
// canonical key strings so the layout is reproducible.
struct FeatureMatrix {
    std::vector<RowId> rows;
    std::vector<FeatureKey> columns;
    std::vector<std::vector<double>> values;  // [row][col]

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return columns.size(); }

    int col_index(const std::string& key_str) const {
        for (std::size_t j = 0; j < columns.size(); ++j)
            if (columns[j].str() == key_str) return static_cast<int>(j);
        return -1;
    }

    bool any_missing() const {
        for (const auto& r : values)
            for (double v : r)
                if (is_missing(v)) return true;
        return false;
    }
};

}  // namespace sapred
