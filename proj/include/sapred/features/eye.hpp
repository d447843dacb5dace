#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/types.hpp"

namespace sapred {

struct Fixation {
    double onset = 0, duration = 0;
    double x = 0, y = 0;
};

struct EyeBasicFeatures {
    double blink_rate = 0;  // per minute
    std::optional<double> mean_blink_duration;
    std::optional<double> mean_pupil_diameter;
    std::optional<double> mean_fixation_duration;
};

// Blink/pupil/fixation summaries for one epoch. Pupil samples inside blink
// intervals are excluded (vendor pipelines zero the diameter during blinks).
inline EyeBasicFeatures eye_basic_features(const EventStream& events, const SignalTrace* pupil,
                                           double epoch_start, double epoch_end) {
    if (epoch_end <= epoch_start) throw Error("eye_basic_features: empty epoch");
    EyeBasicFeatures out;

    std::vector<std::pair<double, double>> blink_windows;
    double blink_dur_sum = 0;
    std::size_t blinks = 0, fixations = 0;
    double fix_dur_sum = 0;
    for (const auto& e : events.events) {
        if (e.kind == EventKind::Blink) {
            blink_windows.emplace_back(e.t, e.t + e.duration);
            if (e.t >= epoch_start && e.t <= epoch_end) {
                ++blinks;
                blink_dur_sum += e.duration;
            }
        } else if (e.kind == EventKind::Fixation) {
            if (e.t >= epoch_start && e.t <= epoch_end) {
                ++fixations;
                fix_dur_sum += e.duration;
            }
        }
    }
    out.blink_rate = static_cast<double>(blinks) / ((epoch_end - epoch_start) / 60.0);
    if (blinks > 0) out.mean_blink_duration = blink_dur_sum / static_cast<double>(blinks);
    if (fixations > 0) out.mean_fixation_duration = fix_dur_sum / static_cast<double>(fixations);

    if (pupil && pupil->n_samples() > 0) {
        const auto& x = pupil->samples[0];
        double sum = 0;
        std::size_t n = 0;
        long i0 = std::max(0L, static_cast<long>(std::ceil((epoch_start - pupil->t0) * pupil->fs)));
        long i1 = std::min(static_cast<long>(pupil->n_samples()) - 1,
                           static_cast<long>(std::floor((epoch_end - pupil->t0) * pupil->fs)));
        for (long i = i0; i <= i1; ++i) {
            double t = pupil->t0 + static_cast<double>(i) / pupil->fs;
            bool in_blink = false;
            for (const auto& [a, b] : blink_windows)
                if (t >= a && t <= b) {
                    in_blink = true;
                    break;
                }
            if (in_blink) continue;
            sum += x[i];
            ++n;
        }
        if (n > 0) out.mean_pupil_diameter = sum / static_cast<double>(n);
    }
    return out;
}

struct RqaMetrics {
    double recurrence = 0;  // %
    std::optional<double> determinism;       // %
    std::optional<double> laminarity;        // %
    std::optional<double> entropy;           // nats, diagonal line-length distribution
    std::optional<double> mean_line_length;  // fixations
    std::optional<double> corm;              // %, centre of recurrence mass
};

// Recurrence quantification over a fixation sequence: r_ij = 1 iff the two
// fixation positions lie within `radius`. Counts follow the upper-triangle
// convention of the eye-movement RQA literature; with no recurrent pair the
// R-normalised metrics stay missing.
inline RqaMetrics rqa(const std::vector<Fixation>& fixations, double radius, int min_line = 2) {
    const std::size_t n = fixations.size();
    if (n < 2) throw Error("rqa needs at least 2 fixations");
    RqaMetrics out;

    std::vector<std::vector<bool>> rec(n, std::vector<bool>(n, false));
    std::size_t r_pairs = 0;
    double weighted = 0;  // sum of (j - i) over recurrent upper-triangle pairs
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = fixations[i].x - fixations[j].x;
            double dy = fixations[i].y - fixations[j].y;
            if (std::sqrt(dx * dx + dy * dy) <= radius) {
                rec[i][j] = rec[j][i] = true;
                ++r_pairs;
                weighted += static_cast<double>(j - i);
            }
        }
    }

    double denom = static_cast<double>(n) * static_cast<double>(n - 1);
    out.recurrence = 100.0 * 2.0 * static_cast<double>(r_pairs) / denom;
    if (r_pairs == 0) return out;

    // diagonal lines in the upper triangle
    std::vector<std::size_t> line_lengths;
    std::size_t diag_points = 0;
    for (std::size_t d = 1; d < n; ++d) {
        std::size_t run = 0;
        for (std::size_t i = 0; i + d < n; ++i) {
            if (rec[i][i + d]) {
                ++run;
            } else {
                if (run >= static_cast<std::size_t>(min_line)) {
                    line_lengths.push_back(run);
                    diag_points += run;
                }
                run = 0;
            }
        }
        if (run >= static_cast<std::size_t>(min_line)) {
            line_lengths.push_back(run);
            diag_points += run;
        }
    }
    out.determinism = 100.0 * static_cast<double>(diag_points) / static_cast<double>(r_pairs);

    // horizontal and vertical lines in the upper triangle
    auto count_runs = [&](bool horizontal) {
        std::size_t points = 0;
        for (std::size_t a = 0; a < n; ++a) {
            std::size_t run = 0;
            for (std::size_t b = 0; b < n; ++b) {
                std::size_t i = horizontal ? a : b;
                std::size_t j = horizontal ? b : a;
                bool on = j > i && rec[i][j];
                if (on) {
                    ++run;
                } else {
                    if (run >= static_cast<std::size_t>(min_line)) points += run;
                    run = 0;
                }
            }
            if (run >= static_cast<std::size_t>(min_line)) points += run;
        }
        return points;
    };
    std::size_t hl = count_runs(true), vl = count_runs(false);
    out.laminarity = 100.0 * static_cast<double>(hl + vl) / (2.0 * static_cast<double>(r_pairs));

    if (!line_lengths.empty()) {
        std::map<std::size_t, std::size_t> hist;
        for (std::size_t l : line_lengths) ++hist[l];
        double h = 0;
        double total = static_cast<double>(line_lengths.size());
        for (const auto& [len, cnt] : hist) {
            double p = static_cast<double>(cnt) / total;
            h -= p * std::log(p);
        }
        out.entropy = h;
        double mean_len = 0;
        for (std::size_t l : line_lengths) mean_len += static_cast<double>(l);
        out.mean_line_length = mean_len / total;
    }

    out.corm = 100.0 * weighted / (static_cast<double>(n - 1) * static_cast<double>(r_pairs));
    return out;
}

// Fixations whose onset falls inside the window.
inline std::vector<Fixation> fixations_in(const EventStream& events, double start, double end) {
    std::vector<Fixation> out;
    for (const auto& e : events.events)
        if (e.kind == EventKind::Fixation && e.t >= start && e.t <= end)
            out.push_back({e.t, e.duration, e.x, e.y});
    return out;
}

// Optional dispersion-threshold fixation detector for datasets that lack
// fixation events: a fixation is a maximal run of gaze samples staying within
// `dispersion` of its centroid for at least `min_duration_s`.
inline std::vector<Fixation> detect_fixations_dispersion(const std::vector<double>& gx,
                                                         const std::vector<double>& gy, double fs,
                                                         double dispersion = 32.0,
                                                         double min_duration_s = 0.1) {
    std::vector<Fixation> out;
    const std::size_t n = std::min(gx.size(), gy.size());
    std::size_t min_len = std::max<std::size_t>(2, static_cast<std::size_t>(min_duration_s * fs));
    std::size_t i = 0;
    while (i + min_len <= n) {
        std::size_t j = i;
        double cx = 0, cy = 0;
        std::size_t count = 0;
        while (j < n) {
            double nx = (cx * count + gx[j]) / static_cast<double>(count + 1);
            double ny = (cy * count + gy[j]) / static_cast<double>(count + 1);
            bool ok = true;
            for (std::size_t k = i; k <= j && ok; ++k)
                ok = std::hypot(gx[k] - nx, gy[k] - ny) <= dispersion;
            if (!ok) break;
            cx = nx;
            cy = ny;
            ++count;
            ++j;
        }
        if (count >= min_len) {
            out.push_back({static_cast<double>(i) / fs, static_cast<double>(count) / fs, cx, cy});
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace sapred
