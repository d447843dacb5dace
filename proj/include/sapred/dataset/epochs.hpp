#pragma once

#include <limits>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/types.hpp"

namespace sapred {

// Derives the analysis windows from trial boundaries: per trial a full-trial
// window, its final 20 s, and a 30 s pre-trial baseline; plus one 2-minute
// pre-experiment baseline. Windows extending past the recording start or a
// trial shorter than 20 s are clipped with a warning.
inline std::vector<EpochWindow> slice_epochs(
    const EventStream& events, Warnings* warnings = nullptr,
    double recording_start = -std::numeric_limits<double>::infinity()) {
    auto starts = events.of_kind(EventKind::TrialStart);
    auto ends = events.of_kind(EventKind::TrialEnd);
    auto exp = events.of_kind(EventKind::ExperimentStart);
    if (starts.empty() || ends.empty()) throw Error("no trial boundaries in event stream");
    if (exp.empty()) throw Error("no experiment-start event");
    if (starts.size() != ends.size()) throw Error("unbalanced trial-start/trial-end events");

    std::vector<EpochWindow> out;
    out.push_back({EpochKind::PreExperimentBaseline, exp[0]->t, exp[0]->t + 120.0, 0, false});

    for (std::size_t i = 0; i < starts.size(); ++i) {
        const double s = starts[i]->t, e = ends[i]->t;
        const int trial = starts[i]->trial != 0 ? starts[i]->trial : static_cast<int>(i) + 1;
        if (e <= s) throw Error("trial " + std::to_string(trial) + " has non-positive length");

        out.push_back({EpochKind::FullTrial, s, e, trial, false});

        EpochWindow f20{EpochKind::Final20s, e - 20.0, e, trial, false};
        if (f20.start < s) {
            f20.start = s;
            f20.clipped = true;
            warn(warnings, "trial " + std::to_string(trial) + " shorter than 20 s; final-20s window clipped");
        }
        out.push_back(f20);

        EpochWindow ptb{EpochKind::PreTrialBaseline, s - 30.0, s, trial, false};
        if (ptb.start < recording_start) {
            ptb.start = recording_start;
            ptb.clipped = true;
            warn(warnings, "trial " + std::to_string(trial) + " pre-trial baseline clipped at recording start");
        }
        out.push_back(ptb);
    }
    return out;
}

}  // namespace sapred
