#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sapred/common.hpp"
#include "sapred/csv.hpp"
#include "sapred/types.hpp"

namespace sapred {

struct Response {
    int trial = 0;
    std::string question_id;
    int level = 0;
    bool correct = false;
};

struct ParticipantData {
    std::string id;
    std::map<Modality, SignalTrace> traces;
    EventStream events;
    std::vector<Response> responses;

    const SignalTrace* trace(Modality m) const {
        auto it = traces.find(m);
        return it == traces.end() ? nullptr : &it->second;
    }

    double recording_start() const {
        double t = std::numeric_limits<double>::infinity();
        for (const auto& [mod, tr] : traces) t = std::min(t, tr.t0);
        return std::isfinite(t) ? t : 0.0;
    }
};

struct Dataset {
    std::vector<ParticipantData> participants;

    const ParticipantData* find(const std::string& id) const {
        for (const auto& p : participants)
            if (p.id == id) return &p;
        return nullptr;
    }
};

namespace detail {

inline EventKind event_kind_from(std::string_view s) {
    if (s == "experiment-start") return EventKind::ExperimentStart;
    if (s == "trial-start") return EventKind::TrialStart;
    if (s == "trial-end") return EventKind::TrialEnd;
    if (s == "fixation") return EventKind::Fixation;
    if (s == "blink") return EventKind::Blink;
    if (s == "question") return EventKind::Question;
    return EventKind::Other;
}

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::ExperimentStart: return "experiment-start";
        case EventKind::TrialStart: return "trial-start";
        case EventKind::TrialEnd: return "trial-end";
        case EventKind::Fixation: return "fixation";
        case EventKind::Blink: return "blink";
        case EventKind::Question: return "question";
        case EventKind::Other: return "other";
    }
    return "other";
}

// Signal files are plain numeric CSV; parse in place without per-field
// allocation since EEG files run to millions of values.
inline SignalTrace load_signal_csv(const std::string& path, Modality modality) {
    std::string content = read_file(path);
    SignalTrace trace;
    trace.modality = modality;
    std::vector<double> times;
    bool header_done = false;

    for_each_line(content, [&](std::size_t lineno, std::string_view line) {
        if (!header_done) {
            auto fields = split_csv_line(line);
            if (fields.empty() || fields[0] != "t")
                throw Error(path + ": first header column must be 't'");
            for (std::size_t i = 1; i < fields.size(); ++i) trace.channels.push_back(fields[i]);
            trace.samples.resize(trace.channels.size());
            header_done = true;
            return;
        }
        const char* p = line.data();
        const char* end = line.data() + line.size();
        std::size_t field = 0;
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            double v = 0;
            auto res = std::from_chars(p, comma, v);
            if (res.ec != std::errc() || !std::isfinite(v))
                throw Error(path + ": malformed value at line " + std::to_string(lineno));
            if (field == 0) times.push_back(v);
            else if (field <= trace.channels.size()) trace.samples[field - 1].push_back(v);
            else throw Error(path + ": too many columns at line " + std::to_string(lineno));
            ++field;
            if (comma == end) break;
            p = comma + 1;
        }
        if (field != trace.channels.size() + 1)
            throw Error(path + ": wrong column count at line " + std::to_string(lineno));
    });

    if (times.size() < 2) throw Error(path + ": need at least 2 samples");
    trace.t0 = times.front();
    double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (dt <= 0) throw Error(path + ": time column must increase");
    trace.fs = 1.0 / dt;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 + 1e-6 * dt)
            throw Error(path + ": non-uniform sampling at line " + std::to_string(i + 2));
    }
    trace.validate();
    return trace;
}

inline EventStream load_events_csv(const std::string& path, const std::string& participant,
                                   Warnings* warnings) {
    std::string content = read_file(path);
    EventStream stream;
    bool header_done = false;
    for_each_line(content, [&](std::size_t lineno, std::string_view line) {
        if (!header_done) {
            header_done = true;
            return;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw Error(path + ": expected 3 columns at line " + std::to_string(lineno));
        Event e;
        e.t = parse_double(fields[0], path + " line " + std::to_string(lineno));
        e.kind = event_kind_from(fields[1]);
        e.raw_kind = fields[1];
        if (!fields[2].empty()) {
            nlohmann::json payload = nlohmann::json::parse(fields[2], nullptr, false);
            if (payload.is_discarded())
                throw Error(path + ": bad payload JSON at line " + std::to_string(lineno));
            if (payload.contains("trial")) e.trial = payload["trial"].get<int>();
            if (payload.contains("duration")) e.duration = payload["duration"].get<double>();
            if (payload.contains("x")) e.x = payload["x"].get<double>();
            if (payload.contains("y")) e.y = payload["y"].get<double>();
            if (payload.contains("id")) e.question_id = payload["id"].get<std::string>();
            if (payload.contains("level")) e.level = payload["level"].get<int>();
            if (payload.contains("correct")) e.correct = payload["correct"].get<bool>();
        }
        if ((e.kind == EventKind::Fixation || e.kind == EventKind::Blink) && e.duration <= 0)
            throw Error(path + ": non-positive event duration at line " + std::to_string(lineno));
        stream.events.push_back(std::move(e));
    });
    if (stream.normalize())
        warn(warnings, "participant " + participant + ": events out of order, sorted");
    if (stream.of_kind(EventKind::TrialStart).empty() || stream.of_kind(EventKind::TrialEnd).empty())
        throw Error("participant " + participant + ": missing trial-start/trial-end events");
    return stream;
}

inline std::vector<Response> load_responses_csv(const std::string& path) {
    std::string content = read_file(path);
    std::vector<Response> out;
    bool header_done = false;
    for_each_line(content, [&](std::size_t lineno, std::string_view line) {
        if (!header_done) {
            header_done = true;
            return;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw Error(path + ": expected 4 columns at line " + std::to_string(lineno));
        Response r;
        r.trial = static_cast<int>(parse_long(fields[0], path));
        r.question_id = fields[1];
        r.level = static_cast<int>(parse_long(fields[2], path));
        r.correct = parse_long(fields[3], path) != 0;
        out.push_back(std::move(r));
    });
    return out;
}

}  // namespace detail

// Loads dataset/<participant>/{signals/<modality>.csv, events.csv,
// responses.csv}. Unknown files are skipped with a warning; missing trial
// boundaries are a hard error naming the participant.
inline Dataset load_dataset(const std::string& root, Warnings* warnings = nullptr) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw Error("dataset root not found: " + root);
    Dataset ds;
    std::vector<std::string> participant_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) participant_dirs.push_back(entry.path().filename().string());
    std::sort(participant_dirs.begin(), participant_dirs.end());

    for (const auto& pid : participant_dirs) {
        ParticipantData pd;
        pd.id = pid;
        fs::path pdir = fs::path(root) / pid;

        fs::path sig_dir = pdir / "signals";
        if (fs::is_directory(sig_dir)) {
            std::vector<fs::path> files;
            for (const auto& f : fs::directory_iterator(sig_dir)) files.push_back(f.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                auto m = modality_from_name(f.stem().string());
                if (!m) {
                    warn(warnings, "ignoring unknown signal file " + f.string());
                    continue;
                }
                pd.traces[*m] = detail::load_signal_csv(f.string(), *m);
            }
        }

        fs::path ev = pdir / "events.csv";
        if (!fs::exists(ev))
            throw Error("participant " + pid + ": missing events.csv");
        pd.events = detail::load_events_csv(ev.string(), pid, warnings);

        fs::path resp = pdir / "responses.csv";
        if (fs::exists(resp)) pd.responses = detail::load_responses_csv(resp.string());
        else warn(warnings, "participant " + pid + ": no responses.csv");

        ds.participants.push_back(std::move(pd));
    }
    if (ds.participants.empty()) throw Error("dataset root has no participant directories");
    return ds;
}

// --- writers (shared by the synthetic generator and tests) ---

inline void write_signal_csv(const std::string& path, const SignalTrace& trace) {
    std::string out = "t";
    for (const auto& ch : trace.channels) {
        out += ',';
        out += csv_quote(ch);
    }
    out += '\n';
    const std::size_t n = trace.n_samples();
    for (std::size_t i = 0; i < n; ++i) {
        out += format_double(trace.t0 + static_cast<double>(i) / trace.fs);
        for (const auto& ch : trace.samples) {
            out += ',';
            out += format_double(ch[i]);
        }
        out += '\n';
    }
    write_file(path, out);
}

inline void write_events_csv(const std::string& path, const EventStream& stream) {
    std::string out = "t,kind,payload_json\n";
    for (const auto& e : stream.events) {
        nlohmann::json payload = nlohmann::json::object();
        switch (e.kind) {
            case EventKind::TrialStart:
            case EventKind::TrialEnd: payload["trial"] = e.trial; break;
            case EventKind::Fixation:
                payload["duration"] = e.duration;
                payload["x"] = e.x;
                payload["y"] = e.y;
                break;
            case EventKind::Blink: payload["duration"] = e.duration; break;
            case EventKind::Question:
                payload["id"] = e.question_id;
                payload["level"] = e.level;
                payload["correct"] = e.correct;
                break;
            default: break;
        }
        out += format_double(e.t);
        out += ',';
        out += detail::event_kind_name(e.kind);
        out += ',';
        out += csv_quote(payload.dump());
        out += '\n';
    }
    write_file(path, out);
}

inline void write_responses_csv(const std::string& path, const std::vector<Response>& responses) {
    std::string out = "trial,question_id,level,correct\n";
    for (const auto& r : responses) {
        out += std::to_string(r.trial);
        out += ',';
        out += csv_quote(r.question_id);
        out += ',';
        out += std::to_string(r.level);
        out += ',';
        out += r.correct ? '1' : '0';
        out += '\n';
    }
    write_file(path, out);
}

}  // namespace sapred
