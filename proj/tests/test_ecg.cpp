#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "sapred/dsp/filter.hpp"
#include "sapred/features/ecg.hpp"
#include "sapred/rng.hpp"

using namespace sapred;

namespace {

// Gaussian R waves at the given beat times; this generator is the oracle.
std::vector<double> synth_ecg(const std::vector<double>& beat_times, double fs, double seconds,
                              double noise_sd, std::uint64_t seed) {
    std::vector<double> x(static_cast<std::size_t>(seconds * fs), 0.0);
    Rng rng(seed);
    for (double bt : beat_times) {
        long centre = static_cast<long>(bt * fs);
        long width = static_cast<long>(0.04 * fs);
        for (long i = centre - 3 * width; i <= centre + 3 * width; ++i) {
            if (i < 0 || i >= static_cast<long>(x.size())) continue;
            double dt = (static_cast<double>(i) - bt * fs) / fs;
            x[i] += std::exp(-0.5 * dt * dt / (0.01 * 0.01));
        }
    }
    for (auto& v : x) v += noise_sd * rng.normal();
    return x;
}

std::vector<double> paper_prefilter(const std::vector<double>& x, double fs) {
    auto y = dsp::butterworth_filter(x, fs, {dsp::FilterKind::BandPass, 1.0, 100.0, 4, true});
    return dsp::butterworth_filter(y, fs, {dsp::FilterKind::BandStop, 55.0, 65.0, 4, true});
}

}  // namespace

TEST_CASE("R peaks land within 20 ms of the planted beats", "[ecg]") {
    const double fs = 250.0;
    std::vector<double> truth;
    for (double t = 0.5; t < 59.0; t += 1.0) truth.push_back(t);
    auto ecg = paper_prefilter(synth_ecg(truth, fs, 60.0, 0.03, 11), fs);
    auto beats = detect_r_peaks(ecg, fs);
    REQUIRE(beats.size() == truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i)
        REQUIRE(std::abs(beats[i] - truth[i]) <= 0.020);
}

TEST_CASE("flat signal yields no beats and missing variability", "[ecg]") {
    std::vector<double> flat(5000, 0.0);
    auto beats = detect_r_peaks(flat, 250.0);
    CHECK(beats.empty());
    auto hrv = hrv_features(beats, 0.0, 20.0);
    CHECK(!hrv.heart_rate.has_value());
    CHECK(!hrv.rmssd.has_value());
}

TEST_CASE("beats spaced wider than the refractory period all survive", "[ecg]") {
    const double fs = 250.0;
    std::vector<double> truth;
    for (double t = 0.5; t < 29.5; t += 0.5) truth.push_back(t);  // 120 bpm
    auto ecg = paper_prefilter(synth_ecg(truth, fs, 30.0, 0.02, 21), fs);
    auto beats = detect_r_peaks(ecg, fs);
    CHECK(beats.size() == truth.size());
}

TEST_CASE("constant rhythm gives rate with zero variability", "[ecg]") {
    std::vector<double> beats;
    for (double t = 0.0; t <= 30.0; t += 1.0) beats.push_back(t);
    auto hrv = hrv_features(beats, 0.0, 30.0);
    REQUIRE(hrv.heart_rate.has_value());
    CHECK(*hrv.heart_rate == Catch::Approx(60.0));
    CHECK(*hrv.rmssd == 0.0);
    CHECK(*hrv.sdsd == 0.0);
    CHECK(*hrv.pnn50 == 0.0);
}

TEST_CASE("alternating 0.9/1.1 s intervals force rmssd 200 ms and pnn50 100", "[ecg]") {
    std::vector<double> beats = {0.0};
    for (int i = 0; i < 40; ++i) beats.push_back(beats.back() + (i % 2 == 0 ? 0.9 : 1.1));
    auto hrv = hrv_features(beats, 0.0, 100.0);
    REQUIRE(hrv.rmssd.has_value());
    CHECK(*hrv.rmssd == Catch::Approx(200.0).margin(1e-9));
    CHECK(*hrv.pnn50 == 100.0);
}

TEST_CASE("metrics match a direct re-computation on random intervals", "[ecg]") {
    Rng rng(77);
    std::vector<double> nn(50);
    for (auto& v : nn) v = 0.8 + 0.4 * rng.uniform();
    std::vector<double> beats = {0.0};
    for (double v : nn) beats.push_back(beats.back() + v);
    auto hrv = hrv_features(beats, -1.0, beats.back() + 1.0);

    // independent computation straight from the interval list
    double hr = 60.0 * static_cast<double>(nn.size()) /
                std::accumulate(nn.begin(), nn.end(), 0.0);
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < nn.size(); ++i) diffs.push_back((nn[i + 1] - nn[i]) * 1000.0);
    double sq = 0;
    int big = 0;
    for (double d : diffs) {
        sq += d * d;
        if (std::abs(d) > 50.0) ++big;
    }
    CHECK(*hrv.heart_rate == Catch::Approx(hr).margin(1e-9));
    CHECK(*hrv.rmssd == Catch::Approx(std::sqrt(sq / diffs.size())).margin(1e-9));
    CHECK(*hrv.pnn50 == Catch::Approx(100.0 * big / static_cast<double>(diffs.size())).margin(1e-9));
    // rmssd^2 equals the mean squared successive difference by definition
    CHECK((*hrv.rmssd) * (*hrv.rmssd) == Catch::Approx(sq / diffs.size()).margin(1e-6));
    CHECK(*hrv.rmssd >= 0.0);
    CHECK(*hrv.sdsd >= 0.0);
}

TEST_CASE("two beats give rate only", "[ecg]") {
    std::vector<double> beats = {1.0, 1.8};
    auto hrv = hrv_features(beats, 0.0, 3.0);
    REQUIRE(hrv.heart_rate.has_value());
    CHECK(*hrv.heart_rate == Catch::Approx(75.0));
    CHECK(!hrv.rmssd.has_value());
}

TEST_CASE("complementary pnn50 convention is available", "[ecg]") {
    std::vector<double> beats = {0.0};
    for (int i = 0; i < 10; ++i) beats.push_back(beats.back() + (i % 2 == 0 ? 0.9 : 1.1));
    EcgConfig cfg;
    cfg.pnn50_below = true;
    auto hrv = hrv_features(beats, 0.0, 20.0, cfg);
    CHECK(*hrv.pnn50 == 0.0);  // every |difference| is 200 ms, none below 50
}
