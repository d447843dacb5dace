#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sapred/dsp/fft.hpp"
#include "sapred/dsp/welch.hpp"
#include "sapred/rng.hpp"

using namespace sapred;
using namespace sapred::dsp;

namespace {

double variance(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("sinusoid power concentrates in its band", "[dsp][welch]") {
    const double fs = 256.0;
    std::size_t n = static_cast<std::size_t>(60.0 * fs);
    std::vector<double> x(n);
    // unit-variance 10 Hz tone: amplitude sqrt(2)
    for (std::size_t i = 0; i < n; ++i)
        x[i] = std::sqrt(2.0) * std::sin(2.0 * std::numbers::pi * 10.0 * static_cast<double>(i) / fs);

    auto psd = welch_psd(x, fs);
    for (double p : psd.power) REQUIRE(p >= 0.0);

    double alpha = psd.band_power(8.0, 13.0);
    double total = psd.total_power();
    CHECK(alpha / total >= 0.90);

    // direct FFT oracle over the whole signal: energy near 10 Hz dominates
    auto spec = rfft(x, next_pow2(n));
    double peak_bin = 0;
    std::size_t peak_idx = 0;
    for (std::size_t k = 1; k < spec.size(); ++k)
        if (std::norm(spec[k]) > peak_bin) {
            peak_bin = std::norm(spec[k]);
            peak_idx = k;
        }
    double f_peak = fs * static_cast<double>(peak_idx) / static_cast<double>(next_pow2(n));
    CHECK(f_peak == Catch::Approx(10.0).margin(0.1));
}

TEST_CASE("white noise band power scales with bandwidth", "[dsp][welch]") {
    const double fs = 128.0;
    std::size_t n = static_cast<std::size_t>(120.0 * fs);
    double ratio_sum = 0;
    const int n_seeds = 5;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(1234 + seed);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.normal();
        auto psd = welch_psd(x, fs);
        double b1 = psd.band_power(4.0, 8.0);    // 4 Hz wide
        double b2 = psd.band_power(13.0, 30.0);  // 17 Hz wide
        ratio_sum += (b2 / b1) / (17.0 / 4.0);
    }
    CHECK(ratio_sum / n_seeds == Catch::Approx(1.0).epsilon(0.10));
}

TEST_CASE("integrated PSD approximates signal variance", "[dsp][welch]") {
    const double fs = 256.0;
    Rng rng(99);
    std::size_t n = static_cast<std::size_t>(30.0 * fs);
    std::vector<double> x(n);
    for (auto& v : x) v = 1.5 * rng.normal() + 0.3;
    auto psd = welch_psd(x, fs);
    double total = psd.total_power();
    CHECK(total == Catch::Approx(variance(x)).epsilon(0.01));
}

TEST_CASE("short signal falls back to a single segment with warning", "[dsp][welch]") {
    const double fs = 100.0;
    std::vector<double> x(200);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * 5.0 * static_cast<double>(i) / fs);
    Warnings w;
    auto psd = welch_psd(x, fs, 4.0, 0.5, &w);  // 4 s window > 2 s signal
    CHECK(!w.items.empty());
    CHECK(psd.band_power(4.0, 6.0) > psd.band_power(10.0, 12.0));
}

TEST_CASE("adjacent band powers add exactly", "[dsp][welch]") {
    const double fs = 128.0;
    Rng rng(7);
    std::vector<double> x(4096);
    for (auto& v : x) v = rng.normal();
    auto psd = welch_psd(x, fs);
    double a = psd.band_power(1.0, 4.0), b = psd.band_power(4.0, 8.0);
    double ab = psd.band_power(1.0, 8.0);
    CHECK(ab == Catch::Approx(a + b).margin(1e-12));
}
