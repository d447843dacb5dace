#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sapred/dsp/stats.hpp"
#include "sapred/rng.hpp"

using namespace sapred;
using namespace sapred::dsp;

TEST_CASE("constant epoch", "[dsp][stats]") {
    const double fs = 10.0, c = 4.2, seconds = 5.0;
    std::vector<double> x(static_cast<std::size_t>(fs * seconds) + 1, c);
    auto s = epoch_stats(x, fs);
    CHECK(s.mean == Catch::Approx(c));
    CHECK(s.variance == 0.0);
    CHECK(s.skew == 0.0);
    CHECK(s.kurtosis == 0.0);
    CHECK(s.slope == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.rms == Catch::Approx(std::abs(c)));
    CHECK(s.auc == Catch::Approx(c * seconds).margin(1e-9));
    CHECK(s.time_to_max == 0.0);
}

TEST_CASE("linear ramp", "[dsp][stats]") {
    const double fs = 100.0;
    std::vector<double> x(1001);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i) / fs;  // 0..10 over 10 s
    auto s = epoch_stats(x, fs);
    CHECK(s.slope == Catch::Approx(1.0).margin(1e-9));
    CHECK(s.max_amplitude == Catch::Approx(10.0));
    CHECK(s.time_to_max == Catch::Approx(10.0));
}

TEST_CASE("symmetric square wave", "[dsp][stats]") {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i / 50) % 2 == 0 ? 1.0 : -1.0;
    auto s = epoch_stats(x, 100.0);
    CHECK(s.mean == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.skew == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.rms == Catch::Approx(1.0));
}

TEST_CASE("AUC is additive across a shared boundary sample", "[dsp][stats]") {
    Rng rng(5);
    std::vector<double> x(400);
    for (auto& v : x) v = rng.normal();
    const double fs = 25.0;
    std::size_t k = 157;
    std::vector<double> left(x.begin(), x.begin() + k + 1);
    std::vector<double> right(x.begin() + k, x.end());
    auto all = epoch_stats(x, fs), l = epoch_stats(left, fs), r = epoch_stats(right, fs);
    CHECK(all.auc == Catch::Approx(l.auc + r.auc).margin(1e-10));
}

TEST_CASE("pearson correlation basics", "[dsp][stats]") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y(5), z(5);
    for (int i = 0; i < 5; ++i) {
        y[i] = 2.0 * x[i] + 1.0;
        z[i] = -x[i];
    }
    CHECK(*pearson_corr(x, y) == Catch::Approx(1.0));
    CHECK(*pearson_corr(x, z) == Catch::Approx(-1.0));
    std::vector<double> flat(5, 3.0);
    CHECK(!pearson_corr(x, flat).has_value());
}

TEST_CASE("independent noise correlates near zero", "[dsp][stats]") {
    Rng rng(42);
    std::vector<double> x(10000), y(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    CHECK(std::abs(*pearson_corr(x, y)) < 0.05);
}
