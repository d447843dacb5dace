#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sapred/dsp/resample.hpp"
#include "sapred/dsp/stats.hpp"

using namespace sapred;
using namespace sapred::dsp;

TEST_CASE("downsampled sinusoid matches the analytic signal", "[dsp][resample]") {
    const double fs_in = 100.0, fs_out = 5.0, f = 1.0;
    std::vector<double> x(3000);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs_in);
    auto y = resample(x, fs_in, fs_out);
    std::vector<double> ref(y.size());
    for (std::size_t k = 0; k < y.size(); ++k)
        ref[k] = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(k) / fs_out);
    CHECK(*pearson_corr(y, ref) > 0.999);
}

TEST_CASE("constants survive rate conversion", "[dsp][resample]") {
    std::vector<double> x(500, 7.3);
    auto y = resample(x, 100.0, 5.0);
    for (double v : y) REQUIRE(v == Catch::Approx(7.3).margin(1e-9));
    auto up = resample(x, 100.0, 250.0);
    for (double v : up) REQUIRE(v == Catch::Approx(7.3).margin(1e-9));
}

TEST_CASE("equal rates return the identical samples", "[dsp][resample]") {
    std::vector<double> x = {1.0, -2.0, 3.5, 0.25, 9.0};
    auto y = resample(x, 42.0, 42.0);
    REQUIRE(y == x);
}

TEST_CASE("duration preserved within one output period", "[dsp][resample]") {
    std::vector<double> x(977, 1.0);
    const double fs_in = 97.0, fs_out = 13.0;
    auto y = resample(x, fs_in, fs_out);
    double dur_in = static_cast<double>(x.size() - 1) / fs_in;
    double dur_out = static_cast<double>(y.size() - 1) / fs_out;
    CHECK(std::abs(dur_in - dur_out) <= 1.0 / fs_out + 1e-12);
}

TEST_CASE("tiny inputs are rejected", "[dsp][resample]") {
    std::vector<double> x = {1.0, 2.0, 3.0};
    CHECK_THROWS(resample(x, 10.0, 5.0));
}
