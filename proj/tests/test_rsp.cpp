#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sapred/features/rsp.hpp"

using namespace sapred;

TEST_CASE("quarter-hertz breathing: rate 15, unit amplitude, tidal 2", "[rsp]") {
    const double fs = 25.0;
    std::vector<double> x(static_cast<std::size_t>(60.0 * fs));
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * 0.25 * static_cast<double>(i) / fs);
    auto f = rsp_features(x, fs);
    CHECK(f.rate == Catch::Approx(15.0).margin(0.1));
    CHECK(f.median_amplitude == Catch::Approx(1.0).margin(0.01));
    CHECK(f.tidal_proxy == Catch::Approx(2.0).margin(0.02));
    CHECK(f.minute_vent_proxy == f.rate * f.tidal_proxy);
}

TEST_CASE("constant trace has zero rate", "[rsp]") {
    std::vector<double> x(500, 0.2);
    Warnings w;
    auto f = rsp_features(x, 25.0, {}, &w);
    CHECK(f.rate == 0.0);
    CHECK(!w.items.empty());
}

TEST_CASE("median amplitude equals the median of the planted peak heights", "[rsp]") {
    // explicit bumps with known heights at 4 s spacing
    const double fs = 25.0;
    std::vector<double> heights = {2.0, 1.0, 3.0, 5.0, 4.0, 2.5, 1.5};
    std::vector<double> x(static_cast<std::size_t>(32.0 * fs), 0.0);
    for (std::size_t b = 0; b < heights.size(); ++b) {
        double centre = 3.0 + 4.0 * static_cast<double>(b);
        for (std::size_t i = 0; i < x.size(); ++i) {
            double dt = static_cast<double>(i) / fs - centre;
            x[i] += heights[b] * std::exp(-0.5 * dt * dt / (0.36));
        }
    }
    auto f = rsp_features(x, fs);
    // hand-sorted heights: 1, 1.5, 2, 2.5, 3, 4, 5 -> median 2.5
    CHECK(f.median_amplitude == Catch::Approx(2.5).margin(0.05));
}

TEST_CASE("epochs shorter than 10 s are rejected", "[rsp]") {
    std::vector<double> x(100, 0.0);
    CHECK_THROWS(rsp_features(x, 25.0));
}
