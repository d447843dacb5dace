#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sapred/features/eda.hpp"
#include "sapred/rng.hpp"

using namespace sapred;

namespace {

constexpr double kFs = 25.0;

std::vector<double> flat(double level, double seconds) {
    return std::vector<double>(static_cast<std::size_t>(seconds * kFs), level);
}

// injects a Bateman-shaped response with the given peak amplitude; uses the
// library kernel as the forward model (forward-convolution oracle)
void inject_scr(std::vector<double>& x, double onset_s, double peak_amp) {
    auto k = bateman_kernel(kFs, 1.0, 3.75);
    double kmax = 0;
    for (double v : k) kmax = std::max(kmax, v);
    std::size_t i0 = static_cast<std::size_t>(onset_s * kFs);
    for (std::size_t j = 0; j < k.size() && i0 + j < x.size(); ++j)
        x[i0 + j] += peak_amp * k[j] / kmax;
}

double rms(const std::vector<double>& v) {
    double s = 0;
    for (double a : v) s += a * a;
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("out-of-range sample is rejected and filled from neighbours", "[eda]") {
    auto x = flat(5.0, 30.0);
    x[400] = 45.0;
    auto res = eda_clean(x, kFs);
    CHECK(res.rejected[400]);
    CHECK(res.rejected_count >= 1);
    CHECK(res.samples[400] == Catch::Approx(5.0).margin(0.1));
    CHECK(!res.low_quality);
}

TEST_CASE("step edges violate the slew limits", "[eda]") {
    auto x = flat(2.0, 30.0);
    for (std::size_t i = 400; i < x.size(); ++i) x[i] = 10.0;
    auto res = eda_clean(x, kFs);
    bool edge_rejected = false;
    for (std::size_t i = 395; i <= 405; ++i) edge_rejected = edge_rejected || res.rejected[i];
    CHECK(edge_rejected);
}

TEST_CASE("clean slow drift passes through nearly unchanged", "[eda]") {
    std::vector<double> x(static_cast<std::size_t>(60.0 * kFs));
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = static_cast<double>(i) / kFs;
        x[i] = 5.0 + 0.3 * std::sin(2.0 * std::numbers::pi * 0.01 * t);
    }
    auto res = eda_clean(x, kFs);
    CHECK(res.rejected_count == 0);
    double dev = 0;
    for (std::size_t i = 0; i < x.size(); ++i) dev = std::max(dev, std::abs(res.samples[i] - x[i]));
    CHECK(dev < 1e-3);
}

TEST_CASE("cleaning an already-clean signal is idempotent", "[eda]") {
    std::vector<double> x(static_cast<std::size_t>(60.0 * kFs));
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = static_cast<double>(i) / kFs;
        x[i] = 4.0 + 0.2 * std::sin(2.0 * std::numbers::pi * 0.02 * t);
    }
    auto once = eda_clean(x, kFs);
    auto twice = eda_clean(once.samples, kFs);
    double dev = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        dev = std::max(dev, std::abs(once.samples[i] - twice.samples[i]));
    CHECK(dev < 1e-3);
}

TEST_CASE("constant conductance decomposes to pure tonic", "[eda]") {
    auto x = flat(5.0, 120.0);
    auto d = eda_decompose(x, kFs);
    CHECK(d.scrs.empty());
    for (std::size_t i = 0; i < x.size(); ++i) {
        REQUIRE(std::abs(d.tonic[i] - 5.0) <= 0.05);
        REQUIRE(std::abs(d.phasic[i]) <= 0.05);
    }
}

TEST_CASE("a single injected response is recovered", "[eda]") {
    auto x = flat(3.0, 120.0);
    inject_scr(x, 40.0, 0.6);
    auto d = eda_decompose(x, kFs);
    REQUIRE(d.scrs.size() == 1);
    CHECK(d.scrs[0].amplitude == Catch::Approx(0.6).epsilon(0.10));
    CHECK(d.scrs[0].onset == Catch::Approx(40.0).margin(2.0));
    CHECK(d.scrs[0].area > 0.0);
}

TEST_CASE("two responses ten seconds apart are both recovered", "[eda]") {
    auto x = flat(3.0, 150.0);
    inject_scr(x, 50.0, 0.5);
    inject_scr(x, 60.0, 0.8);
    auto d = eda_decompose(x, kFs);
    REQUIRE(d.scrs.size() == 2);
    double total = d.scrs[0].amplitude + d.scrs[1].amplitude;
    CHECK(total == Catch::Approx(1.3).epsilon(0.10));
}

TEST_CASE("tonic plus phasic reconstructs the signal", "[eda]") {
    Rng rng(3);
    std::vector<double> x(static_cast<std::size_t>(180.0 * kFs));
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = static_cast<double>(i) / kFs;
        x[i] = 4.0 + 0.5 * std::sin(2.0 * std::numbers::pi * t / 180.0);
    }
    inject_scr(x, 30.0, 0.4);
    inject_scr(x, 90.0, 0.7);
    inject_scr(x, 140.0, 0.3);
    auto d = eda_decompose(x, kFs);
    std::vector<double> resid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) resid[i] = x[i] - d.tonic[i] - d.phasic[i];
    CHECK(rms(resid) <= 0.05 * sample_sd(x));
    for (const auto& scr : d.scrs) REQUIRE(scr.area >= 0.0);
}

TEST_CASE("epoch features respect ordering invariants", "[eda]") {
    auto x = flat(3.0, 120.0);
    inject_scr(x, 30.0, 0.5);
    inject_scr(x, 70.0, 0.4);
    auto d = eda_decompose(x, kFs);
    auto f = eda_features(d, kFs, 20.0, 100.0);
    CHECK(f.tonic_min <= f.tonic_mean);
    CHECK(f.tonic_mean <= f.tonic_max);
    CHECK(f.scr_count >= 1.0);
    REQUIRE(f.scr_mean_amplitude.has_value());
    CHECK(f.scr_sum_amplitude >= *f.scr_mean_amplitude);
    CHECK(f.scr_auc >= 0.0);
}

TEST_CASE("heavy artefact load flags low quality but still returns", "[eda]") {
    Rng rng(9);
    std::vector<double> x(static_cast<std::size_t>(30.0 * kFs));
    for (auto& v : x) v = 20.0 + 15.0 * rng.normal();  // wild jumps, many out of range
    Warnings w;
    auto res = eda_clean(x, kFs, {}, &w);
    CHECK(res.low_quality);
    CHECK(res.samples.size() == x.size());
    for (double v : res.samples) REQUIRE(std::isfinite(v));
}
