#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/types.hpp"

namespace sapred {

// Near-zero baselines make division variants meaningless; those values are
// marked missing and imputed downstream instead of propagating huge outliers.
constexpr double kDivBaselineFloor = 1e-12;

struct BaselineVariants {
    // indexed by Variant enum order
    std::array<double, 6> values{};

    double operator[](Variant v) const { return values[static_cast<std::size_t>(v)]; }
};

// Expands one raw per-epoch value into the six baselining variants. The
// standardized variant needs the column of raw values across the row set
// (sample SD; zero-variance columns standardize to 0).
inline BaselineVariants apply_baselines(double v, double pre_trial_baseline,
                                        double pre_experiment_baseline,
                                        double column_mean, double column_sd) {
    if (!std::isfinite(v)) throw Error("apply_baselines: raw value must be finite");
    BaselineVariants out;
    auto& a = out.values;
    a[static_cast<std::size_t>(Variant::Raw)] = v;
    a[static_cast<std::size_t>(Variant::Standardized)] =
        column_sd > 0 ? (v - column_mean) / column_sd : 0.0;

    auto minus = [&](double b) { return is_missing(b) ? missing_value() : v - b; };
    auto divide = [&](double b) {
        if (is_missing(b) || std::abs(b) < kDivBaselineFloor) return missing_value();
        return v / b;
    };
    a[static_cast<std::size_t>(Variant::MinusPreTrial)] = minus(pre_trial_baseline);
    a[static_cast<std::size_t>(Variant::DivPreTrial)] = divide(pre_trial_baseline);
    a[static_cast<std::size_t>(Variant::MinusPreExp)] = minus(pre_experiment_baseline);
    a[static_cast<std::size_t>(Variant::DivPreExp)] = divide(pre_experiment_baseline);
    return out;
}

// Column statistics over non-missing values (sample SD).
inline std::pair<double, double> column_mean_sd(const std::vector<double>& column) {
    double sum = 0;
    std::size_t n = 0;
    for (double v : column)
        if (!is_missing(v)) {
            sum += v;
            ++n;
        }
    if (n == 0) return {0.0, 0.0};
    double mean = sum / static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    double ss = 0;
    for (double v : column)
        if (!is_missing(v)) ss += sqr(v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(n - 1))};
}

}  // namespace sapred
