#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/dataset/baseline.hpp"
#include "sapred/types.hpp"

namespace sapred {

// Fills missing feature values in three stages:
//  1. within each participant/column, interior gaps by linear interpolation
//     over trial order,
//  2. leading/trailing gaps by nearest-value extension,
//  3. columns missing for an entire participant by the per-row mean of that
//     column over the 12 nearest rows (Euclidean distance on the shared
//     non-missing standardized columns).
// A column with no observed value anywhere is unusable and raises an error.
inline FeatureMatrix impute_features(const FeatureMatrix& input, Warnings* warnings = nullptr,
                                     int k_neighbors = 12) {
    FeatureMatrix m = input;
    const std::size_t nr = m.n_rows(), nc = m.n_cols();

    std::map<std::string, std::vector<std::size_t>> by_participant;
    for (std::size_t r = 0; r < nr; ++r) by_participant[m.rows[r].participant].push_back(r);
    for (auto& [p, idx] : by_participant)
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return m.rows[a].trial < m.rows[b].trial; });

    for (std::size_t c = 0; c < nc; ++c) {
        bool any_value = false;
        for (std::size_t r = 0; r < nr; ++r)
            if (!is_missing(m.values[r][c])) {
                any_value = true;
                break;
            }
        if (!any_value)
            throw Error("feature '" + m.columns[c].str() + "' is missing in every row");
    }

    // stages 1 and 2
    for (auto& [participant, idx] : by_participant) {
        for (std::size_t c = 0; c < nc; ++c) {
            std::vector<std::size_t> have;
            for (std::size_t k = 0; k < idx.size(); ++k)
                if (!is_missing(m.values[idx[k]][c])) have.push_back(k);
            if (have.empty() || have.size() == idx.size()) continue;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                double& v = m.values[idx[k]][c];
                if (!is_missing(v)) continue;
                auto next = std::lower_bound(have.begin(), have.end(), k);
                if (next == have.begin()) {
                    v = m.values[idx[have.front()]][c];  // leading gap
                } else if (next == have.end()) {
                    v = m.values[idx[have.back()]][c];  // trailing gap
                } else {
                    std::size_t k1 = *(next - 1), k2 = *next;
                    double t1 = static_cast<double>(m.rows[idx[k1]].trial);
                    double t2 = static_cast<double>(m.rows[idx[k2]].trial);
                    double t = static_cast<double>(m.rows[idx[k]].trial);
                    double w = t2 > t1 ? (t - t1) / (t2 - t1) : 0.5;
                    v = m.values[idx[k1]][c] * (1.0 - w) + m.values[idx[k2]][c] * w;
                }
            }
        }
    }

    // stage 3: whole-participant gaps via nearest rows
    std::vector<std::pair<std::size_t, std::size_t>> holes;  // (row, col)
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c)
            if (is_missing(m.values[r][c])) holes.emplace_back(r, c);
    if (holes.empty()) return m;

    warn(warnings, std::to_string(holes.size()) + " values imputed by nearest-row averaging");

    std::vector<double> mean(nc), sd(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        std::vector<double> col(nr);
        for (std::size_t r = 0; r < nr; ++r) col[r] = m.values[r][c];
        auto [mu, sig] = column_mean_sd(col);
        mean[c] = mu;
        sd[c] = sig;
    }
    // distances are computed on the pre-fill state so fill order cannot matter
    std::vector<std::vector<double>> filled_snapshot = m.values;
    for (auto [r, c] : holes) {
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t r2 = 0; r2 < nr; ++r2) {
            if (r2 == r || is_missing(filled_snapshot[r2][c])) continue;
            double ss = 0;
            std::size_t shared = 0;
            for (std::size_t c2 = 0; c2 < nc; ++c2) {
                if (is_missing(filled_snapshot[r][c2]) || is_missing(filled_snapshot[r2][c2]))
                    continue;
                double a = sd[c2] > 0 ? (filled_snapshot[r][c2] - mean[c2]) / sd[c2] : 0.0;
                double b = sd[c2] > 0 ? (filled_snapshot[r2][c2] - mean[c2]) / sd[c2] : 0.0;
                ss += sqr(a - b);
                ++shared;
            }
            double d = shared > 0 ? std::sqrt(ss / static_cast<double>(shared))
                                  : std::numeric_limits<double>::infinity();
            dist.emplace_back(d, r2);
        }
        if (dist.empty())
            throw Error("cannot impute '" + m.columns[c].str() + "': no donor rows");
        std::stable_sort(dist.begin(), dist.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::size_t take = std::min<std::size_t>(dist.size(), static_cast<std::size_t>(k_neighbors));
        double s = 0;
        for (std::size_t k = 0; k < take; ++k) s += filled_snapshot[dist[k].second][c];
        m.values[r][c] = s / static_cast<double>(take);
    }
    return m;
}

}  // namespace sapred
