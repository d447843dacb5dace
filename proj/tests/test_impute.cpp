#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "sapred/dataset/impute.hpp"
#include "sapred/rng.hpp"

using namespace sapred;

namespace {

FeatureMatrix grid(const std::vector<std::string>& participants, int trials, int cols) {
    FeatureMatrix m;
    for (int c = 0; c < cols; ++c) {
        FeatureKey k;
        k.sensor = Modality::ECG;
        k.feature = "f" + std::to_string(c);
        m.columns.push_back(k);
    }
    for (const auto& p : participants)
        for (int t = 1; t <= trials; ++t) {
            m.rows.push_back({p, t});
            m.values.emplace_back(cols, 0.0);
        }
    return m;
}

}  // namespace

TEST_CASE("interior gaps fill by linear interpolation over trials", "[impute]") {
    auto m = grid({"a"}, 3, 1);
    m.values[0][0] = 2.0;
    m.values[1][0] = missing_value();
    m.values[2][0] = 4.0;
    auto out = impute_features(m);
    CHECK(out.values[1][0] == Catch::Approx(3.0));
}

TEST_CASE("leading and trailing gaps extend the nearest value", "[impute]") {
    auto m = grid({"a"}, 3, 1);
    m.values[0][0] = missing_value();
    m.values[1][0] = 5.0;
    m.values[2][0] = 6.0;
    auto out = impute_features(m);
    CHECK(out.values[0][0] == 5.0);

    auto m2 = grid({"a"}, 3, 1);
    m2.values[0][0] = 1.0;
    m2.values[1][0] = 2.0;
    m2.values[2][0] = missing_value();
    CHECK(impute_features(m2).values[2][0] == 2.0);
}

TEST_CASE("whole-participant gaps use the mean of the 12 nearest rows", "[impute]") {
    // 20 donor rows + 1 participant entirely missing column 1; verify the
    // fill equals a brute-force exhaustive-distance oracle
    std::vector<std::string> donors;
    for (int i = 0; i < 20; ++i) donors.push_back("d" + std::to_string(i + 10));
    auto ids = donors;
    ids.push_back("x");
    auto m = grid(ids, 1, 3);
    Rng rng(77);
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c = 0; c < 3; ++c) m.values[r][c] = rng.normal();
    std::size_t target = m.n_rows() - 1;
    m.values[target][1] = missing_value();

    // oracle: standardize columns 0 and 2 over non-missing values, rank donors
    auto col_stats = [&](std::size_t c) {
        std::vector<double> v;
        for (std::size_t r = 0; r < m.n_rows(); ++r)
            if (!is_missing(m.values[r][c])) v.push_back(m.values[r][c]);
        double mu = mean_of(v);
        return std::pair<double, double>(mu, sample_sd(v));
    };
    auto [mu0, sd0] = col_stats(0);
    auto [mu2, sd2] = col_stats(2);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t r = 0; r + 1 < m.n_rows(); ++r) {
        double d0 = (m.values[target][0] - mu0) / sd0 - (m.values[r][0] - mu0) / sd0;
        double d2 = (m.values[target][2] - mu2) / sd2 - (m.values[r][2] - mu2) / sd2;
        dist.emplace_back(std::sqrt((d0 * d0 + d2 * d2) / 2.0), r);
    }
    std::stable_sort(dist.begin(), dist.end());
    double expect = 0;
    for (int k = 0; k < 12; ++k) expect += m.values[dist[k].second][1];
    expect /= 12.0;

    auto out = impute_features(m);
    CHECK(out.values[target][1] == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("thirteen-row fixture averages all twelve donors", "[impute]") {
    std::vector<std::string> ids;
    for (int i = 0; i < 13; ++i) ids.push_back("p" + std::to_string(i + 10));
    auto m = grid(ids, 1, 2);
    Rng rng(5);
    double sum = 0;
    for (std::size_t r = 0; r < 13; ++r) {
        m.values[r][0] = rng.normal();
        m.values[r][1] = static_cast<double>(r);
        if (r < 12) sum += static_cast<double>(r);
    }
    m.values[12][1] = missing_value();
    auto out = impute_features(m);
    CHECK(out.values[12][1] == Catch::Approx(sum / 12.0));
}

TEST_CASE("imputation is idempotent", "[impute]") {
    auto m = grid({"a", "b", "c"}, 4, 3);
    Rng rng(9);
    for (auto& row : m.values)
        for (auto& v : row) v = rng.normal();
    m.values[1][0] = missing_value();
    m.values[4][2] = missing_value();
    m.values[5][2] = missing_value();
    auto once = impute_features(m);
    auto twice = impute_features(once);
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c = 0; c < m.n_cols(); ++c) REQUIRE(once.values[r][c] == twice.values[r][c]);
    CHECK(!once.any_missing());
}

TEST_CASE("a column with no values anywhere is an error", "[impute]") {
    auto m = grid({"a", "b"}, 2, 2);
    for (std::size_t r = 0; r < m.n_rows(); ++r) m.values[r][1] = missing_value();
    CHECK_THROWS_WITH(impute_features(m), Catch::Matchers::ContainsSubstring("every row"));
}
