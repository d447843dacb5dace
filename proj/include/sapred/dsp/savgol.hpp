#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "sapred/common.hpp"

namespace sapred::dsp {

// Savitzky-Golay: least-squares local polynomial of the given order over an
// odd-length window; `deriv` selects the value (0) or a derivative (1 or 2)
// of the local fit at the window centre. NaN samples are ignored by the fit
// and thereby filled. Edge windows are clipped, which reproduces polynomials
// exactly there as well. `dt` is the sample spacing for derivative scaling.
inline std::vector<double> savitzky_golay_fit(const std::vector<double>& x, int order, int window,
                                              int deriv, double dt) {
    const long n = static_cast<long>(x.size());
    if (window % 2 == 0 || window <= order) throw Error("savgol window must be odd and > order");
    if (window >= n) throw Error("savgol window must be shorter than the signal");
    if (deriv < 0 || deriv > 2 || deriv > order) throw Error("savgol deriv must be 0..2 and <= order");

    const long h = window / 2;
    const int m = order + 1;
    std::vector<double> out(x.size());
    Eigen::MatrixXd ata(m, m);
    Eigen::VectorXd atb(m);

    for (long i = 0; i < n; ++i) {
        long lo = std::max(0L, i - h), hi = std::min(n - 1, i + h);
        ata.setZero();
        atb.setZero();
        int count = 0;
        for (long j = lo; j <= hi; ++j) {
            if (is_missing(x[j])) continue;
            double t = static_cast<double>(j - i) / static_cast<double>(h);  // in [-1, 1]
            double powers[16];
            double p = 1.0;
            for (int k = 0; k < m; ++k) {
                powers[k] = p;
                p *= t;
            }
            for (int r = 0; r < m; ++r) {
                for (int c = r; c < m; ++c) ata(r, c) += powers[r] * powers[c];
                atb(r) += powers[r] * x[j];
            }
            ++count;
        }
        if (count == 0 || count <= deriv) {
            out[i] = missing_value();
            continue;
        }
        int deg = std::min(m, count);  // degrade gracefully in sparse windows
        Eigen::MatrixXd a = ata.topLeftCorner(deg, deg).selfadjointView<Eigen::Upper>();
        Eigen::VectorXd coef = a.ldlt().solve(atb.head(deg));
        double hs = static_cast<double>(h) * dt;  // scale back from normalised t
        if (deriv == 0) out[i] = coef(0);
        else if (deriv == 1) out[i] = deg > 1 ? coef(1) / hs : 0.0;
        else out[i] = deg > 2 ? 2.0 * coef(2) / (hs * hs) : 0.0;
    }
    return out;
}

inline std::vector<double> savitzky_golay(const std::vector<double>& x, int order = 3,
                                          int window = 11) {
    return savitzky_golay_fit(x, order, window, 0, 1.0);
}

}  // namespace sapred::dsp
