#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sapred/common.hpp"

namespace sapred::dsp {

using cplx = std::complex<double>;

enum class FilterKind { BandPass, BandStop };

struct FilterSpec {
    FilterKind kind = FilterKind::BandPass;
    double lo = 0, hi = 0;  // corner frequencies, Hz
    int order = 4;          // prototype order per pass
    bool zero_phase = true;
};

struct Biquad {
    double b0 = 1, b1 = 0, b2 = 0;  // numerator
    double a1 = 0, a2 = 0;          // denominator (a0 == 1)

    double dc_gain() const {
        return (b0 + b1 + b2) / (1.0 + a1 + a2);
    }
    cplx response(double omega) const {  // omega in rad/sample
        cplx z1 = std::polar(1.0, -omega);
        cplx z2 = z1 * z1;
        return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
    }
};

struct SosFilter {
    std::vector<Biquad> sections;

    cplx response(double f, double fs) const {
        double omega = 2.0 * std::numbers::pi * f / fs;
        cplx h(1.0, 0.0);
        for (const auto& s : sections) h *= s.response(omega);
        return h;
    }
};

namespace detail {

inline std::vector<cplx> butter_proto_poles(int order) {
    std::vector<cplx> p;
    for (int k = 0; k < order; ++k) {
        double theta = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
        p.emplace_back(std::cos(theta), std::sin(theta));
    }
    return p;
}

struct Zpk {
    std::vector<cplx> zeros, poles;
    double gain = 1.0;
};

inline Zpk lp2lp(const Zpk& in, double w0) {
    Zpk out;
    for (auto z : in.zeros) out.zeros.push_back(z * w0);
    for (auto p : in.poles) out.poles.push_back(p * w0);
    int degree = static_cast<int>(in.poles.size() - in.zeros.size());
    out.gain = in.gain * std::pow(w0, degree);
    return out;
}

inline Zpk lp2bp(const Zpk& in, double w0, double bw) {
    Zpk out;
    int degree = static_cast<int>(in.poles.size() - in.zeros.size());
    auto transform = [&](cplx s) {
        cplx shalf = s * bw / 2.0;
        cplx d = std::sqrt(shalf * shalf - w0 * w0);
        return std::pair<cplx, cplx>(shalf + d, shalf - d);
    };
    for (auto z : in.zeros) {
        auto [a, b] = transform(z);
        out.zeros.push_back(a);
        out.zeros.push_back(b);
    }
    for (auto p : in.poles) {
        auto [a, b] = transform(p);
        out.poles.push_back(a);
        out.poles.push_back(b);
    }
    for (int i = 0; i < degree; ++i) out.zeros.emplace_back(0.0, 0.0);
    out.gain = in.gain * std::pow(bw, degree);
    return out;
}

inline Zpk lp2bs(const Zpk& in, double w0, double bw) {
    Zpk out;
    int degree = static_cast<int>(in.poles.size() - in.zeros.size());
    auto transform = [&](cplx s) {
        cplx inv = (bw / 2.0) / s;
        cplx d = std::sqrt(inv * inv - w0 * w0);
        return std::pair<cplx, cplx>(inv + d, inv - d);
    };
    cplx num(1.0, 0.0), den(1.0, 0.0);
    for (auto z : in.zeros) num *= -z;
    for (auto p : in.poles) den *= -p;
    for (auto z : in.zeros) {
        auto [a, b] = transform(z);
        out.zeros.push_back(a);
        out.zeros.push_back(b);
    }
    for (auto p : in.poles) {
        auto [a, b] = transform(p);
        out.poles.push_back(a);
        out.poles.push_back(b);
    }
    for (int i = 0; i < degree; ++i) {
        out.zeros.emplace_back(0.0, w0);
        out.zeros.emplace_back(0.0, -w0);
    }
    out.gain = in.gain * (num / den).real();
    return out;
}

inline Zpk bilinear(const Zpk& in, double fs) {
    const double fs2 = 2.0 * fs;
    Zpk out;
    cplx num(1.0, 0.0), den(1.0, 0.0);
    for (auto z : in.zeros) {
        out.zeros.push_back((fs2 + z) / (fs2 - z));
        num *= (fs2 - z);
    }
    for (auto p : in.poles) {
        out.poles.push_back((fs2 + p) / (fs2 - p));
        den *= (fs2 - p);
    }
    int degree = static_cast<int>(in.poles.size() - in.zeros.size());
    for (int i = 0; i < degree; ++i) out.zeros.emplace_back(-1.0, 0.0);
    out.gain = in.gain * (num / den).real();
    return out;
}

// Groups a conjugate-symmetric root set into real quadratic (or final linear)
// factors: coefficient pairs (c1, c2) of z^2 + c1 z + c2.
inline std::vector<std::pair<double, double>> conjugate_pairs(std::vector<cplx> roots) {
    std::vector<std::pair<double, double>> out;
    const double tol = 1e-8;
    std::vector<cplx> complex_roots, real_roots;
    for (auto r : roots) {
        if (std::abs(r.imag()) > tol * (1.0 + std::abs(r))) complex_roots.push_back(r);
        else real_roots.emplace_back(r.real(), 0.0);
    }
    // match each positive-imag root with its nearest conjugate
    std::vector<cplx> pos;
    std::vector<cplx> neg;
    for (auto r : complex_roots) (r.imag() > 0 ? pos : neg).push_back(r);
    if (pos.size() != neg.size()) throw Error("filter design: unpaired complex roots");
    auto by_angle = [](const cplx& a, const cplx& b) {
        double aa = std::abs(a), ab = std::abs(b);
        return aa != ab ? aa < ab : std::arg(a) < std::arg(b);
    };
    std::sort(pos.begin(), pos.end(), by_angle);
    for (auto r : pos) {
        auto it = std::min_element(neg.begin(), neg.end(), [&](const cplx& a, const cplx& b) {
            return std::abs(a - std::conj(r)) < std::abs(b - std::conj(r));
        });
        cplx c = *it;
        neg.erase(it);
        out.emplace_back(-(r.real() + c.real()), (r * c).real());
    }
    std::sort(real_roots.begin(), real_roots.end(),
              [](const cplx& a, const cplx& b) { return a.real() < b.real(); });
    for (std::size_t i = 0; i + 1 < real_roots.size(); i += 2) {
        double r1 = real_roots[i].real(), r2 = real_roots[i + 1].real();
        out.emplace_back(-(r1 + r2), r1 * r2);
    }
    if (real_roots.size() % 2 == 1) {
        double r = real_roots.back().real();
        out.emplace_back(-r, 0.0);  // linear factor z - r, padded as z^2 - r z
    }
    return out;
}

inline SosFilter zpk_to_sos(const Zpk& zpk) {
    auto pole_pairs = conjugate_pairs(zpk.poles);
    auto zero_pairs = conjugate_pairs(zpk.zeros);
    if (zero_pairs.size() > pole_pairs.size()) throw Error("filter design: more zeros than poles");
    SosFilter f;
    for (std::size_t i = 0; i < pole_pairs.size(); ++i) {
        Biquad s;
        if (i < zero_pairs.size()) {
            s.b0 = 1.0;
            s.b1 = zero_pairs[i].first;
            s.b2 = zero_pairs[i].second;
        }
        s.a1 = pole_pairs[i].first;
        s.a2 = pole_pairs[i].second;
        f.sections.push_back(s);
    }
    if (!f.sections.empty()) {
        f.sections[0].b0 *= zpk.gain;
        f.sections[0].b1 *= zpk.gain;
        f.sections[0].b2 *= zpk.gain;
    }
    return f;
}

inline double prewarp(double f, double fs) {
    return 2.0 * fs * std::tan(std::numbers::pi * f / fs);
}

inline void normalize_at(SosFilter& f, double f_ref, double fs) {
    double mag = std::abs(f.response(f_ref, fs));
    if (mag <= 0 || !std::isfinite(mag)) throw Error("filter design: degenerate response");
    double scale = 1.0 / mag;
    f.sections[0].b0 *= scale;
    f.sections[0].b1 *= scale;
    f.sections[0].b2 *= scale;
}

}  // namespace detail

inline SosFilter design_lowpass(int order, double fc, double fs) {
    if (!(fc > 0 && fc < fs / 2)) throw Error("lowpass corner must satisfy 0 < fc < fs/2");
    detail::Zpk proto{{}, detail::butter_proto_poles(order), 1.0};
    auto analog = detail::lp2lp(proto, detail::prewarp(fc, fs));
    auto f = detail::zpk_to_sos(detail::bilinear(analog, fs));
    detail::normalize_at(f, 0.0, fs);
    return f;
}

inline SosFilter design_bandpass(int order, double lo, double hi, double fs) {
    if (!(0 < lo && lo < hi && hi < fs / 2))
        throw Error("bandpass corners must satisfy 0 < lo < hi < fs/2");
    double w1 = detail::prewarp(lo, fs), w2 = detail::prewarp(hi, fs);
    double w0 = std::sqrt(w1 * w2), bw = w2 - w1;
    detail::Zpk proto{{}, detail::butter_proto_poles(order), 1.0};
    auto analog = detail::lp2bp(proto, w0, bw);
    auto f = detail::zpk_to_sos(detail::bilinear(analog, fs));
    // analog |H(j w0)| is exactly 1; pin the digital response there
    double f_center = fs / std::numbers::pi * std::atan(w0 / (2.0 * fs));
    detail::normalize_at(f, f_center, fs);
    return f;
}

inline SosFilter design_bandstop(int order, double lo, double hi, double fs) {
    if (!(0 < lo && lo < hi && hi < fs / 2))
        throw Error("bandstop corners must satisfy 0 < lo < hi < fs/2");
    double w1 = detail::prewarp(lo, fs), w2 = detail::prewarp(hi, fs);
    double w0 = std::sqrt(w1 * w2), bw = w2 - w1;
    detail::Zpk proto{{}, detail::butter_proto_poles(order), 1.0};
    auto analog = detail::lp2bs(proto, w0, bw);
    auto f = detail::zpk_to_sos(detail::bilinear(analog, fs));
    detail::normalize_at(f, 0.0, fs);
    return f;
}

namespace detail {

// One pass through the cascade, states initialised to the constant-input
// steady state for x0 so step edges at the boundary do not ring.
inline void sos_apply(const SosFilter& f, std::vector<double>& x) {
    if (x.empty()) return;
    double carry = x.front();
    for (const auto& s : f.sections) {
        double denom = 1.0 + s.a1 + s.a2;
        double K = std::abs(denom) > 1e-300 ? (s.b0 + s.b1 + s.b2) / denom : 0.0;
        double z1 = (K - s.b0) * carry;
        double z2 = (s.b2 - s.a2 * K) * carry;
        for (double& v : x) {
            double in = v;
            double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
        carry *= K;
    }
}

}  // namespace detail

// Forward-backward filtering with odd boundary extension (no group delay,
// squared magnitude response).
inline std::vector<double> sosfiltfilt(const SosFilter& f, const std::vector<double>& x,
                                       std::size_t padlen) {
    const std::size_t n = x.size();
    if (n < 2) return x;
    padlen = std::min(padlen, n - 1);
    std::vector<double> ext;
    ext.reserve(n + 2 * padlen);
    for (std::size_t i = padlen; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= padlen; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    detail::sos_apply(f, ext);
    std::reverse(ext.begin(), ext.end());
    detail::sos_apply(f, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + padlen, ext.begin() + padlen + n);
}

inline std::vector<double> sosfilt(const SosFilter& f, const std::vector<double>& x) {
    std::vector<double> out = x;
    detail::sos_apply(f, out);
    return out;
}

// Butterworth band-pass / band-stop per FilterSpec. Zero-phase mode runs the
// cascade forward and backward (effective order doubles, no phase shift).
inline std::vector<double> butterworth_filter(const std::vector<double>& x, double fs,
                                              const FilterSpec& spec) {
    if (!(spec.lo > 0 && spec.lo < spec.hi && spec.hi < fs / 2))
        throw Error("filter corners must satisfy 0 < lo < hi < fs/2");
    if (static_cast<long>(x.size()) <= 3L * spec.order)
        throw Error("signal too short for filter order");
    for (double v : x)
        if (!std::isfinite(v)) throw Error("non-finite sample in filter input");

    SosFilter f = spec.kind == FilterKind::BandPass
                      ? design_bandpass(spec.order, spec.lo, spec.hi, fs)
                      : design_bandstop(spec.order, spec.lo, spec.hi, fs);

    // transient scale follows the slowest dynamics in the design
    double slow = spec.kind == FilterKind::BandPass ? spec.lo : (spec.hi - spec.lo);
    std::size_t padlen = static_cast<std::size_t>(
        std::max(3.0 * (2.0 * f.sections.size() + 1.0), std::ceil(2.0 * fs / slow)));

    if (spec.zero_phase) return sosfiltfilt(f, x, padlen);
    return sosfilt(f, x);
}

// Zero-phase Butterworth low-pass (used by the resampler's anti-alias stage).
inline std::vector<double> lowpass_zero_phase(const std::vector<double>& x, double fs, double fc,
                                              int order = 4) {
    SosFilter f = design_lowpass(order, fc, fs);
    std::size_t padlen = static_cast<std::size_t>(
        std::max(3.0 * (2.0 * f.sections.size() + 1.0), std::ceil(2.0 * fs / fc)));
    return sosfiltfilt(f, x, padlen);
}

}  // namespace sapred::dsp
