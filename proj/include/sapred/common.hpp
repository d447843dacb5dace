#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sapred {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing feature values are carried as quiet NaN; every NaN in a feature
// matrix is an intentional missing marker, never a silent computation result.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

// Collects non-fatal diagnostics along a processing path. Callers that do not
// care pass nullptr.
struct Warnings {
    std::vector<std::string> items;
    void add(std::string msg) { items.push_back(std::move(msg)); }
};

inline void warn(Warnings* w, std::string msg) {
    if (w) w->add(std::move(msg));
}

inline double sqr(double v) { return v * v; }

inline double mean_of(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

// Sample standard deviation (n-1 denominator); 0 for fewer than 2 values.
inline double sample_sd(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    double m = mean_of(x);
    double s = 0;
    for (double v : x) s += sqr(v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

}  // namespace sapred
