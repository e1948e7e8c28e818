#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlbv {

/// Closed interval [lo, hi] on the real line. An interval with hi < lo is empty.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const noexcept { return hi - lo; }
    [[nodiscard]] bool empty() const noexcept { return hi < lo; }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

inline Interval hull(Interval a, Interval b) noexcept
{
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval intersect(Interval a, Interval b) noexcept
{
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline bool overlaps(Interval a, Interval b) noexcept
{
    return !intersect(a, b).empty();
}

inline Interval operator+(Interval a, Interval b) noexcept { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(Interval a, Interval b) noexcept { return {a.lo - b.hi, a.hi - b.lo}; }

inline Interval operator*(Interval a, Interval b) noexcept
{
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

inline Interval scaled(Interval a, double c) noexcept
{
    return c >= 0.0 ? Interval{c * a.lo, c * a.hi} : Interval{c * a.hi, c * a.lo};
}

/// A certified interval containing a measure or functional value.
struct Enclosure {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double width() const noexcept { return hi - lo; }
    [[nodiscard]] double midpoint() const noexcept { return 0.5 * (lo + hi); }
    [[nodiscard]] bool contains(double v) const noexcept { return lo <= v && v <= hi; }
    [[nodiscard]] bool overlaps(const Enclosure& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
};

inline Enclosure scaled(Enclosure e, double c) noexcept
{
    return c >= 0.0 ? Enclosure{c * e.lo, c * e.hi} : Enclosure{c * e.hi, c * e.lo};
}

/// Variation masses of the three mutually singular parts of Du.
struct VariationTriple {
    double a = 0.0;  ///< absolutely continuous part
    double j = 0.0;  ///< jump part
    double c = 0.0;  ///< Cantor part

    [[nodiscard]] double total() const noexcept { return a + j + c; }
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

}  // namespace nlbv
