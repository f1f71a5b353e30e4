#pragma once

// Closed intervals [lo, hi] of non-negative reals, used as two-sided
// enclosures of set-function values that are not computed exactly.
//
// Endpoints are propagated with round-to-nearest arithmetic; enclosures are
// sound up to floating point rounding.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace capint {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: implicit point interval
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    static Interval checked(double l, double h) {
        if (!(l <= h) || !(l >= 0.0)) throw std::domain_error("invalid interval");
        return {l, h};
    }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool is_point() const { return lo == hi; }
    bool contains(double v) const { return lo <= v && v <= hi; }

    Interval& operator+=(const Interval& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }
    friend Interval operator+(Interval a, const Interval& b) { return a += b; }

    // Product with a non-negative scalar or non-negative interval.
    friend Interval operator*(const Interval& a, const Interval& b) { return {a.lo * b.lo, a.hi * b.hi}; }

    // Quotient of non-negative intervals; divisor lower end may be zero only
    // when the dividend is zero.
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (a.hi == 0.0) return {0.0, 0.0};
        const double hi = b.lo > 0.0 ? a.hi / b.lo : std::numeric_limits<double>::infinity();
        return {a.lo / b.hi, hi};
    }

    bool operator==(const Interval&) const = default;
};

// Monotone power of a non-negative interval (p > 0).
inline Interval pow(const Interval& a, double p) { return {std::pow(a.lo, p), std::pow(a.hi, p)}; }

inline Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

inline Interval max(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

inline double lower(double v) { return v; }
inline double upper(double v) { return v; }
inline double lower(const Interval& v) { return v.lo; }
inline double upper(const Interval& v) { return v.hi; }

inline std::ostream& operator<<(std::ostream& os, const Interval& v) {
    return os << '[' << v.lo << ", " << v.hi << ']';
}

}  // namespace capint
