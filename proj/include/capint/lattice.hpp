#pragma once

// Dyadic cubes, grid sets and step functions on the unit cube [0,1]^n.
//
// A resolution-L grid has 2^L cells per axis. Cells are addressed either by
// an index vector k (0 <= k_i < 2^L) or by the row-major linear index
// k_0 * 2^L + k_1 (n = 2) / k_0 (n = 1). Cell k spans [k_i h, (k_i+1) h] on
// axis i with h = 2^-L.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capint {

inline constexpr int kMaxDimension = 2;
inline constexpr int kMaxResolution = 8;

using Index = std::array<std::uint32_t, kMaxDimension>;
using Point = std::array<double, kMaxDimension>;

inline void require_grid_shape(int n, int L) {
    if (n < 1 || n > kMaxDimension) {
        throw std::domain_error("dimension must be 1 or 2, got " + std::to_string(n));
    }
    if (L < 0 || L > kMaxResolution) {
        throw std::domain_error("resolution must be in [0, 8], got " + std::to_string(L));
    }
}

inline std::size_t cells_per_axis(int L) { return std::size_t{1} << L; }
inline std::size_t cell_count(int n, int L) { return std::size_t{1} << (n * L); }
inline double side_length(int level) { return std::ldexp(1.0, -level); }

inline std::size_t linear_index(const Index& k, int n, int L) {
    return n == 1 ? k[0] : static_cast<std::size_t>(k[0]) * cells_per_axis(L) + k[1];
}

inline Index index_vector(std::size_t linear, int n, int L) {
    if (n == 1) {
        return {static_cast<std::uint32_t>(linear), 0};
    }
    const auto side = cells_per_axis(L);
    return {static_cast<std::uint32_t>(linear / side), static_cast<std::uint32_t>(linear % side)};
}

inline Point cell_center(std::size_t linear, int n, int L) {
    const Index k = index_vector(linear, n, L);
    const double h = side_length(L);
    Point p{0.0, 0.0};
    for (int i = 0; i < n; ++i) p[i] = (k[i] + 0.5) * h;
    return p;
}

// ---------------------------------------------------------------------------

struct DyadicCube {
    int n = 1;
    int level = 0;
    Index index{0, 0};

    static DyadicCube root(int n) { return DyadicCube{n, 0, {0, 0}}; }

    double side() const { return side_length(level); }

    bool operator==(const DyadicCube&) const = default;

    // True if the level-L cell `linear` lies inside this cube.
    bool contains_cell(std::size_t linear, int L) const {
        if (L < level) return false;
        const Index k = index_vector(linear, n, L);
        for (int i = 0; i < n; ++i) {
            if ((k[i] >> (L - level)) != index[i]) return false;
        }
        return true;
    }

    DyadicCube parent() const {
        if (level == 0) throw std::domain_error("root cube has no parent");
        DyadicCube p = *this;
        --p.level;
        for (int i = 0; i < n; ++i) p.index[i] >>= 1;
        return p;
    }
};

// The 2^n children of q, ordered by row-major child offset.
inline std::vector<DyadicCube> children(const DyadicCube& q) {
    if (q.level >= kMaxResolution) {
        throw std::domain_error("cube is already at the maximum depth");
    }
    std::vector<DyadicCube> out;
    out.reserve(std::size_t{1} << q.n);
    for (std::uint32_t off = 0; off < (1u << q.n); ++off) {
        DyadicCube c{q.n, q.level + 1, {0, 0}};
        if (q.n == 1) {
            c.index[0] = 2 * q.index[0] + off;
        } else {
            c.index[0] = 2 * q.index[0] + (off >> 1);
            c.index[1] = 2 * q.index[1] + (off & 1);
        }
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------

// A union of level-L cells, stored as a packed bitmask over linear indices.
class GridSet {
public:
    GridSet() = default;
    GridSet(int n, int L) : n_(n), L_(L) {
        require_grid_shape(n, L);
        words_.assign((capint::cell_count(n, L) + 63) / 64, 0);
    }

    static GridSet full(int n, int L) {
        GridSet s(n, L);
        for (std::size_t i = 0; i < s.cell_count(); ++i) s.insert(i);
        return s;
    }

    static GridSet cube(const DyadicCube& q, int L) {
        GridSet s(q.n, L);
        for (std::size_t i = 0; i < s.cell_count(); ++i) {
            if (q.contains_cell(i, L)) s.insert(i);
        }
        return s;
    }

    int dimension() const { return n_; }
    int resolution() const { return L_; }
    std::size_t cell_count() const { return capint::cell_count(n_, L_); }

    bool contains(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t size() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
    }

    std::vector<std::size_t> cells() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < cell_count(); ++i) {
            if (contains(i)) out.push_back(i);
        }
        return out;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool is_subset_of(const GridSet& other) const {
        check_compatible(other);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] & ~other.words_[w]) return false;
        }
        return true;
    }

    GridSet operator|(const GridSet& o) const { return combine(o, [](auto a, auto b) { return a | b; }); }
    GridSet operator&(const GridSet& o) const { return combine(o, [](auto a, auto b) { return a & b; }); }
    GridSet operator-(const GridSet& o) const { return combine(o, [](auto a, auto b) { return a & ~b; }); }

    bool operator==(const GridSet&) const = default;

    // Key suitable for hashing/memoization.
    std::string key() const {
        return std::string(reinterpret_cast<const char*>(words_.data()), words_.size() * sizeof(std::uint64_t));
    }

private:
    void check_compatible(const GridSet& o) const {
        if (o.n_ != n_ || o.L_ != L_) throw std::domain_error("grid sets have different shapes");
    }
    template <class Op>
    GridSet combine(const GridSet& o, Op op) const {
        check_compatible(o);
        GridSet r = *this;
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = op(words_[w], o.words_[w]);
        return r;
    }

    int n_ = 1;
    int L_ = 0;
    std::vector<std::uint64_t> words_{0};
};

struct GridSetHash {
    std::size_t operator()(const GridSet& s) const { return std::hash<std::string>{}(s.key()); }
};

// ---------------------------------------------------------------------------

// Non-negative values on the level-L cells of Q0; zero outside Q0.
class StepFunction {
public:
    StepFunction() = default;
    StepFunction(int n, int L) : n_(n), L_(L) {
        require_grid_shape(n, L);
        values_.assign(capint::cell_count(n, L), 0.0);
    }
    StepFunction(int n, int L, std::vector<double> values) : n_(n), L_(L), values_(std::move(values)) {
        require_grid_shape(n, L);
        if (values_.size() != capint::cell_count(n, L)) {
            throw std::domain_error("expected " + std::to_string(capint::cell_count(n, L)) + " values, got " +
                                    std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("step function values must be finite and >= 0");
        }
    }

    static StepFunction indicator(const GridSet& e, double height = 1.0) {
        StepFunction f(e.dimension(), e.resolution());
        for (std::size_t i = 0; i < f.cell_count(); ++i) {
            if (e.contains(i)) f.values_[i] = height;
        }
        return f;
    }

    int dimension() const { return n_; }
    int resolution() const { return L_; }
    std::size_t cell_count() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    void set(std::size_t i, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("step function values must be finite and >= 0");
        values_[i] = v;
    }

    double max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }

    // Distinct positive values in increasing order.
    std::vector<double> distinct_positive_values() const {
        std::vector<double> v;
        for (double x : values_) {
            if (x > 0.0) v.push_back(x);
        }
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    GridSet level_set_at_least(double t) const {
        GridSet s(n_, L_);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] >= t) s.insert(i);
        }
        return s;
    }
    GridSet level_set_above(double t) const {
        GridSet s(n_, L_);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] > t) s.insert(i);
        }
        return s;
    }
    GridSet support() const { return level_set_above(0.0); }

    template <class Fn>
    StepFunction map(Fn fn) const {
        StepFunction r = *this;
        for (auto& v : r.values_) v = fn(v);
        return r;
    }
    StepFunction pow(double p) const {
        return map([p](double v) { return v > 0.0 ? std::pow(v, p) : 0.0; });
    }
    StepFunction scaled(double c) const {
        return map([c](double v) { return c * v; });
    }
    StepFunction restricted(const GridSet& e) const {
        StepFunction r = *this;
        for (std::size_t i = 0; i < r.values_.size(); ++i) {
            if (!e.contains(i)) r.values_[i] = 0.0;
        }
        return r;
    }

    StepFunction operator+(const StepFunction& o) const {
        if (o.n_ != n_ || o.L_ != L_) throw std::domain_error("step functions have different shapes");
        StepFunction r = *this;
        for (std::size_t i = 0; i < r.values_.size(); ++i) r.values_[i] += o.values_[i];
        return r;
    }

    bool operator==(const StepFunction&) const = default;

private:
    int n_ = 1;
    int L_ = 0;
    std::vector<double> values_{0.0};
};

// ---------------------------------------------------------------------------

struct Ball {
    Point center{0.0, 0.0};
    double radius = 0.0;
};

// Squared distance from p to the closed cell `linear` at resolution L.
inline double squared_distance_to_cell(const Point& p, std::size_t linear, int n, int L) {
    const Index k = index_vector(linear, n, L);
    const double h = side_length(L);
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lo = k[i] * h;
        const double hi = lo + h;
        const double d = p[i] < lo ? lo - p[i] : (p[i] > hi ? p[i] - hi : 0.0);
        d2 += d * d;
    }
    return d2;
}

// All level-L cells whose closure meets the closed ball.
inline GridSet cells_in_ball(const Ball& b, int n, int L) {
    if (!(b.radius > 0.0)) throw std::domain_error("ball radius must be positive");
    GridSet s(n, L);
    const double r2 = b.radius * b.radius;
    for (std::size_t i = 0; i < s.cell_count(); ++i) {
        if (squared_distance_to_cell(b.center, i, n, L) <= r2) s.insert(i);
    }
    return s;
}

// ---------------------------------------------------------------------------

// Deterministic stream on top of mt19937_64. The mapping to doubles is done
// here rather than through <random> distributions so that sequences are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }
    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

enum class ValueLaw { Uniform, DyadicLevels, SparseIndicator };

inline std::string_view to_string(ValueLaw law) {
    switch (law) {
        case ValueLaw::Uniform: return "uniform";
        case ValueLaw::DyadicLevels: return "dyadic-levels";
        case ValueLaw::SparseIndicator: return "sparse-indicator";
    }
    return "uniform";
}

inline ValueLaw parse_value_law(std::string_view s) {
    if (s == "uniform") return ValueLaw::Uniform;
    if (s == "dyadic-levels" || s == "dyadic") return ValueLaw::DyadicLevels;
    if (s == "sparse-indicator" || s == "sparse") return ValueLaw::SparseIndicator;
    throw std::invalid_argument("unknown value law '" + std::string(s) + "'");
}

inline StepFunction random_step_function(std::uint64_t seed, int L, int n, ValueLaw law) {
    static constexpr std::array<double, 5> kLevels{0.0, 1.0, 2.0, 4.0, 8.0};
    Rng rng(seed);
    StepFunction f(n, L);
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
        switch (law) {
            case ValueLaw::Uniform: f.set(i, rng.uniform()); break;
            case ValueLaw::DyadicLevels: f.set(i, kLevels[rng.below(kLevels.size())]); break;
            case ValueLaw::SparseIndicator: f.set(i, rng.uniform() < 0.25 ? 1.0 : 0.0); break;
        }
    }
    return f;
}

inline GridSet random_grid_set(std::uint64_t seed, int L, int n, double density = 0.5) {
    Rng rng(seed);
    GridSet s(n, L);
    for (std::size_t i = 0; i < s.cell_count(); ++i) {
        if (rng.uniform() < density) s.insert(i);
    }
    return s;
}

}  // namespace capint
