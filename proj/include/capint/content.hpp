#pragma once

// Hausdorff content of grid sets.
//
// The dyadic content H^{beta,Q0}(E) = inf sum l(Q_i)^beta over covers by cubes
// of D(Q0) is computed exactly by a bottom-up tree recursion. The ball-based
// content H^beta(E) = inf sum omega_beta r_i^beta is enclosed by intervals:
// lower ends come from comparison with the dyadic content and with Lebesgue
// measure, upper ends from explicitly constructed ball covers. On the line
// the content of a finite union of intervals is computed exactly.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "capint/interval.hpp"
#include "capint/lattice.hpp"

namespace capint {

// omega_beta = pi^{beta/2} / Gamma(beta/2 + 1).
inline double omega(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("omega: beta must be positive");
    return std::exp(0.5 * beta * std::log(std::numbers::pi) - std::lgamma(0.5 * beta + 1.0));
}

struct ContentParams {
    double beta = 1.0;
    int n = 1;

    ContentParams(double b, int dim) : beta(b), n(dim) {
        if (!(beta > 0.0) || beta > n) throw std::domain_error("content: beta must lie in (0, n]");
    }
    double omega_beta() const { return omega(beta); }
};

inline void check_beta(double beta, int n) { (void)ContentParams(beta, n); }

// ---------------------------------------------------------------------------
// Dyadic content

// Values h(Q) = H^{beta,Q0}(E ∩ Q) for every dyadic cube Q of the root tree,
// stored per level in row-major order.
class DyadicContentTree {
public:
    DyadicContentTree(const GridSet& e, double beta) : n_(e.dimension()), L_(e.resolution()), beta_(beta) {
        check_beta(beta, n_);
        values_.resize(L_ + 1);
        coarse_.resize(L_ + 1);
        auto& leaf = values_[L_];
        leaf.assign(e.cell_count(), 0.0);
        const double leaf_cost = std::pow(side_length(L_), beta);
        for (std::size_t i = 0; i < leaf.size(); ++i) {
            if (e.contains(i)) leaf[i] = leaf_cost;
        }
        coarse_[L_].assign(leaf.size(), true);
        for (int j = L_ - 1; j >= 0; --j) {
            const std::size_t side = cells_per_axis(j);
            const std::size_t count = cell_count(n_, j);
            const double cost = std::pow(side_length(j), beta);
            values_[j].assign(count, 0.0);
            coarse_[j].assign(count, false);
            for (std::size_t q = 0; q < count; ++q) {
                double sum = 0.0;
                for_each_child(q, side, [&](std::size_t c) { sum += values_[j + 1][c]; });
                if (sum == 0.0) continue;
                // Ties go to the coarser cube.
                if (cost <= sum) {
                    values_[j][q] = cost;
                    coarse_[j][q] = true;
                } else {
                    values_[j][q] = sum;
                }
            }
        }
    }

    int dimension() const { return n_; }
    int resolution() const { return L_; }
    double beta() const { return beta_; }

    double value(const DyadicCube& q) const { return values_.at(q.level)[linear_index(q.index, n_, q.level)]; }
    double value(int level, std::size_t linear) const { return values_[level][linear]; }
    double root_value() const { return values_[0][0]; }

    // Optimal cover of E ∩ q by cubes of D(Q0).
    std::vector<DyadicCube> cover(const DyadicCube& q) const {
        std::vector<DyadicCube> out;
        collect(q.level, linear_index(q.index, n_, q.level), out);
        return out;
    }

    template <class Fn>
    void for_each_child(std::size_t q, std::size_t side, Fn fn) const {
        if (n_ == 1) {
            fn(2 * q);
            fn(2 * q + 1);
        } else {
            const std::size_t a = q / side, b = q % side, cs = 2 * side;
            for (std::size_t da = 0; da < 2; ++da) {
                for (std::size_t db = 0; db < 2; ++db) fn((2 * a + da) * cs + 2 * b + db);
            }
        }
    }

private:
    void collect(int level, std::size_t q, std::vector<DyadicCube>& out) const {
        if (values_[level][q] == 0.0) return;
        if (coarse_[level][q]) {
            out.push_back(DyadicCube{n_, level, index_vector(q, n_, level)});
            return;
        }
        for_each_child(q, cells_per_axis(level), [&](std::size_t c) { collect(level + 1, c, out); });
    }

    int n_;
    int L_;
    double beta_;
    std::vector<std::vector<double>> values_;
    std::vector<std::vector<bool>> coarse_;
};

inline void require_inside(const GridSet& e, const DyadicCube& q0) {
    if (q0.n != e.dimension()) throw std::domain_error("cube and set dimensions differ");
    if (q0.level > e.resolution()) throw std::domain_error("cube is finer than the grid");
    for (std::size_t i : e.cells()) {
        if (!q0.contains_cell(i, e.resolution())) throw std::domain_error("set is not contained in Q0");
    }
}

inline double dyadic_content(const GridSet& e, double beta, const DyadicCube& q0) {
    require_inside(e, q0);
    return DyadicContentTree(e, beta).value(q0);
}

inline double dyadic_content(const GridSet& e, double beta) {
    return dyadic_content(e, beta, DyadicCube::root(e.dimension()));
}

inline std::vector<DyadicCube> dyadic_cover(const GridSet& e, double beta, const DyadicCube& q0) {
    require_inside(e, q0);
    return DyadicContentTree(e, beta).cover(q0);
}

// ---------------------------------------------------------------------------
// Exact content on the line

struct Segment {
    double a = 0.0;
    double b = 0.0;
};

struct LineCover {
    double cost = 0.0;
    std::vector<Ball> balls;
};

// Content of a finite union of closed segments in R (beta in (0,1]).
// An optimal cover uses one ball per block of consecutive components, sized to
// the block's convex hull: overlapping balls can always be merged into the
// hull without increasing cost because (x+y)^beta <= x^beta + y^beta.
inline LineCover line_content_cover(std::vector<Segment> segs, double beta) {
    check_beta(beta, 1);
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    std::vector<Segment> merged;
    for (const auto& s : segs) {
        if (!(s.b > s.a)) continue;
        if (!merged.empty() && s.a <= merged.back().b) {
            merged.back().b = std::max(merged.back().b, s.b);
        } else {
            merged.push_back(s);
        }
    }
    LineCover out;
    const std::size_t m = merged.size();
    if (m == 0) return out;
    const double w = omega(beta);
    std::vector<double> best(m + 1, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> from(m + 1, 0);
    best[0] = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        for (std::size_t j = 1; j <= k; ++j) {
            const double c = best[j - 1] + w * std::pow(0.5 * (merged[k - 1].b - merged[j - 1].a), beta);
            if (c < best[k]) {
                best[k] = c;
                from[k] = j;
            }
        }
    }
    out.cost = best[m];
    for (std::size_t k = m; k > 0; k = from[k] - 1) {
        const double a = merged[from[k] - 1].a, b = merged[k - 1].b;
        out.balls.push_back(Ball{{0.5 * (a + b), 0.0}, 0.5 * (b - a)});
    }
    std::reverse(out.balls.begin(), out.balls.end());
    return out;
}

// Segments of E, optionally clipped to a ball.
inline std::vector<Segment> line_segments(const GridSet& e, const std::optional<Ball>& clip) {
    const double h = side_length(e.resolution());
    std::vector<Segment> segs;
    for (std::size_t i : e.cells()) {
        Segment s{i * h, (i + 1) * h};
        if (clip) {
            s.a = std::max(s.a, clip->center[0] - clip->radius);
            s.b = std::min(s.b, clip->center[0] + clip->radius);
        }
        if (s.b > s.a) segs.push_back(s);
    }
    return segs;
}

// ---------------------------------------------------------------------------
// Planar geometry helpers

// Area of [x0,x1]x[y0,y1] intersected with the disk of radius r at the origin.
inline double rect_disk_area(double x0, double x1, double y0, double y1, double r) {
    x0 = std::max(x0, -r);
    x1 = std::min(x1, r);
    if (!(x1 > x0) || !(y1 > y0)) return 0.0;
    const double r2 = r * r;
    auto s = [&](double u) { return std::sqrt(std::max(0.0, r2 - u * u)); };
    // Antiderivative of sqrt(r^2 - u^2).
    auto S = [&](double u) { return 0.5 * (u * s(u) + r2 * std::asin(std::clamp(u / r, -1.0, 1.0))); };
    std::vector<double> cuts{x0, x1};
    for (double y : {y0, y1}) {
        if (std::abs(y) < r) {
            const double u = std::sqrt(r2 - y * y);
            for (double c : {-u, u}) {
                if (c > x0 && c < x1) cuts.push_back(c);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (!(b > a)) continue;
        const double sm = s(0.5 * (a + b));
        const bool top_is_disk = sm < y1;
        const bool bottom_is_disk = -sm > y0;
        const double top_hi = top_is_disk ? sm : y1;
        const double bot_lo = bottom_is_disk ? -sm : y0;
        if (top_hi <= bot_lo) continue;
        // integral of (top - bottom) over [a,b]
        const double top = top_is_disk ? S(b) - S(a) : y1 * (b - a);
        const double bot = bottom_is_disk ? -(S(b) - S(a)) : y0 * (b - a);
        area += top - bot;
    }
    return std::max(area, 0.0);
}

struct Box {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool empty = true;

    void extend(const Box& o) {
        if (o.empty) return;
        if (empty) {
            *this = o;
            return;
        }
        x0 = std::min(x0, o.x0);
        x1 = std::max(x1, o.x1);
        y0 = std::min(y0, o.y0);
        y1 = std::max(y1, o.y1);
    }
    double half_diagonal() const { return 0.5 * std::hypot(x1 - x0, y1 - y0); }
};

// Planar cover bound: tree recursion where each dyadic cube may be replaced by
// the ball circumscribing the bounding box of the pieces it contains.
inline double planar_cover_bound(const GridSet& e, double beta, const std::optional<Ball>& clip) {
    const int L = e.resolution();
    const double h = side_length(L);
    const double w = omega(beta);
    std::vector<Box> boxes(e.cell_count());
    std::vector<double> cost(e.cell_count(), 0.0);
    for (std::size_t i : e.cells()) {
        const Index k = index_vector(i, 2, L);
        Box b{k[0] * h, (k[0] + 1) * h, k[1] * h, (k[1] + 1) * h, false};
        if (clip) {
            if (squared_distance_to_cell(clip->center, i, 2, L) >= clip->radius * clip->radius) continue;
            b.x0 = std::max(b.x0, clip->center[0] - clip->radius);
            b.x1 = std::min(b.x1, clip->center[0] + clip->radius);
            b.y0 = std::max(b.y0, clip->center[1] - clip->radius);
            b.y1 = std::min(b.y1, clip->center[1] + clip->radius);
        }
        boxes[i] = b;
        cost[i] = w * std::pow(b.half_diagonal(), beta);
    }
    for (int j = L - 1; j >= 0; --j) {
        const std::size_t side = cells_per_axis(j), cs = 2 * side;
        std::vector<Box> nb(cell_count(2, j));
        std::vector<double> nc(cell_count(2, j), 0.0);
        for (std::size_t q = 0; q < nb.size(); ++q) {
            const std::size_t a = q / side, b = q % side;
            double sum = 0.0;
            for (std::size_t da = 0; da < 2; ++da) {
                for (std::size_t db = 0; db < 2; ++db) {
                    const std::size_t c = (2 * a + da) * cs + 2 * b + db;
                    nb[q].extend(boxes[c]);
                    sum += cost[c];
                }
            }
            nc[q] = nb[q].empty ? 0.0 : std::min(sum, w * std::pow(nb[q].half_diagonal(), beta));
        }
        boxes = std::move(nb);
        cost = std::move(nc);
    }
    double total = cost[0];
    if (clip) total = std::min(total, w * std::pow(clip->radius, beta));
    return total;
}

// ---------------------------------------------------------------------------
// Ball content enclosures

// The geometric conversion factors between ball and dyadic content:
//   H^beta(E) >= omega_beta H^{beta,Q0}(E) / (2^n 4^beta)
//     (a ball of radius r meets at most 2^n dyadic cubes of side < 4r)
//   H^beta(E) <= omega_beta (sqrt(n)/2)^beta H^{beta,Q0}(E)
//     (a cube of side l lies in a ball of radius sqrt(n) l / 2)
inline double dyadic_to_ball_lower_factor(double beta, int n) {
    return omega(beta) / (std::ldexp(1.0, n) * std::pow(4.0, beta));
}
inline double dyadic_to_ball_upper_factor(double beta, int n) {
    return omega(beta) * std::pow(0.5 * std::sqrt(static_cast<double>(n)), beta);
}

// Best constructed ball cover of E (exact on the line).
inline double ball_cover_upper_bound(const GridSet& e, double beta) {
    check_beta(beta, e.dimension());
    if (e.empty()) return 0.0;
    if (e.dimension() == 1) return line_content_cover(line_segments(e, std::nullopt), beta).cost;
    return planar_cover_bound(e, beta, std::nullopt);
}

// [lo, hi] with lo <= H^beta(E) <= hi, from the dyadic comparison constants and
// the constructed covers.
inline Interval content_interval(const GridSet& e, double beta) {
    const int n = e.dimension();
    const double dy = dyadic_content(e, beta);
    const double lo = dyadic_to_ball_lower_factor(beta, n) * dy;
    const double hi = std::min(ball_cover_upper_bound(e, beta), dyadic_to_ball_upper_factor(beta, n) * dy);
    return {std::min(lo, hi), hi};
}

// Lower bound for beta <= 1 in the plane: orthogonal projection onto a line is
// 1-Lipschitz and maps a ball of radius r into a segment of radius r, so the
// content of E is at least the (exact) content of any projection of E. Uses
// the two axes and the two diagonals; with a clip, diagonal projections only
// use the cells lying entirely inside the ball.
inline double planar_projection_bound(const GridSet& e, double beta, const std::optional<Ball>& clip) {
    const int L = e.resolution();
    const double h = side_length(L);
    const double s2 = std::sqrt(0.5);
    std::array<std::vector<Segment>, 4> proj;
    for (std::size_t i : e.cells()) {
        const Index k = index_vector(i, 2, L);
        const double x0 = k[0] * h, x1 = x0 + h, y0 = k[1] * h, y1 = y0 + h;
        bool inside = true;
        if (clip) {
            const double cx = clip->center[0], cy = clip->center[1], r = clip->radius;
            for (int a = 0; a < 2 && inside; ++a) {
                for (int b = 0; b < 2 && inside; ++b) inside = std::hypot(x0 + a * h - cx, y0 + b * h - cy) <= r;
            }
            // x-extent of cell ∩ disk: |x - cx| <= sqrt(r^2 - dist(cy, [y0,y1])^2)
            const double dy = cy < y0 ? y0 - cy : (cy > y1 ? cy - y1 : 0.0);
            const double dx = cx < x0 ? x0 - cx : (cx > x1 ? cx - x1 : 0.0);
            if (dy < r) {
                const double w = std::sqrt(r * r - dy * dy);
                proj[0].push_back({std::max(x0, cx - w), std::min(x1, cx + w)});
            }
            if (dx < r) {
                const double w = std::sqrt(r * r - dx * dx);
                proj[1].push_back({std::max(y0, cy - w), std::min(y1, cy + w)});
            }
        } else {
            proj[0].push_back({x0, x1});
            proj[1].push_back({y0, y1});
        }
        if (inside) {
            proj[2].push_back({(x0 + y0) * s2, (x1 + y1) * s2});
            proj[3].push_back({(x0 - y1) * s2, (x1 - y0) * s2});
        }
    }
    double best = 0.0;
    for (auto& segs : proj) best = std::max(best, line_content_cover(std::move(segs), beta).cost);
    return best;
}

// Tightest available enclosure of H^beta(E ∩ clip). Exact on the line, and in
// the plane for beta = 2 (where the content is the area). Otherwise the lower
// end uses |A| <= sum |B_i| together with the fact that an optimal cover of a
// set inside a ball of radius R never needs balls of radius above R, and the
// projection bound when beta <= 1.
inline Interval certified_content(const GridSet& e, double beta, const std::optional<Ball>& clip = std::nullopt) {
    const int n = e.dimension();
    check_beta(beta, n);
    if (n == 1) {
        const double v = line_content_cover(line_segments(e, clip), beta).cost;
        return {v, v};
    }
    const int L = e.resolution();
    const double h = side_length(L);
    const double rmax = std::sqrt(2.0) / 2.0;
    double area = 0.0;
    GridSet inner(n, L);
    double radius_bound = rmax;
    for (std::size_t i : e.cells()) {
        if (!clip) {
            area += h * h;
            inner.insert(i);
            continue;
        }
        const Index k = index_vector(i, n, L);
        const double cx = clip->center[0], cy = clip->center[1], r = clip->radius;
        area += rect_disk_area(k[0] * h - cx, (k[0] + 1) * h - cx, k[1] * h - cy, (k[1] + 1) * h - cy, r);
        bool all_in = true;
        for (int a = 0; a < 2 && all_in; ++a) {
            for (int b = 0; b < 2 && all_in; ++b) {
                all_in = std::hypot((k[0] + a) * h - cx, (k[1] + b) * h - cy) <= r;
            }
        }
        if (all_in) inner.insert(i);
    }
    if (clip) radius_bound = std::min(rmax, clip->radius);
    if (area == 0.0) return {0.0, 0.0};
    if (beta == 2.0) return {area, area};
    const double area_lo = omega(beta) / omega(2.0) * std::pow(radius_bound, beta - 2.0) * area;
    const double dy_lo = dyadic_to_ball_lower_factor(beta, n) * dyadic_content(inner, beta);
    const double proj_lo = beta <= 1.0 ? planar_projection_bound(e, beta, clip) : 0.0;
    double hi = planar_cover_bound(e, beta, clip);
    if (!clip) hi = std::min(hi, dyadic_to_ball_upper_factor(beta, n) * dyadic_content(e, beta));
    const double lo = std::min(std::max({area_lo, dy_lo, proj_lo}), hi);
    return {lo, hi};
}

}  // namespace capint
