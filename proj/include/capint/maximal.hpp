#pragma once

// Capacitary maximal operators on step functions.
//
//  * dyadic: sup over Q in D(Q0) containing x of l(Q)^-beta ∫_Q f dH^{beta,Q0}.
//    Exact.
//  * ball (centered / uncentered): sup of (omega_beta r^beta)^-1 ∫ f chi_B dH^beta
//    over the balls whose radius is a distance from the center to a cell (and,
//    uncentered, the smallest ball around each center reaching x). Values are
//    enclosures.
//  * riesz: sup over discretized balls of (c_{alpha,s} r^{n - alpha s})^-1
//    ∫_B f dcap_{alpha,s} at the same critical radii.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <map>
#include <vector>

#include "capint/choquet.hpp"
#include "capint/content.hpp"
#include "capint/interval.hpp"
#include "capint/lattice.hpp"
#include "capint/riesz.hpp"

namespace capint {

enum class MaximalKind { Dyadic, Centered, Uncentered, Riesz };

inline std::string to_string(MaximalKind k) {
    switch (k) {
        case MaximalKind::Dyadic: return "dyadic";
        case MaximalKind::Centered: return "centered";
        case MaximalKind::Uncentered: return "uncentered";
        case MaximalKind::Riesz: return "riesz";
    }
    return "dyadic";
}

struct MaximalResult {
    MaximalKind kind = MaximalKind::Dyadic;
    int n = 1;
    int L = 0;
    double beta = 0.0;    // content operators
    double alpha = 0.0;   // riesz
    double s = 0.0;       // riesz
    std::size_t radii_examined = 0;
    std::vector<Interval> values;

    StepFunction lower_function() const { return project([](const Interval& v) { return v.lo; }); }
    StepFunction upper_function() const { return project([](const Interval& v) { return v.hi; }); }

    double sup_upper() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, v.hi);
        return m;
    }

    // Cells where the value certainly (lo) / possibly (hi) exceeds t.
    GridSet certainly_above(double t) const { return select([t](const Interval& v) { return v.lo > t; }); }
    GridSet possibly_above(double t) const { return select([t](const Interval& v) { return v.hi > t; }); }

private:
    template <class Fn>
    StepFunction project(Fn fn) const {
        std::vector<double> out(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = fn(values[i]);
        return StepFunction(n, L, std::move(out));
    }
    template <class Fn>
    GridSet select(Fn fn) const {
        GridSet s(n, L);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (fn(values[i])) s.insert(i);
        }
        return s;
    }
};

inline MaximalResult make_result(MaximalKind kind, const StepFunction& f) {
    MaximalResult out;
    out.kind = kind;
    out.n = f.dimension();
    out.L = f.resolution();
    out.values.assign(f.cell_count(), Interval{0.0});
    return out;
}

// ---------------------------------------------------------------------------

// Per-node Choquet integrals ∫_Q f dH^{beta,Q0} for every dyadic cube Q.
inline std::vector<std::vector<double>> dyadic_cube_integrals(const StepFunction& f, double beta) {
    const int n = f.dimension(), L = f.resolution();
    std::vector<std::vector<double>> acc(L + 1);
    for (int j = 0; j <= L; ++j) acc[j].assign(cell_count(n, j), 0.0);
    double prev = 0.0;
    for (double t : f.distinct_positive_values()) {
        const DyadicContentTree tree(f.level_set_at_least(t), beta);
        for (int j = 0; j <= L; ++j) {
            for (std::size_t q = 0; q < acc[j].size(); ++q) acc[j][q] += (t - prev) * tree.value(j, q);
        }
        prev = t;
    }
    return acc;
}

inline MaximalResult dyadic_maximal(const StepFunction& f, double beta, const DyadicCube& q0) {
    const int n = f.dimension(), L = f.resolution();
    check_beta(beta, n);
    require_inside(f.support(), q0);
    MaximalResult out = make_result(MaximalKind::Dyadic, f);
    out.beta = beta;
    const auto integrals = dyadic_cube_integrals(f, beta);
    // best[q] at level j: sup over ancestors between q0 and q.
    std::vector<double> best{integrals[q0.level][linear_index(q0.index, n, q0.level)] *
                             std::pow(side_length(q0.level), -beta)};
    std::vector<std::size_t> ids{linear_index(q0.index, n, q0.level)};
    for (int j = q0.level + 1; j <= L; ++j) {
        const double norm = std::pow(side_length(j), -beta);
        std::vector<double> nb;
        std::vector<std::size_t> nid;
        const std::size_t side = cells_per_axis(j - 1), cs = 2 * side;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const std::size_t q = ids[k];
            auto push = [&](std::size_t c) {
                nid.push_back(c);
                nb.push_back(std::max(best[k], integrals[j][c] * norm));
            };
            if (n == 1) {
                push(2 * q);
                push(2 * q + 1);
            } else {
                const std::size_t a = q / side, b = q % side;
                for (std::size_t da = 0; da < 2; ++da) {
                    for (std::size_t db = 0; db < 2; ++db) push((2 * a + da) * cs + 2 * b + db);
                }
            }
        }
        best = std::move(nb);
        ids = std::move(nid);
    }
    for (std::size_t k = 0; k < ids.size(); ++k) out.values[ids[k]] = Interval{best[k]};
    out.radii_examined = static_cast<std::size_t>(L - q0.level + 1);
    return out;
}

inline MaximalResult dyadic_maximal(const StepFunction& f, double beta) {
    return dyadic_maximal(f, beta, DyadicCube::root(f.dimension()));
}

// ---------------------------------------------------------------------------
// Ball maximal functions

struct BallMaximalOptions {
    int center_resolution_offset = 2;  // uncentered centers on the grid points of resolution L + offset
};

// Distances from p at which cells_in_ball(p, r) changes, positive and sorted,
// up to the farthest cell.
inline std::vector<double> critical_radii(const Point& p, int n, int L) {
    std::vector<double> d2;
    for (std::size_t j = 0; j < cell_count(n, L); ++j) d2.push_back(squared_distance_to_cell(p, j, n, L));
    std::sort(d2.begin(), d2.end());
    d2.erase(std::unique(d2.begin(), d2.end()), d2.end());
    std::vector<double> out;
    for (double v : d2) {
        if (v > 0.0) out.push_back(std::sqrt(v));
    }
    return out;
}

// (omega_beta r^beta)^-1 ∫ f chi_{B(c, r)} dH^beta_inf
inline Interval ball_average(const StepFunction& f, double beta, const Ball& b) {
    const Interval num = choquet_integral(f, BallContentEvaluator{beta, b});
    const double norm = omega(beta) * std::pow(b.radius, beta);
    return {num.lo / norm, num.hi / norm};
}

namespace detail {

// Ball averages around a fixed center at its critical radii, with suffix
// maxima so that the sup over radii >= delta is a lookup.
class CenterProfile {
public:
    CenterProfile(const StepFunction& f, double beta, const Point& c)
        : f_(f), beta_(beta), c_(c), radii_(critical_radii(c, f.dimension(), f.resolution())) {
        suffix_.assign(radii_.size() + 1, Interval{0.0});
        for (std::size_t k = radii_.size(); k-- > 0;) {
            suffix_[k] = max(suffix_[k + 1], ball_average(f, beta, Ball{c, radii_[k]}));
        }
    }

    Interval sup_all() const { return suffix_[0]; }

    // Sup over the balls B(c, r) containing a point at distance delta > 0:
    // the critical radii >= delta and delta itself.
    Interval sup_from(double delta) {
        const auto it = std::lower_bound(radii_.begin(), radii_.end(), delta);
        Interval best = suffix_[static_cast<std::size_t>(it - radii_.begin())];
        if (it == radii_.end() || *it != delta) {
            auto [pos, fresh] = at_.try_emplace(delta);
            if (fresh) pos->second = ball_average(f_, beta_, Ball{c_, delta});
            best = max(best, pos->second);
        }
        return best;
    }

    std::size_t size() const { return radii_.size() + at_.size(); }

private:
    const StepFunction& f_;
    double beta_;
    Point c_;
    std::vector<double> radii_;
    std::vector<Interval> suffix_;
    std::map<double, Interval> at_;
};

}  // namespace detail

inline MaximalResult ball_maximal(const StepFunction& f, double beta, MaximalKind mode,
                                  const BallMaximalOptions& opt = {}) {
    const int n = f.dimension(), L = f.resolution();
    check_beta(beta, n);
    if (mode != MaximalKind::Centered && mode != MaximalKind::Uncentered) {
        throw std::invalid_argument("ball_maximal: mode must be centered or uncentered");
    }
    MaximalResult out = make_result(mode, f);
    out.beta = beta;
    if (f.max() == 0.0) return out;

    if (mode == MaximalKind::Centered) {
        for (std::size_t i = 0; i < f.cell_count(); ++i) {
            const detail::CenterProfile prof(f, beta, cell_center(i, n, L));
            out.values[i] = prof.sup_all();
            out.radii_examined += prof.size();
        }
        return out;
    }

    const int R = L + opt.center_resolution_offset;
    const std::size_t pts = cells_per_axis(R) + 1;
    const double g = side_length(R);
    const std::size_t total = n == 1 ? pts : pts * pts;
    for (std::size_t k = 0; k < total; ++k) {
        const Point c = n == 1 ? Point{k * g, 0.0} : Point{(k / pts) * g, (k % pts) * g};
        detail::CenterProfile prof(f, beta, c);
        for (std::size_t i = 0; i < f.cell_count(); ++i) {
            const Point x = cell_center(i, n, L);
            const double delta = n == 1 ? std::abs(x[0] - c[0]) : std::hypot(x[0] - c[0], x[1] - c[1]);
            out.values[i] = max(out.values[i], delta == 0.0 ? prof.sup_all() : prof.sup_from(delta));
        }
        out.radii_examined += prof.size();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Riesz capacitary maximal function

// sup over critical radii r of (c_{alpha,s} r^{n - alpha s})^-1 ∫_{B(x,r)} f dcap,
// with B(x,r) discretized by cells_in_ball and c_{alpha,s} = cap(B(0,1)).
inline MaximalResult riesz_maximal(const StepFunction& f, const CapacityEvaluator& cap) {
    const auto& p = cap.params();
    if (f.dimension() != p.n || f.resolution() != p.L) throw std::domain_error("riesz_maximal: shape mismatch");
    MaximalResult out = make_result(MaximalKind::Riesz, f);
    out.alpha = p.alpha;
    out.s = p.s;
    if (f.max() == 0.0) return out;
    const Interval unit = unit_ball_capacity(cap);
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
        const Point x = cell_center(i, p.n, p.L);
        for (double r : critical_radii(x, p.n, p.L)) {
            const Interval num = choquet_integral(f.restricted(cells_in_ball(Ball{x, r}, p.n, p.L)), cap);
            out.values[i] = max(out.values[i], num / (unit * Interval{std::pow(r, p.scaling_exponent())}));
            ++out.radii_examined;
        }
    }
    return out;
}

}  // namespace capint
