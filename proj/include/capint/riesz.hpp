#pragma once

// Discretized Riesz capacities.
//
// Potentials phi are step functions on the level-L cells of Q0 (or of a
// supplied support set). The constraint I_alpha * phi >= b is imposed at the
// centers of the cells where b > 0, and the objective is ||phi||_s^s. The
// resulting convex program
//
//     minimize  w sum_j phi_j^s   s.t.  A phi >= b,  phi >= 0,   w = h^n,
//
// is solved through its concave dual over mu >= 0, where the inner
// minimization has the closed form phi_j = ((A^T mu)_j / (s w))^{1/(s-1)}.
// The dual only has sign constraints, so plain projected gradient applies.
// Every iterate yields a certified enclosure: the dual value is a lower bound
// and the primal iterate rescaled to feasibility an upper bound.

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "capint/choquet.hpp"
#include "capint/interval.hpp"
#include "capint/lattice.hpp"

namespace capint {

struct CapacityParams {
    double alpha = 0.5;
    double s = 2.0;
    int n = 1;
    int L = 3;

    CapacityParams() = default;
    CapacityParams(double a, double s_, int dim, int res) : alpha(a), s(s_), n(dim), L(res) { validate(); }

    void validate() const {
        require_grid_shape(n, L);
        if (!(alpha > 0.0) || !(alpha < n)) throw std::domain_error("riesz: alpha must lie in (0, n)");
        if (!(s > 1.0) || !(alpha * s < n)) throw std::domain_error("riesz: s must lie in (1, n/alpha)");
        if (n * L > 10) throw std::domain_error("riesz: grids above 1024 cells are not supported");
    }
    // Homogeneity exponent of cap_{alpha,s}.
    double scaling_exponent() const { return n - alpha * s; }
};

// gamma(alpha) = pi^{n/2} 2^alpha Gamma(alpha/2) / Gamma((n-alpha)/2).
inline double riesz_normalization(double alpha, int n) {
    if (!(alpha > 0.0) || !(alpha < n)) throw std::domain_error("riesz: alpha must lie in (0, n)");
    return std::pow(std::numbers::pi, 0.5 * n) * std::exp2(alpha) * std::tgamma(0.5 * alpha) /
           std::tgamma(0.5 * (n - alpha));
}

// ---------------------------------------------------------------------------

namespace detail {

// Integral of |u|^{alpha-2} over the unit square centered at (d0, d1).
inline double planar_cell_integral(double alpha, int d0, int d1) {
    using GL = boost::math::quadrature::gauss<double, 8>;
    const double e = alpha - 2.0;
    if (d0 == 0 && d1 == 0) {
        // Polar coordinates over the eight triangles of the square.
        auto radial = [&](double theta) { return std::pow(0.5 / std::cos(theta), alpha) / alpha; };
        return 8.0 * boost::math::quadrature::gauss<double, 20>::integrate(radial, 0.0, std::numbers::pi / 4);
    }
    const int split = (std::abs(d0) <= 2 && std::abs(d1) <= 2) ? 4 : 1;
    const double w = 1.0 / split;
    double total = 0.0;
    for (int a = 0; a < split; ++a) {
        for (int b = 0; b < split; ++b) {
            const double x0 = d0 - 0.5 + a * w, y0 = d1 - 0.5 + b * w;
            total += GL::integrate(
                [&](double x) {
                    return GL::integrate([&](double y) { return std::pow(x * x + y * y, 0.5 * e); }, y0, y0 + w);
                },
                x0, x0 + w);
        }
    }
    return total;
}

}  // namespace detail

// Cell-pair averages of the Riesz kernel: entry(i, j) is the mean of
// I_alpha(x_i - y) over y in cell j, where x_i is the center of cell i.
// Exact on the line; tensor Gauss-Legendre in the plane, with polar
// integration for the singular diagonal.
class KernelMatrix {
public:
    KernelMatrix(int L, int n, double alpha) : n_(n), L_(L), alpha_(alpha) {
        require_grid_shape(n, L);
        const double gamma = riesz_normalization(alpha, n);
        const int side = static_cast<int>(cells_per_axis(L));
        const double scale = std::pow(side_length(L), alpha - n) / gamma;
        if (n == 1) {
            auto F = [alpha](double t) { return std::copysign(std::pow(std::abs(t), alpha) / alpha, t); };
            table_.resize(side);
            for (int d = 0; d < side; ++d) table_[d] = scale * (F(d + 0.5) - F(d - 0.5));
        } else {
            table_.assign(static_cast<std::size_t>(side) * side, 0.0);
            for (int a = 0; a < side; ++a) {
                for (int b = a; b < side; ++b) {
                    const double v = scale * detail::planar_cell_integral(alpha, a, b);
                    table_[a * side + b] = v;
                    table_[b * side + a] = v;
                }
            }
        }
    }

    int dimension() const { return n_; }
    int resolution() const { return L_; }
    double alpha() const { return alpha_; }
    std::size_t size() const { return cell_count(n_, L_); }

    double entry(std::size_t i, std::size_t j) const {
        if (n_ == 1) return table_[i > j ? i - j : j - i];
        const Index a = index_vector(i, n_, L_), b = index_vector(j, n_, L_);
        const std::size_t d0 = a[0] > b[0] ? a[0] - b[0] : b[0] - a[0];
        const std::size_t d1 = a[1] > b[1] ? a[1] - b[1] : b[1] - a[1];
        return table_[d0 * cells_per_axis(L_) + d1];
    }

    // (I_alpha * phi)(x_i) for a step function phi.
    double potential_at(const StepFunction& phi, std::size_t i) const {
        const double hn = std::pow(side_length(L_), n_);
        double acc = 0.0;
        for (std::size_t j = 0; j < size(); ++j) {
            if (phi[j] != 0.0) acc += entry(i, j) * phi[j];
        }
        return hn * acc;
    }

    StepFunction potential(const StepFunction& phi) const {
        std::vector<double> v(size());
        for (std::size_t i = 0; i < size(); ++i) v[i] = potential_at(phi, i);
        return StepFunction(n_, L_, std::move(v));
    }

private:
    int n_;
    int L_;
    double alpha_;
    std::vector<double> table_;
};

inline KernelMatrix kernel_matrix(int L, int n, double alpha) { return KernelMatrix(L, n, alpha); }

// ---------------------------------------------------------------------------

struct SolverOptions {
    double relative_tolerance = 1e-9;
    double absolute_tolerance = 1e-12;
    int max_iterations = 100000;
};

struct CapacitySolution {
    StepFunction potential;
    double objective = 0.0;      // ||phi||_s^s of the feasible potential (upper bound)
    double lower_bound = 0.0;    // dual value
    double feasibility_slack = 0.0;  // min over constrained cells of (I phi - b), >= 0 after rescaling
    double optimality_gap = 0.0;
    int iterations = 0;
    bool converged = true;

    Interval enclosure() const { return {std::min(lower_bound, objective), objective}; }
};

// Solves min ||phi||_s^s subject to I_alpha * phi >= rhs at every cell with
// rhs > 0 and phi supported on `support`.
inline CapacitySolution solve_obstacle(const KernelMatrix& kernel, double s, const std::vector<double>& rhs,
                                       const GridSet& support, const SolverOptions& opt = {}) {
    const int n = kernel.dimension(), L = kernel.resolution();
    CapacitySolution out;
    out.potential = StepFunction(n, L);
    std::vector<std::size_t> rows, cols = support.cells();
    std::vector<double> b;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (rhs[i] < 0.0 || !std::isfinite(rhs[i])) throw std::domain_error("obstacle must be finite and >= 0");
        if (rhs[i] > 0.0) {
            rows.push_back(i);
            b.push_back(rhs[i]);
        }
    }
    if (rows.empty()) return out;
    if (cols.empty()) throw std::domain_error("potential support is empty");

    const std::size_t m = rows.size(), p = cols.size();
    const double w = std::pow(side_length(L), n);
    std::vector<double> A(m * p);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t k = 0; k < p; ++k) A[r * p + k] = w * kernel.entry(rows[r], cols[k]);
    }
    const double expo = 1.0 / (s - 1.0);

    std::vector<double> phi(p), Aphi(m), grad(m);
    // Evaluates phi(mu), A phi and the negated dual objective.
    auto evaluate = [&](const std::vector<double>& mu) {
        for (std::size_t k = 0; k < p; ++k) {
            double c = 0.0;
            for (std::size_t r = 0; r < m; ++r) c += A[r * p + k] * mu[r];
            phi[k] = c > 0.0 ? std::pow(c / (s * w), expo) : 0.0;
        }
        double energy = 0.0, bmu = 0.0;
        for (std::size_t k = 0; k < p; ++k) energy += std::pow(phi[k], s);
        energy *= w;
        for (std::size_t r = 0; r < m; ++r) {
            double a = 0.0;
            for (std::size_t k = 0; k < p; ++k) a += A[r * p + k] * phi[k];
            Aphi[r] = a;
            grad[r] = a - b[r];
            bmu += b[r] * mu[r];
        }
        return std::pair{-(bmu - (s - 1.0) * energy), energy};
    };

    std::vector<double> mu(b);
    evaluate(mu);
    double rho0 = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) rho0 = std::min(rho0, Aphi[r] / b[r]);
    for (auto& v : mu) v *= std::pow(rho0, -(s - 1.0));

    auto [F, energy] = evaluate(mu);
    double best_upper = std::numeric_limits<double>::infinity(), best_lower = -F;
    std::vector<double> best_phi(p, 0.0);
    auto record = [&](double f_value, double e) {
        double rho = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) rho = std::min(rho, Aphi[r] / b[r]);
        best_lower = std::max(best_lower, -f_value);
        if (rho > 0.0 && std::isfinite(rho)) {
            const double up = std::pow(rho, -s) * e;
            if (up < best_upper) {
                best_upper = up;
                for (std::size_t k = 0; k < p; ++k) best_phi[k] = phi[k] / rho;
            }
        }
    };
    record(F, energy);

    std::deque<double> history{F};
    double step = 1.0;
    {
        double gmax = 0.0, mmax = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            gmax = std::max(gmax, std::abs(grad[r]));
            mmax = std::max(mmax, mu[r]);
        }
        step = gmax > 0.0 ? std::max(mmax, 1e-12) / gmax : 1.0;
    }
    std::vector<double> trial(m), old_grad(m), d(m);
    int it = 0;
    auto done = [&] {
        return best_upper - best_lower <= opt.absolute_tolerance + opt.relative_tolerance * best_upper;
    };
    while (!done() && it < opt.max_iterations) {
        ++it;
        double slope = 0.0, dmax = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            d[r] = std::max(0.0, mu[r] - step * grad[r]) - mu[r];
            slope += grad[r] * d[r];
            dmax = std::max(dmax, std::abs(d[r]));
        }
        if (dmax == 0.0) break;
        const double ref = *std::max_element(history.begin(), history.end());
        old_grad = grad;
        double t = 1.0, Ft = 0.0, et = 0.0;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t r = 0; r < m; ++r) trial[r] = mu[r] + t * d[r];
            std::tie(Ft, et) = evaluate(trial);
            if (Ft <= ref + 1e-4 * t * slope) break;
            t *= 0.5;
        }
        double ss = 0.0, sy = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double sr = trial[r] - mu[r];
            ss += sr * sr;
            sy += sr * (grad[r] - old_grad[r]);
        }
        mu = trial;
        F = Ft;
        record(F, et);
        history.push_back(F);
        if (history.size() > 10) history.pop_front();
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-30, 1e30) : step * 10.0;
    }

    out.iterations = it;
    out.objective = best_upper;
    out.lower_bound = std::min(best_lower, best_upper);
    out.optimality_gap = best_upper - out.lower_bound;
    out.converged = done();
    if (!out.converged) out.optimality_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < p; ++k) out.potential.set(cols[k], best_phi[k]);
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
        slack = std::min(slack, kernel.potential_at(out.potential, rows[r]) - b[r]);
    }
    out.feasibility_slack = slack;
    return out;
}

inline CapacitySolution capacity(const GridSet& e, const KernelMatrix& kernel, double s,
                                 const std::optional<GridSet>& support = std::nullopt, const SolverOptions& opt = {}) {
    std::vector<double> rhs(e.cell_count(), 0.0);
    for (std::size_t i : e.cells()) rhs[i] = 1.0;
    return solve_obstacle(kernel, s, rhs, support ? *support : GridSet::full(e.dimension(), e.resolution()), opt);
}

inline CapacitySolution capacity(const GridSet& e, const CapacityParams& params,
                                 const std::optional<GridSet>& support = std::nullopt) {
    params.validate();
    if (e.dimension() != params.n || e.resolution() != params.L) throw std::domain_error("set/params shape mismatch");
    return capacity(e, KernelMatrix(params.L, params.n, params.alpha), params.s, support);
}

// Gamma_{alpha,s}(f) = inf { ||phi||_s^s : I_alpha * phi >= f }.
inline CapacitySolution gamma_functional(const StepFunction& f, const KernelMatrix& kernel, double s,
                                         const SolverOptions& opt = {}) {
    return solve_obstacle(kernel, s, f.values(), GridSet::full(f.dimension(), f.resolution()), opt);
}

inline CapacitySolution gamma_functional(const StepFunction& f, const CapacityParams& params) {
    params.validate();
    return gamma_functional(f, KernelMatrix(params.L, params.n, params.alpha), params.s);
}

// ---------------------------------------------------------------------------

// Memoizing capacity evaluator: GridSet -> certified interval. Thread-safe.
class CapacityEvaluator {
public:
    explicit CapacityEvaluator(const CapacityParams& params, SolverOptions opt = {})
        : params_(params), opt_(opt), kernel_(std::make_shared<KernelMatrix>(params.L, params.n, params.alpha)),
          state_(std::make_shared<State>()) {
        params_.validate();
    }

    const CapacityParams& params() const { return params_; }
    const KernelMatrix& kernel() const { return *kernel_; }

    Interval operator()(const GridSet& e) const { return solution(e).enclosure; }

    struct Cached {
        Interval enclosure;
        bool converged = true;
        int iterations = 0;
    };

    Cached solution(const GridSet& e) const {
        if (e.empty()) return {};
        const auto key = e.key();
        {
            std::lock_guard lock(state_->mutex);
            if (auto it = state_->cache.find(key); it != state_->cache.end()) return it->second;
        }
        const auto sol = capacity(e, *kernel_, params_.s, std::nullopt, opt_);
        Cached c{sol.enclosure(), sol.converged, sol.iterations};
        std::lock_guard lock(state_->mutex);
        state_->cache.emplace(key, c);
        if (!sol.converged) ++state_->unconverged;
        return c;
    }

    std::size_t solves() const {
        std::lock_guard lock(state_->mutex);
        return state_->cache.size();
    }
    std::size_t unconverged() const {
        std::lock_guard lock(state_->mutex);
        return state_->unconverged;
    }

private:
    struct State {
        mutable std::mutex mutex;
        std::unordered_map<std::string, Cached> cache;
        std::size_t unconverged = 0;
    };

    CapacityParams params_;
    SolverOptions opt_;
    std::shared_ptr<KernelMatrix> kernel_;
    std::shared_ptr<State> state_;
};

// Choquet integral against the discretized capacity. Level sets of a step
// function are nested, and each is solved once through the evaluator cache.
inline Interval choquet_wrt_capacity(const StepFunction& f, const CapacityEvaluator& cap) {
    return choquet_integral(f, cap);
}

// c_{alpha,s} = cap(B(0,1)), from the discretized ball B(1/2, 1/2) and the
// homogeneity cap(rB) = r^{n - alpha s} cap(B).
inline Interval unit_ball_capacity(const CapacityEvaluator& cap) {
    const auto& p = cap.params();
    const GridSet ball = cells_in_ball(Ball{{0.5, 0.5}, 0.5}, p.n, p.L);
    const double scale = std::pow(0.5, -p.scaling_exponent());
    const Interval c = cap(ball);
    return {c.lo * scale, c.hi * scale};
}

}  // namespace capint
