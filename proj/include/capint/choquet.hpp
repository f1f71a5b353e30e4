#pragma once

// Choquet (layer-cake) integration of step functions against monotone set
// functions.
//
// For a step function with distinct positive values t_1 < ... < t_m the
// integral of t -> C({f > t}) is exactly sum_k (t_k - t_{k-1}) C({f >= t_k}),
// so only m set-function evaluations are needed.

#include <cmath>
#include <concepts>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "capint/content.hpp"
#include "capint/interval.hpp"
#include "capint/lattice.hpp"

namespace capint {

template <class T>
concept SetValue = std::same_as<T, double> || std::same_as<T, Interval>;

// Anything callable on a GridSet returning a real or an interval.
template <class C>
concept SetFunctionEvaluator = requires(C c, const GridSet& e) {
    { c(e) } -> SetValue;
};

template <SetFunctionEvaluator C>
using evaluator_value_t = std::decay_t<std::invoke_result_t<C&, const GridSet&>>;

template <SetFunctionEvaluator C>
auto choquet_integral(const StepFunction& f, C&& capacity) {
    using V = evaluator_value_t<C>;
    V total{0.0};
    double prev = 0.0;
    for (double t : f.distinct_positive_values()) {
        const V c = capacity(f.level_set_at_least(t));
        total += V{t - prev} * c;
        prev = t;
    }
    return total;
}

template <SetFunctionEvaluator C>
auto lp_quasinorm(const StepFunction& f, double p, C&& capacity) {
    if (!(p > 0.0)) throw std::domain_error("lp_quasinorm: p must be positive");
    const auto integral = choquet_integral(f.pow(p), std::forward<C>(capacity));
    using V = std::decay_t<decltype(integral)>;
    if constexpr (std::same_as<V, Interval>) {
        return pow(integral, 1.0 / p);
    } else {
        return std::pow(integral, 1.0 / p);
    }
}

// Choquet integral of a function given only on the cells, with per-cell
// interval values: the lower end integrates the lower values against the lower
// set function, the upper end the upper values against the upper one.
template <SetFunctionEvaluator C>
Interval choquet_integral(const StepFunction& lo, const StepFunction& hi, C&& capacity) {
    const auto a = choquet_integral(lo, capacity);
    const auto b = choquet_integral(hi, capacity);
    return {lower(a), upper(b)};
}

// ---------------------------------------------------------------------------
// Standard evaluators

struct DyadicContentEvaluator {
    double beta;
    double operator()(const GridSet& e) const { return dyadic_content(e, beta); }
};

// Ball content enclosure of E, or of E ∩ clip when a ball is supplied.
struct BallContentEvaluator {
    double beta;
    std::optional<Ball> clip{};
    Interval operator()(const GridSet& e) const { return certified_content(e, beta, clip); }
};

// The looser enclosure built only from the dyadic comparison constants and
// constructed covers.
struct ContentIntervalEvaluator {
    double beta;
    Interval operator()(const GridSet& e) const { return content_interval(e, beta); }
};

}  // namespace capint
