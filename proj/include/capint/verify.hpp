#pragma once

// Inequality verification on step functions.
//
// Every inequality is evaluated as lhs <= constant * rhs, with both sides as
// enclosures. A check passes only when the enclosures prove it, fails only when
// they prove the opposite, and is inconclusive otherwise.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "capint/choquet.hpp"
#include "capint/content.hpp"
#include "capint/interval.hpp"
#include "capint/lattice.hpp"
#include "capint/maximal.hpp"
#include "capint/riesz.hpp"

namespace capint {

enum class SpecId {
    THM12i, THM12ii, DYWEAK, COR14i, COR14ii, LEM22, LEM23, LEM24,
    LEM26, LEM31, LEM32, THM17i, THM17ii, COR19i, COR19ii, SUBLIN
};

enum class ConstantKind { Explicit, Empirical };

struct SpecInfo {
    SpecId id;
    std::string_view name;
    std::string_view statement;
    ConstantKind constant;
    bool uses_capacity;
};

inline const std::array<SpecInfo, 16>& catalog() {
    static const std::array<SpecInfo, 16> table{{
        {SpecId::THM12i, "THM12i", "strong (p,p), p > 1, of the centered content maximal function; constant from interpolation",
         ConstantKind::Explicit, false},
        {SpecId::THM12ii, "THM12ii", "weak (1,1) of the centered content maximal function", ConstantKind::Empirical, false},
        {SpecId::DYWEAK, "DYWEAK", "weak (1,1) of the dyadic maximal function against the dyadic content",
         ConstantKind::Empirical, false},
        {SpecId::COR14i, "COR14i", "strong (p,p) of M_beta against H^gamma, p > gamma/beta", ConstantKind::Empirical, false},
        {SpecId::COR14ii, "COR14ii", "weak (p,p) of M_beta against H^gamma at p = gamma/beta", ConstantKind::Empirical,
         false},
        {SpecId::LEM22, "LEM22", "integral dimension change: ∫f dH^beta <= w_b w_g^(-b/g) (b/g) (∫f^(g/b) dH^gamma)^(b/g)",
         ConstantKind::Explicit, false},
        {SpecId::LEM23, "LEM23", "pointwise dimension change: M_beta f <= (b/g) (M_gamma f^(g/b))^(b/g)",
         ConstantKind::Explicit, false},
        {SpecId::LEM24, "LEM24", "level sets of the ball maximal function against those of the dyadic one, C = 3^n",
         ConstantKind::Explicit, false},
        {SpecId::LEM26, "LEM26", "capacitary maximal functions of two orders: M_gamma f <= C (M_alpha f^(1/q))^q",
         ConstantKind::Empirical, true},
        {SpecId::LEM31, "LEM31", "Gamma functional bound: Gamma(f) <= 2^s/(1-2^-s) ∫|f|^s dcap", ConstantKind::Explicit, true},
        {SpecId::LEM32, "LEM32", "weak type of M_cap((I_alpha * phi)^s) against ||phi||_s^s", ConstantKind::Empirical, true},
        {SpecId::THM17i, "THM17i", "strong (p,p), p > 1, of the capacitary maximal function", ConstantKind::Empirical, true},
        {SpecId::THM17ii, "THM17ii", "weak (1,1) of the capacitary maximal function", ConstantKind::Empirical, true},
        {SpecId::COR19i, "COR19i", "strong (p,p) of M_{cap gamma,s} against cap_{alpha,s}", ConstantKind::Empirical, true},
        {SpecId::COR19ii, "COR19ii", "weak (p,p) of M_{cap gamma,s} against cap_{alpha,s} at the endpoint exponent",
         ConstantKind::Empirical, true},
        {SpecId::SUBLIN, "SUBLIN", "sublinearity of the dyadic-content Choquet integral, constant 1", ConstantKind::Explicit,
         false},
    }};
    return table;
}

inline const SpecInfo& spec_info(SpecId id) {
    for (const auto& s : catalog()) {
        if (s.id == id) return s;
    }
    throw std::logic_error("unknown spec id");
}

inline std::string to_string(SpecId id) { return std::string(spec_info(id).name); }

inline SpecId parse_spec_id(std::string_view name) {
    for (const auto& s : catalog()) {
        if (s.name == name) return s.id;
    }
    throw std::invalid_argument("unknown spec id: " + std::string(name));
}

// Which evaluators a content inequality uses.
enum class Form { Dyadic, Ball };

inline std::string to_string(Form f) { return f == Form::Dyadic ? "dyadic" : "ball"; }
inline Form parse_form(std::string_view s) {
    if (s == "dyadic") return Form::Dyadic;
    if (s == "ball") return Form::Ball;
    throw std::invalid_argument("unknown form: " + std::string(s));
}

struct CheckParams {
    int n = 1;
    int L = 4;
    double beta = 0.5;
    double gamma = 0.25;
    double p = 2.0;
    double alpha = 0.3;
    double s = 2.0;
    std::optional<double> t;     // single threshold for weak-type checks; default is the full grid
    std::optional<Form> form;    // default depends on the spec
    std::optional<double> tolerance;  // relative slack override
};

enum class Verdict { Pass, Inconclusive, Fail };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Fail: return "fail";
    }
    return "pass";
}

struct InequalityCheck {
    SpecId id = SpecId::DYWEAK;
    std::uint64_t seed = 0;
    CheckParams params;
    Interval lhs{0.0};
    Interval rhs{0.0};
    double constant = 1.0;
    Interval ratio{0.0};
    Verdict verdict = Verdict::Pass;
    double threshold = 0.0;              // t at the reported record (weak type, level sets)
    std::size_t evaluations = 1;         // thresholds or cells examined
    std::size_t failing = 0;             // of those, proven violations
    std::size_t inconclusive = 0;        // of those, undecided
    std::string note;
};

// Frozen empirical constants supplied to a check. Unused entries stay empty.
struct Constants {
    std::optional<double> empirical;       // the spec's own constant
    std::optional<double> weak_type;       // A1 for the interpolation chain
    std::optional<double> equivalence;     // C_beta between ball and dyadic content
};

// ---------------------------------------------------------------------------
// Explicit constants

inline double interpolation_constant(double K, double A1, double A2, double p) {
    if (!(p > 1.0)) throw std::domain_error("interpolation_constant: p must exceed 1");
    if (!(K >= 1.0) || !(A1 > 0.0) || !(A2 > 0.0)) throw std::domain_error("interpolation_constant: need K >= 1, A1, A2 > 0");
    const double b = 2.0 * A2 * K;
    return A1 / A2 * std::pow(b, p) + 2.0 * A1 * K * std::pow(b, p - 1.0) / (p - 1.0);
}

inline double dimension_change_constant(double beta, double gamma) {
    return omega(beta) * std::pow(omega(gamma), -beta / gamma) * beta / gamma;
}

inline double gamma_functional_constant(double s) { return std::pow(2.0, s) / (1.0 - std::pow(2.0, -s)); }

inline double level_set_scale(double beta, int n, double equivalence) {
    return omega(beta) / (std::pow(equivalence, 3) * std::ldexp(1.0, n) * std::pow(4.0, beta));
}

// ---------------------------------------------------------------------------
// Comparison

inline Interval safe_ratio(const Interval& lhs, const Interval& scaled_rhs) {
    auto div = [](double a, double b) {
        if (a == 0.0) return 0.0;
        return b == 0.0 ? std::numeric_limits<double>::infinity() : a / b;
    };
    return {div(lhs.lo, scaled_rhs.hi), div(lhs.hi, scaled_rhs.lo)};
}

inline Verdict decide(const Interval& lhs, const Interval& rhs, double constant, double slack) {
    const double factor = constant * (1.0 + slack);
    if (lhs.hi <= factor * rhs.lo) return Verdict::Pass;
    if (lhs.lo > factor * rhs.hi) return Verdict::Fail;
    return Verdict::Inconclusive;
}

// Keeps the most severe record; among equals, the one with the larger ratio.
inline void merge_worst(InequalityCheck& acc, const InequalityCheck& c) {
    acc.failing += c.failing;
    acc.inconclusive += c.inconclusive;
    acc.evaluations += c.evaluations;
    const bool worse = static_cast<int>(c.verdict) > static_cast<int>(acc.verdict) ||
                       (c.verdict == acc.verdict && c.ratio.hi > acc.ratio.hi);
    if (worse) {
        acc.lhs = c.lhs;
        acc.rhs = c.rhs;
        acc.ratio = c.ratio;
        acc.verdict = c.verdict;
        acc.threshold = c.threshold;
    }
}

inline InequalityCheck make_record(SpecId id, std::uint64_t seed, const CheckParams& params, const Interval& lhs,
                                   const Interval& rhs, double constant, double slack) {
    InequalityCheck c;
    c.id = id;
    c.seed = seed;
    c.params = params;
    c.lhs = lhs;
    c.rhs = rhs;
    c.constant = constant;
    c.ratio = safe_ratio(lhs, Interval{rhs.lo * constant, rhs.hi * constant});
    c.verdict = decide(lhs, rhs, constant, slack);
    c.failing = c.verdict == Verdict::Fail;
    c.inconclusive = c.verdict == Verdict::Inconclusive;
    return c;
}

// ---------------------------------------------------------------------------
// Level sets of interval-valued maximal functions

struct Threshold {
    double t;
    bool inclusive;  // {M >= t}: the limit of {M > t'} as t' increases to t
};

// The distinct values of M (both endpoints), the left limits at each of them,
// and geometric midpoints between consecutive ones.
inline std::vector<Threshold> threshold_grid(const MaximalResult& m) {
    std::vector<double> v;
    for (const auto& x : m.values) {
        if (x.lo > 0.0) v.push_back(x.lo);
        if (x.hi > 0.0) v.push_back(x.hi);
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<Threshold> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0) out.push_back({std::sqrt(v[k - 1] * v[k]), false});
        out.push_back({v[k], true});
        out.push_back({v[k], false});
    }
    return out;
}

struct LevelSets {
    GridSet certain;
    GridSet possible;
};

inline LevelSets level_sets(const MaximalResult& m, const Threshold& th) {
    LevelSets s{GridSet(m.n, m.L), GridSet(m.n, m.L)};
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        const auto& x = m.values[i];
        if (th.inclusive ? x.lo >= th.t : x.lo > th.t) s.certain.insert(i);
        if (th.inclusive ? x.hi >= th.t : x.hi > th.t) s.possible.insert(i);
    }
    return s;
}

template <SetFunctionEvaluator C>
Interval level_set_measure(const LevelSets& s, C&& cap) {
    return {lower(cap(s.certain)), upper(cap(s.possible))};
}

// sup over thresholds of t^p C({M > t}) against constant * rhs.
template <SetFunctionEvaluator C>
InequalityCheck weak_type_check(SpecId id, std::uint64_t seed, const CheckParams& params, const MaximalResult& m,
                                C&& cap, double p, const Interval& rhs, double constant, double slack) {
    std::vector<Threshold> grid = params.t ? std::vector<Threshold>{{*params.t, false}} : threshold_grid(m);
    InequalityCheck acc = make_record(id, seed, params, Interval{0.0}, rhs, constant, slack);
    acc.evaluations = 0;
    acc.failing = acc.inconclusive = 0;
    for (const auto& th : grid) {
        const Interval measure = level_set_measure(level_sets(m, th), cap);
        const double tp = std::pow(th.t, p);
        auto c = make_record(id, seed, params, Interval{tp * measure.lo, tp * measure.hi}, rhs, constant, slack);
        c.threshold = th.t;
        merge_worst(acc, c);
    }
    if (grid.empty()) acc.evaluations = 1;
    return acc;
}

// ---------------------------------------------------------------------------
// Parameter domains

inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

inline Form default_form(SpecId id) {
    switch (id) {
        case SpecId::DYWEAK:
        case SpecId::SUBLIN:
        case SpecId::LEM22:
        case SpecId::LEM23: return Form::Dyadic;
        default: return Form::Ball;
    }
}

inline double cor19_endpoint(const CheckParams& q) { return (q.n - q.alpha * q.s) / (q.n - q.gamma * q.s); }

inline double tolerance(SpecId id) {
    if (id == SpecId::LEM31) return 0.1;
    return spec_info(id).uses_capacity ? 1e-6 : 1e-9;
}

// Validates the parameters for a spec and fills in derived defaults.
inline CheckParams normalize(SpecId id, CheckParams q) {
    require_grid_shape(q.n, q.L);
    const bool has_form = id == SpecId::THM12i || id == SpecId::COR14i || id == SpecId::COR14ii ||
                          id == SpecId::LEM22 || id == SpecId::LEM23;
    if (q.form && !has_form) require(*q.form == default_form(id), to_string(id) + " has no " + to_string(*q.form) + " form");
    q.form = has_form ? q.form.value_or(default_form(id)) : std::optional<Form>{};
    if (q.tolerance) require(*q.tolerance >= 0.0, "tolerance must be non-negative");
    if (q.t) require(*q.t > 0.0, "threshold t must be positive");
    auto content_pair = [&] {
        require(q.gamma > 0.0 && q.gamma < q.beta && q.beta <= q.n, "need 0 < gamma < beta <= n");
    };
    switch (id) {
        case SpecId::SUBLIN:
        case SpecId::DYWEAK:
        case SpecId::THM12ii:
        case SpecId::LEM24:
            check_beta(q.beta, q.n);
            q.p = 1.0;
            break;
        case SpecId::THM12i:
            check_beta(q.beta, q.n);
            require(q.p > 1.0, "THM12i needs p > 1");
            break;
        case SpecId::COR14i:
            content_pair();
            require(q.p > q.gamma / q.beta, "COR14i needs p > gamma/beta");
            break;
        case SpecId::COR14ii:
            content_pair();
            q.p = q.gamma / q.beta;
            break;
        case SpecId::LEM22:
        case SpecId::LEM23:
            content_pair();
            break;
        case SpecId::LEM31:
        case SpecId::LEM32:
        case SpecId::THM17ii:
            CapacityParams(q.alpha, q.s, q.n, q.L).validate();
            q.p = id == SpecId::LEM31 ? q.s : 1.0;
            break;
        case SpecId::THM17i:
            CapacityParams(q.alpha, q.s, q.n, q.L).validate();
            require(q.p > 1.0, "THM17i needs p > 1");
            break;
        case SpecId::LEM26:
        case SpecId::COR19i:
        case SpecId::COR19ii:
            CapacityParams(q.alpha, q.s, q.n, q.L).validate();
            require(q.gamma > 0.0 && q.gamma < q.alpha, "need 0 < gamma < alpha");
            if (id == SpecId::COR19ii) q.p = cor19_endpoint(q);
            if (id == SpecId::COR19i) require(q.p > cor19_endpoint(q), "COR19i needs p > (n - alpha s)/(n - gamma s)");
            if (id == SpecId::LEM26) q.p = 1.0;
            break;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Evaluation context shared by all instances with the same parameters

class CheckContext {
public:
    CheckContext(SpecId id, const CheckParams& params, Constants constants = {})
        : id_(id), params_(normalize(id, params)), constants_(constants) {
        if (spec_info(id).uses_capacity) {
            cap_alpha_.emplace(CapacityParams(params_.alpha, params_.s, params_.n, params_.L));
            if (id == SpecId::LEM26 || id == SpecId::COR19i || id == SpecId::COR19ii) {
                cap_gamma_.emplace(CapacityParams(params_.gamma, params_.s, params_.n, params_.L));
            }
        }
    }

    SpecId id() const { return id_; }
    const CheckParams& params() const { return params_; }
    const Constants& constants() const { return constants_; }
    const CapacityEvaluator& cap_alpha() const { return *cap_alpha_; }
    const CapacityEvaluator& cap_gamma() const { return *cap_gamma_; }
    bool has_capacity() const { return cap_alpha_.has_value(); }

    // Constant the check compares against (1 when estimating).
    double constant(bool estimating) const {
        const auto& q = params_;
        switch (id_) {
            case SpecId::SUBLIN: return 1.0;
            case SpecId::LEM22:
                if (q.form == Form::Ball) return dimension_change_constant(q.beta, q.gamma);
                return dimension_change_constant(q.beta, q.gamma) *
                       std::pow(dyadic_to_ball_upper_factor(q.gamma, q.n), q.beta / q.gamma) /
                       dyadic_to_ball_lower_factor(q.beta, q.n);
            case SpecId::LEM23: return q.beta / q.gamma;
            case SpecId::LEM24: return std::pow(3.0, q.n);
            case SpecId::LEM31: return gamma_functional_constant(q.s);
            case SpecId::THM12i:
                if (estimating) return 1.0;
                if (!constants_.weak_type) throw std::invalid_argument("THM12i needs the frozen weak-type constant A1");
                return interpolation_constant(2.0, *constants_.weak_type, 1.0, q.p);
            default:
                if (estimating) return 1.0;
                if (!constants_.empirical) {
                    throw std::invalid_argument(to_string(id_) + " needs a frozen empirical constant");
                }
                return *constants_.empirical;
        }
    }

private:
    SpecId id_;
    CheckParams params_;
    Constants constants_;
    std::optional<CapacityEvaluator> cap_alpha_;
    std::optional<CapacityEvaluator> cap_gamma_;
};

// ---------------------------------------------------------------------------
// Instances

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + k + 0x632BE59BD9B4E019ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline ValueLaw law_for_seed(std::uint64_t seed, std::optional<ValueLaw> law) {
    if (law) return *law;
    static constexpr ValueLaw laws[] = {ValueLaw::Uniform, ValueLaw::DyadicLevels, ValueLaw::SparseIndicator};
    return laws[seed % 3];
}

// Functions of one SUBLIN family: two to four members.
inline std::vector<StepFunction> sublinear_family(std::uint64_t seed, int L, int n, std::optional<ValueLaw> law) {
    const std::size_t k = 2 + seed % 3;
    std::vector<StepFunction> fs;
    for (std::size_t j = 0; j < k; ++j) {
        const std::uint64_t sj = derive_seed(seed, j);
        fs.push_back(random_step_function(sj, L, n, law_for_seed(sj, law)));
    }
    return fs;
}

// ---------------------------------------------------------------------------
// The checks. `f` is the instance function (for LEM32, the density phi).

namespace detail {

inline InequalityCheck pointwise(SpecId id, std::uint64_t seed, const CheckParams& q, const MaximalResult& lhs,
                                 const MaximalResult& rhs_base, double exponent, double constant, double slack) {
    InequalityCheck acc;
    bool first = true;
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        const Interval r = pow(rhs_base.values[i], exponent);
        auto c = make_record(id, seed, q, lhs.values[i], r, constant, slack);
        c.threshold = static_cast<double>(i);
        if (first) {
            acc = c;
            first = false;
        } else {
            merge_worst(acc, c);
        }
    }
    acc.note = "worst cell " + std::to_string(static_cast<std::size_t>(acc.threshold));
    return acc;
}

}  // namespace detail

inline InequalityCheck check(const CheckContext& ctx, const StepFunction& f, std::uint64_t seed = 0,
                             bool estimating = false) {
    const SpecId id = ctx.id();
    const CheckParams& q = ctx.params();
    if (f.dimension() != q.n || f.resolution() != q.L) throw std::domain_error("instance shape does not match parameters");
    const double C = ctx.constant(estimating);
    const double slack = q.tolerance.value_or(tolerance(id));
    const bool dyadic = q.form == Form::Dyadic;
    const DyadicContentEvaluator dy_beta{q.beta};
    const BallContentEvaluator ball_beta{q.beta};

    switch (id) {
        case SpecId::SUBLIN:
            throw std::logic_error("SUBLIN instances are families; use check_family");

        case SpecId::DYWEAK: {
            const auto m = dyadic_maximal(f, q.beta);
            return weak_type_check(id, seed, q, m, dy_beta, 1.0, Interval{choquet_integral(f, dy_beta)}, C, slack);
        }
        case SpecId::THM12ii: {
            const auto m = ball_maximal(f, q.beta, MaximalKind::Centered);
            return weak_type_check(id, seed, q, m, ball_beta, 1.0, choquet_integral(f, ball_beta), C, slack);
        }
        case SpecId::THM12i: {
            if (dyadic) {
                const auto m = dyadic_maximal(f, q.beta);
                const Interval lhs{choquet_integral(m.lower_function().pow(q.p), dy_beta)};
                return make_record(id, seed, q, lhs, Interval{choquet_integral(f.pow(q.p), dy_beta)}, C, slack);
            }
            const auto m = ball_maximal(f, q.beta, MaximalKind::Centered);
            const Interval lhs = choquet_integral(m.lower_function().pow(q.p), m.upper_function().pow(q.p), ball_beta);
            return make_record(id, seed, q, lhs, choquet_integral(f.pow(q.p), ball_beta), C, slack);
        }
        case SpecId::COR14i:
        case SpecId::COR14ii: {
            const auto m = dyadic ? dyadic_maximal(f, q.beta) : ball_maximal(f, q.beta, MaximalKind::Centered);
            auto run = [&](auto&& content) {
                const Interval rhs{lower(choquet_integral(f.pow(q.p), content)), upper(choquet_integral(f.pow(q.p), content))};
                if (id == SpecId::COR14ii) return weak_type_check(id, seed, q, m, content, q.p, rhs, C, slack);
                const Interval lhs{lower(choquet_integral(m.lower_function().pow(q.p), content)),
                                   upper(choquet_integral(m.upper_function().pow(q.p), content))};
                return make_record(id, seed, q, lhs, rhs, C, slack);
            };
            return dyadic ? run(DyadicContentEvaluator{q.gamma}) : run(BallContentEvaluator{q.gamma});
        }
        case SpecId::LEM22: {
            const double e = q.gamma / q.beta;
            if (dyadic) {
                const Interval lhs{choquet_integral(f, dy_beta)};
                const Interval rhs{std::pow(choquet_integral(f.pow(e), DyadicContentEvaluator{q.gamma}), 1.0 / e)};
                return make_record(id, seed, q, lhs, rhs, C, slack);
            }
            const Interval lhs = choquet_integral(f, ball_beta);
            const Interval rhs = pow(choquet_integral(f.pow(e), BallContentEvaluator{q.gamma}), 1.0 / e);
            return make_record(id, seed, q, lhs, rhs, C, slack);
        }
        case SpecId::LEM23: {
            const double e = q.gamma / q.beta;
            if (dyadic) {
                return detail::pointwise(id, seed, q, dyadic_maximal(f, q.beta), dyadic_maximal(f.pow(e), q.gamma), 1.0 / e,
                                         C, slack);
            }
            return detail::pointwise(id, seed, q, ball_maximal(f, q.beta, MaximalKind::Centered),
                                     ball_maximal(f.pow(e), q.gamma, MaximalKind::Centered), 1.0 / e, C, slack);
        }
        case SpecId::LEM24: {
            if (!ctx.constants().equivalence) throw std::invalid_argument("LEM24 needs the frozen equivalence constant C_beta");
            const double c = level_set_scale(q.beta, q.n, *ctx.constants().equivalence);
            const auto big = ball_maximal(f, q.beta, MaximalKind::Uncentered);
            const auto dy = dyadic_maximal(f, q.beta);
            std::vector<Threshold> grid = q.t ? std::vector<Threshold>{{*q.t, false}} : threshold_grid(big);
            InequalityCheck acc = make_record(id, seed, q, Interval{0.0}, Interval{0.0}, C, slack);
            acc.evaluations = acc.failing = acc.inconclusive = 0;
            for (const auto& th : grid) {
                const Interval lhs = level_set_measure(level_sets(big, th), ball_beta);
                const Interval rhs = level_set_measure(level_sets(dy, Threshold{c * th.t, th.inclusive}), ball_beta);
                auto rec = make_record(id, seed, q, lhs, rhs, C, slack);
                rec.threshold = th.t;
                merge_worst(acc, rec);
            }
            if (grid.empty()) acc.evaluations = 1;
            acc.note = "c = " + std::to_string(c);
            return acc;
        }
        case SpecId::LEM31: {
            const auto g = gamma_functional(f, ctx.cap_alpha().kernel(), q.s);
            const Interval lhs = g.enclosure();
            const Interval rhs = choquet_integral(f.pow(q.s), ctx.cap_alpha());
            auto rec = make_record(id, seed, q, lhs, rhs, C, slack);
            if (!g.converged) {
                rec.note = "solver did not converge";
                if (rec.verdict == Verdict::Fail) rec.verdict = Verdict::Inconclusive;
            }
            return rec;
        }
        case SpecId::LEM32: {
            const StepFunction g = ctx.cap_alpha().kernel().potential(f).pow(q.s);
            const auto m = riesz_maximal(g, ctx.cap_alpha());
            double norm = 0.0;
            for (double v : f.values()) norm += std::pow(v, q.s);
            norm *= std::pow(side_length(q.L), q.n);
            return weak_type_check(id, seed, q, m, ctx.cap_alpha(), 1.0, Interval{norm}, C, slack);
        }
        case SpecId::THM17i:
        case SpecId::THM17ii: {
            const auto m = riesz_maximal(f, ctx.cap_alpha());
            const Interval rhs = choquet_integral(f.pow(q.p), ctx.cap_alpha());
            if (id == SpecId::THM17ii) return weak_type_check(id, seed, q, m, ctx.cap_alpha(), 1.0, rhs, C, slack);
            const Interval lhs = choquet_integral(m.lower_function().pow(q.p), m.upper_function().pow(q.p), ctx.cap_alpha());
            return make_record(id, seed, q, lhs, rhs, C, slack);
        }
        case SpecId::COR19i:
        case SpecId::COR19ii: {
            const auto m = riesz_maximal(f, ctx.cap_gamma());
            const Interval rhs = choquet_integral(f.pow(q.p), ctx.cap_alpha());
            if (id == SpecId::COR19ii) return weak_type_check(id, seed, q, m, ctx.cap_alpha(), q.p, rhs, C, slack);
            const Interval lhs = choquet_integral(m.lower_function().pow(q.p), m.upper_function().pow(q.p), ctx.cap_alpha());
            return make_record(id, seed, q, lhs, rhs, C, slack);
        }
        case SpecId::LEM26: {
            const double e = (q.n - q.gamma * q.s) / (q.n - q.alpha * q.s);
            return detail::pointwise(id, seed, q, riesz_maximal(f, ctx.cap_gamma()),
                                     riesz_maximal(f.pow(1.0 / e), ctx.cap_alpha()), e, C, slack);
        }
    }
    throw std::logic_error("unhandled spec");
}

inline InequalityCheck check_family(const CheckContext& ctx, const std::vector<StepFunction>& family,
                                    std::uint64_t seed = 0) {
    const auto& q = ctx.params();
    if (ctx.id() != SpecId::SUBLIN) throw std::logic_error("check_family is for SUBLIN");
    if (family.empty()) throw std::domain_error("empty family");
    const DyadicContentEvaluator dy{q.beta};
    StepFunction sum(q.n, q.L);
    double rhs = 0.0;
    for (const auto& f : family) {
        if (f.dimension() != q.n || f.resolution() != q.L) throw std::domain_error("family member shape mismatch");
        sum = sum + f;
        rhs += choquet_integral(f, dy);
    }
    auto rec = make_record(SpecId::SUBLIN, seed, q, Interval{choquet_integral(sum, dy)}, Interval{rhs}, 1.0,
                           q.tolerance.value_or(tolerance(SpecId::SUBLIN)));
    rec.note = std::to_string(family.size()) + " functions";
    return rec;
}

// The random instance for a seed, drawn the same way for every spec.
inline InequalityCheck check_seed(const CheckContext& ctx, std::uint64_t seed, std::optional<ValueLaw> law,
                                  bool estimating = false) {
    const auto& q = ctx.params();
    if (ctx.id() == SpecId::SUBLIN) return check_family(ctx, sublinear_family(seed, q.L, q.n, law), seed);
    return check(ctx, random_step_function(seed, q.L, q.n, law_for_seed(seed, law)), seed, estimating);
}

// ---------------------------------------------------------------------------
// Differentiation trend

struct ContentTrend {
    double beta;
};

struct CapacityTrend {
    const CapacityEvaluator* cap;
};

// r -> norm(r)^-1 ∫_{B(x,r)} |f - f(x)|^p dC for each radius, where x is the
// center of `cell`. For the content the ball restriction is geometric and
// norm = omega_beta r^beta; for the capacity the ball is discretized and
// norm = c_{alpha,s} r^{n - alpha s}.
template <class Trend>
std::vector<Interval> differentiation_trend(const StepFunction& f, std::size_t cell, double p, const Trend& how,
                                            const std::vector<double>& radii) {
    const int n = f.dimension(), L = f.resolution();
    if (cell >= f.cell_count()) throw std::domain_error("trend: cell out of range");
    if (!(p > 0.0)) throw std::domain_error("trend: p must be positive");
    const double fx = f[cell];
    const StepFunction g = f.map([fx, p](double v) { return std::pow(std::abs(v - fx), p); });
    const Point x = cell_center(cell, n, L);
    const double diam = std::sqrt(static_cast<double>(n));
    std::vector<Interval> out;
    double prev = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        if (!(r > side_length(L) && r < diam)) throw std::domain_error("trend: radii must lie in (cell size, diam Q0)");
        if (!(r < prev)) throw std::domain_error("trend: radii must be strictly decreasing");
        prev = r;
        if constexpr (std::is_same_v<Trend, ContentTrend>) {
            out.push_back(ball_average(g, how.beta, Ball{x, r}));
        } else {
            const auto& cap = *how.cap;
            const Interval num = choquet_integral(g.restricted(cells_in_ball(Ball{x, r}, n, L)), cap);
            out.push_back(num / (unit_ball_capacity(cap) * Interval{std::pow(r, cap.params().scaling_exponent())}));
        }
    }
    return out;
}

}  // namespace capint
