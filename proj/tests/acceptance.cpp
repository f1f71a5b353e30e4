// Acceptance suite: one line per criterion, exit status = number of failures.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "capint/cli.hpp"
#include "kkt_oracle.hpp"
#include "oracles.hpp"

using namespace capint;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d: %s  %s (%s)\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ---------------------------------------------------------------------------

void dyadic_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::size_t sets = 0;
    for (double beta : {0.3, 0.5, 1.0}) {
        const auto ref = oracle::dyadic_content_by_antichains(1, 4, beta);
        for (std::uint64_t m = 0; m < ref.size(); ++m, ++sets) {
            const double v = dyadic_content(oracle::set_from_mask(m, 1, 4), beta);
            worst = std::max(worst, m == 0 ? std::abs(v) : rel_err(v, ref[m]));
        }
    }
    Rng rng(2024);
    for (double beta : {0.7, 1.5, 2.0}) {
        const auto ref = oracle::dyadic_content_by_antichains(2, 2, beta);
        for (int k = 0; k < 500; ++k, ++sets) {
            const std::uint64_t m = rng.raw() & 0xFFFF;
            const double v = dyadic_content(oracle::set_from_mask(m, 2, 2), beta);
            worst = std::max(worst, m == 0 ? std::abs(v) : rel_err(v, ref[m]));
        }
    }
    const double t = seconds_since(t0);
    report(1, worst <= 1e-12 && t <= 60.0, "dyadic content matches exhaustive cover enumeration",
           fmt("%zu sets, max rel err %.2e, %.1f s", sets, worst, t));
}

void choquet_oracle() {
    double worst_closed = 0.0, worst_riemann = 0.0;
    bool ok = true;
    // closed forms
    for (double beta : {0.4, 1.0}) {
        const DyadicContentEvaluator dy{beta};
        const GridSet full = GridSet::full(1, 5);
        worst_closed = std::max(worst_closed, rel_err(choquet_integral(StepFunction::indicator(full, 2.5), dy), 2.5));
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const GridSet e = random_grid_set(seed, 5, 1, 0.5), f = e & random_grid_set(seed + 100, 5, 1, 0.5);
            if (e.empty()) continue;
            const double a = 0.5 + seed, b = 1.25;
            // a on E, a + b on F inside E
            const StepFunction g = StepFunction::indicator(e, a) + StepFunction::indicator(f, b);
            const double closed = a * dyadic_content(e, beta) + b * dyadic_content(f, beta);
            worst_closed = std::max(worst_closed, rel_err(choquet_integral(g, dy), closed));
            worst_closed = std::max(worst_closed, rel_err(choquet_integral(StepFunction::indicator(e), dy), dyadic_content(e, beta)));
        }
    }
    ok = ok && worst_closed <= 1e-12;
    // midpoint rule in t with 1e5 samples; its error is at most max f * C(Q0) / steps
    const int steps = 100000;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = seed % 2 ? 2 : 1;
        const auto f = random_step_function(seed, n == 1 ? 5 : 3, n, law_for_seed(seed, std::nullopt));
        const double beta = n == 1 ? 0.6 : 1.3;
        const double exact = choquet_integral(f, DyadicContentEvaluator{beta});
        const double approx = oracle::riemann_choquet(f, DyadicContentEvaluator{beta}, steps);
        const GridSet q0 = GridSet::full(n, f.resolution());
        const double bound = f.max() * dyadic_content(q0, beta) / steps + 1e-12;
        worst_riemann = std::max(worst_riemann, std::abs(exact - approx) / bound);
        if (n == 1) {
            const Interval ball = choquet_integral(f, BallContentEvaluator{beta});
            const double rb = oracle::riemann_choquet(f, BallContentEvaluator{beta}, steps);
            const double ball_bound = f.max() * certified_content(q0, beta).lo / steps + 1e-12;
            worst_riemann = std::max(worst_riemann, std::abs(ball.lo - rb) / ball_bound);
        }
    }
    ok = ok && worst_riemann <= 1.0;
    report(2, ok, "Choquet integral matches closed forms and a 1e5-sample Riemann oracle",
           fmt("closed-form rel err %.1e; 100 functions, worst error / quadrature bound %.3f", worst_closed, worst_riemann));
}

void sublinearity() {
    std::size_t fails = 0, total = 0;
    struct Case {
        int n, L;
        double beta;
    };
    for (const Case c : {Case{1, 5, 0.3}, Case{1, 5, 0.7}, Case{2, 3, 1.2}, Case{2, 2, 1.9}}) {
        CheckParams q;
        q.n = c.n;
        q.L = c.L;
        q.beta = c.beta;
        const auto s = summarize(run_ensemble(SpecId::SUBLIN, q, Ensemble{1, 2500}));
        fails += s.fail + s.inconclusive;
        total += s.pass + s.fail + s.inconclusive;
    }
    report(3, fails == 0, "sublinearity of the dyadic-content integral", fmt("%zu families, %zu violations", total, fails));
}

// Frozen weak-type constants per beta, shared with criterion 5.
std::map<double, double> frozen_a1;

void dyadic_weak_type() {
    std::size_t evaluations = 0, fails = 0;
    std::string detail;
    for (double beta : {0.3, 0.5, 0.8}) {
        CheckParams q;
        q.beta = beta;
        const std::vector<int> ls{1, 2, 3, 4, 5, 6};
        const double a1 = estimate_sharp_constant(SpecId::DYWEAK, q, Ensemble{1, 100, std::nullopt, ls}).envelope;
        frozen_a1[beta] = a1;
        Constants k;
        k.empirical = a1;
        const auto s = summarize(run_ensemble(SpecId::DYWEAK, q, Ensemble{101, 900, std::nullopt, ls}, k));
        evaluations += s.evaluations;
        fails += s.failing_evaluations + s.inconclusive_evaluations;
        double worst = s.worst_ratio;
        // the same fresh functions at 30 random thresholds each, on top of the critical grid
        const auto extra = parallel_map(900, [&](std::size_t i) {
            const std::uint64_t seed = 101 + i;
            const int L = ls[seed % ls.size()];
            const StepFunction f = random_step_function(seed, L, 1, law_for_seed(seed, std::nullopt));
            std::array<double, 3> acc{0, 0, 0};  // evaluations, fails, worst ratio
            Rng rng(derive_seed(seed, 2));
            for (int j = 0; j < 30; ++j) {
                CheckParams qt = q;
                qt.L = L;
                qt.t = (1e-3 + 1.1 * rng.uniform()) * std::max(f.max(), 1.0);
                const auto c = check(CheckContext(SpecId::DYWEAK, qt, k), f, seed);
                acc[0] += 1;
                acc[1] += c.verdict != Verdict::Pass;
                acc[2] = std::max(acc[2], c.ratio.hi);
            }
            return acc;
        });
        for (const auto& a : extra) {
            evaluations += static_cast<std::size_t>(a[0]);
            fails += static_cast<std::size_t>(a[1]);
            worst = std::max(worst, a[2]);
        }
        detail += fmt("A1(%.1f)=%.6g worst %.6g; ", beta, a1, worst);
    }
    report(4, fails == 0 && evaluations >= 100000, "dyadic weak (1,1) with A1 frozen on seeds 1-100, applied to 101-1000",
           detail + fmt("%zu (f,t) pairs, %zu exceed A1 (1+1e-9)", evaluations, fails));
}

void interpolation_chain() {
    std::size_t pass = 0, total = 0;
    for (double p : {1.5, 2.0, 3.0}) {
        for (const auto& [beta, a1] : frozen_a1) {
            CheckParams q;
            q.beta = beta;
            q.p = p;
            q.form = Form::Dyadic;
            Constants k;
            k.weak_type = a1;
            const auto s = summarize(run_ensemble(SpecId::THM12i, q, Ensemble{1001, 3334, std::nullopt, {2, 3, 4, 5, 6}}, k));
            pass += s.pass;
            total += s.pass + s.fail + s.inconclusive;
        }
    }
    report(5, total > 0 && pass == total, "strong (p,p) of the dyadic maximal function with the interpolation constant",
           fmt("%zu/%zu pass over p in {1.5, 2, 3}", pass, total));
}

struct Pair {
    int n, L_dyadic, L_ball;
    double gamma, beta;
};
const Pair kPairs[] = {{1, 5, 4, 0.5, 1.0}, {1, 5, 4, 0.4, 0.8}, {2, 3, 2, 1.0, 2.0}};

void pointwise_dimension_change() {
    std::size_t dy_fail = 0, ball_fail = 0, ball_inc = 0, ball_total = 0, dy_total = 0;
    for (const Pair& c : kPairs) {
        CheckParams q;
        q.n = c.n;
        q.beta = c.beta;
        q.gamma = c.gamma;
        q.L = c.L_dyadic;
        q.form = Form::Dyadic;
        auto s = summarize(run_ensemble(SpecId::LEM23, q, Ensemble{1, 10000}));
        dy_fail += s.fail + s.inconclusive;
        dy_total += s.pass + s.fail + s.inconclusive;
        q.L = c.L_ball;
        q.form = Form::Ball;
        s = summarize(run_ensemble(SpecId::LEM23, q, Ensemble{1, 10000}));
        ball_fail += s.fail;
        ball_inc += s.inconclusive;
        ball_total += s.pass + s.fail + s.inconclusive;
    }
    const double inc_rate = static_cast<double>(ball_inc) / static_cast<double>(ball_total);
    report(6, dy_fail == 0 && ball_fail == 0 && inc_rate <= 0.2, "pointwise dimension change of maximal functions",
           fmt("dyadic: %zu instances, %zu violations; ball: %zu instances, %zu proven violations, %.1f%% inconclusive",
               dy_total, dy_fail, ball_total, ball_fail, 100 * inc_rate));
}

void integral_dimension_change() {
    std::size_t fails = 0, total = 0;
    for (const Pair& c : kPairs) {
        CheckParams q;
        q.n = c.n;
        q.beta = c.beta;
        q.gamma = c.gamma;
        q.L = c.L_dyadic;
        q.form = Form::Dyadic;
        const auto s = summarize(run_ensemble(SpecId::LEM22, q, Ensemble{1, 3334}));
        fails += s.fail + s.inconclusive;
        total += s.pass + s.fail + s.inconclusive;
    }
    report(7, fails == 0, "integral dimension change with the geometric conversion factors",
           fmt("%zu instances, %zu violations", total, fails));
}

void level_set_comparison() {
    CheckParams q;
    q.beta = 0.5;
    q.L = 5;
    Constants k;
    k.equivalence = estimate_equivalence_constant(0.5, 1, Ensemble{1, 100, std::nullopt, {5}}).envelope;
    const auto s = summarize(run_ensemble(SpecId::LEM24, q, Ensemble{101, 1000}, k));
    report(8, s.fail == 0, "level sets of the ball maximal function against the dyadic one, C = 3^n",
           fmt("C_beta = %.6g, %zu instances, %zu proven violations, %zu inconclusive", *k.equivalence,
               s.pass + s.fail + s.inconclusive, s.fail, s.inconclusive));
}

void capacity_solver() {
    // (a) monotonicity on nested pairs
    double worst_mono = 0.0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const int n = seed % 4 == 3 ? 2 : 1;
        const int L = n == 1 ? 5 : 3;
        const double alpha = n == 1 ? 0.3 : 0.6;
        const KernelMatrix kernel(L, n, alpha);
        GridSet big = random_grid_set(seed, L, n, 0.4);
        if (big.empty()) big.insert(0);
        GridSet small = big & random_grid_set(seed + 7777, L, n, 0.6);
        if (small.empty()) small.insert(big.cells().front());
        const double s = 1.5 + 0.5 * (seed % 2);
        worst_mono = std::max(worst_mono, capacity(small, kernel, s).objective - capacity(big, kernel, s).objective);
    }
    const bool mono_ok = worst_mono <= 2e-6;
    // (b) KKT agreement for s = 2 on all one- and two-cell sets
    double worst_kkt = 0.0;
    std::size_t sets = 0;
    for (double alpha : {0.3, 0.4}) {
        const KernelMatrix kernel(3, 1, alpha);
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t j = i; j < 8; ++j) {
                GridSet e(1, 3);
                e.insert(i);
                e.insert(j);
                worst_kkt = std::max(worst_kkt, rel_err(capacity(e, kernel, 2.0).objective, oracle::kkt_capacity_s2(e, kernel)));
                ++sets;
            }
        }
    }
    const bool kkt_ok = worst_kkt <= 1e-4;
    // (c) homogeneity: E in the left half at resolution L, its 2x dilation at L - 1
    std::string scaling;
    bool scale_ok = true;
    for (auto [alpha, s] : {std::pair{0.4, 2.0}, std::pair{0.3, 1.5}}) {
        const int L = 8;
        GridSet e(1, L), dilated(1, L - 1);
        for (std::size_t i = 0; i < (std::size_t{1} << (L - 1)); ++i) {
            e.insert(i);
            dilated.insert(i);
        }
        const double ratio = capacity(dilated, CapacityParams(alpha, s, 1, L - 1)).objective /
                             capacity(e, CapacityParams(alpha, s, 1, L)).objective;
        const double expected = 1.0 - alpha * s, got = std::log2(ratio);
        const double err = std::abs(got - expected) / expected;
        scale_ok = scale_ok && err <= 0.05;
        scaling += fmt("(%.1f,%.1f): exponent %.4f vs %.4f, %.1f%% off; ", alpha, s, got, expected, 100 * err);
    }
    report(9, mono_ok && kkt_ok && scale_ok, "capacity solver: monotone, agrees with KKT, recovers the scaling exponent",
           fmt("(a) worst increase %.2e on 500 pairs; (b) %zu sets, max rel err %.2e; (c) ", worst_mono, sets, worst_kkt) +
               scaling);
}

void gamma_functional_bound() {
    std::size_t fails = 0, inc = 0, total = 0;
    for (double s : {1.5, 2.0}) {
        CheckParams q;
        q.alpha = 0.3;
        q.s = s;
        q.tolerance = 0.1;
        const auto r = summarize(run_ensemble(SpecId::LEM31, q, Ensemble{1, 100, std::nullopt, {2, 3, 4}}));
        fails += r.fail;
        inc += r.inconclusive;
        total += r.pass + r.fail + r.inconclusive;
    }
    report(10, fails == 0 && inc == 0, "Gamma functional bound with constant 2^s/(1-2^-s), 10% budget",
           fmt("%zu functions, %zu fail, %zu inconclusive", total, fails, inc));
}

void capacitary_weak_type() {
    CheckParams q;
    q.alpha = 0.3;
    q.s = 2.0;
    q.L = 4;
    Constants k;
    k.empirical = estimate_sharp_constant(SpecId::LEM32, q, Ensemble{1, 1000}).envelope;
    const auto s = summarize(run_ensemble(SpecId::LEM32, q, Ensemble{1001, 1000}, k));
    report(11, s.fail == 0 && s.inconclusive == 0, "weak type of M_cap((I_alpha * phi)^s), constant frozen on seeds 1-1000",
           fmt("C = %.6g; fresh seeds 1001-2000: %zu exceed C (1+1e-6), worst ratio %.6g", *k.empirical, s.fail,
               s.worst_ratio));
}

void differentiation() {
    const int L = 6;
    const std::size_t N = cell_count(1, L);
    const double h = side_length(L);
    std::vector<double> radii;
    // just inside (k + 1/2) h, where the discretized ball equals the geometric one
    for (int k : {24, 16, 12, 8, 6, 4, 3, 2}) radii.push_back((k + 0.5) * h * (1 - 1e-12));
    const CapacityEvaluator cap(CapacityParams(0.3, 2.0, 1, L));
    std::size_t nonmonotone[2] = {0, 0}, over[2] = {0, 0};
    bool ramp_ok = true;
    for (int k = 0; k <= 50; ++k) {
        Rng rng(5000 + k);
        std::vector<double> nodes(6);
        for (auto& v : nodes) v = rng.uniform();
        double lip = 1.0;
        std::vector<double> vals(N);
        if (k > 0) {
            lip = 0.0;
            for (int j = 0; j < 5; ++j) lip = std::max(lip, 5 * std::abs(nodes[j + 1] - nodes[j]));
        }
        for (std::size_t i = 0; i < N; ++i) {
            const double y = (i + 0.5) * h;
            if (k == 0) {
                vals[i] = y;
            } else {
                const double u = 5 * y;
                const int j = std::min(4, static_cast<int>(u));
                vals[i] = nodes[j] + (u - j) * (nodes[j + 1] - nodes[j]);
            }
        }
        const StepFunction f(1, L, vals);
        const std::size_t x = k == 0 ? N / 2 - 1 : 25 + rng.below(14);
        for (int which = 0; which < 2; ++which) {
            const auto t = which == 0 ? differentiation_trend(f, x, 1.0, ContentTrend{1.0}, radii)
                                      : differentiation_trend(f, x, 1.0, CapacityTrend{&cap}, radii);
            bool mono = true;
            for (std::size_t i = 1; i < t.size(); ++i) mono = mono && t[i].hi <= t[i - 1].lo + 1e-9;
            const bool final_ok = t.back().hi <= lip * radii.back();
            nonmonotone[which] += !mono;
            over[which] += !final_ok;
            if (k == 0) ramp_ok = ramp_ok && mono && final_ok;
        }
    }
    const bool ok = nonmonotone[0] + nonmonotone[1] + over[0] + over[1] == 0;
    report(12, ok, "differentiation trend non-increasing, final value <= Lip r_min",
           fmt("ramp %s; 50 random Lipschitz: content %zu non-monotone, %zu over; capacity %zu non-monotone, %zu over",
               ramp_ok ? "ok" : "violates", nonmonotone[0], over[0], nonmonotone[1], over[1]));
}

int cli(std::vector<std::string> args, std::string& out) {
    std::vector<const char*> argv{"capint"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = capint::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str() + e.str();
    return code;
}

void full_run() {
    const auto dir = std::filesystem::temp_directory_path() / "capint_acceptance";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "all.json").string();
    std::string out;
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cli({"verify", "--all", "--seed", "1001", "--size", "500", "--output", path}, out);
    const double t = seconds_since(t0);
    std::string rerun;
    const int again = cli({"report", "--input", path, "--rerun"}, rerun);
    const bool identical = rerun.find("identical") == 0;
    report(13, t <= 300.0 && code != 2 && identical, "verify --all within 5 minutes, re-run from its echoed config",
           fmt("%.1f s, exit %d, re-run %s (exit %d)", t, code, identical ? "byte-identical" : "differs", again));
}

}  // namespace

int main() {
    dyadic_oracle();
    choquet_oracle();
    sublinearity();
    dyadic_weak_type();
    interpolation_chain();
    pointwise_dimension_change();
    integral_dimension_change();
    level_set_comparison();
    capacity_solver();
    gamma_functional_bound();
    capacitary_weak_type();
    differentiation();
    full_run();
    std::printf("%d of 13 criteria failed\n", failures);
    return failures;
}
