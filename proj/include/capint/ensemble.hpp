#pragma once

// Seeded ensembles of checks, run on a worker pool with results merged in
// instance order so output does not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "capint/verify.hpp"

namespace capint {

// Instance k uses seed `seed + k`. `resolutions`, when non-empty, overrides the
// parameter L per instance (indexed by seed).
struct Ensemble {
    std::uint64_t seed = 1;
    std::size_t size = 100;
    std::optional<ValueLaw> law;   // empty: cycle through all laws by seed
    std::vector<int> resolutions;

    Ensemble() = default;
    Ensemble(std::uint64_t seed_, std::size_t size_, std::optional<ValueLaw> law_ = std::nullopt,
             std::vector<int> resolutions_ = {})
        : seed(seed_), size(size_), law(law_), resolutions(std::move(resolutions_)) {}
};

inline std::size_t worker_count() {
    if (const char* env = std::getenv("CAPINT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(k) for k in [0, count) and returns the results in index order.
template <class Task>
auto parallel_map(std::size_t count, Task task, std::size_t workers = worker_count()) {
    using R = decltype(task(std::size_t{0}));
    std::vector<std::optional<R>> slots(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                slots[k].emplace(task(k));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// One context per distinct resolution, so capacity caches are shared.
class ContextSet {
public:
    ContextSet(SpecId id, const CheckParams& params, const Constants& constants, const std::vector<int>& resolutions) {
        std::vector<int> ls = resolutions.empty() ? std::vector<int>{params.L} : resolutions;
        for (int L : ls) {
            CheckParams q = params;
            q.L = L;
            contexts_.emplace_back(L, std::make_unique<CheckContext>(id, q, constants));
        }
    }
    const CheckContext& for_seed(std::uint64_t seed) const {
        return *contexts_[seed % contexts_.size()].second;
    }

private:
    std::vector<std::pair<int, std::unique_ptr<CheckContext>>> contexts_;
};

inline std::vector<InequalityCheck> run_ensemble(SpecId id, const CheckParams& params, const Ensemble& ens,
                                                 const Constants& constants = {}, bool estimating = false,
                                                 std::size_t workers = worker_count()) {
    const ContextSet ctx(id, params, constants, ens.resolutions);
    return parallel_map(
        ens.size,
        [&](std::size_t k) {
            const std::uint64_t seed = ens.seed + k;
            return check_seed(ctx.for_seed(seed), seed, ens.law, estimating);
        },
        workers);
}

struct SharpConstant {
    double conservative = 0.0;  // sup of lhs.lo / rhs.hi
    double envelope = 0.0;      // sup of lhs.hi / rhs.lo
    std::size_t instances = 0;
};

inline SharpConstant summarize_ratios(const std::vector<InequalityCheck>& checks) {
    SharpConstant s;
    for (const auto& c : checks) {
        s.conservative = std::max(s.conservative, c.ratio.lo * c.constant);
        s.envelope = std::max(s.envelope, c.ratio.hi * c.constant);
    }
    s.instances = checks.size();
    return s;
}

// sup over the ensemble of lhs/rhs, i.e. the smallest constant the ensemble
// supports. Deterministic for a fixed ensemble.
inline SharpConstant estimate_sharp_constant(SpecId id, const CheckParams& params, const Ensemble& ens,
                                             const Constants& constants = {}, std::size_t workers = worker_count()) {
    return summarize_ratios(run_ensemble(id, params, ens, constants, true, workers));
}

// Equivalence constant between the ball content and the dyadic content:
// sup over random sets of max(H/H_dy, H_dy/H), using the enclosure ends that
// make each ratio largest.
inline SharpConstant estimate_equivalence_constant(double beta, int n, const Ensemble& ens,
                                                   std::size_t workers = worker_count()) {
    check_beta(beta, n);
    const std::vector<int> ls = ens.resolutions.empty() ? std::vector<int>{n == 1 ? 4 : 3} : ens.resolutions;
    const auto ratios = parallel_map(
        ens.size,
        [&](std::size_t k) {
            const std::uint64_t seed = ens.seed + k;
            const int L = ls[seed % ls.size()];
            Rng rng(seed);
            GridSet e = random_grid_set(derive_seed(seed, 1), L, n, 0.05 + 0.9 * rng.uniform());
            if (e.empty()) e.insert(seed % e.cell_count());
            const double dy = dyadic_content(e, beta);
            const Interval ball = certified_content(e, beta);
            return std::pair{std::max(ball.lo / dy, dy / ball.hi), std::max(ball.hi / dy, dy / ball.lo)};
        },
        workers);
    SharpConstant s;
    for (const auto& [lo, hi] : ratios) {
        s.conservative = std::max(s.conservative, lo);
        s.envelope = std::max(s.envelope, hi);
    }
    s.instances = ratios.size();
    return s;
}

struct EnsembleSummary {
    std::size_t pass = 0, fail = 0, inconclusive = 0;
    std::size_t evaluations = 0, failing_evaluations = 0, inconclusive_evaluations = 0;
    double worst_ratio = 0.0;
};

inline EnsembleSummary summarize(const std::vector<InequalityCheck>& checks) {
    EnsembleSummary s;
    for (const auto& c : checks) {
        (c.verdict == Verdict::Pass ? s.pass : c.verdict == Verdict::Fail ? s.fail : s.inconclusive)++;
        s.evaluations += c.evaluations;
        s.failing_evaluations += c.failing;
        s.inconclusive_evaluations += c.inconclusive;
        s.worst_ratio = std::max(s.worst_ratio, c.ratio.hi);
    }
    return s;
}

}  // namespace capint
