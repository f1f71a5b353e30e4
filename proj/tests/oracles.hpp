#pragma once

// Brute-force reference computations used to check the library. They share no
// code paths with it beyond the lattice types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "capint/lattice.hpp"

namespace oracle {

inline double omega(double beta) { return std::pow(M_PI, beta / 2) / std::tgamma(beta / 2 + 1); }

// All dyadic cubes down to level L, each with the bitmask of level-L cells it
// contains and its side^beta.
struct CubeMask {
    std::uint64_t mask;
    double cost;
    int level;
};

inline std::vector<CubeMask> dyadic_cubes(int n, int L, double beta) {
    std::vector<CubeMask> out;
    const int side = 1 << L;
    for (int j = 0; j <= L; ++j) {
        const int per = 1 << j, span = side / per;
        for (int a = 0; a < per; ++a) {
            for (int b = 0; b < (n == 2 ? per : 1); ++b) {
                std::uint64_t m = 0;
                for (int x = a * span; x < (a + 1) * span; ++x) {
                    if (n == 1) {
                        m |= std::uint64_t{1} << x;
                    } else {
                        for (int y = b * span; y < (b + 1) * span; ++y) m |= std::uint64_t{1} << (x * side + y);
                    }
                }
                out.push_back({m, std::pow(std::ldexp(1.0, -j), beta), j});
            }
        }
    }
    return out;
}

// Dyadic content of every subset of the grid (indexed by bitmask), by
// enumerating every family of dyadic cubes and taking superset minima.
// Feasible for up to ~20 cubes.
inline std::vector<double> dyadic_content_all_sets(int n, int L, double beta) {
    const auto cubes = dyadic_cubes(n, L, beta);
    const int cells = 1 << (n * L);
    std::vector<double> best(std::size_t{1} << cells, std::numeric_limits<double>::infinity());
    const std::uint64_t families = std::uint64_t{1} << cubes.size();
    for (std::uint64_t fam = 0; fam < families; ++fam) {
        std::uint64_t covered = 0;
        double cost = 0.0;
        for (std::size_t c = 0; c < cubes.size(); ++c) {
            if ((fam >> c) & 1) {
                covered |= cubes[c].mask;
                cost += cubes[c].cost;
            }
        }
        best[covered] = std::min(best[covered], cost);
    }
    // best[E] = min over covered supersets of E.
    for (int bit = 0; bit < cells; ++bit) {
        for (std::size_t m = 0; m < best.size(); ++m) {
            if (!((m >> bit) & 1)) best[m] = std::min(best[m], best[m | (std::size_t{1} << bit)]);
        }
    }
    return best;
}

// Same table, from every antichain of dyadic cubes (a cover never needs
// nested cubes). Usable where the tree is too large for all families: 458330
// antichains at n = 1, L = 4 and 83522 at n = 2, L = 2.
inline std::vector<double> dyadic_content_by_antichains(int n, int L, double beta) {
    using Cover = std::pair<std::uint64_t, double>;
    auto mask_of = [&](const capint::DyadicCube& q) {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < capint::cell_count(n, L); ++i) {
            if (q.contains_cell(i, L)) m |= std::uint64_t{1} << i;
        }
        return m;
    };
    std::function<std::vector<Cover>(const capint::DyadicCube&)> rec = [&](const capint::DyadicCube& q) {
        std::vector<Cover> below{{0, 0.0}};
        if (q.level < L) {
            for (const auto& c : capint::children(q)) {
                const auto sub = rec(c);
                std::vector<Cover> next;
                next.reserve(below.size() * sub.size());
                for (const auto& a : below) {
                    for (const auto& b : sub) next.push_back({a.first | b.first, a.second + b.second});
                }
                below = std::move(next);
            }
        }
        below.push_back({mask_of(q), std::pow(std::ldexp(1.0, -q.level), beta)});
        return below;
    };
    const int cells = 1 << (n * L);
    std::vector<double> best(std::size_t{1} << cells, std::numeric_limits<double>::infinity());
    for (const auto& [m, cost] : rec(capint::DyadicCube{n, 0, {0, 0}})) best[m] = std::min(best[m], cost);
    for (int bit = 0; bit < cells; ++bit) {
        for (std::size_t m = 0; m < best.size(); ++m) {
            if (!((m >> bit) & 1)) best[m] = std::min(best[m], best[m | (std::size_t{1} << bit)]);
        }
    }
    return best;
}

inline capint::GridSet set_from_mask(std::uint64_t m, int n, int L) {
    capint::GridSet s(n, L);
    for (std::size_t i = 0; i < s.cell_count(); ++i) {
        if ((m >> i) & 1) s.insert(i);
    }
    return s;
}

// Content of a union of disjoint segments [a_i, b_i] on the line: minimum over
// all set partitions of the segments of the sum of omega (hull/2)^beta.
inline double line_content_partitions(const std::vector<std::pair<double, double>>& segs, double beta) {
    const std::size_t m = segs.size();
    if (m == 0) return 0.0;
    std::vector<int> block(m, 0);
    double best = std::numeric_limits<double>::infinity();
    // Restricted growth strings enumerate set partitions.
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
        if (i == m) {
            double cost = 0.0;
            for (int b = 0; b < used; ++b) {
                double lo = 1e300, hi = -1e300;
                for (std::size_t k = 0; k < m; ++k) {
                    if (block[k] == b) {
                        lo = std::min(lo, segs[k].first);
                        hi = std::max(hi, segs[k].second);
                    }
                }
                cost += omega(beta) * std::pow((hi - lo) / 2, beta);
            }
            best = std::min(best, cost);
            return;
        }
        for (int b = 0; b <= used; ++b) {
            block[i] = b;
            rec(i + 1, std::max(used, b + 1));
        }
    };
    rec(0, 0);
    return best;
}

// Maximal runs of consecutive cells of a 1D set as segments.
inline std::vector<std::pair<double, double>> runs(const capint::GridSet& e) {
    std::vector<std::pair<double, double>> out;
    const double h = std::ldexp(1.0, -e.resolution());
    for (std::size_t i = 0; i < e.cell_count(); ++i) {
        if (!e.contains(i)) continue;
        if (!out.empty() && std::abs(out.back().second - i * h) < 1e-15) {
            out.back().second = (i + 1) * h;
        } else {
            out.emplace_back(i * h, (i + 1) * h);
        }
    }
    return out;
}

// Layer-cake integral by a midpoint rule in t.
template <class C>
double riemann_choquet(const capint::StepFunction& f, C&& cap, int steps) {
    const double top = f.max();
    if (top == 0.0) return 0.0;
    const double dt = top / steps;
    double acc = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) * dt;
        acc += capint::lower(cap(f.level_set_above(t))) * dt;
    }
    return acc;
}

}  // namespace oracle
