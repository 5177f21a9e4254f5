// Copyright 2026 The floquetforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference computations used to check the library, written without it.

#ifndef FLOQUETFORGE_TESTS_ORACLES_HPP
#define FLOQUETFORGE_TESTS_ORACLES_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "floquetforge/decoder.hpp"
#include "floquetforge/homology.hpp"
#include "floquetforge/sim.hpp"

namespace floquetforge::oracle {

inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

/// Expanded polynomial form of the RUS failure probability, in extended precision.
inline double p_rus(double eps) {
    long double e = eps;
    return static_cast<double>((4 * e - 2 * e * e) / (1 + 2 * e - e * e));
}

/// Rank of 64-bit row vectors over GF(2).
inline int rank64(std::vector<std::uint64_t> rows) {
    int r = 0;
    for (int bit = 0; bit < 64; ++bit) {
        std::size_t piv = r;
        while (piv < rows.size() && !((rows[piv] >> bit) & 1)) {
            ++piv;
        }
        if (piv == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != static_cast<std::size_t>(r) && ((rows[i] >> bit) & 1)) {
                rows[i] ^= rows[r];
            }
        }
        ++r;
    }
    return r;
}

/// Shortest nontrivial cycle by enumerating every edge subset (at most 20 edges):
/// a cycle has even degree at each node and is nontrivial when it is not a sum
/// of cell boundaries.
inline int exhaustive_shortest_cycle(const RestrictedDual &k) {
    const std::size_t m = k.edge_count();
    std::vector<std::uint64_t> boundaries;
    for (const auto &cell : k.cells) {
        std::uint64_t b = 0;
        for (auto e : cell) {
            b ^= std::uint64_t{1} << e;
        }
        boundaries.push_back(b);
    }
    const int base_rank = rank64(boundaries);
    int best = 0;
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s) {
        int w = std::popcount(s);
        if (best && w >= best) {
            continue;
        }
        std::vector<int> deg(k.node_count(), 0);
        for (std::size_t e = 0; e < m; ++e) {
            if ((s >> e) & 1) {
                deg[k.edge_nodes[e][0]] ^= 1;
                deg[k.edge_nodes[e][1]] ^= 1;
            }
        }
        if (std::any_of(deg.begin(), deg.end(), [](int d) { return d != 0; })) {
            continue;
        }
        auto with = boundaries;
        with.push_back(s);
        if (rank64(with) > base_rank) {
            best = w;
        }
    }
    return best;
}

/// All-pairs shortest paths on a matching graph; the boundary is the last node.
inline std::vector<std::vector<std::int64_t>> all_pairs_distances(const MatchingGraph &g) {
    const std::size_t n = g.detector_count + 1;
    std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) {
        d[i][i] = 0;
    }
    for (const auto &e : g.edges) {
        d[e.a][e.b] = std::min(d[e.a][e.b], e.iweight);
        d[e.b][e.a] = std::min(d[e.b][e.a], e.iweight);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == kInf) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (d[k][j] != kInf) {
                    d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
                }
            }
        }
    }
    return d;
}

/// Minimum pairing cost by subset dynamic programming; each defect pairs with
/// another defect or with the boundary. kInf when no pairing exists.
inline std::int64_t min_pairing_cost(const std::vector<std::vector<std::int64_t>> &d, std::uint32_t boundary,
                                     const std::vector<std::uint32_t> &defects) {
    const std::size_t m = defects.size();
    auto add = [](std::int64_t a, std::int64_t b) { return a == kInf || b == kInf ? kInf : a + b; };
    std::vector<std::int64_t> f(std::size_t{1} << m, kInf);
    f[0] = 0;
    for (std::size_t mask = 1; mask < f.size(); ++mask) {
        std::size_t i = std::countr_zero(mask);
        std::size_t rest = mask & ~(std::size_t{1} << i);
        f[mask] = add(d[defects[i]][boundary], f[rest]);
        for (std::size_t j = i + 1; j < m; ++j) {
            if ((rest >> j) & 1) {
                f[mask] = std::min(f[mask], add(d[defects[i]][defects[j]], f[rest & ~(std::size_t{1} << j)]));
            }
        }
    }
    return f.back();
}

/// Largest two-sample z-score over the columns of two shot matrices, with the
/// pooled variance floored at one count.
inline double max_marginal_z(const BitMatrix &a, const BitMatrix &b) {
    const double na = static_cast<double>(a.rows()), nb = static_cast<double>(b.rows());
    double worst = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        std::size_t ka = 0, kb = 0;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            ka += a.get(r, c);
        }
        for (std::size_t r = 0; r < b.rows(); ++r) {
            kb += b.get(r, c);
        }
        const double pa = ka / na, pb = kb / nb;
        const double pool = (ka + kb) / (na + nb);
        const double sigma = std::sqrt(std::max(pool * (1 - pool), 1.0 / (na + nb)) * (1 / na + 1 / nb));
        worst = std::max(worst, std::abs(pa - pb) / sigma);
    }
    return worst;
}

}  // namespace floquetforge::oracle

#endif
