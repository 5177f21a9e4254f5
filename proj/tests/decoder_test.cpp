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

#include "floquetforge/decoder.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "floquetforge/blossom.hpp"
#include "floquetforge/circuit.hpp"
#include "floquetforge/noise.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace ff = floquetforge;

namespace {

const ff::CircuitIR &base_circuit() {
    static const auto c = ff::build_floquet_circuit(ff::testing::cached_code("H16-f2").tess, {.periods = 2});
    return c;
}

using ff::oracle::kInf;

// Best total weight over all matchings (optionally only maximum-cardinality ones).
std::pair<int, std::int64_t> brute_matching(int n, const std::vector<std::vector<std::int64_t>> &w, std::uint32_t used) {
    int v = 0;
    while (v < n && ((used >> v) & 1)) {
        ++v;
    }
    if (v == n) {
        return {0, 0};
    }
    auto best = brute_matching(n, w, used | (1u << v));  // v unmatched
    for (int u = v + 1; u < n; ++u) {
        if (!((used >> u) & 1) && w[v][u] != kInf) {
            auto sub = brute_matching(n, w, used | (1u << v) | (1u << u));
            sub.first += 1;
            sub.second += w[v][u];
            best = std::max(best, sub);
        }
    }
    return best;
}

std::int64_t brute_weight_only(int n, const std::vector<std::vector<std::int64_t>> &w, std::uint32_t used) {
    int v = 0;
    while (v < n && ((used >> v) & 1)) {
        ++v;
    }
    if (v == n) {
        return 0;
    }
    std::int64_t best = brute_weight_only(n, w, used | (1u << v));
    for (int u = v + 1; u < n; ++u) {
        if (!((used >> u) & 1) && w[v][u] != kInf) {
            best = std::max(best, w[v][u] + brute_weight_only(n, w, used | (1u << v) | (1u << u)));
        }
    }
    return best;
}

}  // namespace

TEST(Blossom, MatchesBruteForceOnRandomGraphs) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        int n = 2 + static_cast<int>(rng() % 9);
        std::vector<ff::WeightedEdge> edges;
        std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, kInf));
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (rng() % 3 == 0) {
                    continue;
                }
                std::int64_t wt = 2 * static_cast<std::int64_t>(rng() % 50);
                edges.push_back({a, b, wt});
                w[a][b] = w[b][a] = wt;
            }
        }
        for (bool maxcard : {false, true}) {
            auto mate = ff::max_weight_matching(n, edges, maxcard);
            ASSERT_EQ(mate.size(), static_cast<std::size_t>(n));
            int card = 0;
            std::int64_t total = 0;
            for (int v = 0; v < n; ++v) {
                if (mate[v] >= 0) {
                    ASSERT_EQ(mate[mate[v]], v);
                    ASSERT_NE(w[v][mate[v]], kInf);
                    if (v < mate[v]) {
                        ++card;
                        total += w[v][mate[v]];
                    }
                }
            }
            if (maxcard) {
                auto best = brute_matching(n, w, 0);
                EXPECT_EQ(card, best.first) << "trial " << trial;
                EXPECT_EQ(total, best.second) << "trial " << trial;
            } else {
                EXPECT_EQ(total, brute_weight_only(n, w, 0)) << "trial " << trial;
            }
        }
    }
}

TEST(Decoder, EdgeWeights) {
    EXPECT_DOUBLE_EQ(ff::edge_weight(0.1, ff::WeightMode::Probability), std::log(9.0));
    EXPECT_DOUBLE_EQ(ff::edge_weight(0.5, ff::WeightMode::Probability), 0.0);
    EXPECT_DOUBLE_EQ(ff::edge_weight(0.1, ff::WeightMode::Uniform), 1.0);
    EXPECT_DOUBLE_EQ(ff::edge_weight(0.5, ff::WeightMode::Uniform), 0.0);
}

TEST(Decoder, MatchesBruteForcePairing) {
    for (auto mode : {ff::WeightMode::Probability, ff::WeightMode::Uniform}) {
        auto dem = ff::build_dem(ff::apply_phenomenological(base_circuit(), 0.01));
        auto g = ff::dem_to_matching_graph(dem, mode);
        ASSERT_TRUE(g.has_boundary);
        auto d = ff::oracle::all_pairs_distances(g);
        ff::MatchingDecoder dec(g);
        std::mt19937_64 rng(77);
        auto samples = ff::sample_dem(dem, 4000, 78);
        int checked = 0;
        for (std::size_t s = 0; s < samples.detectors.rows() && checked < 500; ++s) {
            auto defects = samples.detectors.row_ones(s);
            if (defects.empty() || defects.size() > 12) {
                continue;
            }
            EXPECT_EQ(dec.decode(defects).icost, ff::oracle::min_pairing_cost(d, g.boundary(), defects)) << "shot " << s;
            ++checked;
        }
        EXPECT_EQ(checked, 500);
        // Uniformly random defect sets, far from typical syndromes.
        int feasible = 0;
        for (int trial = 0; trial < 500; ++trial) {
            std::size_t k = 1 + rng() % 12;
            std::set<std::uint32_t> pick;
            while (pick.size() < k) {
                pick.insert(static_cast<std::uint32_t>(rng() % g.detector_count));
            }
            std::vector<std::uint32_t> defects(pick.begin(), pick.end());
            auto want = ff::oracle::min_pairing_cost(d, g.boundary(), defects);
            if (want == kInf) {
                // Defects split over components that cannot pair up.
                EXPECT_ANY_THROW(dec.decode(defects));
                continue;
            }
            auto r = dec.decode(defects);
            EXPECT_EQ(r.icost, want) << "trial " << trial;
            EXPECT_EQ(r.icost, ff::brute_force_matching_cost(g, defects));
            ++feasible;
        }
        EXPECT_GT(feasible, 200);
    }
}

TEST(Decoder, PairsCoverEveryDefectOnce) {
    auto dem = ff::build_dem(ff::apply_sdem3(base_circuit(), 0.01));
    auto g = ff::dem_to_matching_graph(dem);
    ff::MatchingDecoder dec(g);
    auto samples = ff::sample_dem(dem, 200, 5);
    for (std::size_t s = 0; s < samples.detectors.rows(); ++s) {
        auto defects = samples.detectors.row_ones(s);
        auto r = dec.decode(defects);
        std::multiset<std::uint32_t> covered;
        for (auto [a, b] : r.pairs) {
            covered.insert(a);
            if (b != ff::kBoundaryPartner) {
                covered.insert(b);
            }
        }
        EXPECT_EQ(std::vector<std::uint32_t>(covered.begin(), covered.end()), defects);
    }
}

TEST(Decoder, SingleMechanismsAreCorrected) {
    auto dem = ff::build_dem(ff::apply_phenomenological(base_circuit(), 0.001));
    auto g = ff::dem_to_matching_graph(dem);
    ff::MatchingDecoder dec(g);
    for (const auto &m : dem.mechanisms) {
        auto r = dec.decode(m.detectors);
        for (std::uint32_t o = 0; o < dem.observable_count; ++o) {
            bool actual = std::find(m.observables.begin(), m.observables.end(), o) != m.observables.end();
            EXPECT_EQ(ff::obs_get(r.observable_flips, o), actual);
        }
    }
    EXPECT_EQ(dec.decode({}).icost, 0);
}

TEST(Decoder, DecodeShotsIsThreadInvariant) {
    auto dem = ff::build_dem(ff::apply_sdem3(base_circuit(), 0.008));
    auto g = ff::dem_to_matching_graph(dem, ff::WeightMode::Uniform);
    auto s = ff::sample_dem(dem, 300, 9);
    EXPECT_EQ(ff::decode_shots(g, s.detectors, 1), ff::decode_shots(g, s.detectors, 3));
}

TEST(Decoder, ErasedLocationsCostNothing) {
    const auto &c = base_circuit();
    ff::ErasureSymptoms sym(c);
    std::mt19937_64 rng(19);
    for (int i = 0; i < 20; ++i) {
        auto pat = ff::sample_erasure_pattern(c, 0.04, rng);
        auto dem = sym.instance(pat);
        auto g = ff::dem_to_matching_graph(dem);
        ff::MatchingDecoder dec(g);
        auto shots = ff::sample_dem(dem, 50, rng());
        for (std::size_t s = 0; s < shots.detectors.rows(); ++s) {
            EXPECT_EQ(dec.decode(shots.detectors.row_ones(s)).icost, 0);
        }
    }
}

TEST(Decoder, OddDefectsWithoutBoundaryThrow) {
    ff::DetectorErrorModel dem;
    dem.detector_count = 2;
    dem.mechanisms.push_back({0.1, {0, 1}, {}});
    auto g = ff::dem_to_matching_graph(dem);
    EXPECT_FALSE(g.has_boundary);
    ff::MatchingDecoder dec(g);
    EXPECT_THROW(dec.decode({0}), ff::OddDefectCount);
    EXPECT_EQ(dec.decode({0, 1}).pairs.size(), 1u);
}

TEST(Decoder, HyperedgesDecomposeOrThrow) {
    ff::DetectorErrorModel dem;
    dem.detector_count = 4;
    dem.observable_count = 1;
    dem.mechanisms.push_back({0.1, {0, 1}, {0}});
    dem.mechanisms.push_back({0.1, {2, 3}, {}});
    dem.mechanisms.push_back({0.01, {0, 1, 2, 3}, {0}});
    auto g = ff::dem_to_matching_graph(dem);
    ASSERT_EQ(g.mechanism_edges.size(), 3u);
    EXPECT_EQ(g.mechanism_edges[2].size(), 2u);
    ff::DetectorErrorModel bad;
    bad.detector_count = 3;
    bad.mechanisms.push_back({0.1, {0, 1, 2}, {}});
    EXPECT_THROW(ff::dem_to_matching_graph(bad), ff::UndecomposableHyperedge);
}
