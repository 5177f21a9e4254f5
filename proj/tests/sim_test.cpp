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

#include "floquetforge/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>

#include "floquetforge/circuit.hpp"
#include "floquetforge/noise.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace ff = floquetforge;
using ff::OpKind;

namespace {

const ff::CircuitIR &base_circuit() {
    static const auto c = ff::build_floquet_circuit(ff::testing::cached_code("H16-f2").tess, {.periods = 2});
    return c;
}

ff::CircuitIR noisy(ff::NoiseModelKind m, double p, std::uint64_t seed = 1) {
    if (m == ff::NoiseModelKind::Erasure) {
        std::mt19937_64 rng(seed);
        return ff::sample_erasure(base_circuit(), p, rng).second;
    }
    return ff::apply_noise(base_circuit(), {m, p});
}

void expect_marginals_agree(const ff::BitMatrix &a, const ff::BitMatrix &b, const std::string &what) {
    ASSERT_EQ(a.cols(), b.cols());
    EXPECT_LE(ff::oracle::max_marginal_z(a, b), 4.0) << what;
}

// Distribution of the product of independently applied Paulis, as symplectic bits.
std::vector<double> product_distribution(int qubits, double q) {
    const int paulis = (1 << (2 * qubits)) - 1;
    std::vector<double> dist(paulis + 1, 0.0);
    for (std::uint32_t subset = 0; subset < (1u << paulis); ++subset) {
        double pr = 1.0;
        std::uint32_t prod = 0;
        for (int k = 0; k < paulis; ++k) {
            bool on = (subset >> k) & 1;
            pr *= on ? q : 1 - q;
            if (on) {
                prod ^= static_cast<std::uint32_t>(k + 1);
            }
        }
        dist[prod] += pr;
    }
    return dist;
}

}  // namespace

TEST(BitMatrix, FileRoundTrip) {
    ff::BitMatrix m(5, 70);
    m.set(0, 0);
    m.set(2, 69);
    m.set(4, 33);
    auto path = (std::filesystem::temp_directory_path() / "ff_bitmatrix_test.bin").string();
    ff::write_bit_matrix(path, m, 1234);
    std::uint64_t seed = 0;
    auto back = ff::read_bit_matrix(path, &seed);
    EXPECT_EQ(back, m);
    EXPECT_EQ(seed, 1234u);
    EXPECT_EQ(back.count_ones(), 3u);
    EXPECT_EQ(back.row_ones(2), std::vector<std::uint32_t>{69});
    std::remove(path.c_str());
    EXPECT_ANY_THROW(ff::read_bit_matrix(path));
}

TEST(Probability, CombineIsXorOfIndependentEvents) {
    EXPECT_DOUBLE_EQ(ff::combine_probability(0.1, 0.2), 0.1 * 0.8 + 0.2 * 0.9);
    EXPECT_DOUBLE_EQ(ff::combine_probability(0.3, 0.0), 0.3);
    EXPECT_DOUBLE_EQ(ff::combine_probability(0.5, 0.1), 0.5);
}

TEST(Probability, DepolarizingComponentsReproduceTheChannel) {
    for (double p : {0.001, 0.01, 0.1, 0.3}) {
        auto d1 = product_distribution(1, ff::depolarize1_component_probability(p));
        EXPECT_NEAR(d1[0], 1 - p, 1e-12);
        for (int k = 1; k < 4; ++k) {
            EXPECT_NEAR(d1[k], p / 3, 1e-12);
        }
        auto d2 = product_distribution(2, ff::depolarize2_component_probability(p));
        EXPECT_NEAR(d2[0], 1 - p, 1e-12);
        for (int k = 1; k < 16; ++k) {
            EXPECT_NEAR(d2[k], p / 15, 1e-12);
        }
    }
}

TEST(Sim, NoiselessRunsAreQuiet) {
    auto s = ff::frame_sample(base_circuit(), 500, 3);
    EXPECT_EQ(s.detectors.count_ones(), 0u);
    EXPECT_EQ(s.observables.count_ones(), 0u);
    auto t = ff::tableau_simulate(base_circuit(), 200, 3);
    EXPECT_EQ(t.detectors.count_ones(), 0u);
    EXPECT_EQ(t.observables.count_ones(), 0u);
    auto ref = ff::reference_sample(base_circuit());
    EXPECT_EQ(ref.detectors.size(), base_circuit().detector_count);
    EXPECT_EQ(ref.observables.size(), base_circuit().observable_count);
}

TEST(Sim, FrameSamplingIsReproducible) {
    auto c = noisy(ff::NoiseModelKind::Sdem3, 0.01);
    auto a = ff::frame_sample(c, 700, 42, 1);
    auto b = ff::frame_sample(c, 700, 42, 4);
    EXPECT_EQ(a.detectors, b.detectors);
    EXPECT_EQ(a.observables, b.observables);
    auto d = ff::frame_sample(c, 700, 43, 1);
    EXPECT_NE(a.detectors, d.detectors);
}

TEST(Sim, FrameAgreesWithTableau) {
    using M = ff::NoiseModelKind;
    for (auto m : {M::Phenomenological, M::Em3Ancilla, M::Sdem3, M::Erasure}) {
        for (double p : {0.001, 0.01}) {
            auto c = noisy(m, m == M::Erasure ? 10 * p : p);
            auto f = ff::frame_sample(c, 4000, 5, 2);
            auto t = ff::tableau_simulate(c, 2048, 6);
            auto what = ff::noise_model_name(m) + " p=" + std::to_string(p);
            expect_marginals_agree(f.detectors, t.detectors, what + " detectors");
            expect_marginals_agree(f.observables, t.observables, what + " observables");
        }
    }
}

// Every single Pauli at a random spot must produce exactly the symptom the DEM assigns to it.
TEST(Dem, FireOneMechanism) {
    const auto &c = base_circuit();
    std::mt19937_64 rng(8);
    const char paulis[] = {'X', 'Y', 'Z'};
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t at = std::uniform_int_distribution<std::size_t>(1, c.ops.size() - 1)(rng);
        while (at < c.ops.size() && c.ops[at].kind == OpKind::SingleInit) {
            ++at;
        }
        std::uint32_t q = std::uniform_int_distribution<std::uint32_t>(0, c.data_qubit_count - 1)(rng);
        char pauli = paulis[rng() % 3];
        auto with = [&](double prob) {
            ff::CircuitIR out;
            out.qubit_count = c.qubit_count;
            out.data_qubit_count = c.data_qubit_count;
            for (std::size_t i = 0; i < c.ops.size(); ++i) {
                if (i == at) {
                    out.push({.kind = OpKind::PauliError, .terms = {{q, pauli}}, .probability = prob});
                }
                out.push(c.ops[i]);
            }
            return out;
        };
        auto fired = ff::frame_sample(with(1.0), 1, 1);
        auto dem = ff::build_dem(with(0.125));
        auto dets = fired.detectors.row_ones(0);
        auto obs = fired.observables.row_ones(0);
        if (dets.empty() && obs.empty()) {
            EXPECT_TRUE(dem.mechanisms.empty());
            continue;
        }
        ASSERT_EQ(dem.mechanisms.size(), 1u);
        EXPECT_DOUBLE_EQ(dem.mechanisms[0].probability, 0.125);
        EXPECT_EQ(dem.mechanisms[0].detectors, dets);
        EXPECT_EQ(dem.mechanisms[0].observables, obs);
    }
}

TEST(Dem, SamplingMatchesCircuitMarginals) {
    auto c = noisy(ff::NoiseModelKind::Sdem3, 0.01);
    auto dem = ff::build_dem(c);
    EXPECT_EQ(dem.detector_count, c.detector_count);
    EXPECT_EQ(dem.observable_count, c.observable_count);
    auto a = ff::sample_dem(dem, 5000, 12);
    auto b = ff::frame_sample(c, 5000, 13);
    expect_marginals_agree(a.detectors, b.detectors, "dem detectors");
    expect_marginals_agree(a.observables, b.observables, "dem observables");
}

TEST(Dem, TextRoundTrip) {
    for (auto m : {ff::NoiseModelKind::Phenomenological, ff::NoiseModelKind::Em3Ancilla}) {
        auto dem = ff::build_dem(noisy(m, 0.003));
        auto text = ff::dem_to_text(dem);
        auto back = ff::dem_from_text(text);
        EXPECT_EQ(ff::dem_to_text(back), text);
        ASSERT_EQ(back.mechanisms.size(), dem.mechanisms.size());
        for (std::size_t i = 0; i < dem.mechanisms.size(); ++i) {
            EXPECT_EQ(back.mechanisms[i].detectors, dem.mechanisms[i].detectors);
            EXPECT_EQ(back.mechanisms[i].observables, dem.mechanisms[i].observables);
            EXPECT_NEAR(back.mechanisms[i].probability, dem.mechanisms[i].probability,
                        1e-12 * dem.mechanisms[i].probability);
        }
    }
    EXPECT_ANY_THROW(ff::dem_from_text("error(0.1) Q3\n"));
}

TEST(Dem, SymptomsAreUniqueAndSorted) {
    auto dem = ff::build_dem(noisy(ff::NoiseModelKind::Em3Ancilla, 0.01));
    std::set<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> seen;
    for (const auto &m : dem.mechanisms) {
        EXPECT_TRUE(std::is_sorted(m.detectors.begin(), m.detectors.end()));
        EXPECT_TRUE(seen.insert({m.detectors, m.observables}).second);
        EXPECT_GT(m.probability, 0.0);
        EXPECT_LE(m.probability, 0.5);
    }
}

TEST(Erasure, InstanceDemMatchesRebuiltCircuit) {
    const auto &c = base_circuit();
    ff::ErasureSymptoms sym(c);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        auto pat = ff::sample_erasure_pattern(c, 0.04, rng);
        pat.randomize_records = i % 2;
        auto fast = sym.instance(pat);
        auto slow = ff::build_dem(ff::apply_erasure(c, pat));
        EXPECT_EQ(ff::dem_to_text(fast), ff::dem_to_text(slow)) << "instance " << i;
        EXPECT_EQ(ff::dem_to_text(ff::build_instance_dem(c, pat)), ff::dem_to_text(slow));
    }
}

TEST(Sim, NondeterministicObservableIsRejected) {
    ff::CircuitIR c;
    c.push({.kind = OpKind::SingleInit, .terms = {{0, 'Z'}}});
    c.push({.kind = OpKind::SingleMeasure, .terms = {{0, 'X'}}});
    c.push({.kind = OpKind::Observable, .records = {0}, .index = 0});
    EXPECT_ANY_THROW(ff::check_deterministic(c));
}
