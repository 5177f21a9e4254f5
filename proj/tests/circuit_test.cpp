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

#include "floquetforge/circuit.hpp"

#include <gtest/gtest.h>

#include <random>

#include "floquetforge/gf2.hpp"
#include "floquetforge/noise.hpp"
#include "floquetforge/sim.hpp"
#include "test_util.hpp"

namespace ff = floquetforge;
using ff::testing::cached_code;

namespace {

std::size_t count_kind(const ff::CircuitIR &c, ff::OpKind k) {
    std::size_t n = 0;
    for (const auto &op : c.ops) {
        n += op.kind == k;
    }
    return n;
}

}  // namespace

TEST(Circuit, ColorPauli) {
    EXPECT_EQ(ff::color_pauli(0), 'X');
    EXPECT_EQ(ff::color_pauli(1), 'Y');
    EXPECT_EQ(ff::color_pauli(2), 'Z');
    EXPECT_THROW(ff::color_pauli(3), std::invalid_argument);
}

TEST(Circuit, ScheduleShape) {
    const auto &t = cached_code("H16-f2").tess;
    for (int periods : {2, 4}) {
        auto c = ff::build_floquet_circuit(t, {.periods = periods});
        const std::size_t rounds = 3 * periods;
        EXPECT_EQ(count_kind(c, ff::OpKind::PairMeasure), periods * t.edge_count());
        EXPECT_EQ(count_kind(c, ff::OpKind::SingleInit), t.vertex_count);
        EXPECT_EQ(count_kind(c, ff::OpKind::SingleMeasure), t.vertex_count);
        EXPECT_EQ(count_kind(c, ff::OpKind::RoundMarker), rounds);
        EXPECT_EQ(c.measurement_count, periods * t.edge_count() + t.vertex_count);
        EXPECT_EQ(c.observable_count, 4u);
        EXPECT_EQ(c.data_qubit_count, t.vertex_count);
        // Round r measures the edges of color r mod 3.
        int round = -1;
        for (const auto &op : c.ops) {
            if (op.kind == ff::OpKind::RoundMarker) {
                ++round;
            } else if (op.kind == ff::OpKind::PairMeasure) {
                ASSERT_GE(op.edge, 0);
                EXPECT_EQ(t.edge_color[op.edge], round % 3);
                EXPECT_EQ(op.terms[0].pauli, ff::color_pauli(round % 3));
                EXPECT_EQ(op.terms[1].pauli, op.terms[0].pauli);
            }
        }
        EXPECT_EQ(round + 1, static_cast<int>(rounds));
    }
}

TEST(Circuit, DetectorsAndObservablesAreDeterministic) {
    for (const char *id : {"H16", "H16-f2", "H50", "H48"}) {
        for (int periods : {2, 4}) {
            auto c = ff::build_floquet_circuit(cached_code(id).tess, {.periods = periods});
            EXPECT_NO_THROW(ff::check_deterministic(c)) << id << " T=" << periods;
        }
    }
}

// Detectors plus observables must span every deterministic record parity:
// the measurement count minus the rank of the random record fluctuations.
TEST(Circuit, DetectorSetIsComplete) {
    auto c = ff::build_floquet_circuit(cached_code("H16-f2").tess, {.periods = 2});
    const std::size_t shots = 1024;
    auto r = ff::tableau_simulate(c, shots, 5);
    const std::size_t m = c.measurement_count;
    ff::XorBasis basis(m);
    for (std::size_t s = 1; s < shots; ++s) {
        ff::BitVec v(m);
        for (std::size_t j = 0; j < m; ++j) {
            v.set(j, r.measurements.get(s, j) != r.measurements.get(0, j));
        }
        basis.insert(v);
    }
    EXPECT_EQ(c.detector_count + c.observable_count, m - basis.rank());
}

TEST(Circuit, RejectsBadConfigs) {
    const auto &t = cached_code("H16").tess;
    EXPECT_THROW(ff::build_floquet_circuit(t, {.periods = 0}), std::invalid_argument);
    EXPECT_THROW(ff::build_floquet_circuit(t, {.periods = 2, .init_basis = 'X'}), ff::UnsupportedInstruction);
    ff::Tessellation bare = t;
    bare.edge_color.clear();
    EXPECT_THROW(ff::build_floquet_circuit(bare, {.periods = 2}), std::invalid_argument);
}

TEST(Circuit, TextRoundTripAllModels) {
    auto c = ff::build_floquet_circuit(cached_code("H16-f2").tess, {.periods = 2});
    std::mt19937_64 rng(9);
    std::vector<ff::CircuitIR> variants = {
        c,
        ff::apply_phenomenological(c, 0.003),
        ff::apply_em3_ancilla(c, 0.005),
        ff::apply_sdem3(c, 0.007),
        ff::sample_erasure(c, 0.05, rng).second,
    };
    for (const auto &v : variants) {
        auto text = ff::export_circuit_text(v);
        auto back = ff::import_circuit_text(text);
        EXPECT_EQ(ff::export_circuit_text(back), text);
        EXPECT_EQ(back.measurement_count, v.measurement_count);
        EXPECT_EQ(back.detector_count, v.detector_count);
        EXPECT_EQ(back.observable_count, v.observable_count);
        EXPECT_EQ(ff::build_dem(back), ff::build_dem(v));
    }
}

TEST(Circuit, ImportRejectsUnknownInstruction) {
    EXPECT_THROW(ff::import_circuit_text("CZ 0 1\n"), ff::UnsupportedInstruction);
    EXPECT_THROW(ff::import_circuit_text("M 0\nDETECTOR rec[-2]\n"), ff::UnsupportedInstruction);
}

TEST(Circuit, ExportIsDeterministic) {
    const auto &t = cached_code("H16-f2").tess;
    auto a = ff::export_circuit_text(ff::build_floquet_circuit(t, {.periods = 2}));
    auto b = ff::export_circuit_text(ff::build_floquet_circuit(t, {.periods = 2}));
    EXPECT_EQ(a, b);
}
