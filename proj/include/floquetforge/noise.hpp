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

#ifndef FLOQUETFORGE_NOISE_HPP
#define FLOQUETFORGE_NOISE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "floquetforge/circuit.hpp"

namespace floquetforge {

enum class NoiseModelKind { Phenomenological, Em3Ancilla, Sdem3, Erasure };

struct NoiseSpec {
    NoiseModelKind model = NoiseModelKind::Sdem3;
    /// p_e for the circuit models, the photon loss rate for erasure.
    double rate = 0.0;
};

NoiseModelKind parse_noise_model(const std::string &name);
std::string noise_model_name(NoiseModelKind m);

/// Indices into CircuitIR::ops of the erased PairMeasure instructions, ascending.
struct ErasurePattern {
    std::vector<std::uint32_t> erased;
    /// Also replace each erased outcome by a fair coin (off: only the dephasing is injected).
    bool randomize_records = false;
};

CircuitIR apply_phenomenological(const CircuitIR &c, double p);
CircuitIR apply_em3_ancilla(const CircuitIR &c, double p);
CircuitIR apply_sdem3(const CircuitIR &c, double p);

/// Applies one of the three circuit-level models; erasure is sampled separately.
CircuitIR apply_noise(const CircuitIR &c, const NoiseSpec &spec);

/// Failure probability of a repeat-until-success pair measurement at photon loss eps.
double p_rus(double eps);

/// The 31 nontrivial (P_a, P_b, flip) combinations in canonical order.
/// Entry k encodes P_a = k / 8, P_b = (k / 2) % 4, flip = k % 2 with 0..3 = I, X, Y, Z.
std::vector<std::uint8_t> em3_components();

/// Dephasing Pauli applied to the first endpoint of an erased check: the check's
/// own Pauli, so the erased outcome stays valid and only the frame is randomized.
/// Either endpoint gives the same channel up to the just-measured check.
char erasure_pauli(char check_pauli);

/// Inserts the erased-location channels of `pattern` into a noiseless circuit.
CircuitIR apply_erasure(const CircuitIR &c, const ErasurePattern &pattern);

ErasurePattern sample_erasure_pattern(const CircuitIR &c, double eps, std::mt19937_64 &rng);
std::pair<ErasurePattern, CircuitIR> sample_erasure(const CircuitIR &c, double eps, std::mt19937_64 &rng);

}  // namespace floquetforge

#endif
