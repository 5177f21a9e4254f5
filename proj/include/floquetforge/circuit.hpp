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

#ifndef FLOQUETFORGE_CIRCUIT_HPP
#define FLOQUETFORGE_CIRCUIT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "floquetforge/tessellation.hpp"

namespace floquetforge {

struct NonDeterministicDetector : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedInstruction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OpKind : std::uint8_t {
    PairMeasure,
    SingleInit,
    SingleMeasure,
    PauliError,
    Depolarize1,
    Depolarize2,
    CorrelatedError,
    FlipRecord,
    Gate,
    Detector,
    Observable,
    RoundMarker,
};

enum class GateKind : std::uint8_t { CX, XCX, YCX };

/// Single-qubit Pauli factor; pauli is one of 'X', 'Y', 'Z'.
struct PauliTerm {
    std::uint32_t qubit = 0;
    char pauli = 'Z';
    bool operator==(const PauliTerm &) const = default;
};

/// One IR instruction. Field use by kind:
///   PairMeasure      terms = the two factors, edge = tessellation edge id
///   SingleInit       terms[0] = qubit and basis
///   SingleMeasure    terms[0] = qubit and basis
///   PauliError       terms = independent targets sharing one Pauli, probability
///   Depolarize1      terms = independent targets, probability
///   Depolarize2      terms = one pair, probability
///   CorrelatedError  terms = the Pauli product, probability
///   FlipRecord       records[0] = measurement index, probability
///   Gate             gate, terms[0] = control, terms[1] = target
///   Detector         records = absolute measurement indices
///   Observable       index, records
struct Instruction {
    OpKind kind = OpKind::RoundMarker;
    GateKind gate = GateKind::CX;
    std::vector<PauliTerm> terms;
    double probability = 0.0;
    std::vector<std::uint32_t> records;
    std::uint32_t index = 0;
    std::int32_t edge = -1;
    bool operator==(const Instruction &) const = default;
};

struct CircuitIR {
    std::vector<Instruction> ops;
    std::uint32_t qubit_count = 0;
    std::uint32_t data_qubit_count = 0;
    std::uint32_t measurement_count = 0;
    std::uint32_t detector_count = 0;
    std::uint32_t observable_count = 0;

    /// Appends an instruction and keeps the counters current.
    void push(Instruction op);
    /// Recomputes every counter from the instruction list.
    void recount();
    bool operator==(const CircuitIR &) const = default;
};

/// Pauli operator of a measured edge color: 0 -> X, 1 -> Y, 2 -> Z.
char color_pauli(int color);

struct ScheduleConfig {
    /// Number of full three-round periods; the last round is always blue (ZZ).
    int periods = 2;
    char init_basis = 'Z';
    char readout_basis = 'Z';
    /// Face inferences completed before this round are not compared.
    int warmup_rounds = 0;
};

/// Builds the XX/YY/ZZ measurement schedule with detectors and 2g observables.
CircuitIR build_floquet_circuit(const Tessellation &t, const ScheduleConfig &cfg);

/// Circuit text in the .stim grammar.
std::string export_circuit_text(const CircuitIR &c);
CircuitIR import_circuit_text(const std::string &text);

}  // namespace floquetforge

#endif
