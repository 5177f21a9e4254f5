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

#include "floquetforge/noise.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace floquetforge {

NoiseModelKind parse_noise_model(const std::string &name) {
    if (name == "phenomenological" || name == "phenom") {
        return NoiseModelKind::Phenomenological;
    }
    if (name == "em3" || name == "em3_ancilla") {
        return NoiseModelKind::Em3Ancilla;
    }
    if (name == "sdem3") {
        return NoiseModelKind::Sdem3;
    }
    if (name == "erasure") {
        return NoiseModelKind::Erasure;
    }
    throw std::invalid_argument("unknown noise model '" + name + "'");
}

std::string noise_model_name(NoiseModelKind m) {
    switch (m) {
        case NoiseModelKind::Phenomenological:
            return "phenomenological";
        case NoiseModelKind::Em3Ancilla:
            return "em3_ancilla";
        case NoiseModelKind::Sdem3:
            return "sdem3";
        default:
            return "erasure";
    }
}

namespace {

void check_rate(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("noise rate must lie in [0, 1]");
    }
}

void check_noiseless(const CircuitIR &c) {
    for (const auto &op : c.ops) {
        switch (op.kind) {
            case OpKind::PauliError:
            case OpKind::Depolarize1:
            case OpKind::Depolarize2:
            case OpKind::CorrelatedError:
            case OpKind::FlipRecord:
                throw std::invalid_argument("noise transforms expect a noiseless circuit");
            default:
                break;
        }
    }
}

Instruction flip(std::uint32_t record, double p) {
    return {.kind = OpKind::FlipRecord, .probability = p, .records = {record}};
}

CircuitIR shell(const CircuitIR &c) {
    CircuitIR out;
    out.data_qubit_count = c.data_qubit_count;
    return out;
}

}  // namespace

CircuitIR apply_phenomenological(const CircuitIR &c, double p) {
    check_rate(p);
    check_noiseless(c);
    if (p == 0.0) {
        return c;
    }
    CircuitIR out = shell(c);
    bool round_open = false;
    for (const auto &op : c.ops) {
        if (op.kind == OpKind::RoundMarker) {
            round_open = true;
        }
        if (op.kind == OpKind::PairMeasure && round_open) {
            Instruction dep{.kind = OpKind::Depolarize1, .probability = p};
            for (std::uint32_t q = 0; q < c.data_qubit_count; ++q) {
                dep.terms.push_back({q, 'Z'});
            }
            out.push(std::move(dep));
            round_open = false;
        }
        std::uint32_t rec = out.measurement_count;
        out.push(op);
        if (op.kind == OpKind::PairMeasure) {
            out.push(flip(rec, p));
        }
    }
    return out;
}

CircuitIR apply_sdem3(const CircuitIR &c, double p) {
    check_rate(p);
    check_noiseless(c);
    if (p == 0.0) {
        return c;
    }
    CircuitIR out = shell(c);
    Instruction init_errors{.kind = OpKind::PauliError, .probability = p / 2};
    auto flush_init = [&]() {
        if (!init_errors.terms.empty()) {
            out.push(init_errors);
            init_errors.terms.clear();
        }
    };
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const auto &op = c.ops[i];
        if (op.kind == OpKind::SingleInit) {
            out.push(op);
            init_errors.terms.push_back({op.terms[0].qubit, op.terms[0].pauli == 'X' ? 'Z' : 'X'});
            continue;
        }
        flush_init();
        if (op.kind == OpKind::SingleMeasure && (i == 0 || c.ops[i - 1].kind != OpKind::SingleMeasure)) {
            Instruction pre{.kind = OpKind::PauliError, .probability = p / 2};
            for (std::size_t j = i; j < c.ops.size() && c.ops[j].kind == OpKind::SingleMeasure; ++j) {
                pre.terms.push_back({c.ops[j].terms[0].qubit, c.ops[j].terms[0].pauli == 'X' ? 'Z' : 'X'});
            }
            out.push(std::move(pre));
        }
        if (op.kind == OpKind::PairMeasure) {
            out.push({.kind = OpKind::Depolarize2,
                      .terms = {{op.terms[0].qubit, 'Z'}, {op.terms[1].qubit, 'Z'}},
                      .probability = 15.0 * p / 16.0});
            std::uint32_t rec = out.measurement_count;
            out.push(op);
            out.push(flip(rec, p / 2));
            continue;
        }
        out.push(op);
    }
    flush_init();
    return out;
}

std::vector<std::uint8_t> em3_components() {
    std::vector<std::uint8_t> out;
    for (std::uint8_t k = 1; k < 32; ++k) {
        out.push_back(k);
    }
    return out;
}

CircuitIR apply_em3_ancilla(const CircuitIR &c, double p) {
    check_rate(p);
    check_noiseless(c);
    static constexpr char kPauli[4] = {'I', 'X', 'Y', 'Z'};
    // Ancilla slot = rank of the edge within its check type, by first appearance.
    std::map<std::pair<char, std::pair<std::uint32_t, std::uint32_t>>, std::uint32_t> slot;
    std::map<char, std::uint32_t> next_slot;
    std::uint32_t max_slot = 0;
    for (const auto &op : c.ops) {
        if (op.kind != OpKind::PairMeasure) {
            continue;
        }
        if (op.terms.size() != 2 || op.terms[0].pauli != op.terms[1].pauli) {
            throw UnsupportedInstruction("ancilla expansion needs PP pair measurements");
        }
        auto a = op.terms[0].qubit;
        auto b = op.terms[1].qubit;
        auto key = std::make_pair(op.terms[0].pauli, std::make_pair(std::min(a, b), std::max(a, b)));
        if (!slot.count(key)) {
            std::uint32_t s = next_slot[key.first]++;
            slot[key] = s;
            max_slot = std::max(max_slot, s + 1);
        }
    }
    const std::uint32_t base = std::max(c.data_qubit_count, c.qubit_count);

    CircuitIR out = shell(c);
    for (const auto &op : c.ops) {
        if (op.kind != OpKind::PairMeasure) {
            out.push(op);
            continue;
        }
        const char pauli = op.terms[0].pauli;
        auto a = op.terms[0].qubit;
        auto b = op.terms[1].qubit;
        std::uint32_t anc = base + slot.at({pauli, {std::min(a, b), std::max(a, b)}});
        GateKind g = pauli == 'X' ? GateKind::XCX : pauli == 'Y' ? GateKind::YCX : GateKind::CX;
        out.push({.kind = OpKind::SingleInit, .terms = {{anc, 'Z'}}});
        out.push({.kind = OpKind::Gate, .gate = g, .terms = {{a, 'Z'}, {anc, 'Z'}}});
        out.push({.kind = OpKind::Gate, .gate = g, .terms = {{b, 'Z'}, {anc, 'Z'}}});
        if (p > 0.0) {
            for (auto k : em3_components()) {
                Instruction e{.kind = OpKind::CorrelatedError, .probability = p / 32.0};
                int pa = k / 8;
                int pb = (k / 2) % 4;
                if (pa) {
                    e.terms.push_back({a, kPauli[pa]});
                }
                if (pb) {
                    e.terms.push_back({b, kPauli[pb]});
                }
                if (k % 2) {
                    e.terms.push_back({anc, 'X'});
                }
                out.push(std::move(e));
            }
        }
        out.push({.kind = OpKind::SingleMeasure, .terms = {{anc, 'Z'}}, .edge = op.edge});
    }
    return out;
}

CircuitIR apply_noise(const CircuitIR &c, const NoiseSpec &spec) {
    switch (spec.model) {
        case NoiseModelKind::Phenomenological:
            return apply_phenomenological(c, spec.rate);
        case NoiseModelKind::Em3Ancilla:
            return apply_em3_ancilla(c, spec.rate);
        case NoiseModelKind::Sdem3:
            return apply_sdem3(c, spec.rate);
        default:
            throw std::invalid_argument("erasure noise is sampled per instance");
    }
}

double p_rus(double eps) {
    check_rate(eps);
    const double s = (1.0 - eps) * (1.0 - eps);
    return (2.0 - 2.0 * s) / (2.0 - s);
}

char erasure_pauli(char check_pauli) {
    return check_pauli;
}

CircuitIR apply_erasure(const CircuitIR &c, const ErasurePattern &pattern) {
    check_noiseless(c);
    if (pattern.erased.empty()) {
        return c;
    }
    CircuitIR out = shell(c);
    std::size_t next = 0;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const auto &op = c.ops[i];
        std::uint32_t rec = out.measurement_count;
        out.push(op);
        if (next < pattern.erased.size() && pattern.erased[next] == i) {
            if (op.kind != OpKind::PairMeasure) {
                throw std::invalid_argument("erasure pattern must index pair measurements");
            }
            if (pattern.randomize_records) {
                out.push(flip(rec, 0.5));
            }
            out.push({.kind = OpKind::PauliError,
                      .terms = {{op.terms[0].qubit, erasure_pauli(op.terms[0].pauli)}},
                      .probability = 0.5});
            ++next;
        }
    }
    if (next != pattern.erased.size()) {
        throw std::invalid_argument("erasure pattern indices out of range or unsorted");
    }
    return out;
}

ErasurePattern sample_erasure_pattern(const CircuitIR &c, double eps, std::mt19937_64 &rng) {
    const double q = p_rus(eps);
    ErasurePattern pat;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        if (c.ops[i].kind != OpKind::PairMeasure) {
            continue;
        }
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < q) {
            pat.erased.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return pat;
}

std::pair<ErasurePattern, CircuitIR> sample_erasure(const CircuitIR &c, double eps, std::mt19937_64 &rng) {
    ErasurePattern pat = sample_erasure_pattern(c, eps, rng);
    CircuitIR noisy = apply_erasure(c, pat);
    return {std::move(pat), std::move(noisy)};
}

}  // namespace floquetforge
