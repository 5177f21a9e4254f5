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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>

#include "floquetforge/gf2.hpp"
#include "floquetforge/homology.hpp"

namespace floquetforge {

void CircuitIR::push(Instruction op) {
    for (const auto &t : op.terms) {
        qubit_count = std::max(qubit_count, t.qubit + 1);
    }
    switch (op.kind) {
        case OpKind::PairMeasure:
        case OpKind::SingleMeasure:
            ++measurement_count;
            break;
        case OpKind::Detector:
            ++detector_count;
            break;
        case OpKind::Observable:
            observable_count = std::max(observable_count, op.index + 1);
            break;
        default:
            break;
    }
    ops.push_back(std::move(op));
}

void CircuitIR::recount() {
    std::vector<Instruction> old = std::move(ops);
    ops.clear();
    qubit_count = 0;
    measurement_count = 0;
    detector_count = 0;
    observable_count = 0;
    for (auto &op : old) {
        push(std::move(op));
    }
}

char color_pauli(int color) {
    static constexpr char kPauli[3] = {'X', 'Y', 'Z'};
    if (color < 0 || color > 2) {
        throw std::invalid_argument("edge color out of range");
    }
    return kPauli[color];
}

namespace {

// Symmetric-difference accumulator over record indices.
class RecordSet {
   public:
    void toggle(std::uint32_t r) {
        if (r >= bits_.size()) {
            bits_.resize(r + 1, 0);
        }
        bits_[r] ^= 1;
    }
    void toggle_all(const std::vector<std::uint32_t> &rs) {
        for (auto r : rs) {
            toggle(r);
        }
    }
    std::vector<std::uint32_t> list() const {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i]) {
                out.push_back(static_cast<std::uint32_t>(i));
            }
        }
        return out;
    }

   private:
    std::vector<std::uint8_t> bits_;
};

std::vector<std::uint32_t> sym_diff(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::uint32_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct TrackedObservable {
    BitVec x;
    BitVec z;
    RecordSet records;
};

void multiply_pauli(TrackedObservable &o, std::uint32_t q, char p) {
    if (p == 'X' || p == 'Y') {
        o.x.flip(q);
    }
    if (p == 'Z' || p == 'Y') {
        o.z.flip(q);
    }
}

bool anticommutes_at(const TrackedObservable &o, std::uint32_t q, char p) {
    switch (p) {
        case 'X':
            return o.z.get(q);
        case 'Z':
            return o.x.get(q);
        default:
            return o.x.get(q) != o.z.get(q);
    }
}

}  // namespace

CircuitIR build_floquet_circuit(const Tessellation &t, const ScheduleConfig &cfg) {
    if (!t.face_colored() || !t.edge_colored()) {
        throw std::invalid_argument("tessellation must be face and edge colored");
    }
    if (cfg.periods < 1) {
        throw std::invalid_argument("periods must be positive");
    }
    if (cfg.init_basis != 'Z' || cfg.readout_basis != 'Z') {
        throw UnsupportedInstruction("only Z-basis initialization and readout are supported");
    }
    const auto n = static_cast<std::uint32_t>(t.vertex_count);
    const std::size_t E = t.edge_count();
    const std::size_t F = t.face_count();

    std::array<std::vector<std::uint32_t>, 3> edges_of_color;
    for (std::uint32_t e = 0; e < E; ++e) {
        edges_of_color[t.edge_color[e]].push_back(e);
    }
    std::array<std::vector<std::uint32_t>, 3> faces_of_color;
    for (std::uint32_t f = 0; f < F; ++f) {
        faces_of_color[t.face_color[f]].push_back(f);
    }

    CircuitIR c;
    c.data_qubit_count = n;
    for (std::uint32_t q = 0; q < n; ++q) {
        c.push({.kind = OpKind::SingleInit, .terms = {{q, 'Z'}}});
    }

    // latest[e] is empty for the virtual blue round implied by Z initialization.
    std::vector<std::optional<std::uint32_t>> latest(E);
    std::vector<char> known(E, 0);
    for (auto e : edges_of_color[2]) {
        known[e] = 1;
    }
    std::vector<std::optional<std::vector<std::uint32_t>>> inference(F);
    for (auto f : faces_of_color[2]) {
        inference[f] = std::vector<std::uint32_t>{};
    }

    LogicalBasis basis = logical_basis(t, 2);
    std::vector<TrackedObservable> obs;
    for (const auto &cycle : basis.cycles) {
        TrackedObservable o{BitVec(n), BitVec(n), {}};
        for (auto e : cycle) {
            o.z.flip(std::min(t.edges[e][0], t.edges[e][1]));
        }
        obs.push_back(std::move(o));
    }

    auto edge_records = [&](std::uint32_t e) {
        std::vector<std::uint32_t> r;
        if (latest[e]) {
            r.push_back(*latest[e]);
        }
        return r;
    };

    const int rounds = 3 * cfg.periods;
    for (int r = 0; r < rounds; ++r) {
        const int col = r % 3;
        const int prev = (col + 2) % 3;
        const int third = 3 - col - prev;
        const char pc = color_pauli(col);
        const char pp = color_pauli(prev);
        c.push({.kind = OpKind::RoundMarker});

        // Keep each observable commuting with the upcoming checks by absorbing
        // checks of the previous round, solved face by face on the third color.
        for (auto &o : obs) {
            for (auto f : faces_of_color[third]) {
                const auto &bd = t.faces[f];
                const std::size_t m = bd.size();
                std::size_t start = 0;
                while (t.edge_color[bd[start]] != prev) {
                    ++start;
                }
                // sel[k] for the prev-colored edge at position start + 2k.
                std::vector<std::uint8_t> sel(m / 2, 0);
                int parity = 0;
                for (std::size_t k = 0; k + 1 < m / 2; ++k) {
                    std::uint32_t e = bd[(start + 2 * k + 1) % m];
                    bool a = anticommutes_at(o, t.edges[e][0], pc) != anticommutes_at(o, t.edges[e][1], pc);
                    sel[k + 1] = static_cast<std::uint8_t>(sel[k] ^ a);
                }
                for (std::size_t k = 0; k < m / 2; ++k) {
                    std::uint32_t e = bd[(start + 2 * k + 1) % m];
                    parity ^= anticommutes_at(o, t.edges[e][0], pc) != anticommutes_at(o, t.edges[e][1], pc);
                }
                if (parity) {
                    throw NonDeterministicDetector("observable cannot be made to commute with round checks");
                }
                std::size_t w = std::count(sel.begin(), sel.end(), 1);
                bool complement = 2 * w > sel.size();
                for (std::size_t k = 0; k < m / 2; ++k) {
                    if ((sel[k] != 0) != complement) {
                        std::uint32_t e = bd[(start + 2 * k) % m];
                        if (!known[e]) {
                            throw NonDeterministicDetector("observable needs an unmeasured check");
                        }
                        multiply_pauli(o, t.edges[e][0], pp);
                        multiply_pauli(o, t.edges[e][1], pp);
                        o.records.toggle_all(edge_records(e));
                    }
                }
            }
        }

        for (auto e : edges_of_color[col]) {
            latest[e] = c.measurement_count;
            known[e] = 1;
            c.push({.kind = OpKind::PairMeasure,
                    .terms = {{t.edges[e][0], pc}, {t.edges[e][1], pc}},
                    .edge = static_cast<std::int32_t>(e)});
        }

        for (auto f : faces_of_color[third]) {
            std::vector<std::uint32_t> cur;
            for (auto e : t.faces[f]) {
                if (!known[e]) {
                    cur.clear();
                    goto next_face;
                }
                if (latest[e]) {
                    cur.push_back(*latest[e]);
                }
            }
            if (inference[f] && r >= cfg.warmup_rounds) {
                c.push({.kind = OpKind::Detector, .records = sym_diff(*inference[f], cur)});
            }
            inference[f] = std::move(cur);
        next_face:;
        }
    }

    std::vector<std::uint32_t> readout(n);
    for (std::uint32_t q = 0; q < n; ++q) {
        readout[q] = c.measurement_count;
        c.push({.kind = OpKind::SingleMeasure, .terms = {{q, 'Z'}}});
    }
    for (auto f : faces_of_color[2]) {
        std::vector<std::uint32_t> cur;
        for (auto v : t.face_vertices[f]) {
            cur.push_back(readout[v]);
        }
        if (inference[f]) {
            c.push({.kind = OpKind::Detector, .records = sym_diff(*inference[f], cur)});
        }
    }
    for (auto e : edges_of_color[2]) {
        if (!latest[e]) {
            continue;
        }
        c.push({.kind = OpKind::Detector,
                .records = sym_diff({*latest[e]}, {readout[t.edges[e][0]], readout[t.edges[e][1]]})});
    }

    // Remove the X part of each observable with red and green plaquettes, then
    // read the remaining Z string from the final single-qubit measurements.
    std::vector<std::uint32_t> plaquettes;
    for (int col : {0, 1}) {
        for (auto f : faces_of_color[col]) {
            if (inference[f]) {
                plaquettes.push_back(f);
            }
        }
    }
    for (std::uint32_t j = 0; j < obs.size(); ++j) {
        auto &o = obs[j];
        // Augmented system: row per qubit, columns = plaquettes, rhs = x(O).
        const std::size_t P = plaquettes.size();
        std::vector<BitVec> rows(n, BitVec(P + 1));
        for (std::size_t k = 0; k < P; ++k) {
            for (auto v : t.face_vertices[plaquettes[k]]) {
                rows[v].set(k);
            }
        }
        for (std::uint32_t q = 0; q < n; ++q) {
            rows[q].set(P, o.x.get(q));
        }
        std::vector<std::size_t> pivots;
        std::size_t rank = 0;
        for (std::size_t col = 0; col < P && rank < n; ++col) {
            std::size_t sel = rank;
            while (sel < n && !rows[sel].get(col)) {
                ++sel;
            }
            if (sel == n) {
                continue;
            }
            std::swap(rows[rank], rows[sel]);
            for (std::size_t i = 0; i < n; ++i) {
                if (i != rank && rows[i].get(col)) {
                    rows[i] ^= rows[rank];
                }
            }
            pivots.push_back(col);
            ++rank;
        }
        for (std::size_t i = rank; i < n; ++i) {
            if (rows[i].get(P)) {
                throw NonDeterministicDetector("observable is not Z-diagonalizable at readout");
            }
        }
        for (std::size_t i = 0; i < rank; ++i) {
            if (!rows[i].get(P)) {
                continue;
            }
            std::uint32_t f = plaquettes[pivots[i]];
            // Red plaquettes are X on every vertex, green ones are Y.
            const char plaquette_pauli = t.face_color[f] == 0 ? 'X' : 'Y';
            for (auto v : t.face_vertices[f]) {
                multiply_pauli(o, v, plaquette_pauli);
            }
            o.records.toggle_all(*inference[f]);
        }
        if (o.x.any()) {
            throw NonDeterministicDetector("observable kept an X component at readout");
        }
        for (auto q : o.z.ones()) {
            o.records.toggle(readout[q]);
        }
        c.push({.kind = OpKind::Observable, .records = o.records.list(), .index = j});
    }
    return c;
}

namespace {

std::string fmt_prob(double p) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p);
    return std::string(buf, ptr);
}

const char *gate_name(GateKind g) {
    switch (g) {
        case GateKind::CX:
            return "CX";
        case GateKind::XCX:
            return "XCX";
        default:
            return "YCX";
    }
}

std::string basis_suffix(char b) {
    return b == 'Z' ? "" : std::string(1, b);
}

}  // namespace

std::string export_circuit_text(const CircuitIR &c) {
    std::ostringstream out;
    out << "# floquetforge data_qubits " << c.data_qubit_count << "\n";
    std::uint32_t measured = 0;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const auto &op = c.ops[i];
        auto folded_flip = [&]() -> std::string {
            if (i + 1 < c.ops.size() && c.ops[i + 1].kind == OpKind::FlipRecord &&
                c.ops[i + 1].records.at(0) == measured) {
                ++i;
                return "(" + fmt_prob(c.ops[i].probability) + ")";
            }
            return "";
        };
        switch (op.kind) {
            case OpKind::RoundMarker:
                out << "TICK\n";
                break;
            case OpKind::SingleInit:
                out << "R" << basis_suffix(op.terms.at(0).pauli) << " " << op.terms[0].qubit << "\n";
                break;
            case OpKind::SingleMeasure: {
                std::string head = "M" + basis_suffix(op.terms.at(0).pauli);
                std::string arg = folded_flip();
                out << head << arg << " " << op.terms[0].qubit << "\n";
                ++measured;
                break;
            }
            case OpKind::PairMeasure: {
                std::string arg = folded_flip();
                out << "MPP" << arg << " ";
                for (std::size_t k = 0; k < op.terms.size(); ++k) {
                    out << (k ? "*" : "") << op.terms[k].pauli << op.terms[k].qubit;
                }
                out << "\n";
                ++measured;
                break;
            }
            case OpKind::FlipRecord:
                throw UnsupportedInstruction("record flip not adjacent to its measurement");
            case OpKind::PauliError:
                out << op.terms.at(0).pauli << "_ERROR(" << fmt_prob(op.probability) << ")";
                for (const auto &t : op.terms) {
                    out << " " << t.qubit;
                }
                out << "\n";
                break;
            case OpKind::Depolarize1:
            case OpKind::Depolarize2:
                out << (op.kind == OpKind::Depolarize1 ? "DEPOLARIZE1(" : "DEPOLARIZE2(") << fmt_prob(op.probability)
                    << ")";
                for (const auto &t : op.terms) {
                    out << " " << t.qubit;
                }
                out << "\n";
                break;
            case OpKind::CorrelatedError:
                out << "E(" << fmt_prob(op.probability) << ")";
                for (const auto &t : op.terms) {
                    out << " " << t.pauli << t.qubit;
                }
                out << "\n";
                break;
            case OpKind::Gate:
                out << gate_name(op.gate) << " " << op.terms.at(0).qubit << " " << op.terms.at(1).qubit << "\n";
                break;
            case OpKind::Detector:
            case OpKind::Observable:
                if (op.kind == OpKind::Detector) {
                    out << "DETECTOR";
                } else {
                    out << "OBSERVABLE_INCLUDE(" << op.index << ")";
                }
                for (auto r : op.records) {
                    out << " rec[-" << (measured - r) << "]";
                }
                out << "\n";
                break;
        }
    }
    return out.str();
}

namespace {

std::uint32_t parse_u32(const std::string &s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UnsupportedInstruction("bad integer '" + s + "'");
    }
    return v;
}

double parse_double(const std::string &s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UnsupportedInstruction("bad number '" + s + "'");
    }
    return v;
}

PauliTerm parse_pauli_target(const std::string &s) {
    if (s.size() < 2 || (s[0] != 'X' && s[0] != 'Y' && s[0] != 'Z')) {
        throw UnsupportedInstruction("bad Pauli target '" + s + "'");
    }
    return {parse_u32(s.substr(1)), s[0]};
}

}  // namespace

CircuitIR import_circuit_text(const std::string &text) {
    CircuitIR c;
    std::optional<std::uint32_t> data_qubits;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string comment;
        if (auto h = line.find('#'); h != std::string::npos) {
            comment = line.substr(h + 1);
            line = line.substr(0, h);
        }
        {
            std::istringstream cs(comment);
            std::string a, b;
            std::uint32_t v;
            if (cs >> a >> b >> v && a == "floquetforge" && b == "data_qubits") {
                data_qubits = v;
            }
        }
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        std::vector<std::string> args;
        for (std::string a; ls >> a;) {
            args.push_back(a);
        }
        std::string name = head;
        std::optional<double> paren;
        if (auto p = head.find('('); p != std::string::npos) {
            if (head.back() != ')') {
                throw UnsupportedInstruction("bad instruction '" + head + "'");
            }
            name = head.substr(0, p);
            paren = parse_double(head.substr(p + 1, head.size() - p - 2));
        }
        auto rec_args = [&]() {
            std::vector<std::uint32_t> r;
            for (const auto &a : args) {
                if (a.rfind("rec[-", 0) != 0 || a.back() != ']') {
                    throw UnsupportedInstruction("bad record target '" + a + "'");
                }
                std::uint32_t k = parse_u32(a.substr(5, a.size() - 6));
                if (k == 0 || k > c.measurement_count) {
                    throw UnsupportedInstruction("record lookback out of range");
                }
                r.push_back(c.measurement_count - k);
            }
            return r;
        };
        auto add_flip = [&]() {
            if (paren) {
                c.push({.kind = OpKind::FlipRecord, .probability = *paren, .records = {c.measurement_count - 1}});
            }
        };
        if (name == "TICK") {
            c.push({.kind = OpKind::RoundMarker});
        } else if (name == "R" || name == "RX" || name == "RY" || name == "RZ") {
            char b = name.size() == 1 ? 'Z' : name[1];
            for (const auto &a : args) {
                c.push({.kind = OpKind::SingleInit, .terms = {{parse_u32(a), b}}});
            }
        } else if (name == "M" || name == "MX" || name == "MY" || name == "MZ") {
            char b = name.size() == 1 ? 'Z' : name[1];
            for (const auto &a : args) {
                c.push({.kind = OpKind::SingleMeasure, .terms = {{parse_u32(a), b}}});
                add_flip();
            }
        } else if (name == "MPP") {
            for (const auto &a : args) {
                Instruction op{.kind = OpKind::PairMeasure};
                std::size_t s = 0;
                while (s <= a.size()) {
                    std::size_t e = a.find('*', s);
                    if (e == std::string::npos) {
                        e = a.size();
                    }
                    op.terms.push_back(parse_pauli_target(a.substr(s, e - s)));
                    s = e + 1;
                }
                c.push(std::move(op));
                add_flip();
            }
        } else if (name == "X_ERROR" || name == "Y_ERROR" || name == "Z_ERROR") {
            Instruction op{.kind = OpKind::PauliError, .probability = paren.value_or(0.0)};
            for (const auto &a : args) {
                op.terms.push_back({parse_u32(a), name[0]});
            }
            c.push(std::move(op));
        } else if (name == "DEPOLARIZE1" || name == "DEPOLARIZE2") {
            bool two = name.back() == '2';
            if (two) {
                for (std::size_t k = 0; k + 1 < args.size(); k += 2) {
                    c.push({.kind = OpKind::Depolarize2,
                            .terms = {{parse_u32(args[k]), 'Z'}, {parse_u32(args[k + 1]), 'Z'}},
                            .probability = paren.value_or(0.0)});
                }
            } else {
                Instruction op{.kind = OpKind::Depolarize1, .probability = paren.value_or(0.0)};
                for (const auto &a : args) {
                    op.terms.push_back({parse_u32(a), 'Z'});
                }
                c.push(std::move(op));
            }
        } else if (name == "E" || name == "CORRELATED_ERROR") {
            Instruction op{.kind = OpKind::CorrelatedError, .probability = paren.value_or(0.0)};
            for (const auto &a : args) {
                op.terms.push_back(parse_pauli_target(a));
            }
            c.push(std::move(op));
        } else if (name == "CX" || name == "CNOT" || name == "XCX" || name == "YCX") {
            GateKind g = name == "XCX" ? GateKind::XCX : name == "YCX" ? GateKind::YCX : GateKind::CX;
            for (std::size_t k = 0; k + 1 < args.size(); k += 2) {
                c.push({.kind = OpKind::Gate,
                        .gate = g,
                        .terms = {{parse_u32(args[k]), 'Z'}, {parse_u32(args[k + 1]), 'Z'}}});
            }
        } else if (name == "DETECTOR") {
            c.push({.kind = OpKind::Detector, .records = rec_args()});
        } else if (name == "OBSERVABLE_INCLUDE") {
            c.push({.kind = OpKind::Observable,
                    .records = rec_args(),
                    .index = static_cast<std::uint32_t>(paren.value_or(0.0))});
        } else {
            throw UnsupportedInstruction("unsupported instruction '" + name + "'");
        }
    }
    c.data_qubit_count = data_qubits.value_or(c.qubit_count);
    return c;
}

}  // namespace floquetforge
