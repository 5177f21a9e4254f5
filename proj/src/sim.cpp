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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace floquetforge {

std::vector<std::uint32_t> BitMatrix::row_ones(std::size_t r) const {
    std::vector<std::uint32_t> out;
    const std::uint64_t *p = row(r);
    for (std::size_t k = 0; k < stride_; ++k) {
        std::uint64_t w = p[k];
        while (w) {
            out.push_back(static_cast<std::uint32_t>(k * 64 + std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

bool BitMatrix::row_any(std::size_t r) const {
    const std::uint64_t *p = row(r);
    for (std::size_t k = 0; k < stride_; ++k) {
        if (p[k]) {
            return true;
        }
    }
    return false;
}

std::size_t BitMatrix::count_ones() const {
    std::size_t c = 0;
    for (auto w : w_) {
        c += std::popcount(w);
    }
    return c;
}

namespace {

void put_u64(std::ostream &out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    }
    out.write(reinterpret_cast<const char *>(b), 8);
}

std::uint64_t get_u64(std::istream &in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char *>(b), 8)) {
        throw std::runtime_error("truncated bit matrix file");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    }
    return v;
}

}  // namespace

void write_bit_matrix(const std::string &path, const BitMatrix &m, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path);
    }
    out.write("FFBM", 4);
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    put_u64(out, seed);
    for (auto w : m.words()) {
        put_u64(out, w);
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

BitMatrix read_bit_matrix(const std::string &path, std::uint64_t *seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "FFBM", 4) != 0) {
        throw std::runtime_error("not a bit matrix file: " + path);
    }
    std::uint64_t rows = get_u64(in);
    std::uint64_t cols = get_u64(in);
    std::uint64_t s = get_u64(in);
    if (seed) {
        *seed = s;
    }
    BitMatrix m(rows, cols);
    for (auto &w : m.words()) {
        w = get_u64(in);
    }
    return m;
}

int default_thread_count() {
    if (const char *env = std::getenv("FLOQUETFORGE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) {
            return v;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

CircuitIR strip_noise(const CircuitIR &c) {
    CircuitIR out;
    out.data_qubit_count = c.data_qubit_count;
    for (const auto &op : c.ops) {
        switch (op.kind) {
            case OpKind::PauliError:
            case OpKind::Depolarize1:
            case OpKind::Depolarize2:
            case OpKind::CorrelatedError:
            case OpKind::FlipRecord:
                break;
            default:
                out.push(op);
        }
    }
    out.qubit_count = std::max(out.qubit_count, c.qubit_count);
    return out;
}

double combine_probability(double p1, double p2) {
    return p1 * (1.0 - p2) + p2 * (1.0 - p1);
}

double depolarize1_component_probability(double p) {
    return 0.5 - 0.5 * std::sqrt(std::max(0.0, 1.0 - 4.0 * p / 3.0));
}

double depolarize2_component_probability(double p) {
    return 0.5 - 0.5 * std::pow(std::max(0.0, 1.0 - 16.0 * p / 15.0), 0.125);
}

namespace {

using Rng = std::mt19937_64;

Rng block_rng(std::uint64_t seed, std::uint64_t block, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fills W words with independent Bernoulli(p) bits.
void bernoulli_words(Rng &rng, double p, std::uint64_t *out, std::size_t W) {
    std::fill(out, out + W, 0);
    if (p <= 0.0) {
        return;
    }
    if (p >= 1.0) {
        std::fill(out, out + W, ~std::uint64_t{0});
        return;
    }
    if (p == 0.5) {
        for (std::size_t k = 0; k < W; ++k) {
            out[k] = rng();
        }
        return;
    }
    const std::size_t bits = 64 * W;
    if (p > 0.2) {
        for (std::size_t b = 0; b < bits; ++b) {
            if (uniform01(rng) < p) {
                out[b >> 6] |= std::uint64_t{1} << (b & 63);
            }
        }
        return;
    }
    // Geometric skipping between hits.
    const double inv_log = 1.0 / std::log1p(-p);
    double pos = 0;
    while (true) {
        double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
        pos += std::floor(std::log(u) * inv_log);
        if (pos >= static_cast<double>(bits)) {
            return;
        }
        auto b = static_cast<std::size_t>(pos);
        out[b >> 6] |= std::uint64_t{1} << (b & 63);
        pos += 1;
    }
}

// Uniform value in [1, n] per set bit, reported through fn(bit, value).
template <typename Fn>
void for_each_hit(const std::uint64_t *mask, std::size_t W, Rng &rng, int n, Fn fn) {
    for (std::size_t k = 0; k < W; ++k) {
        std::uint64_t w = mask[k];
        while (w) {
            int b = std::countr_zero(w);
            w &= w - 1;
            fn(k, b, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n)));
        }
    }
}

bool pauli_has_x(char p) {
    return p == 'X' || p == 'Y';
}
bool pauli_has_z(char p) {
    return p == 'Z' || p == 'Y';
}

// 1..3 -> X, Y, Z as (x, z) bits.
constexpr bool kDepX[4] = {false, true, true, false};
constexpr bool kDepZ[4] = {false, false, true, true};

constexpr std::size_t kFrameWords = 4;

// Pauli-frame state for 64 * kFrameWords shots.
struct FrameBlock {
    std::size_t W;
    std::vector<std::uint64_t> x, z, rec, det, obs;
    std::vector<std::uint64_t> mask;

    FrameBlock(const CircuitIR &c, std::size_t words)
        : W(words),
          x(c.qubit_count * words),
          z(c.qubit_count * words),
          rec(c.measurement_count * words),
          det(c.detector_count * words),
          obs(c.observable_count * words),
          mask(words) {}

    std::uint64_t *X(std::uint32_t q) { return &x[q * W]; }
    std::uint64_t *Z(std::uint32_t q) { return &z[q * W]; }

    void apply_masked(std::uint32_t q, char p, const std::uint64_t *m) {
        for (std::size_t k = 0; k < W; ++k) {
            if (pauli_has_x(p)) {
                X(q)[k] ^= m[k];
            }
            if (pauli_has_z(p)) {
                Z(q)[k] ^= m[k];
            }
        }
    }
    std::uint64_t anti(std::uint32_t q, char p, std::size_t k) {
        switch (p) {
            case 'X':
                return Z(q)[k];
            case 'Z':
                return X(q)[k];
            default:
                return X(q)[k] ^ Z(q)[k];
        }
    }

    void run(const CircuitIR &c, Rng &rng) {
        std::uint32_t m = 0;
        std::uint32_t d = 0;
        std::fill(x.begin(), x.end(), 0);
        for (auto &w : z) {
            w = rng();
        }
        std::fill(obs.begin(), obs.end(), 0);
        for (const auto &op : c.ops) {
            switch (op.kind) {
                case OpKind::RoundMarker:
                    break;
                case OpKind::SingleInit: {
                    auto q = op.terms[0].qubit;
                    for (std::size_t k = 0; k < W; ++k) {
                        std::uint64_t r = rng();
                        switch (op.terms[0].pauli) {
                            case 'Z':
                                X(q)[k] = 0;
                                Z(q)[k] = r;
                                break;
                            case 'X':
                                Z(q)[k] = 0;
                                X(q)[k] = r;
                                break;
                            default:
                                X(q)[k] = r;
                                Z(q)[k] = r;
                        }
                    }
                    break;
                }
                case OpKind::SingleMeasure:
                case OpKind::PairMeasure: {
                    for (std::size_t k = 0; k < W; ++k) {
                        std::uint64_t a = 0;
                        for (const auto &t : op.terms) {
                            a ^= anti(t.qubit, t.pauli, k);
                        }
                        rec[m * W + k] = a;
                        std::uint64_t r = rng();
                        for (const auto &t : op.terms) {
                            if (pauli_has_x(t.pauli)) {
                                X(t.qubit)[k] ^= r;
                            }
                            if (pauli_has_z(t.pauli)) {
                                Z(t.qubit)[k] ^= r;
                            }
                        }
                    }
                    ++m;
                    break;
                }
                case OpKind::Gate: {
                    auto a = op.terms[0].qubit;
                    auto b = op.terms[1].qubit;
                    for (std::size_t k = 0; k < W; ++k) {
                        switch (op.gate) {
                            case GateKind::CX:
                                X(b)[k] ^= X(a)[k];
                                Z(a)[k] ^= Z(b)[k];
                                break;
                            case GateKind::XCX:
                                X(b)[k] ^= Z(a)[k];
                                X(a)[k] ^= Z(b)[k];
                                break;
                            case GateKind::YCX: {
                                X(b)[k] ^= X(a)[k] ^ Z(a)[k];
                                std::uint64_t zb = Z(b)[k];
                                X(a)[k] ^= zb;
                                Z(a)[k] ^= zb;
                                break;
                            }
                        }
                    }
                    break;
                }
                case OpKind::PauliError:
                    for (const auto &t : op.terms) {
                        bernoulli_words(rng, op.probability, mask.data(), W);
                        apply_masked(t.qubit, t.pauli, mask.data());
                    }
                    break;
                case OpKind::Depolarize1:
                    for (const auto &t : op.terms) {
                        bernoulli_words(rng, op.probability, mask.data(), W);
                        for_each_hit(mask.data(), W, rng, 3, [&](std::size_t k, int b, int v) {
                            std::uint64_t bit = std::uint64_t{1} << b;
                            if (kDepX[v]) {
                                X(t.qubit)[k] ^= bit;
                            }
                            if (kDepZ[v]) {
                                Z(t.qubit)[k] ^= bit;
                            }
                        });
                    }
                    break;
                case OpKind::Depolarize2: {
                    auto a = op.terms[0].qubit;
                    auto b2 = op.terms[1].qubit;
                    bernoulli_words(rng, op.probability, mask.data(), W);
                    for_each_hit(mask.data(), W, rng, 15, [&](std::size_t k, int b, int v) {
                        std::uint64_t bit = std::uint64_t{1} << b;
                        int pa = v >> 2;
                        int pb = v & 3;
                        // 0..3 = I, X, Y, Z
                        if (kDepX[pa]) {
                            X(a)[k] ^= bit;
                        }
                        if (kDepZ[pa]) {
                            Z(a)[k] ^= bit;
                        }
                        if (kDepX[pb]) {
                            X(b2)[k] ^= bit;
                        }
                        if (kDepZ[pb]) {
                            Z(b2)[k] ^= bit;
                        }
                    });
                    break;
                }
                case OpKind::CorrelatedError:
                    bernoulli_words(rng, op.probability, mask.data(), W);
                    for (const auto &t : op.terms) {
                        apply_masked(t.qubit, t.pauli, mask.data());
                    }
                    break;
                case OpKind::FlipRecord:
                    bernoulli_words(rng, op.probability, mask.data(), W);
                    for (std::size_t k = 0; k < W; ++k) {
                        rec[op.records[0] * W + k] ^= mask[k];
                    }
                    break;
                case OpKind::Detector:
                    for (std::size_t k = 0; k < W; ++k) {
                        std::uint64_t v = 0;
                        for (auto r : op.records) {
                            v ^= rec[r * W + k];
                        }
                        det[d * W + k] = v;
                    }
                    ++d;
                    break;
                case OpKind::Observable:
                    for (std::size_t k = 0; k < W; ++k) {
                        std::uint64_t v = 0;
                        for (auto r : op.records) {
                            v ^= rec[r * W + k];
                        }
                        obs[op.index * W + k] ^= v;
                    }
                    break;
            }
        }
    }
};

void scatter_rows(const std::vector<std::uint64_t> &cols, std::size_t ncols, std::size_t W, std::size_t first_row,
                  BitMatrix &out) {
    for (std::size_t c = 0; c < ncols; ++c) {
        for (std::size_t k = 0; k < W; ++k) {
            std::uint64_t w = cols[c * W + k];
            while (w) {
                std::size_t r = first_row + k * 64 + std::countr_zero(w);
                w &= w - 1;
                if (r < out.rows()) {
                    out.set(r, c);
                }
            }
        }
    }
}

template <typename Fn>
void parallel_blocks(std::size_t blocks, int threads, Fn fn) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
    if (threads == 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            fn(b);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t b = t; b < blocks; b += threads) {
                fn(b);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

}  // namespace

SampleResult frame_sample(const CircuitIR &c, std::size_t shots, std::uint64_t seed, int threads) {
    check_deterministic(c);
    SampleResult res{BitMatrix(shots, c.detector_count), BitMatrix(shots, c.observable_count)};
    const std::size_t per_block = 64 * kFrameWords;
    const std::size_t blocks = (shots + per_block - 1) / per_block;
    parallel_blocks(blocks, threads, [&](std::size_t b) {
        FrameBlock fb(c, kFrameWords);
        Rng rng = block_rng(seed, b, 1);
        fb.run(c, rng);
        scatter_rows(fb.det, c.detector_count, kFrameWords, b * per_block, res.detectors);
        scatter_rows(fb.obs, c.observable_count, kFrameWords, b * per_block, res.observables);
    });
    return res;
}

namespace {

// Aaronson-Gottesman tableau with bit-packed signs for 64 shots at once.
// Rows [0, N) are destabilizers (signs unused), rows [N, 2N) stabilizers.
class Tableau {
   public:
    explicit Tableau(std::uint32_t n) : n_(n), words_((n + 63) / 64), x_(2 * n * words_), z_(2 * n * words_), r_(2 * n) {
        for (std::uint32_t i = 0; i < n; ++i) {
            set(x_, i, i, true);
            set(z_, n + i, i, true);
        }
        scratch_x_.resize(words_);
        scratch_z_.resize(words_);
    }

    void h(std::uint32_t q) {
        for (std::uint32_t i = 0; i < 2 * n_; ++i) {
            bool x = get(x_, i, q), z = get(z_, i, q);
            if (x && z) {
                r_[i] = ~r_[i];
            }
            set(x_, i, q, z);
            set(z_, i, q, x);
        }
    }
    void s(std::uint32_t q) {
        for (std::uint32_t i = 0; i < 2 * n_; ++i) {
            bool x = get(x_, i, q), z = get(z_, i, q);
            if (x && z) {
                r_[i] = ~r_[i];
            }
            set(z_, i, q, z != x);
        }
    }
    void cx(std::uint32_t a, std::uint32_t b) {
        for (std::uint32_t i = 0; i < 2 * n_; ++i) {
            bool xa = get(x_, i, a), za = get(z_, i, a), xb = get(x_, i, b), zb = get(z_, i, b);
            if (xa && zb && (xb == za)) {
                r_[i] = ~r_[i];
            }
            set(x_, i, b, xb != xa);
            set(z_, i, a, za != zb);
        }
    }
    void gate(GateKind g, std::uint32_t a, std::uint32_t b) {
        switch (g) {
            case GateKind::CX:
                cx(a, b);
                break;
            case GateKind::XCX:
                h(a);
                cx(a, b);
                h(a);
                break;
            case GateKind::YCX:
                s(a);
                s(a);
                s(a);
                h(a);
                cx(a, b);
                h(a);
                s(a);
                break;
        }
    }

    /// Applies X^xm Z^zm on qubit q, shot-wise.
    void apply_pauli(std::uint32_t q, std::uint64_t xm, std::uint64_t zm) {
        if (!(xm | zm)) {
            return;
        }
        for (std::uint32_t i = n_; i < 2 * n_; ++i) {
            std::uint64_t flip = 0;
            if (get(z_, i, q)) {
                flip ^= xm;
            }
            if (get(x_, i, q)) {
                flip ^= zm;
            }
            r_[i] ^= flip;
        }
    }

    std::uint64_t measure(const std::vector<PauliTerm> &terms, Rng &rng) {
        std::uint32_t p = 2 * n_;
        for (std::uint32_t i = n_; i < 2 * n_; ++i) {
            if (anti(i, terms)) {
                p = i;
                break;
            }
        }
        if (p < 2 * n_) {
            for (std::uint32_t i = 0; i < 2 * n_; ++i) {
                if (i != p && anti(i, terms)) {
                    rowsum(i, p);
                }
            }
            copy_row(p - n_, p);
            clear_row(p);
            for (const auto &t : terms) {
                set(x_, p, t.qubit, pauli_has_x(t.pauli));
                set(z_, p, t.qubit, pauli_has_z(t.pauli));
            }
            r_[p] = rng();
            return r_[p];
        }
        std::fill(scratch_x_.begin(), scratch_x_.end(), 0);
        std::fill(scratch_z_.begin(), scratch_z_.end(), 0);
        std::uint64_t sign = 0;
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (anti(i, terms)) {
                sign ^= r_[n_ + i];
                if (phase(&x_[(n_ + i) * words_], &z_[(n_ + i) * words_], scratch_x_.data(), scratch_z_.data()) ==
                    2) {
                    sign = ~sign;
                }
                for (std::size_t k = 0; k < words_; ++k) {
                    scratch_x_[k] ^= x_[(n_ + i) * words_ + k];
                    scratch_z_[k] ^= z_[(n_ + i) * words_ + k];
                }
            }
        }
        return sign;
    }

   private:
    bool get(const std::vector<std::uint64_t> &v, std::uint32_t row, std::uint32_t q) const {
        return (v[row * words_ + (q >> 6)] >> (q & 63)) & 1;
    }
    void set(std::vector<std::uint64_t> &v, std::uint32_t row, std::uint32_t q, bool b) {
        std::uint64_t m = std::uint64_t{1} << (q & 63);
        auto &w = v[row * words_ + (q >> 6)];
        w = b ? (w | m) : (w & ~m);
    }
    bool anti(std::uint32_t row, const std::vector<PauliTerm> &terms) const {
        bool a = false;
        for (const auto &t : terms) {
            bool x = get(x_, row, t.qubit), z = get(z_, row, t.qubit);
            switch (t.pauli) {
                case 'X':
                    a ^= z;
                    break;
                case 'Z':
                    a ^= x;
                    break;
                default:
                    a ^= x != z;
            }
        }
        return a;
    }
    // Exponent of i (mod 4) picked up by multiplying Pauli 1 onto Pauli 2.
    int phase(const std::uint64_t *x1, const std::uint64_t *z1, const std::uint64_t *x2,
              const std::uint64_t *z2) const {
        long sum = 0;
        for (std::size_t k = 0; k < words_; ++k) {
            std::uint64_t y1 = x1[k] & z1[k], xo = x1[k] & ~z1[k], zo = ~x1[k] & z1[k];
            std::uint64_t plus = (y1 & z2[k] & ~x2[k]) | (xo & z2[k] & x2[k]) | (zo & x2[k] & ~z2[k]);
            std::uint64_t minus = (y1 & x2[k] & ~z2[k]) | (xo & z2[k] & ~x2[k]) | (zo & x2[k] & z2[k]);
            sum += std::popcount(plus) - std::popcount(minus);
        }
        return static_cast<int>(((sum % 4) + 4) % 4);
    }
    void rowsum(std::uint32_t h, std::uint32_t i) {
        if (h >= n_) {
            r_[h] ^= r_[i];
            if (phase(&x_[i * words_], &z_[i * words_], &x_[h * words_], &z_[h * words_]) == 2) {
                r_[h] = ~r_[h];
            }
        }
        for (std::size_t k = 0; k < words_; ++k) {
            x_[h * words_ + k] ^= x_[i * words_ + k];
            z_[h * words_ + k] ^= z_[i * words_ + k];
        }
    }
    void copy_row(std::uint32_t dst, std::uint32_t src) {
        std::copy_n(&x_[src * words_], words_, &x_[dst * words_]);
        std::copy_n(&z_[src * words_], words_, &z_[dst * words_]);
        r_[dst] = r_[src];
    }
    void clear_row(std::uint32_t row) {
        std::fill_n(&x_[row * words_], words_, 0);
        std::fill_n(&z_[row * words_], words_, 0);
    }

    std::uint32_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> x_, z_, r_;
    std::vector<std::uint64_t> scratch_x_, scratch_z_;
};

struct TableauBatch {
    std::vector<std::uint64_t> rec, det, obs;
};

TableauBatch run_tableau(const CircuitIR &c, Rng &rng) {
    Tableau t(c.qubit_count);
    TableauBatch out{std::vector<std::uint64_t>(c.measurement_count), std::vector<std::uint64_t>(c.detector_count),
                     std::vector<std::uint64_t>(c.observable_count)};
    std::uint32_t m = 0;
    std::uint32_t d = 0;
    std::uint64_t mask;
    for (const auto &op : c.ops) {
        switch (op.kind) {
            case OpKind::RoundMarker:
                break;
            case OpKind::SingleInit: {
                std::uint64_t r = t.measure(op.terms, rng);
                char fix = op.terms[0].pauli == 'X' ? 'Z' : 'X';
                t.apply_pauli(op.terms[0].qubit, pauli_has_x(fix) ? r : 0, pauli_has_z(fix) ? r : 0);
                break;
            }
            case OpKind::SingleMeasure:
            case OpKind::PairMeasure:
                out.rec[m++] = t.measure(op.terms, rng);
                break;
            case OpKind::Gate:
                t.gate(op.gate, op.terms[0].qubit, op.terms[1].qubit);
                break;
            case OpKind::PauliError:
                for (const auto &term : op.terms) {
                    bernoulli_words(rng, op.probability, &mask, 1);
                    t.apply_pauli(term.qubit, pauli_has_x(term.pauli) ? mask : 0, pauli_has_z(term.pauli) ? mask : 0);
                }
                break;
            case OpKind::Depolarize1:
                for (const auto &term : op.terms) {
                    bernoulli_words(rng, op.probability, &mask, 1);
                    std::uint64_t xm = 0, zm = 0;
                    for_each_hit(&mask, 1, rng, 3, [&](std::size_t, int b, int v) {
                        xm |= std::uint64_t{kDepX[v]} << b;
                        zm |= std::uint64_t{kDepZ[v]} << b;
                    });
                    t.apply_pauli(term.qubit, xm, zm);
                }
                break;
            case OpKind::Depolarize2: {
                bernoulli_words(rng, op.probability, &mask, 1);
                std::uint64_t xa = 0, za = 0, xb = 0, zb = 0;
                for_each_hit(&mask, 1, rng, 15, [&](std::size_t, int b, int v) {
                    xa |= std::uint64_t{kDepX[v >> 2]} << b;
                    za |= std::uint64_t{kDepZ[v >> 2]} << b;
                    xb |= std::uint64_t{kDepX[v & 3]} << b;
                    zb |= std::uint64_t{kDepZ[v & 3]} << b;
                });
                t.apply_pauli(op.terms[0].qubit, xa, za);
                t.apply_pauli(op.terms[1].qubit, xb, zb);
                break;
            }
            case OpKind::CorrelatedError:
                bernoulli_words(rng, op.probability, &mask, 1);
                for (const auto &term : op.terms) {
                    t.apply_pauli(term.qubit, pauli_has_x(term.pauli) ? mask : 0, pauli_has_z(term.pauli) ? mask : 0);
                }
                break;
            case OpKind::FlipRecord:
                bernoulli_words(rng, op.probability, &mask, 1);
                out.rec[op.records[0]] ^= mask;
                break;
            case OpKind::Detector: {
                std::uint64_t v = 0;
                for (auto r : op.records) {
                    v ^= out.rec[r];
                }
                out.det[d++] = v;
                break;
            }
            case OpKind::Observable: {
                std::uint64_t v = 0;
                for (auto r : op.records) {
                    v ^= out.rec[r];
                }
                out.obs[op.index] ^= v;
                break;
            }
        }
    }
    return out;
}

}  // namespace

Reference reference_sample(const CircuitIR &c, std::uint64_t seed) {
    CircuitIR clean = strip_noise(c);
    Rng rng = block_rng(seed, 0, 2);
    TableauBatch b = run_tableau(clean, rng);
    Reference ref;
    for (std::size_t i = 0; i < b.det.size(); ++i) {
        if (b.det[i] != 0 && b.det[i] != ~std::uint64_t{0}) {
            throw NondeterministicReference("detector " + std::to_string(i) + " is not deterministic");
        }
        ref.detectors.push_back(b.det[i] != 0);
    }
    for (std::size_t i = 0; i < b.obs.size(); ++i) {
        if (b.obs[i] != 0 && b.obs[i] != ~std::uint64_t{0}) {
            throw NondeterministicReference("observable " + std::to_string(i) + " is not deterministic");
        }
        ref.observables.push_back(b.obs[i] != 0);
    }
    return ref;
}

TableauResult tableau_simulate(const CircuitIR &c, std::size_t shots, std::uint64_t seed) {
    Reference ref = reference_sample(c, seed);
    TableauResult res{BitMatrix(shots, c.measurement_count), BitMatrix(shots, c.detector_count),
                      BitMatrix(shots, c.observable_count)};
    const std::size_t batches = (shots + 63) / 64;
    for (std::size_t b = 0; b < batches; ++b) {
        Rng rng = block_rng(seed, b, 3);
        TableauBatch tb = run_tableau(c, rng);
        for (std::size_t i = 0; i < tb.det.size(); ++i) {
            if (ref.detectors[i]) {
                tb.det[i] = ~tb.det[i];
            }
        }
        for (std::size_t i = 0; i < tb.obs.size(); ++i) {
            if (ref.observables[i]) {
                tb.obs[i] = ~tb.obs[i];
            }
        }
        scatter_rows(tb.rec, c.measurement_count, 1, b * 64, res.measurements);
        scatter_rows(tb.det, c.detector_count, 1, b * 64, res.detectors);
        scatter_rows(tb.obs, c.observable_count, 1, b * 64, res.observables);
    }
    return res;
}

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t> &v) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
        for (auto x : v) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// Backward propagation of detector/observable sensitivities. Bit b < D is
// detector b, bit D + k is observable k. For each qubit, xs holds the targets
// whose backward Pauli has an X or Y there and zs those with Z or Y.
class Backward {
   public:
    using NoiseFn = std::function<void(std::size_t op_index, const std::vector<std::uint32_t> &symptom, double p)>;
    using ProbeFn = std::function<void(std::size_t op_index, Backward &self)>;

    explicit Backward(const CircuitIR &c)
        : c_(c),
          D_(c.detector_count),
          B_(c.detector_count + c.observable_count),
          words_((B_ + 63) / 64),
          xs_(static_cast<std::size_t>(c.qubit_count) * words_),
          zs_(static_cast<std::size_t>(c.qubit_count) * words_),
          rec_targets_(c.measurement_count),
          scratch_(words_) {
        std::uint32_t d = 0;
        for (const auto &op : c.ops) {
            if (op.kind == OpKind::Detector) {
                for (auto r : op.records) {
                    rec_targets_.at(r).push_back(d);
                }
                ++d;
            } else if (op.kind == OpKind::Observable) {
                for (auto r : op.records) {
                    rec_targets_.at(r).push_back(D_ + op.index);
                }
            }
        }
        // A record listed twice in one detector cancels.
        for (auto &v : rec_targets_) {
            std::sort(v.begin(), v.end());
            std::vector<std::uint32_t> odd;
            for (std::size_t i = 0; i < v.size();) {
                std::size_t j = i;
                while (j < v.size() && v[j] == v[i]) {
                    ++j;
                }
                if ((j - i) % 2) {
                    odd.push_back(v[i]);
                }
                i = j;
            }
            v = std::move(odd);
        }
    }

    void run(const NoiseFn &noise, const ProbeFn &probe = nullptr) {
        std::vector<std::uint32_t> rec_of_op(c_.ops.size(), 0);
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < c_.ops.size(); ++i) {
            auto k = c_.ops[i].kind;
            if (k == OpKind::PairMeasure || k == OpKind::SingleMeasure) {
                rec_of_op[i] = m++;
            }
        }
        for (std::size_t i = c_.ops.size(); i-- > 0;) {
            const auto &op = c_.ops[i];
            if (probe) {
                probe(i, *this);
            }
            switch (op.kind) {
                case OpKind::SingleMeasure:
                case OpKind::PairMeasure: {
                    anti_into(op.terms);
                    if (any(scratch_)) {
                        fail(scratch_, "depends on a random measurement outcome");
                    }
                    for (auto b : rec_targets_[rec_of_op[i]]) {
                        for (const auto &t : op.terms) {
                            if (pauli_has_x(t.pauli)) {
                                flipbit(X(t.qubit), b);
                            }
                            if (pauli_has_z(t.pauli)) {
                                flipbit(Z(t.qubit), b);
                            }
                        }
                    }
                    break;
                }
                case OpKind::SingleInit: {
                    anti_into(op.terms);
                    if (any(scratch_)) {
                        fail(scratch_, "depends on a reset qubit's random state");
                    }
                    std::fill_n(X(op.terms[0].qubit), words_, 0);
                    std::fill_n(Z(op.terms[0].qubit), words_, 0);
                    break;
                }
                case OpKind::Gate: {
                    auto a = op.terms[0].qubit;
                    auto b = op.terms[1].qubit;
                    std::uint64_t *xa = X(a), *za = Z(a), *xb = X(b), *zb = Z(b);
                    for (std::size_t k = 0; k < words_; ++k) {
                        switch (op.gate) {
                            case GateKind::CX:
                                xb[k] ^= xa[k];
                                za[k] ^= zb[k];
                                break;
                            case GateKind::XCX:
                                xb[k] ^= za[k];
                                xa[k] ^= zb[k];
                                break;
                            case GateKind::YCX:
                                xb[k] ^= xa[k] ^ za[k];
                                xa[k] ^= zb[k];
                                za[k] ^= zb[k];
                                break;
                        }
                    }
                    break;
                }
                case OpKind::PauliError:
                    for (const auto &t : op.terms) {
                        emit(noise, i, {t}, op.probability);
                    }
                    break;
                case OpKind::Depolarize1: {
                    double q = depolarize1_component_probability(op.probability);
                    for (const auto &t : op.terms) {
                        for (char p : {'X', 'Y', 'Z'}) {
                            emit(noise, i, {{t.qubit, p}}, q);
                        }
                    }
                    break;
                }
                case OpKind::Depolarize2: {
                    double q = depolarize2_component_probability(op.probability);
                    static constexpr char kP[4] = {'I', 'X', 'Y', 'Z'};
                    for (int v = 1; v < 16; ++v) {
                        std::vector<PauliTerm> terms;
                        if (v >> 2) {
                            terms.push_back({op.terms[0].qubit, kP[v >> 2]});
                        }
                        if (v & 3) {
                            terms.push_back({op.terms[1].qubit, kP[v & 3]});
                        }
                        emit(noise, i, terms, q);
                    }
                    break;
                }
                case OpKind::CorrelatedError:
                    emit(noise, i, op.terms, op.probability);
                    break;
                case OpKind::FlipRecord:
                    if (noise && op.probability > 0) {
                        noise(i, rec_targets_.at(op.records[0]), op.probability);
                    }
                    break;
                default:
                    break;
            }
        }
        for (std::uint32_t q = 0; q < c_.qubit_count; ++q) {
            std::copy_n(X(q), words_, scratch_.begin());
            if (any(scratch_)) {
                fail(scratch_, "is not fixed by the all-zero initial state");
            }
        }
    }

    /// Sparse symptom of a Pauli product at the current backward position.
    std::vector<std::uint32_t> symptom(const std::vector<PauliTerm> &terms) {
        anti_into(terms);
        std::vector<std::uint32_t> out;
        for (std::size_t k = 0; k < words_; ++k) {
            std::uint64_t w = scratch_[k];
            while (w) {
                out.push_back(static_cast<std::uint32_t>(k * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    const std::vector<std::uint32_t> &record_targets(std::uint32_t r) const { return rec_targets_[r]; }

   private:
    std::uint64_t *X(std::uint32_t q) { return &xs_[static_cast<std::size_t>(q) * words_]; }
    std::uint64_t *Z(std::uint32_t q) { return &zs_[static_cast<std::size_t>(q) * words_]; }
    static void flipbit(std::uint64_t *v, std::uint32_t b) { v[b >> 6] ^= std::uint64_t{1} << (b & 63); }
    static bool any(const std::vector<std::uint64_t> &v) {
        return std::any_of(v.begin(), v.end(), [](std::uint64_t w) { return w != 0; });
    }

    // scratch = targets whose backward Pauli anticommutes with the product.
    void anti_into(const std::vector<PauliTerm> &terms) {
        std::fill(scratch_.begin(), scratch_.end(), 0);
        for (const auto &t : terms) {
            const std::uint64_t *x = X(t.qubit);
            const std::uint64_t *z = Z(t.qubit);
            for (std::size_t k = 0; k < words_; ++k) {
                switch (t.pauli) {
                    case 'X':
                        scratch_[k] ^= z[k];
                        break;
                    case 'Z':
                        scratch_[k] ^= x[k];
                        break;
                    default:
                        scratch_[k] ^= x[k] ^ z[k];
                }
            }
        }
    }

    void emit(const NoiseFn &noise, std::size_t i, const std::vector<PauliTerm> &terms, double p) {
        if (!noise || p <= 0) {
            return;
        }
        noise(i, symptom(terms), p);
    }

    [[noreturn]] void fail(const std::vector<std::uint64_t> &bits, const std::string &why) {
        std::size_t b = 0;
        for (std::size_t k = 0; k < words_; ++k) {
            if (bits[k]) {
                b = k * 64 + std::countr_zero(bits[k]);
                break;
            }
        }
        std::string name = b < D_ ? "detector " + std::to_string(b) : "observable " + std::to_string(b - D_);
        throw NondeterministicReference(name + " " + why);
    }

    const CircuitIR &c_;
    std::uint32_t D_;
    std::uint32_t B_;
    std::size_t words_;
    std::vector<std::uint64_t> xs_, zs_;
    std::vector<std::vector<std::uint32_t>> rec_targets_;
    std::vector<std::uint64_t> scratch_;
};

class DemAccumulator {
   public:
    DemAccumulator(std::uint32_t D, std::uint32_t O) : D_(D), O_(O) {}
    void add(const std::vector<std::uint32_t> &symptom, double p) {
        if (symptom.empty() || p <= 0) {
            return;
        }
        auto [it, inserted] = map_.try_emplace(symptom, p);
        if (!inserted) {
            it->second = combine_probability(it->second, p);
        }
    }
    DetectorErrorModel finish() const {
        DetectorErrorModel dem;
        dem.detector_count = D_;
        dem.observable_count = O_;
        for (const auto &[sym, p] : map_) {
            ErrorMechanism m;
            m.probability = p;
            for (auto b : sym) {
                if (b < D_) {
                    m.detectors.push_back(b);
                } else {
                    m.observables.push_back(b - D_);
                }
            }
            dem.mechanisms.push_back(std::move(m));
        }
        std::sort(dem.mechanisms.begin(), dem.mechanisms.end(), [](const auto &a, const auto &b) {
            return std::tie(a.detectors, a.observables) < std::tie(b.detectors, b.observables);
        });
        return dem;
    }

   private:
    std::uint32_t D_, O_;
    std::unordered_map<std::vector<std::uint32_t>, double, VecHash> map_;
};

std::vector<std::uint32_t> merge_symptom(const std::vector<std::uint32_t> &dets, const std::vector<std::uint32_t> &obs,
                                         std::uint32_t D) {
    std::vector<std::uint32_t> out = dets;
    for (auto o : obs) {
        out.push_back(D + o);
    }
    return out;
}

}  // namespace

void check_deterministic(const CircuitIR &c) {
    Backward bw(c);
    bw.run(nullptr);
}

DetectorErrorModel build_dem(const CircuitIR &c) {
    Backward bw(c);
    DemAccumulator acc(c.detector_count, c.observable_count);
    bw.run([&](std::size_t, const std::vector<std::uint32_t> &s, double p) { acc.add(s, p); });
    return acc.finish();
}

ErasureSymptoms::ErasureSymptoms(const CircuitIR &c) : location_of_op_(c.ops.size(), -1) {
    std::vector<std::uint32_t> rec_of_op(c.ops.size(), 0);
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        auto k = c.ops[i].kind;
        if (k == OpKind::PairMeasure || k == OpKind::SingleMeasure) {
            rec_of_op[i] = m++;
        }
        if (k == OpKind::PairMeasure) {
            location_of_op_[i] = static_cast<std::int64_t>(locations_.size());
            locations_.emplace_back();
        }
    }
    const std::uint32_t D = c.detector_count;
    auto split = [D](const std::vector<std::uint32_t> &s, std::vector<std::uint32_t> &dets,
                     std::vector<std::uint32_t> &obs) {
        for (auto b : s) {
            (b < D ? dets : obs).push_back(b < D ? b : b - D);
        }
    };
    Backward bw(c);
    DemAccumulator acc(c.detector_count, c.observable_count);
    bw.run([&](std::size_t, const std::vector<std::uint32_t> &s, double p) { acc.add(s, p); },
           [&](std::size_t i, Backward &self) {
               if (location_of_op_[i] < 0) {
                   return;
               }
               const auto &op = c.ops[i];
               auto &loc = locations_[location_of_op_[i]];
               // The probe runs before the measurement itself is undone, i.e. just after it in time.
               split(self.symptom({{op.terms[0].qubit, erasure_pauli(op.terms[0].pauli)}}), loc.dephase_dets,
                     loc.dephase_obs);
               split(self.record_targets(rec_of_op[i]), loc.flip_dets, loc.flip_obs);
           });
    background_ = acc.finish();
}

DetectorErrorModel ErasureSymptoms::instance(const ErasurePattern &pattern) const {
    if (pattern.erased.empty()) {
        return background_;
    }
    const std::uint32_t D = background_.detector_count;
    DemAccumulator acc(D, background_.observable_count);
    for (const auto &m : background_.mechanisms) {
        acc.add(merge_symptom(m.detectors, m.observables, D), m.probability);
    }
    for (auto i : pattern.erased) {
        if (i >= location_of_op_.size() || location_of_op_[i] < 0) {
            throw std::invalid_argument("erasure pattern must index pair measurements");
        }
        const auto &loc = locations_[location_of_op_[i]];
        if (pattern.randomize_records) {
            acc.add(merge_symptom(loc.flip_dets, loc.flip_obs, D), 0.5);
        }
        acc.add(merge_symptom(loc.dephase_dets, loc.dephase_obs, D), 0.5);
    }
    return acc.finish();
}

DetectorErrorModel build_instance_dem(const CircuitIR &c, const ErasurePattern &pattern) {
    return ErasureSymptoms(c).instance(pattern);
}

std::string dem_to_text(const DetectorErrorModel &dem) {
    std::ostringstream out;
    char buf[64];
    for (const auto &m : dem.mechanisms) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m.probability);
        out << "error(" << std::string(buf, ptr) << ")";
        for (auto d : m.detectors) {
            out << " D" << d;
        }
        for (auto o : m.observables) {
            out << " L" << o;
        }
        out << "\n";
    }
    if (dem.detector_count) {
        out << "detector D" << dem.detector_count - 1 << "\n";
    }
    if (dem.observable_count) {
        out << "logical_observable L" << dem.observable_count - 1 << "\n";
    }
    return out.str();
}

DetectorErrorModel dem_from_text(const std::string &text) {
    DetectorErrorModel dem;
    std::istringstream in(text);
    std::string line;
    auto parse_id = [](const std::string &tok) {
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw std::runtime_error("bad DEM target '" + tok + "'");
        }
        return v;
    };
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) {
            line.resize(h);
        }
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) {
            toks.push_back(t);
        }
        auto note = [&](const std::string &t) {
            std::uint32_t v = parse_id(t);
            if (t[0] == 'D') {
                dem.detector_count = std::max(dem.detector_count, v + 1);
            } else if (t[0] == 'L') {
                dem.observable_count = std::max(dem.observable_count, v + 1);
            } else {
                throw std::runtime_error("bad DEM target '" + t + "'");
            }
            return v;
        };
        if (head.rfind("error(", 0) == 0 && head.back() == ')') {
            ErrorMechanism m;
            const std::string num = head.substr(6, head.size() - 7);
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), m.probability);
            if (ec != std::errc()) {
                throw std::runtime_error("bad DEM probability '" + num + "'");
            }
            for (const auto &t : toks) {
                std::uint32_t v = note(t);
                (t[0] == 'D' ? m.detectors : m.observables).push_back(v);
            }
            dem.mechanisms.push_back(std::move(m));
        } else if (head == "detector" || head == "logical_observable") {
            for (const auto &t : toks) {
                note(t);
            }
        } else {
            throw std::runtime_error("unsupported DEM line '" + line + "'");
        }
    }
    return dem;
}

SampleResult sample_dem(const DetectorErrorModel &dem, std::size_t shots, std::uint64_t seed) {
    SampleResult res{BitMatrix(shots, dem.detector_count), BitMatrix(shots, dem.observable_count)};
    Rng rng = block_rng(seed, 0, 4);
    std::vector<std::uint64_t> mask((shots + 63) / 64);
    for (const auto &m : dem.mechanisms) {
        bernoulli_words(rng, m.probability, mask.data(), mask.size());
        for (std::size_t k = 0; k < mask.size(); ++k) {
            std::uint64_t w = mask[k];
            while (w) {
                std::size_t s = k * 64 + std::countr_zero(w);
                w &= w - 1;
                if (s >= shots) {
                    continue;
                }
                for (auto d : m.detectors) {
                    res.detectors.flip(s, d);
                }
                for (auto o : m.observables) {
                    res.observables.flip(s, o);
                }
            }
        }
    }
    return res;
}

}  // namespace floquetforge
