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

#ifndef FLOQUETFORGE_GF2_HPP
#define FLOQUETFORGE_GF2_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace floquetforge {

/// Dense vector over GF(2).
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool v = true) {
        std::uint64_t m = std::uint64_t{1} << (i & 63);
        w_[i >> 6] = v ? (w_[i >> 6] | m) : (w_[i >> 6] & ~m);
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec &operator^=(const BitVec &o) {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            w_[k] ^= o.w_[k];
        }
        return *this;
    }
    bool any() const {
        for (auto w : w_) {
            if (w) {
                return true;
            }
        }
        return false;
    }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : w_) {
            c += std::popcount(w);
        }
        return c;
    }
    bool dot(const BitVec &o) const {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) {
            acc ^= w_[k] & o.w_[k];
        }
        return std::popcount(acc) & 1;
    }
    /// Index of the lowest set bit, or size() if none.
    std::size_t first() const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            if (w_[k]) {
                return k * 64 + std::countr_zero(w_[k]);
            }
        }
        return n_;
    }
    std::vector<std::uint32_t> ones() const {
        std::vector<std::uint32_t> out;
        for (std::size_t k = 0; k < w_.size(); ++k) {
            std::uint64_t w = w_[k];
            while (w) {
                out.push_back(static_cast<std::uint32_t>(k * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }
    const std::vector<std::uint64_t> &words() const { return w_; }
    bool operator==(const BitVec &o) const = default;

   private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Incrementally built row-echelon basis; tests membership in a span.
class XorBasis {
   public:
    explicit XorBasis(std::size_t n) : n_(n), pivot_row_(n, -1) {}

    /// Reduces v against the basis in place; true iff v ends up zero.
    bool reduce(BitVec &v) const;
    /// Inserts v if independent; returns whether it was.
    bool insert(BitVec v);
    std::size_t rank() const { return rows_.size(); }

   private:
    std::size_t n_;
    std::vector<BitVec> rows_;
    std::vector<int> pivot_row_;
};

/// Basis of {x : r.x = 0 for every row r}, for vectors of length n.
std::vector<BitVec> nullspace(const std::vector<BitVec> &rows, std::size_t n);

/// Rank of a set of vectors.
std::size_t rank(const std::vector<BitVec> &rows, std::size_t n);

/// Members of `candidates` that are independent modulo span(subspace), greedily in order.
std::vector<BitVec> quotient_basis(const std::vector<BitVec> &candidates, const std::vector<BitVec> &subspace,
                                   std::size_t n);

}  // namespace floquetforge

#endif
