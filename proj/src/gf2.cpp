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

#include "floquetforge/gf2.hpp"

namespace floquetforge {

bool XorBasis::reduce(BitVec &v) const {
    // Rows are kept fully reduced, so one pass over pivots in any order suffices.
    for (const auto &row : rows_) {
        std::size_t p = row.first();
        if (v.get(p)) {
            v ^= row;
        }
    }
    return !v.any();
}

bool XorBasis::insert(BitVec v) {
    if (reduce(v)) {
        return false;
    }
    std::size_t p = v.first();
    for (auto &row : rows_) {
        if (row.get(p)) {
            row ^= v;
        }
    }
    pivot_row_[p] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
}

std::vector<BitVec> nullspace(const std::vector<BitVec> &rows, std::size_t n) {
    std::vector<BitVec> m = rows;
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m.size(); ++col) {
        std::size_t sel = r;
        while (sel < m.size() && !m[sel].get(col)) {
            ++sel;
        }
        if (sel == m.size()) {
            continue;
        }
        std::swap(m[r], m[sel]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i != r && m[i].get(col)) {
                m[i] ^= m[r];
            }
        }
        pivot_cols.push_back(col);
        ++r;
    }
    std::vector<char> is_pivot(n, 0);
    for (auto c : pivot_cols) {
        is_pivot[c] = 1;
    }
    std::vector<BitVec> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        BitVec v(n);
        v.set(free);
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
            if (m[i].get(free)) {
                v.set(pivot_cols[i]);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank(const std::vector<BitVec> &rows, std::size_t n) {
    XorBasis b(n);
    for (const auto &r : rows) {
        b.insert(r);
    }
    return b.rank();
}

std::vector<BitVec> quotient_basis(const std::vector<BitVec> &candidates, const std::vector<BitVec> &subspace,
                                   std::size_t n) {
    XorBasis b(n);
    for (const auto &s : subspace) {
        b.insert(s);
    }
    std::vector<BitVec> out;
    for (const auto &c : candidates) {
        if (b.insert(c)) {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace floquetforge
