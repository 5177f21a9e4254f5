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

#ifndef FLOQUETFORGE_HOMOLOGY_HPP
#define FLOQUETFORGE_HOMOLOGY_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "floquetforge/gf2.hpp"
#include "floquetforge/tessellation.hpp"

namespace floquetforge {

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two-dimensional cell complex whose edges are the color-c primal edges.
///
/// The restricted dual has the non-c faces as nodes and the c faces as
/// 2-cells. Its dual complex (`cocycle == true`) swaps the two roles, so the
/// cycles of one are the cocycles of the other.
struct RestrictedDual {
    int color = 0;
    bool cocycle = false;
    std::vector<std::uint32_t> node_face;
    std::vector<std::uint32_t> edge_primal;
    std::vector<std::array<std::uint32_t, 2>> edge_nodes;
    std::vector<std::vector<std::uint32_t>> cells;

    std::size_t node_count() const { return node_face.size(); }
    std::size_t edge_count() const { return edge_primal.size(); }
};

RestrictedDual restricted_dual(const Tessellation &t, int color, bool cocycle = false);

/// Cycles (edge sets) spanning H1 of the complex.
std::vector<BitVec> homology_basis(const RestrictedDual &k);
/// Cocycles spanning H^1; a cycle is nontrivial iff it pairs oddly with one of them.
std::vector<BitVec> cohomology_basis(const RestrictedDual &k);

bool is_cycle(const RestrictedDual &k, const BitVec &edges);
bool is_nontrivial(const BitVec &cycle, const std::vector<BitVec> &cohomology);

struct CycleWitness {
    int length = 0;
    int color = 0;
    bool cocycle = false;
    /// Primal edge ids of the cycle.
    std::vector<std::uint32_t> primal_edges;
};

/// Shortest homologically nontrivial cycle of one complex (length 0 if H1 = 0).
CycleWitness shortest_nontrivial_cycle(const RestrictedDual &k);

/// Minimum over colors of the shortest nontrivial cycle or cocycle.
CycleWitness embedded_distance_witness(const Tessellation &t);
int embedded_distance(const Tessellation &t);

struct LogicalBasis {
    int color = 2;
    /// 2g independent nontrivial cycles as primal edge lists.
    std::vector<std::vector<std::uint32_t>> cycles;
    /// pairing[i][j] = <cycle i, cohomology basis j>; invertible over GF(2).
    std::vector<std::vector<std::uint8_t>> pairing;
};

/// Greedy shortest independent nontrivial cycles on the restricted dual of `color`.
LogicalBasis logical_basis(const Tessellation &t, int color = 2);

}  // namespace floquetforge

#endif
