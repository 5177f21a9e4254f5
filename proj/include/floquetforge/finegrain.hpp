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

#ifndef FLOQUETFORGE_FINEGRAIN_HPP
#define FLOQUETFORGE_FINEGRAIN_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "floquetforge/tessellation.hpp"

namespace floquetforge {

struct ColorInheritanceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Barycentric lattice point of a dual triangle; coordinate i is the weight of
/// the corner whose face has color i.
using Barycentric = std::array<int, 3>;

/// One small triangle of a level-l subdivided dual triangle.
struct SmallTriangle {
    bool up = true;
    std::array<Barycentric, 3> corners;
};

/// The l*l small triangles of one dual triangle: up triangles first, then
/// down triangles, each in lexicographic order of their anchor coordinates.
std::vector<SmallTriangle> small_triangles(int level);

/// Color of a lattice point (a proper coloring of the subdivided triangulation).
int point_color(const Barycentric &b, int level);

/// Level-l subdivision of the dual triangulation. Vertex i of the result is
/// small triangle i % (l*l) of base vertex i / (l*l).
Tessellation fine_grain(const Tessellation &t, int level);

}  // namespace floquetforge

#endif
