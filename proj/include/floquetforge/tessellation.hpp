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

#ifndef FLOQUETFORGE_TESSELLATION_HPP
#define FLOQUETFORGE_TESSELLATION_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "floquetforge/fpgroup.hpp"

namespace floquetforge {

struct MalformedTable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotThreeColorable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cellulation of a closed surface. Qubits live on vertices.
///
/// Base tessellations keep the flag maps they were extracted from; fine-grained
/// ones instead record their level and a pointer to the base.
struct Tessellation {
    int p = 0;
    int q = 0;
    std::size_t vertex_count = 0;
    std::vector<std::array<std::uint32_t, 2>> edges;
    /// Cyclic boundary edge lists.
    std::vector<std::vector<std::uint32_t>> faces;
    /// face_vertices[f][i] is the vertex shared by faces[f][i] and faces[f][i+1].
    std::vector<std::vector<std::uint32_t>> face_vertices;

    std::vector<std::uint32_t> vertex_of_flag;
    std::vector<std::uint32_t> edge_of_flag;
    std::vector<std::uint32_t> face_of_flag;
    /// Coset table the flag maps refer to (empty for fine-grained tessellations).
    CosetTable flags;

    int genus = 0;
    std::vector<std::int8_t> face_color;
    std::vector<std::int8_t> edge_color;

    int level = 1;
    std::shared_ptr<const Tessellation> base;

    std::size_t edge_count() const { return edges.size(); }
    std::size_t face_count() const { return faces.size(); }
    long euler_characteristic() const {
        return static_cast<long>(vertex_count) - static_cast<long>(edges.size()) + static_cast<long>(faces.size());
    }
    bool face_colored() const { return face_color.size() == faces.size() && !faces.empty(); }
    bool edge_colored() const { return edge_color.size() == edges.size() && !edges.empty(); }

    /// Incident edge ids per vertex, ascending.
    std::vector<std::vector<std::uint32_t>> vertex_edges() const;
    /// The two faces bordering each edge, in ascending order.
    std::vector<std::array<std::uint32_t, 2>> edge_faces() const;
    /// The face of the given color containing each vertex (degree-3 colored tessellations).
    std::vector<std::uint32_t> vertex_face_of_color(int color) const;
};

struct CodeParameters {
    std::size_t n = 0;
    std::size_t k = 0;
    int d_emb = 0;
    double rate() const { return n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n); }
};

CodeParameters code_parameters(const Tessellation &t, int d_emb = 0);

/// Vertices, edges and faces are the <b>, <a> and <c> orbits of the flags.
Tessellation extract_tessellation(const CosetTable &table, int p, int q);

struct ParameterCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};
std::vector<ParameterCheck> validate_parameters(const Tessellation &t);

/// Canonical proper 3-coloring of faces by backtracking.
Tessellation color_faces(const Tessellation &t);
/// Edge color is the color missing from its two faces.
Tessellation color_edges(const Tessellation &t);

/// Checks the structural invariants of a (possibly colored) trivalent tessellation.
/// Returns an empty string when all hold, otherwise the first violation.
std::string check_structure(const Tessellation &t);

/// Builds, validates and colors the tessellation of a relator file.
Tessellation build_tessellation(const RelatorFile &file, std::size_t max_cosets = 4'000'000);

std::string tessellation_to_json(const Tessellation &t);
Tessellation tessellation_from_json(const std::string &text);
void save_tessellation(const Tessellation &t, const std::string &path);
Tessellation load_tessellation(const std::string &path);

}  // namespace floquetforge

#endif
