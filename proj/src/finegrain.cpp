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

#include "floquetforge/finegrain.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

namespace floquetforge {

std::vector<SmallTriangle> small_triangles(int level) {
    std::vector<SmallTriangle> out;
    for (int a = 0; a < level; ++a) {
        for (int b = 0; a + b < level; ++b) {
            int c = level - 1 - a - b;
            out.push_back({true, {Barycentric{a + 1, b, c}, Barycentric{a, b + 1, c}, Barycentric{a, b, c + 1}}});
        }
    }
    for (int a = 0; a + 1 < level; ++a) {
        for (int b = 0; a + b + 1 < level; ++b) {
            int c = level - 2 - a - b;
            out.push_back(
                {false, {Barycentric{a + 1, b + 1, c}, Barycentric{a + 1, b, c + 1}, Barycentric{a, b + 1, c + 1}}});
        }
    }
    return out;
}

int point_color(const Barycentric &b, int level) {
    int s = (b[1] + 2 * b[2]) % 3;
    int l = level % 3;
    if (l == 0) {
        return s;
    }
    // l is its own inverse mod 3.
    return (s * l) % 3;
}

Tessellation fine_grain(const Tessellation &t, int level) {
    if (level < 1) {
        throw std::invalid_argument("fine-graining level must be at least 1");
    }
    if (!t.face_colored() || !t.edge_colored()) {
        throw std::invalid_argument("fine-graining needs a colored tessellation");
    }
    if (level == 1) {
        return t;
    }
    if (t.base) {
        throw std::invalid_argument("fine-graining an already fine-grained tessellation is not supported");
    }
    const std::size_t V = t.vertex_count;
    auto ve = t.vertex_edges();
    std::array<std::vector<std::uint32_t>, 3> face_at;
    for (int c = 0; c < 3; ++c) {
        face_at[c] = t.vertex_face_of_color(c);
    }
    std::vector<std::array<std::uint32_t, 3>> edge_at(V);
    for (std::size_t v = 0; v < V; ++v) {
        if (ve[v].size() != 3) {
            throw std::invalid_argument("fine-graining needs a trivalent tessellation");
        }
        for (std::uint32_t e : ve[v]) {
            edge_at[v][t.edge_color[e]] = e;
        }
    }

    // Point keys: (kind, a, b, c). kind 0 = base face, 1 = point inside a
    // dual edge, 2 = interior point of a dual triangle.
    using Key = std::tuple<int, std::uint32_t, int, int>;
    std::map<Key, std::uint32_t> point_id;
    std::vector<int> point_colors;
    auto point_of = [&](std::uint32_t v, const Barycentric &b) {
        int zeros = (b[0] == 0) + (b[1] == 0) + (b[2] == 0);
        Key key;
        if (zeros == 2) {
            int c = b[0] ? 0 : (b[1] ? 1 : 2);
            key = {0, face_at[c][v], 0, 0};
        } else if (zeros == 1) {
            int m = b[0] == 0 ? 0 : (b[1] == 0 ? 1 : 2);
            int lo = m == 0 ? 1 : 0;
            key = {1, edge_at[v][m], b[lo], 0};
        } else {
            key = {2, static_cast<std::uint32_t>(v), b[0], b[1]};
        }
        auto [it, fresh] = point_id.emplace(key, static_cast<std::uint32_t>(point_colors.size()));
        if (fresh) {
            point_colors.push_back(point_color(b, level));
        } else if (point_colors[it->second] != point_color(b, level)) {
            throw ColorInheritanceFailure("shared lattice point received two colors");
        }
        return it->second;
    };

    const auto tris = small_triangles(level);
    const std::size_t per = tris.size();
    std::vector<std::array<std::uint32_t, 3>> tri_points(V * per);
    for (std::uint32_t v = 0; v < V; ++v) {
        for (std::size_t i = 0; i < per; ++i) {
            for (int k = 0; k < 3; ++k) {
                tri_points[v * per + i][k] = point_of(v, tris[i].corners[k]);
            }
        }
    }

    Tessellation out;
    out.p = t.p;
    out.q = t.q;
    out.level = t.level * level;
    out.base = std::make_shared<Tessellation>(t);
    out.vertex_count = V * per;

    // Small sides shared by two small triangles become primal edges.
    std::unordered_map<std::uint64_t, std::uint32_t> side_edge;
    std::vector<std::array<std::uint32_t, 2>> side_points;
    for (std::uint32_t tri = 0; tri < tri_points.size(); ++tri) {
        for (int k = 0; k < 3; ++k) {
            std::uint32_t a = tri_points[tri][k];
            std::uint32_t b = tri_points[tri][(k + 1) % 3];
            if (a > b) {
                std::swap(a, b);
            }
            std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
            auto it = side_edge.find(key);
            if (it == side_edge.end()) {
                side_edge.emplace(key, static_cast<std::uint32_t>(out.edges.size()));
                out.edges.push_back({tri, std::numeric_limits<std::uint32_t>::max()});
                side_points.push_back({a, b});
            } else {
                auto &e = out.edges[it->second];
                if (e[1] != std::numeric_limits<std::uint32_t>::max()) {
                    throw ColorInheritanceFailure("small side shared by more than two triangles");
                }
                e[1] = tri;
            }
        }
    }
    out.edge_color.resize(out.edges.size());
    for (std::size_t e = 0; e < out.edges.size(); ++e) {
        if (out.edges[e][1] == std::numeric_limits<std::uint32_t>::max()) {
            throw ColorInheritanceFailure("small side on a surface boundary");
        }
        int ca = point_colors[side_points[e][0]];
        int cb = point_colors[side_points[e][1]];
        if (ca == cb) {
            throw ColorInheritanceFailure("adjacent lattice points share a color");
        }
        out.edge_color[e] = static_cast<std::int8_t>(3 - ca - cb);
    }

    // Faces are lattice points; walk the ring of small triangles around each.
    const std::size_t P = point_colors.size();
    std::vector<std::vector<std::uint32_t>> point_sides(P);
    for (std::uint32_t e = 0; e < out.edges.size(); ++e) {
        point_sides[side_points[e][0]].push_back(e);
        point_sides[side_points[e][1]].push_back(e);
    }
    out.faces.resize(P);
    out.face_vertices.resize(P);
    out.face_color.resize(P);
    for (std::uint32_t pt = 0; pt < P; ++pt) {
        out.face_color[pt] = static_cast<std::int8_t>(point_colors[pt]);
        const auto &sides = point_sides[pt];
        std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> tri_sides;
        for (std::uint32_t e : sides) {
            tri_sides[out.edges[e][0]].push_back(e);
            tri_sides[out.edges[e][1]].push_back(e);
        }
        std::uint32_t start = std::numeric_limits<std::uint32_t>::max();
        for (const auto &[tri, es] : tri_sides) {
            if (es.size() != 2) {
                throw ColorInheritanceFailure("lattice point ring is not a cycle");
            }
            start = std::min(start, tri);
        }
        std::uint32_t cur = start;
        std::uint32_t via = std::min(tri_sides[start][0], tri_sides[start][1]);
        do {
            out.faces[pt].push_back(via);
            const auto &ed = out.edges[via];
            cur = ed[0] == cur ? ed[1] : ed[0];
            out.face_vertices[pt].push_back(cur);
            const auto &es = tri_sides[cur];
            via = es[0] == via ? es[1] : es[0];
        } while (cur != start);
        if (out.faces[pt].size() != sides.size()) {
            throw ColorInheritanceFailure("lattice point ring has more than one component");
        }
    }

    long chi = out.euler_characteristic();
    if (chi != t.euler_characteristic()) {
        throw ColorInheritanceFailure("subdivision changed the Euler characteristic");
    }
    out.genus = t.genus;
    std::string problem = check_structure(out);
    if (!problem.empty()) {
        throw ColorInheritanceFailure(problem);
    }
    return out;
}

}  // namespace floquetforge
