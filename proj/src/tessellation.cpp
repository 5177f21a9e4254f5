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

#include "floquetforge/tessellation.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace floquetforge {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Orbit ids in first-appearance order over cosets, plus the orbit sizes.
std::vector<std::uint32_t> orbits(const CosetTable &t, int letter, std::vector<std::size_t> &sizes) {
    std::vector<std::uint32_t> id(t.size(), kNone);
    sizes.clear();
    for (std::uint32_t c = 0; c < t.size(); ++c) {
        if (id[c] != kNone) {
            continue;
        }
        auto label = static_cast<std::uint32_t>(sizes.size());
        std::size_t count = 0;
        std::uint32_t d = c;
        do {
            id[d] = label;
            ++count;
            d = t.act(d, letter);
        } while (d != c);
        sizes.push_back(count);
    }
    return id;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> Tessellation::vertex_edges() const {
    std::vector<std::vector<std::uint32_t>> out(vertex_count);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
        out[edges[e][0]].push_back(e);
        if (edges[e][1] != edges[e][0]) {
            out[edges[e][1]].push_back(e);
        }
    }
    return out;
}

std::vector<std::array<std::uint32_t, 2>> Tessellation::edge_faces() const {
    std::vector<std::array<std::uint32_t, 2>> out(edges.size(), {kNone, kNone});
    for (std::uint32_t f = 0; f < faces.size(); ++f) {
        for (std::uint32_t e : faces[f]) {
            if (out[e][0] == kNone) {
                out[e][0] = f;
            } else if (out[e][1] == kNone) {
                out[e][1] = f;
            } else {
                throw MalformedTable("edge borders more than two face sides");
            }
        }
    }
    for (auto &pair : out) {
        if (pair[1] == kNone) {
            throw MalformedTable("edge borders fewer than two face sides");
        }
        if (pair[0] > pair[1]) {
            std::swap(pair[0], pair[1]);
        }
    }
    return out;
}

std::vector<std::uint32_t> Tessellation::vertex_face_of_color(int color) const {
    std::vector<std::uint32_t> out(vertex_count, kNone);
    for (std::uint32_t f = 0; f < faces.size(); ++f) {
        if (face_color.at(f) != color) {
            continue;
        }
        for (std::uint32_t v : face_vertices[f]) {
            out[v] = f;
        }
    }
    return out;
}

CodeParameters code_parameters(const Tessellation &t, int d_emb) {
    CodeParameters c;
    c.n = t.vertex_count;
    c.k = static_cast<std::size_t>(2 * t.genus);
    c.d_emb = d_emb;
    return c;
}

Tessellation extract_tessellation(const CosetTable &table, int p, int q) {
    if (table.generator_count() != 3) {
        throw MalformedTable("expected a three-generator rotation group table");
    }
    std::vector<std::size_t> vsz, esz, fsz;
    Tessellation t;
    t.p = p;
    t.q = q;
    t.flags = table;
    t.vertex_of_flag = orbits(table, 2, vsz);
    t.edge_of_flag = orbits(table, 1, esz);
    t.face_of_flag = orbits(table, 3, fsz);
    for (std::size_t s : esz) {
        if (s != 2) {
            throw MalformedTable("an <a> orbit has size " + std::to_string(s) + ", expected 2");
        }
    }
    for (std::size_t s : fsz) {
        if (p % static_cast<int>(s) != 0) {
            throw MalformedTable("a <c> orbit size " + std::to_string(s) + " does not divide p");
        }
    }
    for (std::size_t s : vsz) {
        if (q % static_cast<int>(s) != 0) {
            throw MalformedTable("a <b> orbit size " + std::to_string(s) + " does not divide q");
        }
    }
    t.vertex_count = vsz.size();

    t.edges.assign(esz.size(), {kNone, kNone});
    for (std::uint32_t c = 0; c < table.size(); ++c) {
        std::uint32_t e = t.edge_of_flag[c];
        if (t.edges[e][0] != kNone) {
            continue;
        }
        std::uint32_t a = t.vertex_of_flag[c];
        std::uint32_t b = t.vertex_of_flag[table.act(c, 1)];
        if (a == b) {
            throw MalformedTable("edge " + std::to_string(e) + " is a self-loop");
        }
        t.edges[e] = {a, b};
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto &e : t.edges) {
        auto key = std::minmax(e[0], e[1]);
        if (!seen.insert(key).second) {
            throw MalformedTable("multi-edge between vertices " + std::to_string(key.first) + " and " +
                                 std::to_string(key.second));
        }
    }

    t.faces.assign(fsz.size(), {});
    t.face_vertices.assign(fsz.size(), {});
    for (std::uint32_t c = 0; c < table.size(); ++c) {
        std::uint32_t f = t.face_of_flag[c];
        if (!t.faces[f].empty()) {
            continue;
        }
        std::uint32_t d = c;
        do {
            t.faces[f].push_back(t.edge_of_flag[d]);
            t.face_vertices[f].push_back(t.vertex_of_flag[d]);
            d = table.act(d, 3);
        } while (d != c);
    }

    long chi = t.euler_characteristic();
    if (chi % 2 != 0) {
        throw MalformedTable("odd Euler characteristic " + std::to_string(chi));
    }
    t.genus = static_cast<int>((2 - chi) / 2);
    return t;
}

std::vector<ParameterCheck> validate_parameters(const Tessellation &t) {
    std::vector<ParameterCheck> out;
    const long V = static_cast<long>(t.vertex_count);
    const long E = static_cast<long>(t.edges.size());
    const long F = static_cast<long>(t.faces.size());
    const long p = t.p;
    const long q = t.q;
    const long g = t.genus;
    auto add = [&](std::string name, bool pass, std::string detail) {
        out.push_back({std::move(name), pass, std::move(detail)});
    };
    add("hyperbolic", is_hyperbolic(t.p, t.q),
        "(p-2)(q-2) = " + std::to_string((p - 2) * (q - 2)) + " (needs > 4)");
    add("qV=2E", q * V == 2 * E, std::to_string(q * V) + " vs " + std::to_string(2 * E));
    add("pF=2E", p * F == 2 * E, std::to_string(p * F) + " vs " + std::to_string(2 * E));
    add("euler", V - E + F == 2 - 2 * g, "chi = " + std::to_string(V - E + F));
    const long denom = p * q - 2 * p - 2 * q;
    if (denom > 0) {
        const long num = 4 * q * (g - 1);
        add("F formula", num % denom == 0 && num / denom == F,
            "4q(g-1)/(pq-2p-2q) = " + std::to_string(num) + "/" + std::to_string(denom) + ", F = " +
                std::to_string(F));
        add("E formula", p * num == 2 * E * denom, "E = pF/2 = " + std::to_string(E));
        add("V formula", p * num == q * V * denom, "V = pF/q = " + std::to_string(V));
    } else {
        add("F formula", false, "closed-form face count needs pq - 2p - 2q > 0");
    }
    return out;
}

Tessellation color_faces(const Tessellation &t) {
    const std::size_t F = t.faces.size();
    if (F == 0) {
        throw NotThreeColorable("tessellation has no faces");
    }
    auto ef = t.edge_faces();
    std::vector<std::vector<std::uint32_t>> adj(F);
    for (const auto &pair : ef) {
        if (pair[0] == pair[1]) {
            throw NotThreeColorable("face " + std::to_string(pair[0]) + " is adjacent to itself");
        }
        adj[pair[0]].push_back(pair[1]);
        adj[pair[1]].push_back(pair[0]);
    }
    for (auto &a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }

    // Visit faces breadth-first from the lowest id so each new face has
    // colored neighbors and the search is almost always forced.
    std::vector<std::uint32_t> order;
    std::vector<char> queued(F, 0);
    for (std::uint32_t start = 0; start < F; ++start) {
        if (queued[start]) {
            continue;
        }
        queued[start] = 1;
        order.push_back(start);
        for (std::size_t i = order.size() - 1; i < order.size(); ++i) {
            for (std::uint32_t g : adj[order[i]]) {
                if (!queued[g]) {
                    queued[g] = 1;
                    order.push_back(g);
                }
            }
        }
    }

    std::vector<std::int8_t> color(F, -1);
    std::vector<std::int8_t> next_try(F, 0);
    std::size_t pos = 0;
    while (pos < F) {
        std::uint32_t f = order[pos];
        bool placed = false;
        for (std::int8_t c = next_try[f]; c < 3; ++c) {
            bool ok = true;
            for (std::uint32_t g : adj[f]) {
                if (color[g] == c) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                color[f] = c;
                next_try[f] = static_cast<std::int8_t>(c + 1);
                placed = true;
                break;
            }
        }
        if (placed) {
            ++pos;
            continue;
        }
        color[f] = -1;
        next_try[f] = 0;
        if (pos == 0) {
            throw NotThreeColorable("no proper 3-coloring of the faces exists");
        }
        --pos;
        color[order[pos]] = -1;
    }

    Tessellation out = t;
    out.face_color = std::move(color);
    out.edge_color.clear();
    return out;
}

Tessellation color_edges(const Tessellation &t) {
    if (!t.face_colored()) {
        throw std::invalid_argument("color_edges needs colored faces");
    }
    auto ef = t.edge_faces();
    Tessellation out = t;
    out.edge_color.resize(t.edges.size());
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        int a = t.face_color[ef[e][0]];
        int b = t.face_color[ef[e][1]];
        if (a == b) {
            throw NotThreeColorable("edge " + std::to_string(e) + " separates two faces of the same color");
        }
        out.edge_color[e] = static_cast<std::int8_t>(3 - a - b);
    }
    return out;
}

std::string check_structure(const Tessellation &t) {
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto &fe = t.faces[f];
        const auto &fv = t.face_vertices[f];
        if (fe.size() != fv.size() || fe.size() < 2) {
            return "face " + std::to_string(f) + " has inconsistent boundary lists";
        }
        for (std::size_t i = 0; i < fe.size(); ++i) {
            const auto &a = t.edges[fe[i]];
            const auto &b = t.edges[fe[(i + 1) % fe.size()]];
            std::uint32_t v = fv[i];
            bool in_a = a[0] == v || a[1] == v;
            bool in_b = b[0] == v || b[1] == v;
            if (!in_a || !in_b) {
                return "face " + std::to_string(f) + " boundary is not a closed walk";
            }
        }
    }
    try {
        t.edge_faces();
    } catch (const std::exception &ex) {
        return ex.what();
    }
    if (t.face_colored()) {
        for (const auto &pair : t.edge_faces()) {
            if (t.face_color[pair[0]] == t.face_color[pair[1]]) {
                return "adjacent faces share a color";
            }
        }
    }
    if (t.edge_colored()) {
        auto ve = t.vertex_edges();
        for (std::size_t v = 0; v < ve.size(); ++v) {
            if (ve[v].size() != 3) {
                continue;
            }
            int mask = 0;
            for (std::uint32_t e : ve[v]) {
                mask |= 1 << t.edge_color[e];
            }
            if (mask != 7) {
                return "vertex " + std::to_string(v) + " does not see three edge colors";
            }
        }
    }
    return {};
}

Tessellation build_tessellation(const RelatorFile &file, std::size_t max_cosets) {
    auto pres = triangle_rotation_presentation(file.p, file.q);
    CosetTable table = todd_coxeter(pres, file.subgroup, max_cosets);
    Tessellation t = extract_tessellation(table, file.p, file.q);
    return color_edges(color_faces(t));
}

namespace {

nlohmann::json to_json_value(const Tessellation &t) {
    nlohmann::json j;
    j["p"] = t.p;
    j["q"] = t.q;
    j["level"] = t.level;
    j["genus"] = t.genus;
    j["counts"] = {{"V", t.vertex_count}, {"E", t.edges.size()}, {"F", t.faces.size()}};
    j["edges"] = t.edges;
    j["faces"] = t.faces;
    j["face_vertices"] = t.face_vertices;
    if (t.face_colored()) {
        j["face_color"] = t.face_color;
    }
    if (t.edge_colored()) {
        j["edge_color"] = t.edge_color;
    }
    if (t.flags.size() > 0) {
        j["coset_table"] = {{"gens", t.flags.generator_count()}, {"entries", t.flags.entries()}};
    }
    if (t.base) {
        j["base"] = to_json_value(*t.base);
    }
    return j;
}

Tessellation from_json_value(const nlohmann::json &j) {
    Tessellation t;
    t.p = j.at("p").get<int>();
    t.q = j.at("q").get<int>();
    t.level = j.value("level", 1);
    t.genus = j.at("genus").get<int>();
    t.vertex_count = j.at("counts").at("V").get<std::size_t>();
    t.edges = j.at("edges").get<std::vector<std::array<std::uint32_t, 2>>>();
    t.faces = j.at("faces").get<std::vector<std::vector<std::uint32_t>>>();
    t.face_vertices = j.at("face_vertices").get<std::vector<std::vector<std::uint32_t>>>();
    if (j.contains("face_color")) {
        t.face_color = j["face_color"].get<std::vector<std::int8_t>>();
    }
    if (j.contains("edge_color")) {
        t.edge_color = j["edge_color"].get<std::vector<std::int8_t>>();
    }
    if (j.contains("coset_table")) {
        CosetTable table(j["coset_table"].at("gens").get<int>(),
                         j["coset_table"].at("entries").get<std::vector<std::uint32_t>>());
        Tessellation fresh = extract_tessellation(table, t.p, t.q);
        t.flags = fresh.flags;
        t.vertex_of_flag = std::move(fresh.vertex_of_flag);
        t.edge_of_flag = std::move(fresh.edge_of_flag);
        t.face_of_flag = std::move(fresh.face_of_flag);
    }
    if (j.contains("base")) {
        t.base = std::make_shared<Tessellation>(from_json_value(j["base"]));
    }
    for (const auto &e : t.edges) {
        if (e[0] >= t.vertex_count || e[1] >= t.vertex_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
    }
    if (t.faces.size() != t.face_vertices.size()) {
        throw std::invalid_argument("face lists disagree in length");
    }
    return t;
}

}  // namespace

std::string tessellation_to_json(const Tessellation &t) {
    return to_json_value(t).dump() + "\n";
}

Tessellation tessellation_from_json(const std::string &text) {
    return from_json_value(nlohmann::json::parse(text));
}

void save_tessellation(const Tessellation &t, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << tessellation_to_json(t);
}

Tessellation load_tessellation(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return tessellation_from_json(ss.str());
}

}  // namespace floquetforge
