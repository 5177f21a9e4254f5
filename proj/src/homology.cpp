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

#include "floquetforge/homology.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace floquetforge {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

std::vector<BitVec> node_rows(const RestrictedDual &k) {
    std::vector<BitVec> rows(k.node_count(), BitVec(k.edge_count()));
    for (std::size_t e = 0; e < k.edge_count(); ++e) {
        rows[k.edge_nodes[e][0]].flip(e);
        rows[k.edge_nodes[e][1]].flip(e);
    }
    return rows;
}

std::vector<BitVec> cell_rows(const RestrictedDual &k) {
    std::vector<BitVec> rows;
    for (const auto &cell : k.cells) {
        BitVec r(k.edge_count());
        for (std::uint32_t e : cell) {
            r.flip(e);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

// Breadth-first tree from one source with the cohomology class of each tree path.
struct BfsTree {
    std::vector<int> dist;
    std::vector<std::uint32_t> parent_edge;
    std::vector<std::uint64_t> parity;  // words per node
};

class CycleSearch {
   public:
    explicit CycleSearch(const RestrictedDual &k, const std::vector<BitVec> &cohomology)
        : k_(k), classes_(cohomology.size()), words_((cohomology.size() + 63) / 64) {
        adj_.resize(k.node_count());
        for (std::uint32_t e = 0; e < k.edge_count(); ++e) {
            adj_[k.edge_nodes[e][0]].push_back(e);
            if (k.edge_nodes[e][1] != k.edge_nodes[e][0]) {
                adj_[k.edge_nodes[e][1]].push_back(e);
            }
        }
        mask_.assign(k.edge_count() * words_, 0);
        for (std::size_t j = 0; j < cohomology.size(); ++j) {
            for (std::uint32_t e : cohomology[j].ones()) {
                mask_[e * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
            }
        }
    }

    std::size_t words() const { return words_; }
    std::size_t classes() const { return classes_; }

    // Runs BFS from s; calls visit(edge, length, class_words) for every
    // non-tree edge whose fundamental closed walk is nontrivial.
    template <typename Visit>
    void scan(std::uint32_t s, int bound, BfsTree &tree, Visit &&visit) const {
        const std::size_t n = k_.node_count();
        tree.dist.assign(n, -1);
        tree.parent_edge.assign(n, kNone);
        tree.parity.assign(n * words_, 0);
        std::vector<std::uint32_t> queue{s};
        tree.dist[s] = 0;
        for (std::size_t i = 0; i < queue.size(); ++i) {
            std::uint32_t u = queue[i];
            if (2 * tree.dist[u] + 1 > bound) {
                break;
            }
            for (std::uint32_t e : adj_[u]) {
                std::uint32_t v = other(e, u);
                if (tree.dist[v] < 0) {
                    tree.dist[v] = tree.dist[u] + 1;
                    tree.parent_edge[v] = e;
                    for (std::size_t w = 0; w < words_; ++w) {
                        tree.parity[v * words_ + w] = tree.parity[u * words_ + w] ^ mask_[e * words_ + w];
                    }
                    queue.push_back(v);
                }
            }
        }
        std::vector<std::uint64_t> cls(words_);
        for (std::uint32_t u : queue) {
            if (tree.dist[u] < 0) {
                continue;
            }
            for (std::uint32_t e : adj_[u]) {
                std::uint32_t v = other(e, u);
                if (tree.dist[v] < 0 || tree.parent_edge[v] == e || tree.parent_edge[u] == e) {
                    continue;
                }
                // Visit each non-tree edge once, from its lower endpoint.
                if (v < u) {
                    continue;
                }
                int len = tree.dist[u] + tree.dist[v] + 1;
                if (len > bound) {
                    continue;
                }
                bool any = false;
                for (std::size_t w = 0; w < words_; ++w) {
                    cls[w] = tree.parity[u * words_ + w] ^ tree.parity[v * words_ + w] ^ mask_[e * words_ + w];
                    any |= cls[w] != 0;
                }
                if (any) {
                    visit(e, len, cls);
                }
            }
        }
    }

    BitVec closed_walk(std::uint32_t s, std::uint32_t edge) const {
        BfsTree tree;
        scan(s, std::numeric_limits<int>::max(), tree, [](std::uint32_t, int, const std::vector<std::uint64_t> &) {});
        BitVec out(k_.edge_count());
        out.flip(edge);
        for (std::uint32_t end : {k_.edge_nodes[edge][0], k_.edge_nodes[edge][1]}) {
            std::uint32_t x = end;
            while (x != s) {
                std::uint32_t pe = tree.parent_edge[x];
                out.flip(pe);
                x = other(pe, x);
            }
        }
        return out;
    }

   private:
    std::uint32_t other(std::uint32_t e, std::uint32_t u) const {
        return k_.edge_nodes[e][0] == u ? k_.edge_nodes[e][1] : k_.edge_nodes[e][0];
    }

    const RestrictedDual &k_;
    std::size_t classes_;
    std::size_t words_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<std::uint64_t> mask_;
};

std::vector<std::uint32_t> to_primal(const RestrictedDual &k, const BitVec &edges) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t e : edges.ones()) {
        out.push_back(k.edge_primal[e]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

RestrictedDual restricted_dual(const Tessellation &t, int color, bool cocycle) {
    if (!t.face_colored() || !t.edge_colored()) {
        throw std::invalid_argument("restricted duals need a colored tessellation");
    }
    RestrictedDual k;
    k.color = color;
    k.cocycle = cocycle;
    std::vector<std::uint32_t> dual_of_edge(t.edges.size(), kNone);
    for (std::uint32_t e = 0; e < t.edges.size(); ++e) {
        if (t.edge_color[e] == color) {
            dual_of_edge[e] = static_cast<std::uint32_t>(k.edge_primal.size());
            k.edge_primal.push_back(e);
        }
    }
    std::vector<std::uint32_t> node_of_face(t.faces.size(), kNone);
    for (std::uint32_t f = 0; f < t.faces.size(); ++f) {
        if ((t.face_color[f] == color) == cocycle) {
            node_of_face[f] = static_cast<std::uint32_t>(k.node_face.size());
            k.node_face.push_back(f);
        }
    }
    if (!cocycle) {
        auto ef = t.edge_faces();
        for (std::uint32_t e : k.edge_primal) {
            k.edge_nodes.push_back({node_of_face[ef[e][0]], node_of_face[ef[e][1]]});
        }
        std::vector<std::uint32_t> colored_edge_at(t.vertex_count, kNone);
        for (std::uint32_t e : k.edge_primal) {
            colored_edge_at[t.edges[e][0]] = e;
            colored_edge_at[t.edges[e][1]] = e;
        }
        for (std::uint32_t f = 0; f < t.faces.size(); ++f) {
            if (t.face_color[f] != color) {
                continue;
            }
            std::vector<std::uint32_t> cell;
            for (std::uint32_t v : t.face_vertices[f]) {
                cell.push_back(dual_of_edge[colored_edge_at[v]]);
            }
            k.cells.push_back(std::move(cell));
        }
    } else {
        auto face_at = t.vertex_face_of_color(color);
        for (std::uint32_t e : k.edge_primal) {
            k.edge_nodes.push_back({node_of_face[face_at[t.edges[e][0]]], node_of_face[face_at[t.edges[e][1]]]});
        }
        for (std::uint32_t f = 0; f < t.faces.size(); ++f) {
            if (t.face_color[f] == color) {
                continue;
            }
            std::vector<std::uint32_t> cell;
            for (std::uint32_t e : t.faces[f]) {
                if (t.edge_color[e] == color) {
                    cell.push_back(dual_of_edge[e]);
                }
            }
            k.cells.push_back(std::move(cell));
        }
    }
    for (const auto &en : k.edge_nodes) {
        if (en[0] == kNone || en[1] == kNone) {
            throw std::logic_error("restricted dual edge lost an endpoint");
        }
    }
    return k;
}

std::vector<BitVec> homology_basis(const RestrictedDual &k) {
    auto cycles = nullspace(node_rows(k), k.edge_count());
    return quotient_basis(cycles, cell_rows(k), k.edge_count());
}

std::vector<BitVec> cohomology_basis(const RestrictedDual &k) {
    auto cocycles = nullspace(cell_rows(k), k.edge_count());
    return quotient_basis(cocycles, node_rows(k), k.edge_count());
}

bool is_cycle(const RestrictedDual &k, const BitVec &edges) {
    for (const auto &row : node_rows(k)) {
        if (row.dot(edges)) {
            return false;
        }
    }
    return true;
}

bool is_nontrivial(const BitVec &cycle, const std::vector<BitVec> &cohomology) {
    for (const auto &h : cohomology) {
        if (h.dot(cycle)) {
            return true;
        }
    }
    return false;
}

CycleWitness shortest_nontrivial_cycle(const RestrictedDual &k) {
    CycleWitness best;
    best.color = k.color;
    best.cocycle = k.cocycle;
    auto cohom = cohomology_basis(k);
    if (cohom.empty()) {
        return best;
    }
    CycleSearch search(k, cohom);
    int bound = std::numeric_limits<int>::max();
    std::uint32_t best_s = kNone;
    std::uint32_t best_e = kNone;
    BfsTree tree;
    for (std::uint32_t s = 0; s < k.node_count(); ++s) {
        search.scan(s, bound, tree, [&](std::uint32_t e, int len, const std::vector<std::uint64_t> &) {
            if (len < bound) {
                bound = len;
                best_s = s;
                best_e = e;
            }
        });
    }
    if (best_s == kNone) {
        throw std::logic_error("nontrivial homology but no nontrivial cycle found");
    }
    BitVec walk = search.closed_walk(best_s, best_e);
    best.length = bound;
    best.primal_edges = to_primal(k, walk);
    return best;
}

CycleWitness embedded_distance_witness(const Tessellation &t) {
    CycleWitness best;
    for (int c = 0; c < 3; ++c) {
        for (bool co : {false, true}) {
            CycleWitness w = shortest_nontrivial_cycle(restricted_dual(t, c, co));
            if (w.length > 0 && (best.length == 0 || w.length < best.length)) {
                best = w;
            }
        }
    }
    return best;
}

int embedded_distance(const Tessellation &t) {
    return embedded_distance_witness(t).length;
}

LogicalBasis logical_basis(const Tessellation &t, int color) {
    RestrictedDual k = restricted_dual(t, color, false);
    auto cohom = cohomology_basis(k);
    const std::size_t dim = cohom.size();
    if (dim != static_cast<std::size_t>(2 * t.genus)) {
        throw RankDeficient("first cohomology has dimension " + std::to_string(dim) + ", expected " +
                            std::to_string(2 * t.genus));
    }
    LogicalBasis out;
    out.color = color;
    if (dim == 0) {
        return out;
    }
    CycleSearch search(k, cohom);
    struct Candidate {
        int len;
        std::uint32_t s;
        std::uint32_t e;
        std::size_t offset;
    };
    std::vector<Candidate> cands;
    std::vector<std::uint64_t> classes;
    BfsTree tree;
    for (std::uint32_t s = 0; s < k.node_count(); ++s) {
        search.scan(s, std::numeric_limits<int>::max(), tree,
                    [&](std::uint32_t e, int len, const std::vector<std::uint64_t> &cls) {
                        cands.push_back({len, s, e, classes.size()});
                        classes.insert(classes.end(), cls.begin(), cls.end());
                    });
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) {
        return std::tie(a.len, a.s, a.e) < std::tie(b.len, b.s, b.e);
    });
    XorBasis span(dim);
    for (const auto &c : cands) {
        BitVec cls(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            if ((classes[c.offset + j / 64] >> (j % 64)) & 1) {
                cls.set(j);
            }
        }
        if (!span.insert(cls)) {
            continue;
        }
        BitVec walk = search.closed_walk(c.s, c.e);
        out.cycles.push_back(to_primal(k, walk));
        std::vector<std::uint8_t> row(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            row[j] = cohom[j].dot(walk) ? 1 : 0;
        }
        out.pairing.push_back(std::move(row));
        if (out.cycles.size() == dim) {
            break;
        }
    }
    if (out.cycles.size() != dim) {
        throw RankDeficient("found only " + std::to_string(out.cycles.size()) + " independent cycles of " +
                            std::to_string(dim));
    }
    return out;
}

}  // namespace floquetforge
