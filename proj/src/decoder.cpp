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

#include "floquetforge/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <thread>

#include "floquetforge/blossom.hpp"

namespace floquetforge {

double edge_weight(double p, WeightMode mode) {
    p = std::clamp(p, 1e-300, 0.5);
    if (mode == WeightMode::Uniform) {
        return p >= 0.5 ? 0.0 : 1.0;
    }
    return std::log((1.0 - p) / p);
}

namespace {

ObsMask make_mask(const std::vector<std::uint32_t> &obs) {
    ObsMask m{};
    for (auto o : obs) {
        m[o >> 6] ^= std::uint64_t{1} << (o & 63);
    }
    return m;
}

std::string describe(const ErrorMechanism &m) {
    std::ostringstream s;
    s << "error(" << m.probability << ")";
    for (auto d : m.detectors) {
        s << " D" << d;
    }
    for (auto o : m.observables) {
        s << " L" << o;
    }
    return s.str();
}

}  // namespace

MatchingGraph dem_to_matching_graph(const DetectorErrorModel &dem, WeightMode mode,
                                    const DetectorErrorModel *skeleton) {
    if (dem.observable_count > 256) {
        throw std::invalid_argument("at most 256 observables are supported");
    }
    MatchingGraph g;
    g.detector_count = dem.detector_count;
    g.observable_count = dem.observable_count;
    const std::uint32_t B = dem.detector_count;

    // Candidate edges keyed by (a, b, observables); probabilities merge.
    std::map<std::tuple<std::uint32_t, std::uint32_t, ObsMask>, std::uint32_t> index;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> by_pair;
    std::vector<MatchingEdge> cand;
    auto get_or_add = [&](std::uint32_t a, std::uint32_t b, const ObsMask &obs) {
        if (a > b) {
            std::swap(a, b);
        }
        auto key = std::make_tuple(a, b, obs);
        auto it = index.find(key);
        if (it != index.end()) {
            return it->second;
        }
        auto id = static_cast<std::uint32_t>(cand.size());
        MatchingEdge e;
        e.a = a;
        e.b = b;
        e.obs = obs;
        cand.push_back(e);
        index.emplace(key, id);
        by_pair[{a, b}].push_back(id);
        return id;
    };
    auto add_prob = [&](std::uint32_t id, double p) { cand[id].probability = combine_probability(cand[id].probability, p); };

    std::vector<std::vector<std::uint32_t>> mech_cand(dem.mechanisms.size());
    for (std::size_t i = 0; i < dem.mechanisms.size(); ++i) {
        const auto &m = dem.mechanisms[i];
        if (m.detectors.size() == 1 || m.detectors.size() == 2) {
            std::uint32_t a = m.detectors[0];
            std::uint32_t b = m.detectors.size() == 2 ? m.detectors[1] : B;
            auto id = get_or_add(a, b, make_mask(m.observables));
            add_prob(id, m.probability);
            mech_cand[i] = {id};
        }
    }
    // Hyperedges: pair up their detectors (or send one to the boundary) so that each
    // pair is joined by a walk of at most `depth` graphlike edges; the walk fixes the
    // observables of the new component edge. Shallower covers are preferred.
    std::vector<std::vector<std::pair<std::uint32_t, ObsMask>>> adj(B + 1);
    for (const auto &e : cand) {
        adj[e.a].push_back({e.b, e.obs});
        adj[e.b].push_back({e.a, e.obs});
    }
    if (skeleton != nullptr) {
        if (skeleton->detector_count != dem.detector_count) {
            throw std::invalid_argument("skeleton DEM has a different detector count");
        }
        for (const auto &m : skeleton->mechanisms) {
            if (m.detectors.size() == 1 || m.detectors.size() == 2) {
                std::uint32_t a = m.detectors[0];
                std::uint32_t b = m.detectors.size() == 2 ? m.detectors[1] : B;
                adj[a].push_back({b, make_mask(m.observables)});
                adj[b].push_back({a, make_mask(m.observables)});
            }
        }
        for (auto &nb : adj) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
    }
    std::map<std::tuple<std::uint32_t, std::uint32_t, int>, std::vector<ObsMask>> walk_cache;
    auto walks = [&](std::uint32_t a, std::uint32_t b, int depth) -> const std::vector<ObsMask> & {
        auto key = std::make_tuple(a, b, depth);
        auto it = walk_cache.find(key);
        if (it != walk_cache.end()) {
            return it->second;
        }
        std::vector<ObsMask> found;
        std::function<void(std::uint32_t, int, ObsMask)> dfs = [&](std::uint32_t v, int left, ObsMask acc) {
            if (v == b) {
                if (std::find(found.begin(), found.end(), acc) == found.end()) {
                    found.push_back(acc);
                }
                return;
            }
            if (left == 0 || v == B) {
                return;
            }
            for (const auto &[w, o] : adj[v]) {
                ObsMask next = acc;
                obs_xor(next, o);
                dfs(w, left - 1, next);
            }
        };
        dfs(a, depth, ObsMask{});
        return walk_cache.emplace(key, std::move(found)).first->second;
    };
    for (std::size_t i = 0; i < dem.mechanisms.size(); ++i) {
        const auto &m = dem.mechanisms[i];
        if (m.detectors.size() <= 2) {
            continue;
        }
        const ObsMask target = make_mask(m.observables);
        std::vector<std::tuple<std::uint32_t, std::uint32_t, ObsMask>> chosen;
        std::vector<std::uint32_t> rest;
        std::function<bool(ObsMask, int)> cover = [&](ObsMask acc, int depth) -> bool {
            if (rest.empty()) {
                return acc == target;
            }
            std::uint32_t d = rest.front();
            std::vector<std::uint32_t> partners(rest.begin() + 1, rest.end());
            partners.push_back(B);
            for (auto e : partners) {
                const auto &options = walks(d, e, depth);
                if (options.empty()) {
                    continue;
                }
                std::vector<std::uint32_t> saved = rest;
                rest.erase(rest.begin());
                if (e != B) {
                    rest.erase(std::find(rest.begin(), rest.end(), e));
                }
                for (const auto &o : options) {
                    ObsMask next = acc;
                    obs_xor(next, o);
                    chosen.push_back({d, e, o});
                    if (cover(next, depth)) {
                        return true;
                    }
                    chosen.pop_back();
                }
                rest = saved;
            }
            return false;
        };
        bool ok = false;
        for (int depth = 1; depth <= 3 && !ok; ++depth) {
            rest.assign(m.detectors.begin(), m.detectors.end());
            chosen.clear();
            ok = cover(ObsMask{}, depth);
        }
        if (!ok) {
            throw UndecomposableHyperedge("cannot decompose " + describe(m));
        }
        for (const auto &[a, b, o] : chosen) {
            auto id = get_or_add(a, b, o);
            add_prob(id, m.probability);
            mech_cand[i].push_back(id);
        }
    }

    for (auto &e : cand) {
        e.weight = edge_weight(e.probability, mode);
        e.iweight = std::llround(e.weight * kWeightScale);
    }
    // Parallel edges with different observables: keep the lighter one.
    std::vector<std::uint32_t> final_of(cand.size());
    for (const auto &[pair, ids] : by_pair) {
        std::uint32_t best = ids[0];
        for (auto id : ids) {
            if (cand[id].iweight < cand[best].iweight) {
                best = id;
            }
        }
        auto fid = static_cast<std::uint32_t>(g.edges.size());
        g.edges.push_back(cand[best]);
        if (pair.second == B) {
            g.has_boundary = true;
        }
        for (auto id : ids) {
            final_of[id] = fid;
        }
    }
    g.mechanism_edges.resize(dem.mechanisms.size());
    for (std::size_t i = 0; i < mech_cand.size(); ++i) {
        for (auto id : mech_cand[i]) {
            g.mechanism_edges[i].push_back(final_of[id]);
        }
    }
    return g;
}

MatchingDecoder::MatchingDecoder(const MatchingGraph &g, int neighbours) : g_(g), k_(neighbours) {
    const std::uint32_t N = g_.has_boundary ? g_.detector_count + 1 : g_.detector_count;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> zero(N);
    for (std::uint32_t i = 0; i < g_.edges.size(); ++i) {
        const auto &e = g_.edges[i];
        if (e.b >= N) {
            continue;
        }
        if (e.iweight == 0) {
            zero[e.a].push_back({e.b, i});
            zero[e.b].push_back({e.a, i});
        }
    }
    comp_.assign(N, kBoundaryPartner);
    pot_.assign(N, ObsMask{});
    for (std::uint32_t s = 0; s < N; ++s) {
        if (comp_[s] != kBoundaryPartner) {
            continue;
        }
        std::queue<std::uint32_t> q;
        comp_[s] = super_count_;
        q.push(s);
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            for (auto [w, ei] : zero[v]) {
                if (comp_[w] == kBoundaryPartner) {
                    comp_[w] = super_count_;
                    pot_[w] = pot_[v];
                    obs_xor(pot_[w], g_.edges[ei].obs);
                    q.push(w);
                }
            }
        }
        ++super_count_;
    }
    if (g_.has_boundary) {
        boundary_super_ = comp_[g_.boundary()];
    }
    adj_.assign(super_count_, {});
    for (const auto &e : g_.edges) {
        if (e.iweight == 0) {
            continue;
        }
        std::uint32_t cu = comp_[e.a];
        std::uint32_t cv = comp_[e.b];
        if (cu == cv) {
            continue;
        }
        ObsMask o = e.obs;
        obs_xor(o, pot_[e.a]);
        obs_xor(o, pot_[e.b]);
        adj_[cu].push_back({cv, e.iweight, o});
        adj_[cv].push_back({cu, e.iweight, o});
    }
    for (auto &arcs : adj_) {
        std::stable_sort(arcs.begin(), arcs.end(),
                         [](const Arc &x, const Arc &y) { return std::tie(x.to, x.w) < std::tie(y.to, y.w); });
        arcs.erase(std::unique(arcs.begin(), arcs.end(), [](const Arc &x, const Arc &y) { return x.to == y.to; }),
                   arcs.end());
    }
    dist_.assign(super_count_, -1);
    parent_node_.assign(super_count_, 0);
    parent_arc_.assign(super_count_, nullptr);
    terminal_of_super_.assign(super_count_, -1);
    if (boundary_super_ >= 0) {
        // One search from the boundary gives every supernode's boundary leg.
        using Item = std::pair<std::int64_t, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        bdist_.assign(super_count_, -1);
        bobs_.assign(super_count_, ObsMask{});
        auto b = static_cast<std::uint32_t>(boundary_super_);
        bdist_[b] = 0;
        pq.push({0, b});
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > bdist_[v]) {
                continue;
            }
            for (const auto &a : adj_[v]) {
                std::int64_t nd = d + a.w;
                if (bdist_[a.to] < 0 || nd < bdist_[a.to]) {
                    bdist_[a.to] = nd;
                    bobs_[a.to] = bobs_[v];
                    obs_xor(bobs_[a.to], a.obs);
                    pq.push({nd, a.to});
                }
            }
        }
    }
}

void MatchingDecoder::search(std::uint32_t source, std::size_t limit, std::vector<Hit> &hits) {
    hits.clear();
    auto &pq = heap_;
    pq.clear();
    const auto cmp = std::greater<>();
    dist_[source] = 0;
    parent_arc_[source] = nullptr;
    touched_.push_back(source);
    pq.push_back({0, source});
    // A pair farther apart than both boundary legs combined is never used.
    const std::int64_t cutoff = max_bdist_ < 0 || bdist_[source] < 0 ? -1 : bdist_[source] + max_bdist_;
    while (!pq.empty()) {
        std::pop_heap(pq.begin(), pq.end(), cmp);
        auto [d, v] = pq.back();
        pq.pop_back();
        if (d > dist_[v]) {
            continue;
        }
        if (cutoff >= 0 && d > cutoff) {
            break;
        }
        if (v != source && terminal_of_super_[v] >= 0) {
            Hit h{static_cast<std::uint32_t>(terminal_of_super_[v]), d, ObsMask{}};
            for (std::uint32_t u = v; parent_arc_[u] != nullptr; u = parent_node_[u]) {
                obs_xor(h.obs, parent_arc_[u]->obs);
            }
            hits.push_back(h);
            if (hits.size() >= limit) {
                break;
            }
        }
        for (const auto &a : adj_[v]) {
            std::int64_t nd = d + a.w;
            if (dist_[a.to] < 0 || nd < dist_[a.to]) {
                if (dist_[a.to] < 0) {
                    touched_.push_back(a.to);
                }
                dist_[a.to] = nd;
                parent_node_[a.to] = v;
                parent_arc_[a.to] = &a;
                pq.push_back({nd, a.to});
                std::push_heap(pq.begin(), pq.end(), cmp);
            }
        }
    }
    for (auto v : touched_) {
        dist_[v] = -1;
    }
    touched_.clear();
}

SyndromeDecodeResult MatchingDecoder::decode(const std::vector<std::uint32_t> &defects) {
    SyndromeDecodeResult res;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> by_super;
    for (auto d : defects) {
        if (d >= g_.detector_count) {
            throw std::out_of_range("defect id out of range");
        }
        by_super.push_back({comp_[d], d});
        obs_xor(res.observable_flips, pot_[d]);
    }
    std::sort(by_super.begin(), by_super.end());
    std::vector<std::uint32_t> terminals;  // leftover defect per odd supernode
    for (std::size_t i = 0; i < by_super.size();) {
        std::size_t j = i;
        while (j < by_super.size() && by_super[j].first == by_super[i].first) {
            ++j;
        }
        std::size_t k = i;
        for (; k + 1 < j; k += 2) {
            res.pairs.push_back({by_super[k].second, by_super[k + 1].second});
        }
        if (k < j) {
            if (static_cast<std::int64_t>(by_super[k].first) == boundary_super_) {
                res.pairs.push_back({by_super[k].second, kBoundaryPartner});
                obs_xor(res.observable_flips, pot_[g_.boundary()]);
            } else {
                terminals.push_back(by_super[k].second);
            }
        }
        i = j;
    }
    if (terminals.empty()) {
        return res;
    }
    if (boundary_super_ < 0 && terminals.size() % 2) {
        throw OddDefectCount("odd number of defects on a graph without boundary");
    }
    SyndromeDecodeResult ext = match(terminals, false);
    if (ext.icost < 0) {
        ext = match(terminals, true);
        if (ext.icost < 0) {
            throw OddDefectCount("defects admit no perfect matching");
        }
    }
    obs_xor(res.observable_flips, ext.observable_flips);
    res.icost = ext.icost;
    res.cost = static_cast<double>(ext.icost) / kWeightScale;
    res.pairs.insert(res.pairs.end(), ext.pairs.begin(), ext.pairs.end());
    return res;
}

SyndromeDecodeResult MatchingDecoder::match(const std::vector<std::uint32_t> &terminals, bool complete) {
    const int m = static_cast<int>(terminals.size());
    const bool bnd = boundary_super_ >= 0;
    for (int i = 0; i < m; ++i) {
        terminal_of_super_[comp_[terminals[i]]] = i;
    }
    const std::size_t limit = complete ? static_cast<std::size_t>(m) : static_cast<std::size_t>(k_);
    std::map<std::pair<int, int>, std::pair<std::int64_t, ObsMask>> pair_dist;
    std::vector<std::int64_t> bdist(m, -1);
    std::vector<ObsMask> bobs(m);
    max_bdist_ = -1;
    if (bnd) {
        for (int i = 0; i < m; ++i) {
            bdist[i] = bdist_[comp_[terminals[i]]];
            bobs[i] = bobs_[comp_[terminals[i]]];
            max_bdist_ = std::max(max_bdist_, bdist[i]);
        }
        bool all_reach = std::all_of(bdist.begin(), bdist.end(), [](std::int64_t x) { return x >= 0; });
        if (complete || !all_reach) {
            max_bdist_ = -1;
        }
    }
    std::vector<Hit> hits;
    for (int i = 0; i < m; ++i) {
        search(comp_[terminals[i]], limit, hits);
        for (const auto &h : hits) {
            int a = std::min<int>(i, h.terminal);
            int b = std::max<int>(i, h.terminal);
            auto it = pair_dist.find({a, b});
            if (it == pair_dist.end() || h.dist < it->second.first) {
                pair_dist[{a, b}] = {h.dist, h.obs};
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        terminal_of_super_[comp_[terminals[i]]] = -1;
    }

    std::int64_t maxw = 0;
    for (const auto &[k, v] : pair_dist) {
        maxw = std::max(maxw, v.first);
    }
    for (int i = 0; i < m; ++i) {
        maxw = std::max(maxw, bdist[i]);
    }
    const std::int64_t C = maxw + 1;
    std::vector<WeightedEdge> edges;
    for (const auto &[k, v] : pair_dist) {
        edges.push_back({k.first, k.second, 2 * (C - v.first)});
        if (bnd) {
            edges.push_back({m + k.first, m + k.second, 2 * C});
        }
    }
    if (bnd) {
        for (int i = 0; i < m; ++i) {
            if (bdist[i] >= 0) {
                edges.push_back({i, m + i, 2 * (C - bdist[i])});
            }
        }
        if (complete) {
            for (int i = 0; i < m; ++i) {
                for (int j = i + 1; j < m; ++j) {
                    if (!pair_dist.count({i, j})) {
                        edges.push_back({m + i, m + j, 2 * C});
                    }
                }
            }
        }
    }
    const int nv = bnd ? 2 * m : m;
    std::vector<int> mate = max_weight_matching(nv, edges, true);
    SyndromeDecodeResult res;
    for (int v = 0; v < nv; ++v) {
        if (mate[v] < 0) {
            res.icost = -1;
            return res;
        }
    }
    for (int i = 0; i < m; ++i) {
        int j = mate[i];
        if (j < m) {
            if (i < j) {
                const auto &pd = pair_dist.at({i, j});
                res.icost += pd.first;
                obs_xor(res.observable_flips, pd.second);
                res.pairs.push_back({terminals[i], terminals[j]});
            }
        } else {
            res.icost += bdist[i];
            obs_xor(res.observable_flips, bobs[i]);
            obs_xor(res.observable_flips, pot_[g_.boundary()]);
            res.pairs.push_back({terminals[i], kBoundaryPartner});
        }
    }
    return res;
}

SyndromeDecodeResult mwpm_decode(const MatchingGraph &g, const std::vector<std::uint32_t> &defects) {
    MatchingDecoder dec(g);
    return dec.decode(defects);
}

std::int64_t brute_force_matching_cost(const MatchingGraph &g, const std::vector<std::uint32_t> &defects) {
    const std::uint32_t N = g.node_count();
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> adj(N);
    for (const auto &e : g.edges) {
        adj[e.a].push_back({e.b, e.iweight});
        adj[e.b].push_back({e.a, e.iweight});
    }
    auto dijkstra = [&](std::uint32_t s) {
        std::vector<std::int64_t> d(N, -1);
        using Item = std::pair<std::int64_t, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d[s] = 0;
        pq.push({0, s});
        while (!pq.empty()) {
            auto [dv, v] = pq.top();
            pq.pop();
            if (dv > d[v]) {
                continue;
            }
            for (auto [w, wt] : adj[v]) {
                if (d[w] < 0 || dv + wt < d[w]) {
                    d[w] = dv + wt;
                    pq.push({d[w], w});
                }
            }
        }
        return d;
    };
    const std::size_t m = defects.size();
    std::vector<std::vector<std::int64_t>> dist(m);
    for (std::size_t i = 0; i < m; ++i) {
        dist[i] = dijkstra(defects[i]);
    }
    std::vector<char> used(m, 0);
    std::int64_t best = -1;
    std::function<void(std::int64_t)> rec = [&](std::int64_t acc) {
        if (best >= 0 && acc >= best) {
            return;
        }
        std::size_t i = 0;
        while (i < m && used[i]) {
            ++i;
        }
        if (i == m) {
            best = acc;
            return;
        }
        used[i] = 1;
        if (g.has_boundary && dist[i][g.boundary()] >= 0) {
            rec(acc + dist[i][g.boundary()]);
        }
        for (std::size_t j = i + 1; j < m; ++j) {
            if (!used[j] && dist[i][defects[j]] >= 0) {
                used[j] = 1;
                rec(acc + dist[i][defects[j]]);
                used[j] = 0;
            }
        }
        used[i] = 0;
    };
    rec(0);
    return best;
}

BitMatrix decode_shots(const MatchingGraph &g, const BitMatrix &detectors, int threads) {
    BitMatrix out(detectors.rows(), g.observable_count);
    const std::size_t rows = detectors.rows();
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(rows, 1))));
    auto work = [&](std::size_t begin, std::size_t end) {
        MatchingDecoder dec(g);
        for (std::size_t s = begin; s < end; ++s) {
            auto r = dec.decode(detectors.row_ones(s));
            for (std::uint32_t o = 0; o < g.observable_count; ++o) {
                if (obs_get(r.observable_flips, o)) {
                    out.set(s, o);
                }
            }
        }
    };
    if (threads == 1) {
        work(0, rows);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::size_t b = t * chunk;
        std::size_t e = std::min(rows, b + chunk);
        if (b < e) {
            pool.emplace_back(work, b, e);
        }
    }
    for (auto &th : pool) {
        th.join();
    }
    return out;
}

}  // namespace floquetforge
