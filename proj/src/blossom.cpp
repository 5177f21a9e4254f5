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

#include "floquetforge/blossom.hpp"

#include <algorithm>
#include <stdexcept>

namespace floquetforge {

namespace {

// Vertices are 0..n-1, blossoms n..2n-1. Edge k has endpoints 2k (u) and 2k+1 (v);
// endpoint p belongs to vertex endpoint[p] and p ^ 1 is the opposite end.
class Matcher {
   public:
    Matcher(int n, const std::vector<WeightedEdge> &edges, bool max_card)
        : n_(n), edges_(edges), max_card_(max_card) {}

    std::vector<int> solve();

   private:
    std::int64_t slack(int k) const {
        const auto &e = edges_[k];
        return dual_[e.u] + dual_[e.v] - 2 * e.weight;
    }

    template <typename Fn>
    void leaves(int b, Fn &&fn) const {
        if (b < n_) {
            fn(b);
            return;
        }
        for (int t : childs_[b]) {
            leaves(t, fn);
        }
    }

    static int wrap(int j, int len) { return ((j % len) + len) % len; }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int n_;
    const std::vector<WeightedEdge> &edges_;
    bool max_card_;

    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, parent_, base_, bestedge_, unused_;
    std::vector<std::vector<int>> childs_, endps_, bestedges_;
    std::vector<char> has_bestedges_;
    std::vector<std::int64_t> dual_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;
};

void Matcher::assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        leaves(b, [&](int v) { queue_.push_back(v); });
    } else if (t == 2) {
        int base = base_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

int Matcher::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = base_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (int b : path) {
        label_[b] = 1;
    }
    return base;
}

void Matcher::add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unused_.back();
    unused_.pop_back();
    base_[b] = base;
    parent_[b] = -1;
    parent_[bb] = b;
    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
        parent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        parent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    childs_[b] = path;
    endps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    leaves(b, [&](int x) {
        if (label_[inblossom_[x]] == 2) {
            queue_.push_back(x);
        }
        inblossom_[x] = b;
    });
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int sub : path) {
        std::vector<std::vector<int>> nblists;
        if (!has_bestedges_[sub]) {
            leaves(sub, [&](int x) {
                std::vector<int> l;
                for (int p : neighbend_[x]) {
                    l.push_back(p / 2);
                }
                nblists.push_back(std::move(l));
            });
        } else {
            nblists.push_back(bestedges_[sub]);
        }
        for (const auto &nblist : nblists) {
            for (int kk : nblist) {
                int i = edges_[kk].u;
                int j = edges_[kk].v;
                if (inblossom_[j] == b) {
                    std::swap(i, j);
                }
                int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            }
        }
        bestedges_[sub].clear();
        has_bestedges_[sub] = 0;
        bestedge_[sub] = -1;
    }
    bestedges_[b].clear();
    for (int kk : bestedgeto) {
        if (kk != -1) {
            bestedges_[b].push_back(kk);
        }
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int kk : bestedges_[b]) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
            bestedge_[b] = kk;
        }
    }
}

void Matcher::expand_blossom(int b, bool endstage) {
    for (int s : std::vector<int>(childs_[b])) {
        parent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dual_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            leaves(s, [&](int v) { inblossom_[v] = s; });
        }
    }
    if (!endstage && label_[b] == 2) {
        const auto &ch = childs_[b];
        const auto &ep = endps_[b];
        const int len = static_cast<int>(ch.size());
        int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[ep[wrap(j - endptrick, len)] / 2] = 1;
            j += jstep;
            p = ep[wrap(j - endptrick, len)] ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int bv = ch[wrap(j, len)];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (ch[wrap(j, len)] != entrychild) {
            bv = ch[wrap(j, len)];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int found = -1;
            leaves(bv, [&](int v) {
                if (found == -1 && label_[v] != 0) {
                    found = v;
                }
            });
            if (found != -1) {
                label_[found] = 0;
                label_[endpoint_[mate_[base_[bv]]]] = 0;
                assign_label(found, 2, labelend_[found]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    base_[b] = -1;
    bestedges_[b].clear();
    has_bestedges_[b] = 0;
    bestedge_[b] = -1;
    unused_.push_back(b);
}

void Matcher::augment_blossom(int b, int v) {
    int t = v;
    while (parent_[t] != b) {
        t = parent_[t];
    }
    if (t >= n_) {
        augment_blossom(t, v);
    }
    auto &ch = childs_[b];
    auto &ep = endps_[b];
    const int len = static_cast<int>(ch.size());
    int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = ch[wrap(j, len)];
        int p = ep[wrap(j - endptrick, len)] ^ endptrick;
        if (t >= n_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = ch[wrap(j, len)];
        if (t >= n_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    base_[b] = base_[ch[0]];
}

void Matcher::augment_matching(int k) {
    const int ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
    for (const auto &e : ends) {
        int s = e[0];
        int p = e[1];
        while (true) {
            int bs = inblossom_[s];
            if (bs >= n_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            int t = endpoint_[labelend_[bs]];
            int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> Matcher::solve() {
    const int n = n_;
    const int m = static_cast<int>(edges_.size());
    if (n == 0) {
        return {};
    }
    std::int64_t maxweight = 0;
    for (const auto &e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v) {
            throw std::invalid_argument("bad matching edge");
        }
        if (e.weight % 2 != 0) {
            throw std::invalid_argument("matching weights must be even");
        }
        maxweight = std::max(maxweight, e.weight);
    }
    endpoint_.resize(2 * m);
    neighbend_.assign(n, {});
    for (int k = 0; k < m; ++k) {
        endpoint_[2 * k] = edges_[k].u;
        endpoint_[2 * k + 1] = edges_[k].v;
        neighbend_[edges_[k].u].push_back(2 * k + 1);
        neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(n, -1);
    label_.assign(2 * n, 0);
    labelend_.assign(2 * n, -1);
    inblossom_.resize(n);
    for (int i = 0; i < n; ++i) {
        inblossom_[i] = i;
    }
    parent_.assign(2 * n, -1);
    childs_.assign(2 * n, {});
    endps_.assign(2 * n, {});
    base_.assign(2 * n, -1);
    for (int i = 0; i < n; ++i) {
        base_[i] = i;
    }
    bestedge_.assign(2 * n, -1);
    bestedges_.assign(2 * n, {});
    has_bestedges_.assign(2 * n, 0);
    unused_.clear();
    for (int i = n; i < 2 * n; ++i) {
        unused_.push_back(i);
    }
    dual_.assign(2 * n, 0);
    for (int i = 0; i < n; ++i) {
        dual_[i] = maxweight;
    }
    allowedge_.assign(m, 0);

    for (int stage = 0; stage < n; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n; b < 2 * n; ++b) {
            bestedges_[b].clear();
            has_bestedges_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();
        for (int v = 0; v < n; ++v) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    int k = p / 2;
                    int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    std::int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allowedge_[k] = 1;
                        }
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }
            int deltatype = -1;
            std::int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!max_card_) {
                deltatype = 1;
                delta = *std::min_element(dual_.begin(), dual_.begin() + n);
            }
            for (int v = 0; v < n; ++v) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    std::int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n; ++b) {
                if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    std::int64_t d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n; b < 2 * n; ++b) {
                if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
                    delta = dual_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<std::int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n));
            }
            for (int v = 0; v < n; ++v) {
                if (label_[inblossom_[v]] == 1) {
                    dual_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dual_[v] += delta;
                }
            }
            for (int b = n; b < 2 * n; ++b) {
                if (base_[b] >= 0 && parent_[b] == -1) {
                    if (label_[b] == 1) {
                        dual_[b] += delta;
                    } else if (label_[b] == 2) {
                        dual_[b] -= delta;
                    }
                }
            }
            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = edges_[deltaedge].u;
                int j = edges_[deltaedge].v;
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(edges_[deltaedge].u);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (int b = n; b < 2 * n; ++b) {
            if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    std::vector<int> out(n, -1);
    for (int v = 0; v < n; ++v) {
        if (mate_[v] >= 0) {
            out[v] = endpoint_[mate_[v]];
        }
    }
    return out;
}

}  // namespace

std::vector<int> max_weight_matching(int vertex_count, const std::vector<WeightedEdge> &edges,
                                     bool max_cardinality) {
    return Matcher(vertex_count, edges, max_cardinality).solve();
}

}  // namespace floquetforge
