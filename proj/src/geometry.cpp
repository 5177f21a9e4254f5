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

#include "floquetforge/geometry.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "floquetforge/finegrain.hpp"

namespace floquetforge {

namespace {

constexpr double kGuard = 1e-9;

void check_in_disk(DiskPoint p) {
    if (!(std::abs(p.z) < 1.0)) {
        throw DomainError("point outside the open unit disk");
    }
}

Complex to_klein(Complex z) {
    return 2.0 * z / (1.0 + std::norm(z));
}

Complex from_klein(Complex k) {
    double r2 = std::norm(k);
    return k / (1.0 + std::sqrt(std::max(0.0, 1.0 - r2)));
}

bool near(Complex a, Complex b, double tol) {
    return std::abs(a - b) < tol;
}

}  // namespace

MobiusMap MobiusMap::to_origin(DiskPoint z1) {
    check_in_disk(z1);
    return MobiusMap(1.0, -z1.z, -std::conj(z1.z), 1.0);
}

MobiusMap MobiusMap::rotation(DiskPoint center, double angle) {
    MobiusMap phi = to_origin(center);
    MobiusMap spin(std::polar(1.0, angle), 0.0, 0.0, 1.0);
    return phi.inverse() * spin * phi;
}

MobiusMap MobiusMap::inverse() const {
    return MobiusMap(d_, -b_, -c_, a_);
}

MobiusMap MobiusMap::operator*(const MobiusMap &g) const {
    MobiusMap r(a_ * g.a_ + b_ * g.c_, a_ * g.b_ + b_ * g.d_, c_ * g.a_ + d_ * g.c_, c_ * g.b_ + d_ * g.d_);
    // Keep the determinant near one so long products stay well scaled.
    Complex det = r.a_ * r.d_ - r.b_ * r.c_;
    Complex s = std::sqrt(det);
    if (std::abs(s) > 0) {
        r.a_ /= s;
        r.b_ /= s;
        r.c_ /= s;
        r.d_ /= s;
    }
    return r;
}

double hyperbolic_distance(DiskPoint z1, DiskPoint z2) {
    check_in_disk(z1);
    check_in_disk(z2);
    double r = std::abs(z1.z - z2.z) / std::abs(1.0 - std::conj(z1.z) * z2.z);
    return 2.0 * std::atanh(std::min(r, 1.0 - 1e-16));
}

DiskPoint geodesic_midpoint(DiskPoint z1, DiskPoint z2) {
    check_in_disk(z1);
    check_in_disk(z2);
    MobiusMap phi = MobiusMap::to_origin(z1);
    Complex w = phi.apply(z2.z);
    double r = std::abs(w);
    if (r == 0.0) {
        return z1;
    }
    double half = r / (1.0 + std::sqrt(1.0 - r * r));
    return {phi.inverse().apply(w / r * half)};
}

DiskPoint barycentric_point(const std::vector<DiskPoint> &corners, const std::vector<double> &weights) {
    if (corners.size() != weights.size() || corners.empty()) {
        throw std::invalid_argument("barycentric_point needs one weight per corner");
    }
    Complex k = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        check_in_disk(corners[i]);
        k += weights[i] * to_klein(corners[i].z);
        total += weights[i];
    }
    return {from_klein(k / total)};
}

double triangle_angle(DiskPoint at, DiskPoint b, DiskPoint c) {
    MobiusMap phi = MobiusMap::to_origin(at);
    Complex u = phi.apply(b.z);
    Complex v = phi.apply(c.z);
    double ang = std::abs(std::arg(v / u));
    return ang;
}

FundamentalTriangle fundamental_triangle(int p, int q) {
    if (!is_hyperbolic(p, q)) {
        throw DomainError("fundamental triangle needs a hyperbolic {p,q}");
    }
    const double pi = std::numbers::pi;
    double hyp = std::acosh(1.0 / (std::tan(pi / p) * std::tan(pi / q)));
    double leg = std::acosh(std::cos(pi / q) / std::sin(pi / p));
    FundamentalTriangle f;
    f.face_center = {0.0};
    f.vertex = {std::tanh(hyp / 2.0)};
    f.edge_midpoint = {std::polar(std::tanh(leg / 2.0), pi / p)};
    f.rot_a = MobiusMap::rotation(f.edge_midpoint, pi);
    for (int sb : {1, -1}) {
        for (int sc : {1, -1}) {
            MobiusMap b = MobiusMap::rotation(f.vertex, sb * 2.0 * pi / q);
            MobiusMap c = MobiusMap::rotation(f.face_center, sc * 2.0 * pi / p);
            MobiusMap abc = f.rot_a * b * c;
            bool identity = near(abc.apply(0.3), 0.3, 1e-9) && near(abc.apply(Complex(-0.2, 0.4)), Complex(-0.2, 0.4), 1e-9);
            // The edge of the next flag around the face must share this flag's vertex.
            Complex next_mid = c.apply(f.edge_midpoint.z);
            bool incident = near(next_mid, std::conj(f.edge_midpoint.z), 1e-9);
            if (identity && incident) {
                f.rot_b = b;
                f.rot_c = c;
                return f;
            }
        }
    }
    throw std::logic_error("no rotation orientation satisfies the triangle group relation");
}

Embedding embed_tessellation(const Tessellation &t) {
    if (t.flags.size() == 0) {
        throw std::invalid_argument("embedding needs a base tessellation with flags");
    }
    Embedding emb;
    emb.fundamental = fundamental_triangle(t.p, t.q);
    const auto &fd = emb.fundamental;
    const std::size_t n = t.flags.size();
    std::vector<char> seen(n, 0);
    emb.flag_map.resize(n);
    std::vector<std::uint32_t> order{0};
    seen[0] = 1;
    const MobiusMap gen[6] = {fd.rot_a, fd.rot_a.inverse(), fd.rot_b, fd.rot_b.inverse(), fd.rot_c, fd.rot_c.inverse()};
    const int letters[6] = {1, -1, 2, -2, 3, -3};
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint32_t c = order[i];
        for (int k = 0; k < 6; ++k) {
            std::uint32_t d = t.flags.act(c, letters[k]);
            if (!seen[d]) {
                seen[d] = 1;
                emb.flag_map[d] = emb.flag_map[c] * gen[k];
                order.push_back(d);
            }
        }
    }
    emb.vertex_position.assign(t.vertex_count, {0.0});
    emb.vertex_flag.assign(t.vertex_count, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t c : order) {
        std::uint32_t v = t.vertex_of_flag[c];
        if (emb.vertex_flag[v] != std::numeric_limits<std::uint32_t>::max()) {
            continue;
        }
        emb.vertex_flag[v] = c;
        Complex z = emb.flag_map[c].apply(fd.vertex.z);
        if (std::abs(z) > 1.0 - kGuard) {
            z *= (1.0 - kGuard) / std::abs(z);
            emb.warnings.push_back("vertex " + std::to_string(v) + " clamped near the boundary");
        }
        emb.vertex_position[v] = {z};
    }
    return emb;
}

namespace {

// Face-center images around a base vertex, indexed by face color.
std::array<DiskPoint, 3> dual_corners(const Tessellation &base, const Embedding &emb, std::uint32_t v) {
    std::array<DiskPoint, 3> out{};
    std::uint32_t c = emb.vertex_flag[v];
    MobiusMap g = emb.flag_map[c];
    for (int k = 0; k < 3; ++k) {
        int color = base.face_color[base.face_of_flag[c]];
        Complex z = g.apply(emb.fundamental.face_center.z);
        if (std::abs(z) > 1.0 - kGuard) {
            z *= (1.0 - kGuard) / std::abs(z);
        }
        out[color] = {z};
        g = g * emb.fundamental.rot_b;
        c = base.flags.act(c, 2);
    }
    return out;
}

DiskPoint lattice_position(const std::array<DiskPoint, 3> &corners, const Barycentric &b, int level) {
    return barycentric_point({corners[0], corners[1], corners[2]},
                             {static_cast<double>(b[0]) / level, static_cast<double>(b[1]) / level,
                              static_cast<double>(b[2]) / level});
}

}  // namespace

std::vector<DiskPoint> embed_fine_grained(const Tessellation &fine, const Embedding &emb) {
    if (!fine.base) {
        return emb.vertex_position;
    }
    const Tessellation &base = *fine.base;
    const int level = fine.level;
    const auto tris = small_triangles(level);
    std::vector<DiskPoint> out;
    out.reserve(fine.vertex_count);
    for (std::uint32_t v = 0; v < base.vertex_count; ++v) {
        auto corners = dual_corners(base, emb, v);
        for (const auto &tri : tris) {
            Barycentric sum{0, 0, 0};
            for (const auto &c : tri.corners) {
                for (int i = 0; i < 3; ++i) {
                    sum[i] += c[i];
                }
            }
            out.push_back(barycentric_point({corners[0], corners[1], corners[2]},
                                            {sum[0] / (3.0 * level), sum[1] / (3.0 * level), sum[2] / (3.0 * level)}));
        }
    }
    return out;
}

std::string render_svg(const Tessellation &t, int size_px) {
    const Tessellation &base = t.base ? *t.base : t;
    if (!base.face_colored()) {
        throw std::invalid_argument("rendering needs a colored tessellation");
    }
    const int level = t.base ? t.level : 1;
    Embedding emb = embed_tessellation(base);
    const auto tris = small_triangles(level);
    static const char *fill[3] = {"#f4a3a3", "#a8dba8", "#a3c4f4"};
    static const char *stroke[3] = {"#c0392b", "#27ae60", "#2c6fbb"};
    const double s = size_px;
    auto px = [&](Complex z) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", (z.real() + 1.0) * s / 2.0, (1.0 - z.imag()) * s / 2.0);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\"" << size_px
        << "\" viewBox=\"0 0 " << size_px << ' ' << size_px << "\">\n";
    out << "<circle cx=\"" << s / 2 << "\" cy=\"" << s / 2 << "\" r=\"" << s / 2
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    std::ostringstream edges;
    for (std::uint32_t v = 0; v < base.vertex_count; ++v) {
        auto corners = dual_corners(base, emb, v);
        for (const auto &tri : tris) {
            std::array<DiskPoint, 3> pts;
            for (int k = 0; k < 3; ++k) {
                pts[k] = lattice_position(corners, tri.corners[k], level);
            }
            Barycentric sum{0, 0, 0};
            for (const auto &c : tri.corners) {
                for (int i = 0; i < 3; ++i) {
                    sum[i] += c[i];
                }
            }
            DiskPoint center = barycentric_point({corners[0], corners[1], corners[2]},
                                                 {sum[0] / (3.0 * level), sum[1] / (3.0 * level),
                                                  sum[2] / (3.0 * level)});
            std::array<DiskPoint, 3> mids;
            for (int k = 0; k < 3; ++k) {
                mids[k] = geodesic_midpoint(pts[k], pts[(k + 1) % 3]);
            }
            for (int k = 0; k < 3; ++k) {
                int col = point_color(tri.corners[k], level);
                out << "<polygon points=\"" << px(pts[k].z) << ' ' << px(mids[k].z) << ' ' << px(center.z) << ' '
                    << px(mids[(k + 2) % 3].z) << "\" fill=\"" << fill[col] << "\" stroke=\"" << fill[col]
                    << "\" stroke-width=\"0.3\"/>\n";
                int ca = point_color(tri.corners[k], level);
                int cb = point_color(tri.corners[(k + 1) % 3], level);
                edges << "<line x1=\"" << px(center.z).replace(px(center.z).find(','), 1, "\" y1=\"")
                      << "\" x2=\"" << px(mids[k].z).replace(px(mids[k].z).find(','), 1, "\" y2=\"")
                      << "\" stroke=\"" << stroke[3 - ca - cb] << "\" stroke-width=\"1\"/>\n";
            }
        }
    }
    out << edges.str();
    out << "</svg>\n";
    return out.str();
}

}  // namespace floquetforge
