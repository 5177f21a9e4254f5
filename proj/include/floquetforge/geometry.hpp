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

#ifndef FLOQUETFORGE_GEOMETRY_HPP
#define FLOQUETFORGE_GEOMETRY_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "floquetforge/tessellation.hpp"

namespace floquetforge {

using Complex = std::complex<double>;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Point of the open unit disk.
struct DiskPoint {
    Complex z;
};

/// Disk-preserving Mobius map z -> (a z + b) / (c z + d).
class MobiusMap {
   public:
    MobiusMap() = default;
    MobiusMap(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {}

    /// The isometry z -> (z - z1) / (1 - conj(z1) z) sending z1 to the origin.
    static MobiusMap to_origin(DiskPoint z1);
    /// Rotation by `angle` about `center`.
    static MobiusMap rotation(DiskPoint center, double angle);

    Complex apply(Complex z) const { return (a_ * z + b_) / (c_ * z + d_); }
    DiskPoint operator()(DiskPoint p) const { return {apply(p.z)}; }
    MobiusMap inverse() const;
    /// (f * g)(z) = f(g(z)).
    MobiusMap operator*(const MobiusMap &g) const;

   private:
    Complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

double hyperbolic_distance(DiskPoint z1, DiskPoint z2);
DiskPoint geodesic_midpoint(DiskPoint z1, DiskPoint z2);

/// Point with Klein-model barycentric weights w over the given corners;
/// lattice points of a subdivided geodesic triangle lie on its geodesic grid.
DiskPoint barycentric_point(const std::vector<DiskPoint> &corners, const std::vector<double> &weights);

/// Interior angle at `at` of the geodesic triangle (at, b, c).
double triangle_angle(DiskPoint at, DiskPoint b, DiskPoint c);

/// Fundamental right triangle: face center at the origin, a vertex on the
/// positive real axis and the midpoint of the edge to its neighbour.
struct FundamentalTriangle {
    DiskPoint face_center;
    DiskPoint vertex;
    DiskPoint edge_midpoint;
    MobiusMap rot_a;  // half turn about the edge midpoint
    MobiusMap rot_b;  // turn by 2pi/q about the vertex
    MobiusMap rot_c;  // turn by 2pi/p about the face center
};
FundamentalTriangle fundamental_triangle(int p, int q);

/// Layout in the disk: one isometry per flag, reached breadth-first from flag 0.
struct Embedding {
    FundamentalTriangle fundamental;
    std::vector<MobiusMap> flag_map;
    /// Position of each vertex taken from its first flag.
    std::vector<DiskPoint> vertex_position;
    std::vector<std::uint32_t> vertex_flag;
    std::vector<std::string> warnings;
};
Embedding embed_tessellation(const Tessellation &t);

/// Positions of the vertices of a fine-grained tessellation, placed inside the
/// local image of each base dual triangle.
std::vector<DiskPoint> embed_fine_grained(const Tessellation &fine, const Embedding &base);

/// SVG drawing of a (possibly fine-grained) colored tessellation.
std::string render_svg(const Tessellation &t, int size_px = 800);

}  // namespace floquetforge

#endif
