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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

namespace ff = floquetforge;
using ff::Complex;
using ff::DiskPoint;

namespace {

DiskPoint random_point(std::mt19937_64 &rng, double rmax = 0.9) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = rmax * std::sqrt(u(rng));
    double a = 2 * std::numbers::pi * u(rng);
    return {std::polar(r, a)};
}

// Pseudo-hyperbolic distance formula.
double oracle_distance(Complex a, Complex b) { return 2 * std::atanh(std::abs(a - b) / std::abs(1.0 - std::conj(a) * b)); }

}  // namespace

TEST(Geometry, DistanceFromOrigin) {
    for (double r : {0.0, 0.1, 0.5, 0.9, 0.99}) {
        EXPECT_NEAR(ff::hyperbolic_distance({0.0}, {r}), 2 * std::atanh(r), 1e-12);
    }
}

TEST(Geometry, DistanceMatchesClosedForm) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto a = random_point(rng), b = random_point(rng);
        EXPECT_NEAR(ff::hyperbolic_distance(a, b), oracle_distance(a.z, b.z), 1e-9);
        EXPECT_NEAR(ff::hyperbolic_distance(a, b), ff::hyperbolic_distance(b, a), 1e-12);
    }
}

TEST(Geometry, OutsideDiskThrows) { EXPECT_THROW(ff::hyperbolic_distance({1.5}, {0.0}), ff::DomainError); }

TEST(Mobius, IsometriesPreserveDistance) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto c = random_point(rng, 0.7);
        auto maps = {ff::MobiusMap::to_origin(c), ff::MobiusMap::rotation(c, 0.37 * i)};
        for (const auto &m : maps) {
            auto a = random_point(rng), b = random_point(rng);
            EXPECT_NEAR(ff::hyperbolic_distance(m(a), m(b)), ff::hyperbolic_distance(a, b), 1e-8);
        }
    }
}

TEST(Mobius, ToOriginInverseAndComposition) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto c = random_point(rng);
        auto m = ff::MobiusMap::to_origin(c);
        EXPECT_NEAR(std::abs(m(c).z), 0.0, 1e-12);
        auto z = random_point(rng);
        EXPECT_NEAR(std::abs((m.inverse() * m)(z).z - z.z), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(m.inverse()(m(z)).z - z.z), 0.0, 1e-10);
    }
}

TEST(Mobius, RotationFixesCenter) {
    DiskPoint c{Complex(0.3, -0.2)};
    auto r = ff::MobiusMap::rotation(c, 1.1);
    EXPECT_NEAR(std::abs(r(c).z - c.z), 0.0, 1e-12);
}

TEST(Geometry, MidpointIsEquidistant) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        auto a = random_point(rng), b = random_point(rng);
        auto m = ff::geodesic_midpoint(a, b);
        double d = ff::hyperbolic_distance(a, b);
        EXPECT_NEAR(ff::hyperbolic_distance(a, m), d / 2, 1e-8);
        EXPECT_NEAR(ff::hyperbolic_distance(m, b), d / 2, 1e-8);
    }
}

TEST(Geometry, BarycentricCornersAndEdges) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        std::vector<DiskPoint> c = {random_point(rng), random_point(rng), random_point(rng)};
        for (int k = 0; k < 3; ++k) {
            std::vector<double> w(3, 0.0);
            w[k] = 1.0;
            EXPECT_NEAR(std::abs(ff::barycentric_point(c, w).z - c[k].z), 0.0, 1e-10);
        }
        // Points with a zero weight lie on the geodesic between the other two corners.
        auto p = ff::barycentric_point(c, {0.3, 0.7, 0.0});
        double lhs = ff::hyperbolic_distance(c[0], p) + ff::hyperbolic_distance(p, c[1]);
        EXPECT_NEAR(lhs, ff::hyperbolic_distance(c[0], c[1]), 1e-8);
    }
}

TEST(Geometry, FundamentalTriangleAngles) {
    for (auto [p, q] : {std::pair{8, 3}, std::pair{10, 3}, std::pair{12, 3}, std::pair{5, 4}}) {
        auto ft = ff::fundamental_triangle(p, q);
        EXPECT_NEAR(ff::triangle_angle(ft.face_center, ft.vertex, ft.edge_midpoint), std::numbers::pi / p, 1e-9);
        EXPECT_NEAR(ff::triangle_angle(ft.vertex, ft.face_center, ft.edge_midpoint), std::numbers::pi / q, 1e-9);
        EXPECT_NEAR(ff::triangle_angle(ft.edge_midpoint, ft.vertex, ft.face_center), std::numbers::pi / 2, 1e-9);
    }
}

TEST(Geometry, FundamentalRotationOrders) {
    auto ft = ff::fundamental_triangle(8, 3);
    std::mt19937_64 rng(17);
    auto z = random_point(rng, 0.5);
    auto power = [&](const ff::MobiusMap &m, int k) {
        DiskPoint w = z;
        for (int i = 0; i < k; ++i) {
            w = m(w);
        }
        return w;
    };
    EXPECT_NEAR(std::abs(power(ft.rot_a, 2).z - z.z), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(power(ft.rot_b, 3).z - z.z), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(power(ft.rot_c, 8).z - z.z), 0.0, 1e-9);
    EXPECT_GT(std::abs(power(ft.rot_c, 4).z - z.z), 1e-3);
}

TEST(Geometry, HyperbolicTilingRequired) { EXPECT_ANY_THROW(ff::fundamental_triangle(6, 3)); }

TEST(Embedding, EdgesHaveEqualLength) {
    const auto &t = ff::testing::cached_code("H16").tess;
    auto emb = ff::embed_tessellation(t);
    ASSERT_EQ(emb.vertex_position.size(), t.vertex_count);
    auto ft = ff::fundamental_triangle(8, 3);
    const double len = 2 * ff::hyperbolic_distance(ft.vertex, ft.edge_midpoint);
    // Each flag places the vertex and its edge partner one edge length apart.
    for (std::size_t f = 0; f < emb.flag_map.size(); ++f) {
        auto v = emb.flag_map[f](ft.vertex);
        auto mid = emb.flag_map[f](ft.edge_midpoint);
        EXPECT_NEAR(2 * ff::hyperbolic_distance(v, mid), len, 1e-7);
    }
}

TEST(Embedding, SvgDrawsEveryEdge) {
    for (const char *id : {"H16", "H16-f2"}) {
        const auto &t = ff::testing::cached_code(id).tess;
        auto svg = ff::render_svg(t, 400);
        EXPECT_EQ(svg.rfind("<svg", 0), 0u) << id;
        EXPECT_NE(svg.find("</svg>"), std::string::npos) << id;
    }
}
