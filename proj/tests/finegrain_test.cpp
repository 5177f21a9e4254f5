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

#include <gtest/gtest.h>

#include <set>

#include "floquetforge/homology.hpp"
#include "test_util.hpp"

namespace ff = floquetforge;

TEST(SmallTriangles, CountsAndOrder) {
    for (int l = 1; l <= 6; ++l) {
        auto tri = ff::small_triangles(l);
        ASSERT_EQ(tri.size(), static_cast<std::size_t>(l * l));
        std::size_t up = 0;
        for (std::size_t i = 0; i < tri.size(); ++i) {
            if (tri[i].up) {
                EXPECT_EQ(i, up) << "up triangles come first";
                ++up;
            }
            for (const auto &b : tri[i].corners) {
                EXPECT_EQ(b[0] + b[1] + b[2], l);
                for (int x : b) {
                    EXPECT_GE(x, 0);
                }
            }
        }
        EXPECT_EQ(up, static_cast<std::size_t>(l * (l + 1) / 2));
    }
}

TEST(SmallTriangles, PointColoringIsProper) {
    for (int l = 1; l <= 6; ++l) {
        for (const auto &t : ff::small_triangles(l)) {
            std::set<int> colors;
            for (const auto &b : t.corners) {
                colors.insert(ff::point_color(b, l));
            }
            EXPECT_EQ(colors.size(), 3u) << "level " << l;
        }
        if (l % 3 == 0) {
            // The three corners then share a color.
            EXPECT_EQ(ff::point_color({l, 0, 0}, l), ff::point_color({0, l, 0}, l));
            continue;
        }
        // Otherwise corners keep their own color.
        EXPECT_EQ(ff::point_color({l, 0, 0}, l), 0);
        EXPECT_EQ(ff::point_color({0, l, 0}, l), 1);
        EXPECT_EQ(ff::point_color({0, 0, l}, l), 2);
    }
}

TEST(FineGrain, ScalesQubitsAndKeepsLogicals) {
    const auto &base = ff::testing::cached_code("H16").tess;
    for (int l = 1; l <= 4; ++l) {
        auto t = ff::fine_grain(base, l);
        auto cp = ff::code_parameters(t);
        EXPECT_EQ(cp.n, static_cast<std::size_t>(l * l) * 16) << l;
        EXPECT_EQ(cp.k, 4u) << l;
        EXPECT_EQ(t.genus, base.genus) << l;
        EXPECT_EQ(t.level, l);
        EXPECT_EQ(ff::check_structure(t), "") << l;
        EXPECT_TRUE(t.face_colored());
        EXPECT_TRUE(t.edge_colored());
    }
}

// Known embedded distances of H16 fine-grained at levels 2 and 3.
TEST(FineGrain, EmbeddedDistanceGrows) {
    const auto &base = ff::testing::cached_code("H16").tess;
    EXPECT_EQ(ff::embedded_distance(ff::fine_grain(base, 2)), 3);
    EXPECT_EQ(ff::embedded_distance(ff::fine_grain(base, 3)), 4);
}

TEST(FineGrain, LevelOneMatchesBaseCounts) {
    const auto &base = ff::testing::cached_code("H50").tess;
    auto t = ff::fine_grain(base, 1);
    EXPECT_EQ(t.vertex_count, base.vertex_count);
    EXPECT_EQ(t.edge_count(), base.edge_count());
    EXPECT_EQ(t.face_count(), base.face_count());
}

TEST(FineGrain, RejectsBadLevel) { EXPECT_ANY_THROW(ff::fine_grain(ff::testing::cached_code("H16").tess, 0)); }
