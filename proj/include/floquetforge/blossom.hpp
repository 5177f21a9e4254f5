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

#ifndef FLOQUETFORGE_BLOSSOM_HPP
#define FLOQUETFORGE_BLOSSOM_HPP

#include <cstdint>
#include <vector>

namespace floquetforge {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    std::int64_t weight = 0;
};

/// Maximum-weight matching by Edmonds' blossom algorithm with dual variables
/// (after J. van Rantwijk's reference implementation). Weights must be even
/// integers so every dual update stays integral. Returns mate[v] or -1.
std::vector<int> max_weight_matching(int vertex_count, const std::vector<WeightedEdge> &edges,
                                     bool max_cardinality);

}  // namespace floquetforge

#endif
