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

#ifndef FLOQUETFORGE_DECODER_HPP
#define FLOQUETFORGE_DECODER_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "floquetforge/sim.hpp"

namespace floquetforge {

struct UndecomposableHyperedge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OddDefectCount : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Observable flip set; supports up to 256 observables.
using ObsMask = std::array<std::uint64_t, 4>;

inline void obs_xor(ObsMask &a, const ObsMask &b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] ^= b[i];
    }
}
inline bool obs_get(const ObsMask &a, std::uint32_t i) { return (a[i >> 6] >> (i & 63)) & 1; }

enum class WeightMode { Probability, Uniform };

/// Fixed-point scale of integer edge weights.
inline constexpr double kWeightScale = 1e6;

struct MatchingEdge {
    std::uint32_t a = 0;
    /// Equals the boundary node id for boundary edges.
    std::uint32_t b = 0;
    double probability = 0.0;
    double weight = 0.0;
    std::int64_t iweight = 0;
    ObsMask obs{};
};

struct MatchingGraph {
    std::uint32_t detector_count = 0;
    std::uint32_t observable_count = 0;
    bool has_boundary = false;
    std::vector<MatchingEdge> edges;
    /// Edge ids representing each DEM mechanism, in DEM order.
    std::vector<std::vector<std::uint32_t>> mechanism_edges;

    std::uint32_t boundary() const { return detector_count; }
    std::uint32_t node_count() const { return detector_count + (has_boundary ? 1 : 0); }
};

double edge_weight(double p, WeightMode mode);

/// `skeleton`, if given, contributes extra graphlike symptoms that hyperedges may be
/// decomposed along (used for sparse per-instance erasure models).
MatchingGraph dem_to_matching_graph(const DetectorErrorModel &dem, WeightMode mode = WeightMode::Probability,
                                    const DetectorErrorModel *skeleton = nullptr);

inline constexpr std::uint32_t kBoundaryPartner = std::numeric_limits<std::uint32_t>::max();

struct SyndromeDecodeResult {
    ObsMask observable_flips{};
    /// Total matched path weight.
    double cost = 0.0;
    std::int64_t icost = 0;
    /// Defect pairs; kBoundaryPartner marks a match to the boundary.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
};

/// Minimum-weight perfect matching decoder. Zero-weight edges are contracted,
/// then defect-to-defect distances come from Dijkstra over the K nearest
/// terminals and an exact blossom matching runs on that sparse graph, falling
/// back to all pairs if it has no perfect matching.
class MatchingDecoder {
   public:
    explicit MatchingDecoder(const MatchingGraph &g, int neighbours = 16);

    SyndromeDecodeResult decode(const std::vector<std::uint32_t> &defects);
    const MatchingGraph &graph() const { return g_; }

   private:
    struct Arc {
        std::uint32_t to;
        std::int64_t w;
        ObsMask obs;
    };
    struct Hit {
        std::uint32_t terminal;
        std::int64_t dist;
        ObsMask obs;
    };
    // Distances from terminal i's supernode to other terminals (and boundary).
    void search(std::uint32_t source, std::size_t limit, std::vector<Hit> &hits);
    SyndromeDecodeResult match(const std::vector<std::uint32_t> &defects, bool complete);

    MatchingGraph g_;
    int k_;
    std::vector<std::uint32_t> comp_;      // node -> supernode
    std::vector<ObsMask> pot_;             // node -> obs parity to its supernode root
    std::uint32_t super_count_ = 0;
    std::int64_t boundary_super_ = -1;     // supernode of the boundary, if any
    std::vector<std::vector<Arc>> adj_;    // contracted graph

    // Scratch.
    std::vector<std::int64_t> dist_;
    std::vector<std::uint32_t> parent_node_;
    std::vector<const Arc *> parent_arc_;
    std::vector<std::pair<std::int64_t, std::uint32_t>> heap_;
    std::vector<std::uint32_t> touched_;
    std::vector<std::int32_t> terminal_of_super_;
    std::vector<std::int64_t> bdist_;      // supernode -> distance to boundary, -1 if unreachable
    std::vector<ObsMask> bobs_;
    std::int64_t max_bdist_ = -1;
};

SyndromeDecodeResult mwpm_decode(const MatchingGraph &g, const std::vector<std::uint32_t> &defects);

/// Exhaustive minimum over all pairings (with optional boundary matches), using
/// plain Dijkstra distances on the uncontracted graph. For validation only.
std::int64_t brute_force_matching_cost(const MatchingGraph &g, const std::vector<std::uint32_t> &defects);

/// Decodes every shot; row s of the result holds predicted observable flips.
BitMatrix decode_shots(const MatchingGraph &g, const BitMatrix &detectors, int threads = 1);

}  // namespace floquetforge

#endif
