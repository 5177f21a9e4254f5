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

#ifndef FLOQUETFORGE_FPGROUP_HPP
#define FLOQUETFORGE_FPGROUP_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace floquetforge {

/// A group word: signed 1-based generator indices, negative means inverse.
using Word = std::vector<int>;

struct GroupPresentation {
    int generator_count = 0;
    std::vector<Word> relators;

    /// Throws std::invalid_argument if a relator mentions an unknown generator.
    void validate() const;
};

/// Extra relators whose normal closure is quotiented out of a parent presentation.
struct SubgroupSpec {
    std::vector<Word> extra_relators;
    std::string label;
    std::optional<std::size_t> expected_index;
};

struct CosetLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentPresentation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SearchBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Complete coset table. Column 2*g holds the action of generator g (0-based),
/// column 2*g+1 the action of its inverse. Cosets act on the right.
class CosetTable {
   public:
    CosetTable() = default;
    CosetTable(int generator_count, std::vector<std::uint32_t> entries);

    int generator_count() const { return generator_count_; }
    std::size_t size() const { return generator_count_ == 0 ? 0 : entries_.size() / (2 * generator_count_); }

    /// Image of `coset` under the signed 1-based generator `letter`.
    std::uint32_t act(std::uint32_t coset, int letter) const;
    std::uint32_t act(std::uint32_t coset, const Word &word) const;

    /// Every generator column is a permutation and inverse columns invert it.
    bool is_permutation_table() const;
    /// Every relator fixes every coset.
    bool satisfies(const std::vector<Word> &relators) const;
    /// The action is regular: the stabilizer of coset 0 is trivial, checked by
    /// comparing the relabeling from every base coset.
    bool is_regular() const;

    /// Relabels cosets in breadth-first order from coset 0 (the canonical form).
    CosetTable standardized() const;

    const std::vector<std::uint32_t> &entries() const { return entries_; }
    bool operator==(const CosetTable &other) const = default;

   private:
    int generator_count_ = 0;
    std::vector<std::uint32_t> entries_;
};

/// Rotation triangle group <a, b, c | a^2, b^q, c^p, abc> with a=1, b=2, c=3.
GroupPresentation triangle_rotation_presentation(int p, int q);

/// (p-2)(q-2) > 4.
bool is_hyperbolic(int p, int q);

/// Enumerates the cosets of the trivial subgroup in the quotient of `pres` by
/// the normal closure of `sub.extra_relators` (HLT with coincidences).
CosetTable todd_coxeter(const GroupPresentation &pres, const SubgroupSpec &sub, std::size_t max_cosets);

struct NormalSearchOptions {
    std::size_t node_budget = 2'000'000;
};

/// All normal subgroups of index <= max_index as regular coset tables of the
/// quotients, deduplicated. Desk-scale: enumerates transitive permutation
/// representations and keeps the regular ones.
std::vector<CosetTable> low_index_normal_search(
    const GroupPresentation &pres, std::size_t max_index, const NormalSearchOptions &options = {});

/// Relator file: "group p q", "subgroup <label> <index>", then one word per line.
struct RelatorFile {
    int p = 0;
    int q = 0;
    SubgroupSpec subgroup;
};
RelatorFile read_relator_file(std::istream &in);
RelatorFile load_relator_file(const std::string &path);
void write_relator_file(std::ostream &out, const RelatorFile &file);

/// Plain-text table: "cosets N gens G" header then one row per coset.
void write_coset_table(std::ostream &out, const CosetTable &table);
CosetTable read_coset_table(std::istream &in);

}  // namespace floquetforge

#endif
