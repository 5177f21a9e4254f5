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

#include "floquetforge/fpgroup.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace floquetforge {

namespace {

constexpr std::uint32_t kUndefined = std::numeric_limits<std::uint32_t>::max();

// Column index of a signed 1-based letter.
inline int column_of(int letter) {
    return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
}

inline int inverse_column(int col) {
    return col ^ 1;
}

std::vector<int> to_columns(const Word &w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (int letter : w) {
        out.push_back(column_of(letter));
    }
    return out;
}

// Hasselgrove-Leech-Trotter enumeration with coincidence processing.
class Enumerator {
   public:
    Enumerator(int generator_count, std::vector<std::vector<int>> relators, std::size_t max_cosets)
        : cols_(2 * generator_count), relators_(std::move(relators)), max_cosets_(max_cosets) {
        new_coset();
    }

    void run() {
        for (std::size_t alpha = 0; alpha < parent_.size(); ++alpha) {
            if (!alive(alpha)) {
                continue;
            }
            for (const auto &rel : relators_) {
                scan_and_fill(static_cast<std::uint32_t>(alpha), rel);
                if (!alive(alpha)) {
                    break;
                }
            }
            if (!alive(alpha)) {
                continue;
            }
            for (int x = 0; x < cols_; ++x) {
                if (at(alpha, x) == kUndefined) {
                    define(static_cast<std::uint32_t>(alpha), x);
                }
            }
        }
    }

    // Live cosets renumbered densely in breadth-first order from coset 0.
    CosetTable result(int generator_count) const {
        std::vector<std::uint32_t> dense(parent_.size(), kUndefined);
        std::vector<std::uint32_t> order;
        dense[0] = 0;
        order.push_back(0);
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (int x = 0; x < cols_; ++x) {
                std::uint32_t d = at(order[i], x);
                if (d == kUndefined) {
                    throw std::runtime_error("coset enumeration left an undefined entry");
                }
                if (dense[d] == kUndefined) {
                    dense[d] = static_cast<std::uint32_t>(order.size());
                    order.push_back(d);
                }
            }
        }
        std::vector<std::uint32_t> entries(order.size() * cols_);
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (int x = 0; x < cols_; ++x) {
                entries[i * cols_ + x] = dense[at(order[i], x)];
            }
        }
        return CosetTable(generator_count, std::move(entries));
    }

   private:
    std::uint32_t &at(std::size_t c, int x) { return table_[c * cols_ + x]; }
    std::uint32_t at(std::size_t c, int x) const { return table_[c * cols_ + x]; }
    bool alive(std::size_t c) const { return parent_[c] == c; }

    std::uint32_t new_coset() {
        if (parent_.size() >= max_cosets_) {
            throw CosetLimitExceeded("coset enumeration exceeded " + std::to_string(max_cosets_) + " cosets");
        }
        auto c = static_cast<std::uint32_t>(parent_.size());
        parent_.push_back(c);
        table_.resize(table_.size() + cols_, kUndefined);
        return c;
    }

    void define(std::uint32_t c, int x) {
        std::uint32_t d = new_coset();
        at(c, x) = d;
        at(d, inverse_column(x)) = c;
    }

    std::uint32_t rep(std::uint32_t c) {
        std::uint32_t r = c;
        while (parent_[r] != r) {
            r = parent_[r];
        }
        while (parent_[c] != r) {
            std::uint32_t next = parent_[c];
            parent_[c] = r;
            c = next;
        }
        return r;
    }

    void merge(std::uint32_t k, std::uint32_t l, std::deque<std::uint32_t> &queue) {
        std::uint32_t a = rep(k);
        std::uint32_t b = rep(l);
        if (a == b) {
            return;
        }
        std::uint32_t lo = std::min(a, b);
        std::uint32_t hi = std::max(a, b);
        parent_[hi] = lo;
        queue.push_back(hi);
    }

    void coincidence(std::uint32_t a, std::uint32_t b) {
        std::deque<std::uint32_t> queue;
        merge(a, b, queue);
        while (!queue.empty()) {
            std::uint32_t g = queue.front();
            queue.pop_front();
            for (int x = 0; x < cols_; ++x) {
                std::uint32_t d = at(g, x);
                if (d == kUndefined) {
                    continue;
                }
                int xi = inverse_column(x);
                at(d, xi) = kUndefined;
                std::uint32_t mu = rep(g);
                std::uint32_t nu = rep(d);
                if (at(mu, x) != kUndefined) {
                    merge(nu, at(mu, x), queue);
                } else if (at(nu, xi) != kUndefined) {
                    merge(mu, at(nu, xi), queue);
                } else {
                    at(mu, x) = nu;
                    at(nu, xi) = mu;
                }
            }
        }
    }

    void scan_and_fill(std::uint32_t alpha, const std::vector<int> &w) {
        const std::size_t len = w.size();
        if (len == 0) {
            return;
        }
        while (true) {
            std::uint32_t f = alpha;
            std::size_t i = 0;
            std::uint32_t b = alpha;
            std::ptrdiff_t j = static_cast<std::ptrdiff_t>(len) - 1;
            while (static_cast<std::ptrdiff_t>(i) <= j && at(f, w[i]) != kUndefined) {
                f = at(f, w[i]);
                ++i;
            }
            if (static_cast<std::ptrdiff_t>(i) > j) {
                if (f != alpha) {
                    coincidence(f, alpha);
                }
                return;
            }
            while (j >= static_cast<std::ptrdiff_t>(i) && at(b, inverse_column(w[j])) != kUndefined) {
                b = at(b, inverse_column(w[j]));
                --j;
            }
            if (j < static_cast<std::ptrdiff_t>(i)) {
                coincidence(f, b);
                return;
            }
            if (j == static_cast<std::ptrdiff_t>(i)) {
                at(f, w[i]) = b;
                at(b, inverse_column(w[i])) = f;
                return;
            }
            define(f, w[i]);
        }
    }

    int cols_;
    std::vector<std::vector<int>> relators_;
    std::size_t max_cosets_;
    std::vector<std::uint32_t> table_;
    std::vector<std::uint32_t> parent_;
};

CosetTable standardize_from(const CosetTable &t, std::uint32_t base) {
    const int cols = 2 * t.generator_count();
    const std::size_t n = t.size();
    std::vector<std::uint32_t> dense(n, kUndefined);
    std::vector<std::uint32_t> order;
    order.reserve(n);
    dense[base] = 0;
    order.push_back(base);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (int x = 0; x < cols; ++x) {
            std::uint32_t d = t.entries()[order[i] * cols + x];
            if (dense[d] == kUndefined) {
                dense[d] = static_cast<std::uint32_t>(order.size());
                order.push_back(d);
            }
        }
    }
    if (order.size() != n) {
        throw std::invalid_argument("coset table is not transitive");
    }
    std::vector<std::uint32_t> entries(n * cols);
    for (std::size_t i = 0; i < n; ++i) {
        for (int x = 0; x < cols; ++x) {
            entries[i * cols + x] = dense[t.entries()[order[i] * cols + x]];
        }
    }
    return CosetTable(t.generator_count(), std::move(entries));
}

}  // namespace

void GroupPresentation::validate() const {
    if (generator_count <= 0) {
        throw std::invalid_argument("presentation needs at least one generator");
    }
    for (const auto &rel : relators) {
        for (int letter : rel) {
            if (letter == 0 || std::abs(letter) > generator_count) {
                throw std::invalid_argument("relator letter " + std::to_string(letter) + " out of range");
            }
        }
    }
}

CosetTable::CosetTable(int generator_count, std::vector<std::uint32_t> entries)
    : generator_count_(generator_count), entries_(std::move(entries)) {
    if (generator_count <= 0 || entries_.size() % (2 * generator_count) != 0) {
        throw std::invalid_argument("coset table shape does not match generator count");
    }
    for (std::uint32_t e : entries_) {
        if (e >= size()) {
            throw std::invalid_argument("coset table entry out of range");
        }
    }
}

std::uint32_t CosetTable::act(std::uint32_t coset, int letter) const {
    return entries_[coset * 2 * generator_count_ + column_of(letter)];
}

std::uint32_t CosetTable::act(std::uint32_t coset, const Word &word) const {
    for (int letter : word) {
        coset = act(coset, letter);
    }
    return coset;
}

bool CosetTable::is_permutation_table() const {
    const int cols = 2 * generator_count_;
    for (std::size_t c = 0; c < size(); ++c) {
        for (int x = 0; x < cols; ++x) {
            std::uint32_t d = entries_[c * cols + x];
            if (entries_[d * cols + inverse_column(x)] != c) {
                return false;
            }
        }
    }
    return true;
}

bool CosetTable::satisfies(const std::vector<Word> &relators) const {
    for (const auto &rel : relators) {
        for (std::size_t c = 0; c < size(); ++c) {
            if (act(static_cast<std::uint32_t>(c), rel) != c) {
                return false;
            }
        }
    }
    return true;
}

bool CosetTable::is_regular() const {
    if (size() == 0) {
        return false;
    }
    CosetTable base = standardize_from(*this, 0);
    for (std::size_t b = 1; b < size(); ++b) {
        if (!(standardize_from(*this, static_cast<std::uint32_t>(b)) == base)) {
            return false;
        }
    }
    return true;
}

CosetTable CosetTable::standardized() const {
    return standardize_from(*this, 0);
}

GroupPresentation triangle_rotation_presentation(int p, int q) {
    if (p < 2 || q < 2) {
        throw std::invalid_argument("triangle group orders must be at least 2");
    }
    GroupPresentation pres;
    pres.generator_count = 3;
    pres.relators.push_back({1, 1});
    pres.relators.push_back(Word(q, 2));
    pres.relators.push_back(Word(p, 3));
    pres.relators.push_back({1, 2, 3});
    return pres;
}

bool is_hyperbolic(int p, int q) {
    return (p - 2) * (q - 2) > 4;
}

CosetTable todd_coxeter(const GroupPresentation &pres, const SubgroupSpec &sub, std::size_t max_cosets) {
    pres.validate();
    GroupPresentation extra{pres.generator_count, sub.extra_relators};
    extra.validate();

    std::vector<std::vector<int>> rels;
    for (const auto &r : pres.relators) {
        rels.push_back(to_columns(r));
    }
    for (const auto &r : sub.extra_relators) {
        rels.push_back(to_columns(r));
    }
    Enumerator e(pres.generator_count, rels, max_cosets);
    e.run();
    CosetTable table = e.result(pres.generator_count);

    if (!table.is_permutation_table() || !table.satisfies(pres.relators) || !table.satisfies(sub.extra_relators)) {
        throw std::runtime_error("coset enumeration produced an invalid table");
    }
    if (sub.expected_index) {
        if (table.size() == 1 && *sub.expected_index > 1) {
            throw InconsistentPresentation("quotient collapsed to the trivial group for subgroup '" + sub.label + "'");
        }
        if (table.size() != *sub.expected_index) {
            throw InconsistentPresentation(
                "subgroup '" + sub.label + "' has index " + std::to_string(table.size()) + ", expected " +
                std::to_string(*sub.expected_index));
        }
    }
    return table;
}

namespace {

// Backtracking search over partial coset tables defined in first-appearance order.
class LowIndexSearch {
   public:
    LowIndexSearch(const GroupPresentation &pres, std::size_t max_index, std::size_t budget)
        : gens_(pres.generator_count), cols_(2 * pres.generator_count), max_index_(max_index), budget_(budget) {
        for (const auto &r : pres.relators) {
            rels_.push_back(to_columns(r));
        }
    }

    std::vector<CosetTable> run() {
        std::vector<std::uint32_t> table(max_index_ * cols_, kUndefined);
        recurse(table, 1);
        std::vector<CosetTable> out;
        for (auto &t : found_) {
            out.push_back(t);
        }
        std::stable_sort(out.begin(), out.end(), [](const CosetTable &a, const CosetTable &b) {
            return a.size() < b.size();
        });
        return out;
    }

   private:
    bool assign(std::vector<std::uint32_t> &t, std::uint32_t c, int x, std::uint32_t d) {
        std::uint32_t &fwd = t[c * cols_ + x];
        std::uint32_t &back = t[d * cols_ + inverse_column(x)];
        if (fwd != kUndefined && fwd != d) {
            return false;
        }
        if (back != kUndefined && back != c) {
            return false;
        }
        fwd = d;
        back = c;
        return true;
    }

    // Scans every relator from every coset, making single-gap deductions until stable.
    bool propagate(std::vector<std::uint32_t> &t, std::size_t n) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t c = 0; c < n; ++c) {
                for (const auto &w : rels_) {
                    const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(w.size());
                    std::uint32_t f = static_cast<std::uint32_t>(c);
                    std::ptrdiff_t i = 0;
                    while (i < len && t[f * cols_ + w[i]] != kUndefined) {
                        f = t[f * cols_ + w[i]];
                        ++i;
                    }
                    if (i == len) {
                        if (f != c) {
                            return false;
                        }
                        continue;
                    }
                    std::uint32_t b = static_cast<std::uint32_t>(c);
                    std::ptrdiff_t j = len - 1;
                    while (j >= i && t[b * cols_ + inverse_column(w[j])] != kUndefined) {
                        b = t[b * cols_ + inverse_column(w[j])];
                        --j;
                    }
                    if (j < i) {
                        if (f != b) {
                            return false;
                        }
                    } else if (j == i) {
                        if (!assign(t, f, w[i], b)) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
        }
        return true;
    }

    void recurse(std::vector<std::uint32_t> &t, std::size_t n) {
        if (++nodes_ > budget_) {
            throw SearchBudgetExceeded("normal subgroup search exceeded node budget");
        }
        std::size_t gap = n * cols_;
        for (std::size_t k = 0; k < n * cols_; ++k) {
            if (t[k] == kUndefined) {
                gap = k;
                break;
            }
        }
        if (gap == n * cols_) {
            std::vector<std::uint32_t> entries(t.begin(), t.begin() + n * cols_);
            CosetTable table(gens_, std::move(entries));
            if (table.is_regular()) {
                found_.insert(table);
            }
            return;
        }
        auto c = static_cast<std::uint32_t>(gap / cols_);
        int x = static_cast<int>(gap % cols_);
        for (std::uint32_t d = 0; d <= n && d < max_index_; ++d) {
            if (d < n && t[d * cols_ + inverse_column(x)] != kUndefined) {
                continue;
            }
            std::vector<std::uint32_t> next = t;
            std::size_t next_n = d == n ? n + 1 : n;
            if (assign(next, c, x, d) && propagate(next, next_n)) {
                recurse(next, next_n);
            }
        }
    }

    struct TableLess {
        bool operator()(const CosetTable &a, const CosetTable &b) const {
            return a.entries() < b.entries();
        }
    };

    int gens_;
    int cols_;
    std::size_t max_index_;
    std::size_t budget_;
    std::size_t nodes_ = 0;
    std::vector<std::vector<int>> rels_;
    std::set<CosetTable, TableLess> found_;
};

Word parse_word(const std::string &line) {
    std::istringstream in(line);
    Word w;
    int letter;
    while (in >> letter) {
        w.push_back(letter);
    }
    if (!in.eof()) {
        throw std::invalid_argument("malformed relator line: " + line);
    }
    return w;
}

}  // namespace

std::vector<CosetTable> low_index_normal_search(
    const GroupPresentation &pres, std::size_t max_index, const NormalSearchOptions &options) {
    pres.validate();
    if (max_index == 0) {
        return {};
    }
    LowIndexSearch search(pres, max_index, options.node_budget);
    return search.run();
}

RelatorFile read_relator_file(std::istream &in) {
    RelatorFile file;
    std::string line;
    bool have_group = false;
    bool have_subgroup = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        if (head == "group") {
            if (!(ls >> file.p >> file.q)) {
                throw std::invalid_argument("malformed group line");
            }
            have_group = true;
        } else if (head == "subgroup") {
            std::size_t index = 0;
            if (!(ls >> file.subgroup.label)) {
                throw std::invalid_argument("malformed subgroup line");
            }
            if (ls >> index) {
                file.subgroup.expected_index = index;
            }
            have_subgroup = true;
        } else {
            if (!have_group) {
                throw std::invalid_argument("relator before group header");
            }
            file.subgroup.extra_relators.push_back(parse_word(line));
        }
    }
    if (!have_group || !have_subgroup) {
        throw std::invalid_argument("relator file missing group or subgroup header");
    }
    triangle_rotation_presentation(file.p, file.q);
    GroupPresentation{3, file.subgroup.extra_relators}.validate();
    return file;
}

RelatorFile load_relator_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open relator file " + path);
    }
    return read_relator_file(in);
}

void write_relator_file(std::ostream &out, const RelatorFile &file) {
    out << "group " << file.p << ' ' << file.q << '\n';
    out << "subgroup " << file.subgroup.label;
    if (file.subgroup.expected_index) {
        out << ' ' << *file.subgroup.expected_index;
    }
    out << '\n';
    for (const auto &w : file.subgroup.extra_relators) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            out << (i ? " " : "") << w[i];
        }
        out << '\n';
    }
}

void write_coset_table(std::ostream &out, const CosetTable &table) {
    const int cols = 2 * table.generator_count();
    out << "cosets " << table.size() << " gens " << table.generator_count() << '\n';
    for (std::size_t c = 0; c < table.size(); ++c) {
        for (int x = 0; x < cols; ++x) {
            out << (x ? " " : "") << table.entries()[c * cols + x];
        }
        out << '\n';
    }
}

CosetTable read_coset_table(std::istream &in) {
    std::string w1, w2;
    std::size_t n = 0;
    int g = 0;
    if (!(in >> w1 >> n >> w2 >> g) || w1 != "cosets" || w2 != "gens" || g <= 0) {
        throw std::invalid_argument("malformed coset table header");
    }
    std::vector<std::uint32_t> entries(n * 2 * g);
    for (auto &e : entries) {
        if (!(in >> e)) {
            throw std::invalid_argument("truncated coset table");
        }
    }
    return CosetTable(g, std::move(entries));
}

}  // namespace floquetforge
