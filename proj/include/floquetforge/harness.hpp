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

#ifndef FLOQUETFORGE_HARNESS_HPP
#define FLOQUETFORGE_HARNESS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "floquetforge/decoder.hpp"
#include "floquetforge/noise.hpp"
#include "floquetforge/sim.hpp"
#include "floquetforge/tessellation.hpp"

namespace floquetforge {

struct UnknownCode : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct IOFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A shipped base code: label "H<n>", tiling {p,3}, relator file stem under data/subgroups.
struct CatalogEntry {
    std::string label;
    int p = 0;
    std::string file;
};

const std::vector<CatalogEntry> &code_catalog();

/// Directory holding subgroups/; FLOQUETFORGE_DATA overrides the build-time default.
std::string data_directory();

/// "H16" or "H16-f3". Level 1 means the base code.
struct CodeId {
    std::string base;
    int level = 1;
    std::string str() const;
};

CodeId parse_code_id(const std::string &id);

struct Code {
    CodeId id;
    int p = 0;
    Tessellation tess;
    CodeParameters params;
};

/// Builds the tessellation from the shipped relator file, fine-grains it and
/// (optionally) computes d_emb.
Code load_code(const std::string &id, bool with_distance = true);

/// TypeAB is the erasure instance classification; it is produced only by erasure runs.
enum class Metric { AnyLogical, PerObservable, SpecificLogical, TypeAB };

Metric parse_metric(const std::string &name);
std::string metric_name(Metric m);

/// Mispredicted observables per shot: predicted XOR actual.
BitMatrix mispredictions(const BitMatrix &predicted, const BitMatrix &actual);

/// Fraction of shots with at least one mispredicted observable.
double metric_any_logical(const BitMatrix &miss);
/// Mean over observables of the per-observable misprediction frequency.
double metric_per_observable(const BitMatrix &miss);
/// Misprediction frequency of a single designated observable.
double metric_specific_logical(const BitMatrix &miss, std::uint32_t observable = 0);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z = 1.959963984540054);

/// Default memory length: 3 d_emb periods, rounded up to an even count.
int default_periods(int d_emb);

struct ExperimentConfig {
    std::string code;
    NoiseSpec noise;
    std::vector<double> rates;
    /// Measurement periods (three rounds each); 0 selects default_periods(d_emb).
    int periods = 0;
    std::size_t shots = 1000;
    /// Erasure only: number of sampled erasure patterns.
    std::size_t instances = 0;
    std::vector<Metric> metrics{Metric::AnyLogical};
    std::uint64_t seed = 1;
    WeightMode weights = WeightMode::Probability;
    /// Erasure only: stop an instance at its first failing shot.
    bool early_exit = true;
    /// Erasure only: see ErasurePattern::randomize_records.
    bool randomize_records = false;
    int threads = 0;
};

/// One measured logical error rate. For the per-observable metric, shots and
/// failures count observable trials (shots times k); for erasure they count
/// instances and type-b instances, and ler = failures / (2 shots).
struct ResultRow {
    std::string code;
    std::size_t n = 0;
    std::size_t k = 0;
    int d_emb = 0;
    std::string model;
    double rate = 0.0;
    std::string metric;
    double ler = 0.0;
    std::uint64_t shots = 0;
    std::uint64_t failures = 0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
    double ler_low = 0.0;
    double ler_high = 0.0;
    int periods = 0;
    std::string weights;
};

/// Runs every rate in cfg.rates on an already loaded code; dispatches to the
/// erasure experiment when cfg.noise.model is Erasure.
std::vector<ResultRow> run_experiment(const Code &code, const ExperimentConfig &cfg);
std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg);

/// Type-a/type-b instance classification: LER = 0.5 * (type-b instances / M).
std::vector<ResultRow> run_erasure_experiment(const Code &code, const ExperimentConfig &cfg);

struct Crossing {
    bool found = false;
    /// Set when two compared curves coincide on the whole shared grid.
    bool degenerate = false;
    double low = 0.0;
    double high = 0.0;
    std::vector<double> points;
};

/// Crossings of adjacent-size codes (ordered by n) for one metric, using
/// log(LER) interpolated linearly in the rate.
Crossing threshold_crossing(const std::vector<ResultRow> &rows, const std::string &metric);

std::string rows_to_csv(const std::vector<ResultRow> &rows);
std::vector<ResultRow> rows_from_csv(const std::string &text);

/// Codes as rows and rates as columns, LER in percent.
std::string pivot_table(const std::vector<ResultRow> &rows, const std::string &metric);

/// Log-log LER-versus-rate plot with one curve per code.
std::string render_report_svg(const std::vector<ResultRow> &rows, const std::string &metric);

/// Writes the CSV and, if svg_path is nonempty, the SVG plot of the first metric present.
void emit_report(const std::vector<ResultRow> &rows, const std::string &csv_path, const std::string &svg_path);

}  // namespace floquetforge

#endif
