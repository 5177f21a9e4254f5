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

#ifndef FLOQUETFORGE_SIM_HPP
#define FLOQUETFORGE_SIM_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "floquetforge/circuit.hpp"
#include "floquetforge/noise.hpp"

namespace floquetforge {

struct NondeterministicReference : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Row-major packed bit matrix; one row per shot.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 63) / 64), w_(rows * stride_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }
    bool get(std::size_t r, std::size_t c) const { return (w_[r * stride_ + (c >> 6)] >> (c & 63)) & 1; }
    void set(std::size_t r, std::size_t c, bool v = true) {
        std::uint64_t m = std::uint64_t{1} << (c & 63);
        auto &w = w_[r * stride_ + (c >> 6)];
        w = v ? (w | m) : (w & ~m);
    }
    void flip(std::size_t r, std::size_t c) { w_[r * stride_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63); }
    const std::uint64_t *row(std::size_t r) const { return w_.data() + r * stride_; }
    std::uint64_t *row(std::size_t r) { return w_.data() + r * stride_; }
    std::vector<std::uint32_t> row_ones(std::size_t r) const;
    bool row_any(std::size_t r) const;
    std::size_t count_ones() const;
    const std::vector<std::uint64_t> &words() const { return w_; }
    std::vector<std::uint64_t> &words() { return w_; }
    bool operator==(const BitMatrix &) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Binary file: "FFBM" magic, then rows, cols, seed as little-endian u64, then packed rows.
void write_bit_matrix(const std::string &path, const BitMatrix &m, std::uint64_t seed);
BitMatrix read_bit_matrix(const std::string &path, std::uint64_t *seed = nullptr);

struct SampleResult {
    BitMatrix detectors;
    BitMatrix observables;
};

/// Error-induced detector and observable flips. Results depend only on (seed, shots).
SampleResult frame_sample(const CircuitIR &c, std::size_t shots, std::uint64_t seed, int threads = 1);

struct TableauResult {
    BitMatrix measurements;
    /// Detector and observable values relative to the noiseless reference.
    BitMatrix detectors;
    BitMatrix observables;
};

/// Full stabilizer simulation, 64 shots per pass.
TableauResult tableau_simulate(const CircuitIR &c, std::size_t shots, std::uint64_t seed);

/// Raw detector and observable parities of a noiseless run; throws if they vary.
struct Reference {
    std::vector<std::uint8_t> detectors;
    std::vector<std::uint8_t> observables;
};
Reference reference_sample(const CircuitIR &c, std::uint64_t seed = 0);

/// Symbolic check that every detector and observable is noiselessly deterministic.
void check_deterministic(const CircuitIR &c);

/// Copy of c without noise instructions.
CircuitIR strip_noise(const CircuitIR &c);

struct ErrorMechanism {
    double probability = 0.0;
    std::vector<std::uint32_t> detectors;
    std::vector<std::uint32_t> observables;
    bool operator==(const ErrorMechanism &) const = default;
};

struct DetectorErrorModel {
    std::vector<ErrorMechanism> mechanisms;
    std::uint32_t detector_count = 0;
    std::uint32_t observable_count = 0;
    bool operator==(const DetectorErrorModel &) const = default;
};

/// Per-component symptoms of every noise instruction, merged by symptom set.
DetectorErrorModel build_dem(const CircuitIR &c);

/// Combines probabilities of independent mechanisms with identical symptoms.
double combine_probability(double p1, double p2);

/// Independent per-Pauli probabilities equivalent to the depolarizing channels.
double depolarize1_component_probability(double p);
double depolarize2_component_probability(double p);

/// Symptoms of the erasure channels at every pair measurement, for fast per-instance DEMs.
class ErasureSymptoms {
   public:
    /// `c` is the circuit without erasure channels; its own noise forms the background.
    explicit ErasureSymptoms(const CircuitIR &c);
    DetectorErrorModel instance(const ErasurePattern &pattern) const;
    const DetectorErrorModel &background() const { return background_; }

   private:
    struct Location {
        std::vector<std::uint32_t> flip_dets, flip_obs;
        std::vector<std::uint32_t> dephase_dets, dephase_obs;
    };
    DetectorErrorModel background_;
    std::vector<std::int64_t> location_of_op_;
    std::vector<Location> locations_;
};

DetectorErrorModel build_instance_dem(const CircuitIR &c, const ErasurePattern &pattern);

std::string dem_to_text(const DetectorErrorModel &dem);
DetectorErrorModel dem_from_text(const std::string &text);

/// Samples shots by firing each mechanism independently.
SampleResult sample_dem(const DetectorErrorModel &dem, std::size_t shots, std::uint64_t seed);

/// Worker count from FLOQUETFORGE_THREADS, defaulting to the hardware concurrency.
int default_thread_count();

}  // namespace floquetforge

#endif
