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

#include "floquetforge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "floquetforge/circuit.hpp"
#include "floquetforge/finegrain.hpp"
#include "floquetforge/fpgroup.hpp"
#include "floquetforge/homology.hpp"

namespace floquetforge {

const std::vector<CatalogEntry> &code_catalog() {
    static const std::vector<CatalogEntry> catalog = {
        {"H16", 8, "p8_48_1"},     {"H32", 8, "p8_96_1"},     {"H64", 8, "p8_192_1"},
        {"H144", 8, "p8_432_1"},   {"H256", 8, "p8_768_1"},   {"H336", 8, "p8_1008_1"},
        {"H432", 8, "p8_1296_1"},  {"H50", 10, "p10_150_1"},  {"H120", 10, "p10_360_1"},
        {"H250", 10, "p10_750_1"}, {"H720", 10, "p10_2160_1"}, {"H48", 12, "p12_144_1"},
        {"H72", 12, "p12_216_1"},  {"H96", 12, "p12_288_1"},  {"H168", 12, "p12_504_1"},
        {"H312", 12, "p12_936_1"},
    };
    return catalog;
}

std::string data_directory() {
    if (const char *env = std::getenv("FLOQUETFORGE_DATA"); env != nullptr && *env != '\0') {
        return env;
    }
#ifdef FLOQUETFORGE_DATA_DIR
    return FLOQUETFORGE_DATA_DIR;
#else
    return "data";
#endif
}

std::string CodeId::str() const { return level > 1 ? base + "-f" + std::to_string(level) : base; }

CodeId parse_code_id(const std::string &id) {
    CodeId out;
    auto dash = id.find("-f");
    out.base = id.substr(0, dash);
    if (dash != std::string::npos) {
        const std::string lvl = id.substr(dash + 2);
        int v = 0;
        auto [ptr, ec] = std::from_chars(lvl.data(), lvl.data() + lvl.size(), v);
        if (ec != std::errc() || ptr != lvl.data() + lvl.size() || v < 1) {
            throw UnknownCode("bad fine-graining level in code id: " + id);
        }
        out.level = v;
    }
    const auto &cat = code_catalog();
    if (std::none_of(cat.begin(), cat.end(), [&](const CatalogEntry &e) { return e.label == out.base; })) {
        throw UnknownCode("unknown code: " + id);
    }
    return out;
}

Code load_code(const std::string &id, bool with_distance) {
    Code code;
    code.id = parse_code_id(id);
    const auto &cat = code_catalog();
    auto it = std::find_if(cat.begin(), cat.end(), [&](const CatalogEntry &e) { return e.label == code.id.base; });
    code.p = it->p;
    const std::string path = data_directory() + "/subgroups/" + it->file + ".rel";
    code.tess = build_tessellation(load_relator_file(path));
    if (code.id.level > 1) {
        code.tess = fine_grain(code.tess, code.id.level);
    }
    code.params = code_parameters(code.tess, with_distance ? embedded_distance(code.tess) : 0);
    return code;
}

Metric parse_metric(const std::string &name) {
    if (name == "any_logical" || name == "any") {
        return Metric::AnyLogical;
    }
    if (name == "per_observable" || name == "per") {
        return Metric::PerObservable;
    }
    if (name == "specific_logical" || name == "specific") {
        return Metric::SpecificLogical;
    }
    if (name == "type_ab") {
        return Metric::TypeAB;
    }
    throw std::invalid_argument("unknown metric: " + name);
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::AnyLogical:
            return "any_logical";
        case Metric::PerObservable:
            return "per_observable";
        case Metric::SpecificLogical:
            return "specific_logical";
        case Metric::TypeAB:
            return "type_ab";
    }
    return "?";
}

BitMatrix mispredictions(const BitMatrix &predicted, const BitMatrix &actual) {
    if (predicted.rows() != actual.rows() || predicted.cols() != actual.cols()) {
        throw std::invalid_argument("prediction and observable shapes differ");
    }
    BitMatrix out = predicted;
    auto &w = out.words();
    const auto &a = actual.words();
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] ^= a[i];
    }
    return out;
}

namespace {

std::uint64_t any_failures(const BitMatrix &miss) {
    std::uint64_t f = 0;
    for (std::size_t r = 0; r < miss.rows(); ++r) {
        f += miss.row_any(r) ? 1 : 0;
    }
    return f;
}

std::uint64_t column_failures(const BitMatrix &miss, std::uint32_t col) {
    std::uint64_t f = 0;
    for (std::size_t r = 0; r < miss.rows(); ++r) {
        f += miss.get(r, col) ? 1 : 0;
    }
    return f;
}

}  // namespace

double metric_any_logical(const BitMatrix &miss) {
    return miss.rows() == 0 ? 0.0 : static_cast<double>(any_failures(miss)) / static_cast<double>(miss.rows());
}

double metric_per_observable(const BitMatrix &miss) {
    const double trials = static_cast<double>(miss.rows()) * static_cast<double>(miss.cols());
    return trials == 0 ? 0.0 : static_cast<double>(miss.count_ones()) / trials;
}

double metric_specific_logical(const BitMatrix &miss, std::uint32_t observable) {
    if (observable >= miss.cols()) {
        throw std::out_of_range("observable index out of range");
    }
    return miss.rows() == 0 ? 0.0
                            : static_cast<double>(column_failures(miss, observable)) / static_cast<double>(miss.rows());
}

Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (ph + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
    // The bounds are exact at the extremes; the formula only gets there up to rounding.
    return {failures == 0 ? 0.0 : std::max(0.0, centre - half), failures == trials ? 1.0 : std::min(1.0, centre + half)};
}

int default_periods(int d_emb) {
    int t = std::max(2, 3 * d_emb);
    return t + (t % 2);
}

namespace {

// Per-rate stream seed, independent of the rate's position in the list.
std::uint64_t rate_seed(std::uint64_t seed, double rate, std::uint64_t salt = 0) {
    const auto bits = std::bit_cast<std::uint64_t>(rate);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(bits), static_cast<std::uint32_t>(bits >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

int resolve_threads(int threads) { return threads > 0 ? threads : default_thread_count(); }

ResultRow base_row(const Code &code, const ExperimentConfig &cfg, int periods, double rate) {
    ResultRow r;
    r.code = code.id.str();
    r.n = code.params.n;
    r.k = code.params.k;
    r.d_emb = code.params.d_emb;
    r.model = noise_model_name(cfg.noise.model);
    r.rate = rate;
    r.seed = cfg.seed;
    r.periods = periods;
    r.weights = cfg.weights == WeightMode::Uniform ? "uniform" : "probability";
    return r;
}

void finish_row(ResultRow &r, std::uint64_t failures, std::uint64_t trials, double scale) {
    r.failures = failures;
    r.shots = trials;
    auto ci = wilson_interval(failures, trials);
    r.ler = trials == 0 ? 0.0 : scale * static_cast<double>(failures) / static_cast<double>(trials);
    r.ler_low = scale * ci.low;
    r.ler_high = scale * ci.high;
}

int resolve_periods(const Code &code, const ExperimentConfig &cfg) {
    return cfg.periods > 0 ? cfg.periods : default_periods(code.params.d_emb);
}

}  // namespace

std::vector<ResultRow> run_experiment(const Code &code, const ExperimentConfig &cfg) {
    if (cfg.noise.model == NoiseModelKind::Erasure) {
        return run_erasure_experiment(code, cfg);
    }
    if (!std::is_sorted(cfg.rates.begin(), cfg.rates.end())) {
        throw std::invalid_argument("rates must be sorted ascending");
    }
    const int periods = resolve_periods(code, cfg);
    const int threads = resolve_threads(cfg.threads);
    const CircuitIR base = build_floquet_circuit(code.tess, {.periods = periods});
    std::vector<ResultRow> rows;
    for (double rate : cfg.rates) {
        auto t0 = std::chrono::steady_clock::now();
        CircuitIR noisy = apply_noise(base, {cfg.noise.model, rate});
        MatchingGraph g = dem_to_matching_graph(build_dem(noisy), cfg.weights);
        SampleResult s = frame_sample(noisy, cfg.shots, rate_seed(cfg.seed, rate), threads);
        BitMatrix miss = mispredictions(decode_shots(g, s.detectors, threads), s.observables);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::uint64_t shots = miss.rows();
        for (Metric m : cfg.metrics) {
            ResultRow r = base_row(code, cfg, periods, rate);
            r.metric = metric_name(m);
            r.wall_time = wall;
            switch (m) {
                case Metric::AnyLogical:
                    finish_row(r, any_failures(miss), shots, 1.0);
                    break;
                case Metric::PerObservable:
                    finish_row(r, miss.count_ones(), shots * miss.cols(), 1.0);
                    break;
                case Metric::SpecificLogical:
                    finish_row(r, miss.cols() == 0 ? 0 : column_failures(miss, 0), shots, 1.0);
                    break;
                case Metric::TypeAB:
                    throw std::invalid_argument("type_ab applies to erasure runs only");
            }
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg) { return run_experiment(load_code(cfg.code), cfg); }

std::vector<ResultRow> run_erasure_experiment(const Code &code, const ExperimentConfig &cfg) {
    if (cfg.noise.model != NoiseModelKind::Erasure) {
        throw std::invalid_argument("erasure experiment needs the erasure model");
    }
    const int periods = resolve_periods(code, cfg);
    const int threads = resolve_threads(cfg.threads);
    const CircuitIR base = build_floquet_circuit(code.tess, {.periods = periods});
    const ErasureSymptoms symptoms(base);
    // Erasure symptoms are mostly hyperedges. They decompose along the graphlike
    // symptoms of single-qubit Paulis and flips, taken from the phenomenological model.
    const DetectorErrorModel skeleton = build_dem(apply_phenomenological(base, 0.01));
    const std::size_t M = cfg.instances;
    std::vector<ResultRow> rows;
    for (double eps : cfg.rates) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<std::uint8_t> type_b(M, 0);
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t m = next++; m < M; m = next++) {
                std::mt19937_64 rng(rate_seed(cfg.seed, eps, m));
                ErasurePattern pattern = sample_erasure_pattern(base, eps, rng);
                pattern.randomize_records = cfg.randomize_records;
                DetectorErrorModel dem = symptoms.instance(pattern);
                MatchingDecoder dec(dem_to_matching_graph(dem, cfg.weights, &skeleton));
                SampleResult s = sample_dem(dem, cfg.shots, rng());
                for (std::size_t r = 0; r < cfg.shots; ++r) {
                    auto res = dec.decode(s.detectors.row_ones(r));
                    bool fail = false;
                    for (std::uint32_t o = 0; o < dem.observable_count; ++o) {
                        fail |= obs_get(res.observable_flips, o) != s.observables.get(r, o);
                    }
                    if (fail) {
                        type_b[m] = 1;
                        if (cfg.early_exit) {
                            break;
                        }
                    }
                }
            }
        };
        const int nt = std::max(1, std::min<int>(threads, static_cast<int>(M)));
        std::vector<std::thread> pool;
        for (int i = 1; i < nt; ++i) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto &t : pool) {
            t.join();
        }
        ResultRow r = base_row(code, cfg, periods, eps);
        r.metric = metric_name(Metric::TypeAB);
        finish_row(r, static_cast<std::uint64_t>(std::count(type_b.begin(), type_b.end(), 1)), M, 0.5);
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(r);
    }
    return rows;
}

namespace {

struct Curve {
    std::string code;
    std::size_t n = 0;
    std::map<double, ResultRow> points;
};

std::vector<Curve> curves_for(const std::vector<ResultRow> &rows, const std::string &metric) {
    std::map<std::string, Curve> by_code;
    for (const auto &r : rows) {
        if (r.metric != metric) {
            continue;
        }
        auto &c = by_code[r.code];
        c.code = r.code;
        c.n = r.n;
        c.points[r.rate] = r;
    }
    std::vector<Curve> out;
    for (auto &[k, c] : by_code) {
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Curve &a, const Curve &b) { return std::tie(a.n, a.code) < std::tie(b.n, b.code); });
    return out;
}

double log_ler(const ResultRow &r) {
    // Zero counts sit half a failure below the resolution of the run.
    const double floor = r.shots == 0 ? 1e-12 : 0.5 / static_cast<double>(r.shots);
    return std::log(std::max(r.ler, floor));
}

}  // namespace

Crossing threshold_crossing(const std::vector<ResultRow> &rows, const std::string &metric) {
    Crossing out;
    auto curves = curves_for(rows, metric);
    bool all_identical = curves.size() >= 2;
    for (std::size_t c = 0; c + 1 < curves.size(); ++c) {
        const auto &small = curves[c];
        const auto &large = curves[c + 1];
        std::vector<double> rates;
        for (const auto &[rate, row] : small.points) {
            if (large.points.count(rate)) {
                rates.push_back(rate);
            }
        }
        std::vector<double> diff;
        bool identical = !rates.empty();
        for (double rate : rates) {
            const auto &a = small.points.at(rate);
            const auto &b = large.points.at(rate);
            identical &= a.ler == b.ler;
            // Positive while the larger code is better.
            diff.push_back(log_ler(a) - log_ler(b));
        }
        all_identical &= identical;
        if (identical) {
            continue;
        }
        // First point where the larger code stops winning, scanning upward from
        // the first rate at which it wins.
        std::size_t i = 0;
        while (i < diff.size() && diff[i] <= 0) {
            ++i;
        }
        for (; i + 1 < diff.size(); ++i) {
            if (diff[i + 1] <= 0) {
                const double t = diff[i + 1] == 0 ? 1.0 : diff[i] / (diff[i] - diff[i + 1]);
                out.points.push_back(rates[i] + t * (rates[i + 1] - rates[i]));
                break;
            }
        }
    }
    out.degenerate = all_identical;
    if (!out.points.empty()) {
        out.found = true;
        out.low = *std::min_element(out.points.begin(), out.points.end());
        out.high = *std::max_element(out.points.begin(), out.points.end());
    }
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

const char *kCsvHeader =
    "code,n,k,d_emb,model,rate,metric,ler,shots,failures,seed,wall_time,ler_low,ler_high,periods,weights";

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow> &rows) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto &r : rows) {
        out << r.code << ',' << r.n << ',' << r.k << ',' << r.d_emb << ',' << r.model << ',' << fmt_double(r.rate)
            << ',' << r.metric << ',' << fmt_double(r.ler) << ',' << r.shots << ',' << r.failures << ',' << r.seed
            << ',' << fmt_double(r.wall_time) << ',' << fmt_double(r.ler_low) << ',' << fmt_double(r.ler_high) << ','
            << r.periods << ',' << r.weights << "\n";
    }
    return out.str();
}

std::vector<ResultRow> rows_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ResultRow> rows;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("unexpected CSV header");
    }
    auto num = [](const std::string &s, auto &v) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw std::invalid_argument("bad CSV field: " + s);
        }
    };
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 16) {
            throw std::invalid_argument("CSV row needs 16 fields: " + line);
        }
        ResultRow r;
        r.code = f[0];
        num(f[1], r.n);
        num(f[2], r.k);
        num(f[3], r.d_emb);
        r.model = f[4];
        num(f[5], r.rate);
        r.metric = f[6];
        num(f[7], r.ler);
        num(f[8], r.shots);
        num(f[9], r.failures);
        num(f[10], r.seed);
        num(f[11], r.wall_time);
        num(f[12], r.ler_low);
        num(f[13], r.ler_high);
        num(f[14], r.periods);
        r.weights = f[15];
        rows.push_back(r);
    }
    return rows;
}

std::string pivot_table(const std::vector<ResultRow> &rows, const std::string &metric) {
    auto curves = curves_for(rows, metric);
    std::set<double> rates;
    for (const auto &c : curves) {
        for (const auto &[rate, r] : c.points) {
            rates.insert(rate);
        }
    }
    std::ostringstream out;
    char buf[64];
    out << "code,n,k,d_emb";
    for (double rate : rates) {
        std::snprintf(buf, sizeof(buf), ",%.4g%%", 100 * rate);
        out << buf;
    }
    out << "\n";
    for (const auto &c : curves) {
        const auto &first = c.points.begin()->second;
        out << c.code << ',' << first.n << ',' << first.k << ',' << first.d_emb;
        for (double rate : rates) {
            auto it = c.points.find(rate);
            if (it == c.points.end()) {
                out << ",";
            } else {
                std::snprintf(buf, sizeof(buf), ",%.2f", 100 * it->second.ler);
                out << buf;
            }
        }
        out << "\n";
    }
    return out.str();
}

std::string render_report_svg(const std::vector<ResultRow> &rows, const std::string &metric) {
    auto curves = curves_for(rows, metric);
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto &c : curves) {
        for (const auto &[rate, r] : c.points) {
            if (rate <= 0 || r.ler <= 0) {
                continue;
            }
            xmin = std::min(xmin, std::log10(rate));
            xmax = std::max(xmax, std::log10(rate));
            ymin = std::min(ymin, std::log10(r.ler));
            ymax = std::max(ymax, std::log10(r.ler));
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = -3, xmax = -2, ymin = -3, ymax = 0;
    }
    xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
    ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);
    const double W = 640, H = 480, L = 70, R = 150, T = 30, B = 50;
    auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" font-family=\"sans-serif\" "
                  "font-size=\"12\">\n",
                  W, H);
    out << buf;
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf), "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                  L, T, W - L - R, H - T - B);
    out << buf;
    for (int e = static_cast<int>(xmin); e <= static_cast<int>(xmax); ++e) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/><text x=\"%.1f\" y=\"%.1f\" "
                      "text-anchor=\"middle\">1e%d</text>\n",
                      px(e), T, px(e), H - B, px(e), H - B + 16, e);
        out << buf;
    }
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/><text x=\"%.1f\" y=\"%.1f\" "
                      "text-anchor=\"end\">1e%d</text>\n",
                      L, py(e), W - R, py(e), L - 6, py(e) + 4, e);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">physical rate</text>\n",
                  (L + W - R) / 2, H - 12);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"16\" y=\"%.1f\" text-anchor=\"middle\" transform=\"rotate(-90 16 %.1f)\">LER (%s)</text>\n",
                  (T + H - B) / 2, (T + H - B) / 2, metric.c_str());
    out << buf;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char *col = palette[i % (sizeof(palette) / sizeof(palette[0]))];
        std::string pts;
        for (const auto &[rate, r] : curves[i].points) {
            if (rate <= 0 || r.ler <= 0) {
                continue;
            }
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", px(std::log10(rate)), py(std::log10(r.ler)));
            pts += buf;
        }
        if (!pts.empty()) {
            pts.pop_back();
        }
        out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" fill=\"%s\">%s</text>\n", W - R + 10,
                      T + 16.0 * static_cast<double>(i + 1), col, curves[i].code.c_str());
        out << buf;
    }
    out << "</svg>\n";
    return out.str();
}

void emit_report(const std::vector<ResultRow> &rows, const std::string &csv_path, const std::string &svg_path) {
    if (rows.empty()) {
        throw std::invalid_argument("no rows to report");
    }
    auto write = [](const std::string &path, const std::string &text) {
        std::ofstream f(path, std::ios::binary);
        if (!f || !(f << text) || !f.flush()) {
            throw IOFailure("cannot write " + path);
        }
    };
    write(csv_path, rows_to_csv(rows));
    if (!svg_path.empty()) {
        write(svg_path, render_report_svg(rows, rows.front().metric));
    }
}

}  // namespace floquetforge
