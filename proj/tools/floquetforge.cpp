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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floquetforge/circuit.hpp"
#include "floquetforge/decoder.hpp"
#include "floquetforge/finegrain.hpp"
#include "floquetforge/fpgroup.hpp"
#include "floquetforge/geometry.hpp"
#include "floquetforge/harness.hpp"
#include "floquetforge/homology.hpp"
#include "floquetforge/noise.hpp"
#include "floquetforge/sim.hpp"
#include "floquetforge/tessellation.hpp"

namespace ff = floquetforge;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ff::IOFailure("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw ff::IOFailure("cannot write " + path);
    }
}

void print_params(const ff::Tessellation &t, int d_emb) {
    auto cp = ff::code_parameters(t, d_emb);
    std::printf("n=%zu E=%zu F=%zu g=%d k=%zu", cp.n, t.edge_count(), t.face_count(), t.genus, cp.k);
    if (d_emb > 0) {
        std::printf(" d_emb=%d", d_emb);
    }
    std::printf("\n");
}

// Options shared by run and sweep.
struct RunOptions {
    std::vector<std::string> codes;
    std::string noise = "sdem3";
    std::vector<double> rates;
    int periods = 0;
    std::size_t shots = 1000;
    std::size_t instances = 0;
    std::vector<std::string> metrics{"any_logical"};
    std::uint64_t seed = 1;
    bool uniform = false;
    bool full_shots = false;
    bool randomize_records = false;
    bool stable = false;
    int threads = 0;
    std::string out;
    std::string svg;
};

void add_run_options(CLI::App *cmd, RunOptions &o, bool many) {
    if (many) {
        cmd->add_option("--codes", o.codes, "Code ids, e.g. H16-f2 H16-f3")->required()->delimiter(',');
    } else {
        cmd->add_option("--code", o.codes, "Code id, e.g. H16-f2")->required()->expected(1);
    }
    cmd->add_option("--noise", o.noise, "phenomenological | em3 | sdem3 | erasure");
    auto *p = cmd->add_option("--p", o.rates, "Physical error rates")->delimiter(',');
    cmd->add_option("--eps", o.rates, "Photon loss rates (erasure)")->delimiter(',')->excludes(p);
    cmd->add_option("--rounds,--periods", o.periods, "XX/YY/ZZ periods; 0 picks 3 d_emb rounded up to even");
    cmd->add_option("--shots", o.shots, "Shots per rate (per instance for erasure)");
    cmd->add_option("--instances", o.instances, "Erasure instances M");
    cmd->add_option("--metric", o.metrics, "any_logical | per_observable | specific_logical")->delimiter(',');
    cmd->add_option("--seed", o.seed);
    cmd->add_flag("--uniform-weights", o.uniform, "Unit edge weights in the matching graph");
    cmd->add_flag("--no-early-exit", o.full_shots, "Erasure: decode all N shots of every instance");
    cmd->add_flag("--randomize-records", o.randomize_records, "Erasure: also replace erased outcomes by coin flips");
    cmd->add_flag("--stable", o.stable, "Write zero wall times so reruns are byte-identical");
    cmd->add_option("--threads", o.threads, "Worker threads (default FLOQUETFORGE_THREADS or all cores)");
    cmd->add_option("--out", o.out, "CSV output path");
    cmd->add_option("--svg", o.svg, "SVG plot path");
}

std::vector<ff::ResultRow> execute(const RunOptions &o) {
    std::vector<ff::ResultRow> rows;
    for (const auto &id : o.codes) {
        ff::ExperimentConfig cfg;
        cfg.code = id;
        cfg.noise.model = ff::parse_noise_model(o.noise);
        cfg.rates = o.rates;
        std::sort(cfg.rates.begin(), cfg.rates.end());
        cfg.periods = o.periods;
        cfg.shots = o.shots;
        cfg.instances = o.instances;
        cfg.metrics.clear();
        for (const auto &m : o.metrics) {
            cfg.metrics.push_back(ff::parse_metric(m));
        }
        cfg.seed = o.seed;
        cfg.weights = o.uniform ? ff::WeightMode::Uniform : ff::WeightMode::Probability;
        cfg.early_exit = !o.full_shots;
        cfg.randomize_records = o.randomize_records;
        cfg.threads = o.threads;
        auto code = ff::load_code(id);
        for (auto &r : ff::run_experiment(code, cfg)) {
            if (o.stable) {
                r.wall_time = 0;
            }
            std::fprintf(stderr, "%s %s %g %s LER=%.5f [%.5f, %.5f] (%llu/%llu) %.1fs\n", r.code.c_str(),
                         r.model.c_str(), r.rate, r.metric.c_str(), r.ler, r.ler_low, r.ler_high,
                         static_cast<unsigned long long>(r.failures), static_cast<unsigned long long>(r.shots),
                         r.wall_time);
            rows.push_back(r);
        }
    }
    return rows;
}

void output_rows(const RunOptions &o, const std::vector<ff::ResultRow> &rows) {
    if (!o.out.empty()) {
        ff::emit_report(rows, o.out, o.svg);
    } else {
        std::cout << ff::rows_to_csv(rows);
        if (!o.svg.empty()) {
            write_file(o.svg, ff::render_report_svg(rows, rows.front().metric));
        }
    }
}

void print_crossings(const std::vector<ff::ResultRow> &rows) {
    std::vector<std::string> metrics;
    for (const auto &r : rows) {
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) {
            metrics.push_back(r.metric);
        }
    }
    for (const auto &m : metrics) {
        auto c = ff::threshold_crossing(rows, m);
        if (c.degenerate) {
            std::printf("crossing %s: identical curves\n", m.c_str());
        } else if (!c.found) {
            std::printf("crossing %s: no crossing in range\n", m.c_str());
        } else {
            std::printf("crossing %s: [%.5g, %.5g]\n", m.c_str(), c.low, c.high);
        }
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hyperbolic Floquet code construction, simulation and decoding"};
    app.set_config("--config", "", "Key = value file mirroring the command-line flags");
    app.require_subcommand(1);

    // group
    auto *group = app.add_subcommand("group", "Finitely presented group tools");
    group->require_subcommand(1);
    int gp = 8, gq = 3;
    std::string rel_path, table_out;
    std::size_t max_cosets = 4'000'000, max_index = 100;
    auto *enumerate = group->add_subcommand("enumerate", "Todd-Coxeter enumeration of a relator file");
    enumerate->add_option("--p", gp);
    enumerate->add_option("--q", gq);
    enumerate->add_option("--subgroup", rel_path, "Relator file")->required();
    enumerate->add_option("--max-cosets", max_cosets);
    enumerate->add_option("--out", table_out, "Coset table output");
    enumerate->callback([&] {
        auto file = ff::load_relator_file(rel_path);
        if (file.p != gp || file.q != gq) {
            std::fprintf(stderr, "note: relator file declares {%d,%d}\n", file.p, file.q);
        }
        auto table = ff::todd_coxeter(ff::triangle_rotation_presentation(file.p, file.q), file.subgroup, max_cosets);
        std::printf("index %zu regular %s\n", table.size(), table.is_regular() ? "yes" : "no");
        if (!table_out.empty()) {
            std::ostringstream ss;
            ff::write_coset_table(ss, table);
            write_file(table_out, ss.str());
        }
    });
    auto *search = group->add_subcommand("search", "Low-index normal subgroups of the rotation triangle group");
    search->add_option("--p", gp);
    search->add_option("--q", gq);
    search->add_option("--max-index", max_index);
    search->callback([&] {
        auto found = ff::low_index_normal_search(ff::triangle_rotation_presentation(gp, gq), max_index);
        for (const auto &t : found) {
            std::printf("index %zu\n", t.size());
        }
    });

    // tess
    auto *tess = app.add_subcommand("tess", "Tessellation tools");
    tess->require_subcommand(1);
    std::string code_id, in_path, out_path;
    int level = 2, size_px = 800;
    auto *build = tess->add_subcommand("build", "Tessellation of a relator file or shipped code");
    auto *bsub = build->add_option("--subgroup", rel_path, "Relator file");
    build->add_option("--code", code_id, "Shipped code id (H16, H16-f3, ...)")->excludes(bsub);
    build->add_option("--group", gp, "Ignored when the relator file declares p");
    build->add_option("--out", out_path)->required();
    build->callback([&] {
        ff::Tessellation t;
        if (!code_id.empty()) {
            t = ff::load_code(code_id, false).tess;
        } else if (!rel_path.empty()) {
            t = ff::build_tessellation(ff::load_relator_file(rel_path));
        } else {
            throw CLI::ValidationError("tess build", "needs --subgroup or --code");
        }
        ff::save_tessellation(t, out_path);
        print_params(t, 0);
    });
    auto *draw = tess->add_subcommand("draw", "SVG drawing in the Poincare disk");
    draw->add_option("--in", in_path)->required();
    draw->add_option("--out", out_path)->required();
    draw->add_option("--size", size_px);
    draw->callback([&] { write_file(out_path, ff::render_svg(ff::load_tessellation(in_path), size_px)); });
    auto *fg = tess->add_subcommand("finegrain", "Level-l fine-graining");
    fg->add_option("--in", in_path)->required();
    fg->add_option("--level", level)->required();
    fg->add_option("--out", out_path)->required();
    fg->callback([&] {
        auto t = ff::fine_grain(ff::load_tessellation(in_path), level);
        ff::save_tessellation(t, out_path);
        print_params(t, 0);
    });

    // distance
    auto *distance = app.add_subcommand("distance", "Embedded distance and a witness cycle");
    distance->add_option("--in", in_path)->required();
    distance->callback([&] {
        auto t = ff::load_tessellation(in_path);
        auto w = ff::embedded_distance_witness(t);
        print_params(t, w.length);
        std::printf("witness %s color %d edges", w.cocycle ? "cocycle" : "cycle", w.color);
        for (auto e : w.primal_edges) {
            std::printf(" %u", e);
        }
        std::printf("\n");
    });

    // circuit
    auto *circuit = app.add_subcommand("circuit", "Memory circuit in the .stim grammar");
    int periods = 2;
    std::string noise = "none";
    double rate = 0;
    std::uint64_t seed = 1;
    circuit->add_option("--in", in_path)->required();
    circuit->add_option("--rounds,--periods", periods, "XX/YY/ZZ periods (even)");
    circuit->add_option("--noise", noise, "none | phenomenological | em3 | sdem3 | erasure");
    auto *cp = circuit->add_option("--p", rate);
    circuit->add_option("--eps", rate)->excludes(cp);
    circuit->add_option("--seed", seed, "Erasure pattern seed");
    circuit->add_option("--out", out_path)->required();
    circuit->callback([&] {
        auto c = ff::build_floquet_circuit(ff::load_tessellation(in_path), {.periods = periods});
        if (noise != "none") {
            auto model = ff::parse_noise_model(noise);
            if (model == ff::NoiseModelKind::Erasure) {
                std::mt19937_64 rng(seed);
                c = ff::sample_erasure(c, rate, rng).second;
            } else {
                c = ff::apply_noise(c, {model, rate});
            }
        }
        write_file(out_path, ff::export_circuit_text(c));
        std::printf("qubits %u measurements %u detectors %u observables %u\n", c.qubit_count, c.measurement_count,
                    c.detector_count, c.observable_count);
    });

    // sample
    auto *sample = app.add_subcommand("sample", "Frame-sample detector and observable flips");
    std::string circ_path, obs_out, dem_out;
    std::size_t shots = 1000;
    int threads = 0;
    sample->add_option("--circuit", circ_path)->required();
    sample->add_option("--shots", shots);
    sample->add_option("--seed", seed);
    sample->add_option("--threads", threads);
    sample->add_option("--out", out_path, "Detector bit matrix")->required();
    sample->add_option("--obs-out", obs_out, "Observable bit matrix");
    sample->add_option("--dem-out", dem_out, "Detector error model text");
    sample->callback([&] {
        auto c = ff::import_circuit_text(read_file(circ_path));
        auto s = ff::frame_sample(c, shots, seed, threads > 0 ? threads : ff::default_thread_count());
        ff::write_bit_matrix(out_path, s.detectors, seed);
        if (!obs_out.empty()) {
            ff::write_bit_matrix(obs_out, s.observables, seed);
        }
        if (!dem_out.empty()) {
            write_file(dem_out, ff::dem_to_text(ff::build_dem(c)));
        }
    });

    // decode
    auto *decode = app.add_subcommand("decode", "Matching decoder over a detector error model");
    std::string dem_path, shots_path, obs_path;
    bool uniform = false;
    decode->add_option("--dem", dem_path)->required();
    decode->add_option("--shots", shots_path, "Detector bit matrix")->required();
    decode->add_option("--out", out_path, "Predicted observable bit matrix")->required();
    decode->add_option("--obs", obs_path, "Actual observables; prints the logical error rates");
    decode->add_option("--threads", threads);
    decode->add_flag("--uniform-weights", uniform);
    decode->callback([&] {
        auto dem = ff::dem_from_text(read_file(dem_path));
        auto g = ff::dem_to_matching_graph(dem, uniform ? ff::WeightMode::Uniform : ff::WeightMode::Probability);
        std::uint64_t s = 0;
        auto dets = ff::read_bit_matrix(shots_path, &s);
        auto pred = ff::decode_shots(g, dets, threads > 0 ? threads : ff::default_thread_count());
        ff::write_bit_matrix(out_path, pred, s);
        if (!obs_path.empty()) {
            auto miss = ff::mispredictions(pred, ff::read_bit_matrix(obs_path));
            std::printf("any_logical %.6f per_observable %.6f\n", ff::metric_any_logical(miss),
                        ff::metric_per_observable(miss));
        }
    });

    // run / sweep
    RunOptions run_opts, sweep_opts;
    auto *run = app.add_subcommand("run", "Logical error rates of one code");
    add_run_options(run, run_opts, false);
    run->callback([&] { output_rows(run_opts, execute(run_opts)); });
    auto *sweep = app.add_subcommand("sweep", "Logical error rates of a code family and their crossings");
    add_run_options(sweep, sweep_opts, true);
    sweep->callback([&] {
        auto rows = execute(sweep_opts);
        output_rows(sweep_opts, rows);
        print_crossings(rows);
    });

    // report
    auto *report = app.add_subcommand("report", "Pivot table, crossings and plot of a result CSV");
    std::string metric;
    std::string svg_path;
    report->add_option("--in", in_path)->required();
    report->add_option("--metric", metric, "Metric to tabulate (default: first in file)");
    report->add_option("--svg", svg_path);
    report->callback([&] {
        auto rows = ff::rows_from_csv(read_file(in_path));
        if (rows.empty()) {
            throw ff::IOFailure("no rows in " + in_path);
        }
        const std::string m = metric.empty() ? rows.front().metric : metric;
        std::cout << ff::pivot_table(rows, m);
        print_crossings(rows);
        if (!svg_path.empty()) {
            write_file(svg_path, ff::render_report_svg(rows, m));
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
