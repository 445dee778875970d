// Copyright 2026 The qsurrogate Authors
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

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsurrogate/backprop.hpp"
#include "qsurrogate/circuit_io.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/experiment.hpp"
#include "qsurrogate/free_fermion.hpp"
#include "qsurrogate/io_util.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"
#include "qsurrogate/tensor.hpp"

namespace fs = std::filesystem;
using namespace qsurrogate;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitTolerance = 2;
constexpr int kExitConfig = 3;

struct GlobalOptions {
    std::vector<std::string> configs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> engine;
    std::optional<std::string> out;
    std::size_t jobs = 1;
    std::optional<double> tolerance;
};

ExperimentConfig load_config(const std::string &path, const GlobalOptions &g, bool batch) {
    ExperimentConfig cfg = load_experiment_config(path);
    ConfigOverrides o;
    o.seed = g.seed;
    o.engine = g.engine;
    o.tolerance = g.tolerance;
    if (g.out) {
        o.out_dir = batch ? fs::path(*g.out) / cfg.name : fs::path(*g.out);
    }
    apply_overrides(cfg, o);
    return cfg;
}

std::vector<ExperimentConfig> load_configs(const GlobalOptions &g) {
    if (g.configs.empty()) {
        fail(ErrorKind::Configuration, "at least one --config is required");
    }
    std::vector<ExperimentConfig> out;
    for (const auto &p : g.configs) {
        out.push_back(load_config(p, g, g.configs.size() > 1));
    }
    return out;
}

/// Runs fn over [0, count) on up to jobs threads; the first failure is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex lock;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> guard(lock);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::max<std::size_t>(1, std::min(jobs, count));
    for (std::size_t t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

fs::path out_dir(const GlobalOptions &g, const ExperimentConfig *cfg) {
    if (g.out) {
        return *g.out;
    }
    return cfg ? cfg->out_dir : fs::path("out");
}

int cmd_classify(const GlobalOptions &g, const std::vector<std::string> &circuits) {
    std::vector<std::pair<std::string, CircuitIR>> items;
    ClassifierConfig cfg;
    for (const auto &p : circuits) {
        items.emplace_back(p, load_circuit(p));
    }
    for (const auto &p : g.configs) {
        const ExperimentConfig ec = load_config(p, g, false);
        cfg = ec.classifier;
        items.emplace_back(ec.name, build_circuit(ec));
    }
    if (items.empty()) {
        fail(ErrorKind::Configuration, "classify needs a circuit file or --config");
    }
    ojson all = ojson::array();
    for (const auto &[name, c] : items) {
        const ResourceProfile prof = profile(c);
        const ClassLabel label = classify(prof, cfg);
        ojson j;
        j["circuit"] = name;
        j["label"] = class_tag_name(label.label);
        j["justification"] = rule_name(label.justification);
        j["engine"] = engine_name(label.recommended_engine);
        j["detail"] = label.detail;
        j["profile"] = {{"n", prof.n},
                        {"depth_encoding", prof.depth_encoding},
                        {"depth_trainable", prof.depth_trainable},
                        {"t_count_encoding", prof.t_count_encoding},
                        {"t_count_trainable", prof.t_count_trainable},
                        {"is_matchgate", prof.is_matchgate},
                        {"architecture", architecture_name(prof.architecture)}};
        all.push_back(j);
    }
    const std::string text = all.dump(2) + "\n";
    std::cout << text;
    if (g.out) {
        fs::create_directories(*g.out);
        write_file_atomic(fs::path(*g.out) / "classification.json", text);
    }
    return kExitOk;
}

int cmd_extract(const GlobalOptions &g, std::size_t max_chi, double svd_tol) {
    const auto cfgs = load_configs(g);
    int status = kExitOk;
    for (const auto &cfg : cfgs) {
        const CircuitIR c = build_circuit(cfg);
        const ResourceProfile prof = profile(c);
        const ClassLabel label = classify(prof, cfg.classifier);
        Engine engine = label.recommended_engine;
        if (cfg.engine != "auto") {
            engine = cfg.engine == "none" ? Engine::None : parse_engine(cfg.engine);
            std::string why;
            if (!engine_admits(engine, prof, cfg.classifier, &why)) {
                fail(ErrorKind::Configuration, "engine " + cfg.engine + " rejected: " + why + "; classifier: " +
                                                   std::string(rule_name(label.justification)) + " " + label.detail);
            }
        }
        if (engine == Engine::None) {
            fail(ErrorKind::Configuration, "circuit is " + std::string(class_tag_name(label.label)) +
                                               "; no engine can extract a surrogate (" + label.detail + ")");
        }
        Rng rng(derive_seed(cfg.seed, 4));
        const auto theta = random_angles(rng, c.num_theta());
        const auto t0 = std::chrono::steady_clock::now();
        std::optional<FunctionSurrogate> s;
        double truncation_bound = 0.0;
        switch (engine) {
            case Engine::Mps: {
                ExtractOptions opts;
                opts.classifier = cfg.classifier;
                s.emplace(extract_function_mps(c, theta, opts));
                if (max_chi > 0 || svd_tol > 0.0) {
                    auto t = truncate(*s, max_chi > 0 ? max_chi : std::size_t{1} << 30, svd_tol);
                    truncation_bound = t.evaluation_bound;
                    s.emplace(std::move(t.surrogate));
                }
                break;
            }
            case Engine::PauliBackprop: {
                BackpropOptions opts;
                opts.domain = cfg.task.domain;
                s.emplace(c.architecture == Architecture::Flipped ? flipped_surrogate(c, theta, opts)
                                                                  : expansion_surrogate(backpropagate(c, theta, opts), c));
                break;
            }
            case Engine::FreeFermion:
                s.emplace(c.architecture == Architecture::Flipped ? fermion_flipped_surrogate(c, theta)
                                                                  : fermion_surrogate(c, theta));
                break;
            case Engine::None:
                break;
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        Rng probe(derive_seed(cfg.seed, 3));
        double residual = 0.0;
        for (std::size_t k = 0; k < cfg.probe_points; ++k) {
            const auto x = random_inputs(probe, c.num_inputs(), cfg.task.domain);
            residual = std::max(residual, std::abs(s->evaluate(x) - expectation(c, x, theta)));
        }
        const fs::path dir = cfg.out_dir;
        fs::create_directories(dir);
        save_circuit(c, dir / "circuit.json");
        save_surrogate(*s, dir / "surrogate.json");
        ojson j;
        j["engine"] = engine_name(engine);
        j["theta"] = theta;
        j["terms"] = s->term_count();
        j["bond_dims"] = s->bond_dims();
        j["truncation_bound"] = truncation_bound;
        j["residual"] = residual;
        write_file_atomic(dir / "extract.json", j.dump(2) + "\n");
        std::printf("%s engine=%s terms=%zu residual=%s time=%.3fs\n", cfg.name.c_str(),
                    std::string(engine_name(engine)).c_str(), s->term_count(), format_double(residual).c_str(),
                    seconds);
        if (residual > cfg.surrogate_tolerance + truncation_bound) {
            status = kExitTolerance;
        }
    }
    return status;
}

int cmd_train(const GlobalOptions &g) {
    const auto cfgs = load_configs(g);
    std::vector<RunReport> reports(cfgs.size());
    parallel_for(cfgs.size(), g.jobs, [&](std::size_t i) { reports[i] = run_experiment(cfgs[i]); });
    const fs::path dir = g.out ? fs::path(*g.out) : cfgs.front().out_dir;
    fs::create_directories(dir);
    emit_report(reports, ReportFormat::CsvSummary, dir / "summary.csv");
    emit_report(reports, ReportFormat::Markdown, dir / "summary.md");
    std::cout << reports_to_markdown(reports);
    bool ok = true;
    for (const auto &r : reports) {
        ok = ok && r.within_tolerance;
    }
    return ok ? kExitOk : kExitTolerance;
}

int cmd_verify(const GlobalOptions &g, const std::vector<std::string> &dirs) {
    std::vector<fs::path> targets(dirs.begin(), dirs.end());
    if (targets.empty()) {
        if (!g.configs.empty()) {
            for (const auto &cfg : load_configs(g)) {
                targets.push_back(cfg.out_dir);
            }
        } else if (g.out) {
            targets.emplace_back(*g.out);
        }
    }
    if (targets.empty()) {
        fail(ErrorKind::Configuration, "verify needs a run directory, --out or --config");
    }
    int status = kExitOk;
    for (const auto &d : targets) {
        if (!fs::exists(d / "report.json")) {
            fail(ErrorKind::Configuration, "no report.json in " + d.string());
        }
        const VerifyOutcome v = verify_run(d);
        for (const auto &m : v.mismatches) {
            std::printf("%s: MISMATCH %s\n", d.string().c_str(), m.c_str());
        }
        std::printf("%s: %s\n", d.string().c_str(),
                    v.ok() ? "verified" : (v.mismatches.empty() ? "tolerance violated" : "not reproducible"));
        if (!v.ok()) {
            status = kExitTolerance;
        }
    }
    return status;
}

int cmd_bench(const GlobalOptions &g, std::size_t repeats) {
    const auto cfgs = load_configs(g);
    std::string csv = "name,engine,admitted,extract_seconds,eval_seconds_per_point,oracle_seconds_per_point,residual\n";
    for (const auto &cfg : cfgs) {
        const CircuitIR c = build_circuit(cfg);
        const ResourceProfile prof = profile(c);
        Rng rng(derive_seed(cfg.seed, 4));
        const auto theta = random_angles(rng, c.num_theta());
        std::vector<std::vector<double>> xs;
        Rng probe(derive_seed(cfg.seed, 3));
        for (std::size_t k = 0; k < std::max<std::size_t>(cfg.probe_points, 1); ++k) {
            xs.push_back(random_inputs(probe, c.num_inputs(), cfg.task.domain));
        }
        using clock = std::chrono::steady_clock;
        auto t0 = clock::now();
        std::vector<double> ref;
        for (std::size_t r = 0; r < repeats; ++r) {
            ref.clear();
            for (const auto &x : xs) {
                ref.push_back(expectation(c, x, theta));
            }
        }
        const double oracle = std::chrono::duration<double>(clock::now() - t0).count() /
                              static_cast<double>(repeats * xs.size());
        for (Engine e : {Engine::Mps, Engine::PauliBackprop, Engine::FreeFermion}) {
            const bool admitted = engine_admits(e, prof, cfg.classifier);
            std::string row = cfg.name + "," + std::string(engine_name(e)) + "," + (admitted ? "true" : "false");
            if (!admitted) {
                csv += row + ",,,,\n";
                continue;
            }
            t0 = clock::now();
            std::optional<FunctionSurrogate> s;
            for (std::size_t r = 0; r < repeats; ++r) {
                if (e == Engine::Mps) {
                    ExtractOptions opts;
                    opts.classifier = cfg.classifier;
                    s.emplace(extract_function_mps(c, theta, opts));
                } else if (e == Engine::PauliBackprop) {
                    BackpropOptions opts;
                    opts.domain = cfg.task.domain;
                    s.emplace(c.architecture == Architecture::Flipped
                                  ? flipped_surrogate(c, theta, opts)
                                  : expansion_surrogate(backpropagate(c, theta, opts), c));
                } else {
                    s.emplace(c.architecture == Architecture::Flipped ? fermion_flipped_surrogate(c, theta)
                                                                      : fermion_surrogate(c, theta));
                }
            }
            const double extract = std::chrono::duration<double>(clock::now() - t0).count() /
                                   static_cast<double>(repeats);
            t0 = clock::now();
            double residual = 0.0;
            for (std::size_t r = 0; r < repeats; ++r) {
                for (std::size_t k = 0; k < xs.size(); ++k) {
                    residual = std::max(residual, std::abs(s->evaluate(xs[k]) - ref[k]));
                }
            }
            const double eval = std::chrono::duration<double>(clock::now() - t0).count() /
                                static_cast<double>(repeats * xs.size());
            char buf[256];
            std::snprintf(buf, sizeof buf, ",%.6e,%.6e,%.6e,%s\n", extract, eval, oracle,
                          format_double(residual).c_str());
            csv += row + buf;
        }
    }
    std::cout << csv;
    const fs::path dir = out_dir(g, &cfgs.front());
    fs::create_directories(dir);
    write_file_atomic(dir / "bench.csv", csv);
    return kExitOk;
}

int cmd_generate(const GlobalOptions &g) {
    const auto cfgs = load_configs(g);
    for (const auto &cfg : cfgs) {
        const CircuitIR c = build_circuit(cfg);
        TaskSpec task = cfg.task;
        task.seed = derive_seed(cfg.seed, 1);
        const fs::path dir = cfg.out_dir;
        fs::create_directories(dir);
        save_circuit(c, dir / "circuit.json");
        if (cfg.dataset_path) {
            save_dataset(load_dataset(*cfg.dataset_path, cfg.task.domain), dir / "dataset.csv");
        } else {
            const GeneratedTask t = generate_task(task, c);
            save_dataset(t.data, dir / "dataset.csv");
            write_file_atomic(dir / "task.json", task_provenance_json(task, t));
        }
        std::printf("%s: wrote %s\n", cfg.name.c_str(), dir.string().c_str());
    }
    return kExitOk;
}

int exit_code_for(const Error &e) {
    switch (e.kind()) {
        case ErrorKind::Configuration:
        case ErrorKind::Validation:
        case ErrorKind::Io:
        case ErrorKind::Classification:
            return kExitConfig;
        default:
            return kExitInternal;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Classical surrogates for parametrized quantum circuits"};
    app.require_subcommand(1);
    GlobalOptions g;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> engine;
    std::optional<std::string> out;
    std::optional<double> tolerance;

    auto add_globals = [&](CLI::App *sub) {
        sub->add_option("--config", g.configs, "Experiment config (repeatable)");
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--engine", engine, "auto, mps, pauli_backprop, free_fermion or none");
        sub->add_option("--out", out, "Output directory");
        sub->add_option("--jobs", g.jobs, "Parallel runs")->check(CLI::PositiveNumber);
        sub->add_option("--tolerance", tolerance, "Surrogate-vs-oracle tolerance");
    };

    std::vector<std::string> positional;
    auto *classify_cmd = app.add_subcommand("classify", "Classify circuits and recommend an engine");
    add_globals(classify_cmd);
    classify_cmd->add_option("circuits", positional, "Circuit JSON files");

    std::size_t max_chi = 0;
    double svd_tol = 0.0;
    auto *extract_cmd = app.add_subcommand("extract", "Extract a surrogate at seeded parameters");
    add_globals(extract_cmd);
    extract_cmd->add_option("--max-chi", max_chi, "Truncate tensor trains to this bond dimension");
    extract_cmd->add_option("--svd-tol", svd_tol, "Relative singular-value cutoff for truncation");

    auto *train_cmd = app.add_subcommand("train", "Run the full experiment pipeline");
    add_globals(train_cmd);

    auto *verify_cmd = app.add_subcommand("verify", "Recompute a run's reported numbers from its artifacts");
    add_globals(verify_cmd);
    verify_cmd->add_option("dirs", positional, "Run directories");

    std::size_t repeats = 3;
    auto *bench_cmd = app.add_subcommand("bench", "Time every admissible engine against the oracle");
    add_globals(bench_cmd);
    bench_cmd->add_option("--repeats", repeats, "Timing repetitions")->check(CLI::PositiveNumber);

    auto *generate_cmd = app.add_subcommand("generate", "Write the circuit and dataset a config describes");
    add_globals(generate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    g.seed = seed;
    g.engine = engine;
    g.out = out;
    g.tolerance = tolerance;

    try {
        if (*classify_cmd) {
            return cmd_classify(g, positional);
        }
        if (*extract_cmd) {
            return cmd_extract(g, max_chi, svd_tol);
        }
        if (*train_cmd) {
            return cmd_train(g);
        }
        if (*verify_cmd) {
            return cmd_verify(g, positional);
        }
        if (*bench_cmd) {
            return cmd_bench(g, repeats);
        }
        if (*generate_cmd) {
            return cmd_generate(g);
        }
    } catch (const Error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}
