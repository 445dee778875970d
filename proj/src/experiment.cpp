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

#include "qsurrogate/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"
#include "qsurrogate/backprop.hpp"
#include "qsurrogate/circuit_io.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/free_fermion.hpp"
#include "qsurrogate/io_util.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"
#include "qsurrogate/tensor.hpp"

namespace qsurrogate {

using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kKnownKeys = {
    "run.name",           "run.seed",           "run.out",
    "circuit.path",       "circuit.generator",  "circuit.qubits",
    "circuit.inputs",     "circuit.depth",      "circuit.t",
    "circuit.gates",      "circuit.layers",     "circuit.encoding_givens",
    "data.path",          "data.generator",     "data.samples",
    "data.noise",         "data.domain",        "data.replacement",
    "data.terms",         "engine.name",        "classifier.c_depth",
    "classifier.c_t",     "solver.ridge",       "solver.basis",
    "solver.optimizer",   "solver.iterations",  "solver.learning_rate",
    "solver.fd_step",     "tolerance.surrogate", "tolerance.reduction",
    "tolerance.probes",
};

const std::vector<std::string> kCircuitGenerators = {"brickwork", "doped-clifford", "flipped", "matchgate",
                                                     "flipped-matchgate"};
const std::vector<std::string> kTaskGenerators = {"teacher", "sparse-fourier"};

bool one_of(const std::string &v, const std::vector<std::string> &set) {
    return std::find(set.begin(), set.end(), v) != set.end();
}

std::uint32_t count(const ConfigTable &t, const std::string &key, std::uint32_t fallback) {
    const auto v = t.integer(key, fallback);
    if (v < 0 || v > 1'000'000) {
        fail(ErrorKind::Configuration, "'" + key + "' is out of range");
    }
    return static_cast<std::uint32_t>(v);
}

std::filesystem::path resolve(const ConfigTable &t, const std::string &p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !t.base_dir().empty()) {
        path = t.base_dir() / path;
    }
    return path;
}

/// Mirrors resolved settings back into the table so the hash covers overrides.
ConfigTable canonical_table(const ExperimentConfig &c) {
    ConfigTable t;
    t.set("run.name", c.name);
    t.set("run.seed", static_cast<double>(c.seed));
    if (c.circuit_path) {
        t.set("circuit.path", c.circuit_path->filename().string());
    } else {
        t.set("circuit.generator", c.circuit.generator);
        t.set("circuit.qubits", static_cast<double>(c.circuit.qubits));
        t.set("circuit.inputs", static_cast<double>(c.circuit.inputs));
        t.set("circuit.depth", static_cast<double>(c.circuit.depth));
        t.set("circuit.t", static_cast<double>(c.circuit.t));
        t.set("circuit.gates", static_cast<double>(c.circuit.gates));
        t.set("circuit.layers", static_cast<double>(c.circuit.layers));
        t.set("circuit.encoding_givens", c.circuit.encoding_givens);
    }
    if (c.dataset_path) {
        t.set("data.path", c.dataset_path->filename().string());
    } else {
        t.set("data.generator", c.task.generator);
        t.set("data.samples", static_cast<double>(c.task.samples));
        t.set("data.noise", c.task.noise);
        t.set("data.replacement", c.task.with_replacement);
        t.set("data.terms", static_cast<double>(c.task.sparse_terms));
    }
    t.set("data.domain", std::string(input_domain_name(c.task.domain)));
    t.set("engine.name", c.engine);
    t.set("classifier.c_depth", c.classifier.c_depth);
    t.set("classifier.c_t", c.classifier.c_t);
    t.set("solver.ridge", c.ridge);
    t.set("solver.basis", c.basis);
    t.set("solver.optimizer", std::string(optimizer_name(c.optimizer.method)));
    t.set("solver.iterations", static_cast<double>(c.optimizer.max_iterations));
    t.set("solver.learning_rate", c.optimizer.learning_rate);
    t.set("solver.fd_step", c.optimizer.fd_step);
    t.set("tolerance.surrogate", c.surrogate_tolerance);
    t.set("tolerance.reduction", c.reduction_tolerance);
    t.set("tolerance.probes", static_cast<double>(c.probe_points));
    return t;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Engine resolve_engine(const ExperimentConfig &cfg, const ResourceProfile &prof, const ClassLabel &label) {
    if (cfg.engine == "auto") {
        return label.recommended_engine;
    }
    const Engine e = cfg.engine == "none" ? Engine::None : parse_engine(cfg.engine);
    std::string why;
    if (!engine_admits(e, prof, cfg.classifier, &why)) {
        fail(ErrorKind::Configuration, "engine " + cfg.engine + " cannot process this circuit (" + why +
                                           "); classifier says " + std::string(class_tag_name(label.label)) + " by " +
                                           std::string(rule_name(label.justification)) + ": " + label.detail);
    }
    return e;
}

FunctionSurrogate make_surrogate(Engine e, const CircuitIR &c, std::span<const double> theta,
                                 const ExperimentConfig &cfg) {
    switch (e) {
        case Engine::Mps: {
            ExtractOptions opts;
            opts.classifier = cfg.classifier;
            return extract_function_mps(c, theta, opts);
        }
        case Engine::PauliBackprop: {
            BackpropOptions opts;
            opts.domain = cfg.task.domain;
            if (c.architecture == Architecture::Flipped) {
                return flipped_surrogate(c, theta, opts);
            }
            return expansion_surrogate(backpropagate(c, theta, opts), c);
        }
        case Engine::FreeFermion:
            return c.architecture == Architecture::Flipped ? fermion_flipped_surrogate(c, theta)
                                                           : fermion_surrogate(c, theta);
        case Engine::None:
            break;
    }
    fail(ErrorKind::Configuration, "no surrogate engine selected");
}

std::optional<FeatureBasis> convex_basis(const std::string &kind, std::size_t d, const FunctionSurrogate *s) {
    if (kind == "parity") {
        return parity_basis(static_cast<std::uint32_t>(d));
    }
    if (kind == "surrogate" && s) {
        return surrogate_basis(*s);
    }
    return std::nullopt;
}

std::string choose_basis(const ExperimentConfig &cfg, std::size_t d, const FunctionSurrogate *s) {
    if (cfg.basis != "auto") {
        if (cfg.basis == "parity" && cfg.task.domain != InputDomain::Binary) {
            fail(ErrorKind::Configuration, "the parity basis needs binary inputs");
        }
        if (cfg.basis == "surrogate" && !s) {
            fail(ErrorKind::Configuration, "the surrogate basis needs a surrogate engine");
        }
        if (cfg.basis != "parity" && cfg.basis != "surrogate" && cfg.basis != "none") {
            fail(ErrorKind::Configuration, "unknown basis '" + cfg.basis + "'");
        }
        return cfg.basis;
    }
    if (cfg.task.domain == InputDomain::Binary && d <= 10) {
        return "parity";
    }
    if (s) {
        if (const auto *tt = std::get_if<TensorTrain>(&s->representation()); tt && tt->leg_inputs.size() > 8) {
            return "none";
        }
        return "surrogate";
    }
    return "none";
}

/// Everything the report states that can be recomputed from artifacts.
struct Metrics {
    double oracle_risk = 0.0;
    std::optional<double> surrogate_risk;
    std::optional<double> surrogate_residual;
    std::optional<double> convex_risk;
    std::optional<double> reduction_residual;
};

Metrics compute_metrics(const CircuitIR &c, const TrainingSet &data, std::span<const double> theta,
                        const FunctionSurrogate *s, const std::vector<std::vector<double>> &probes,
                        const std::optional<FeatureBasis> &basis, const Eigen::VectorXd &coefficients) {
    Metrics m;
    m.oracle_risk = circuit_risk(c, theta, data);
    if (s) {
        std::vector<double> pred;
        double residual = 0.0;
        for (const auto &smp : data.samples) {
            const double v = s->evaluate(smp.x);
            pred.push_back(v);
            residual = std::max(residual, std::abs(v - expectation(c, smp.x, theta)));
        }
        for (const auto &x : probes) {
            residual = std::max(residual, std::abs(s->evaluate(x) - expectation(c, x, theta)));
        }
        m.surrogate_risk = empirical_risk(pred, data);
        m.surrogate_residual = residual;
    }
    if (basis) {
        m.convex_risk = empirical_risk(*basis, coefficients, data);
    }
    if (c.architecture == Architecture::Flipped && 2 * c.n <= OracleConfig{}.max_qubits && c.zero_initial_state()) {
        m.reduction_residual = verify_reduction(c, data, {std::vector<double>(theta.begin(), theta.end())}).max_discrepancy;
    }
    return m;
}

ojson opt_json(const std::optional<double> &v) {
    return v ? ojson(*v) : ojson(nullptr);
}

std::optional<double> opt_from(const ojson &j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

}  // namespace

std::string ExperimentConfig::config_hash() const {
    return hex64(fnv1a64(canonical));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream).
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

ExperimentConfig experiment_config_from_table(const ConfigTable &t) {
    t.require_known(kKnownKeys);
    ExperimentConfig c;
    c.name = t.string("run.name", "run");
    const auto seed = t.integer("run.seed", -1);
    const bool randomized = !t.has("circuit.path") || !t.has("data.path");
    if (seed < 0 && randomized) {
        fail(ErrorKind::Configuration, "run.seed is required when the circuit or data is generated");
    }
    c.seed = seed < 0 ? 0 : static_cast<std::uint64_t>(seed);
    c.out_dir = resolve(t, t.string("run.out", "out"));

    if (t.has("circuit.path")) {
        c.circuit_path = resolve(t, t.string("circuit.path", ""));
        if (!std::filesystem::exists(*c.circuit_path)) {
            fail(ErrorKind::Configuration, "circuit file not found: " + c.circuit_path->string());
        }
    }
    c.circuit.generator = t.string("circuit.generator", c.circuit.generator);
    c.circuit.qubits = count(t, "circuit.qubits", c.circuit.qubits);
    c.circuit.inputs = count(t, "circuit.inputs", c.circuit.qubits);
    c.circuit.depth = count(t, "circuit.depth", c.circuit.depth);
    c.circuit.t = count(t, "circuit.t", c.circuit.t);
    c.circuit.gates = count(t, "circuit.gates", c.circuit.gates);
    c.circuit.layers = count(t, "circuit.layers", c.circuit.layers);
    c.circuit.encoding_givens = t.boolean("circuit.encoding_givens", false);
    if (!c.circuit_path && !one_of(c.circuit.generator, kCircuitGenerators)) {
        fail(ErrorKind::Configuration, "unknown circuit generator '" + c.circuit.generator + "'");
    }

    if (t.has("data.path")) {
        c.dataset_path = resolve(t, t.string("data.path", ""));
        if (!std::filesystem::exists(*c.dataset_path)) {
            fail(ErrorKind::Configuration, "dataset file not found: " + c.dataset_path->string());
        }
    }
    c.task.generator = t.string("data.generator", c.task.generator);
    c.task.samples = count(t, "data.samples", static_cast<std::uint32_t>(c.task.samples));
    c.task.noise = t.number("data.noise", 0.0);
    c.task.domain = parse_input_domain(t.string("data.domain", "binary"));
    c.task.with_replacement = t.boolean("data.replacement", false);
    c.task.sparse_terms = count(t, "data.terms", static_cast<std::uint32_t>(c.task.sparse_terms));
    if (!c.dataset_path && !one_of(c.task.generator, kTaskGenerators)) {
        fail(ErrorKind::Configuration, "unknown data generator '" + c.task.generator + "'");
    }

    c.engine = t.string("engine.name", "auto");
    c.classifier.c_depth = t.number("classifier.c_depth", c.classifier.c_depth);
    c.classifier.c_t = t.number("classifier.c_t", c.classifier.c_t);
    c.classifier.input_domain = c.task.domain;

    c.ridge = t.number("solver.ridge", 0.0);
    c.basis = t.string("solver.basis", "auto");
    c.optimizer.method = parse_optimizer(t.string("solver.optimizer", "coordinate-descent"));
    c.optimizer.max_iterations = count(t, "solver.iterations", static_cast<std::uint32_t>(c.optimizer.max_iterations));
    c.optimizer.learning_rate = t.number("solver.learning_rate", c.optimizer.learning_rate);
    c.optimizer.fd_step = t.number("solver.fd_step", c.optimizer.fd_step);

    c.surrogate_tolerance = t.number("tolerance.surrogate", c.surrogate_tolerance);
    c.reduction_tolerance = t.number("tolerance.reduction", c.reduction_tolerance);
    c.probe_points = count(t, "tolerance.probes", static_cast<std::uint32_t>(c.probe_points));
    if (c.ridge < 0.0 || c.surrogate_tolerance < 0.0 || c.reduction_tolerance < 0.0) {
        fail(ErrorKind::Configuration, "ridge and tolerances must be non-negative");
    }
    if (c.engine != "auto" && c.engine != "none") {
        (void)parse_engine(c.engine);
    }
    c.canonical = canonical_table(c).canonical_text();
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path &path) {
    return experiment_config_from_table(ConfigTable::load(path));
}

void apply_overrides(ExperimentConfig &cfg, const ConfigOverrides &o) {
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.engine) {
        if (*o.engine != "auto" && *o.engine != "none") {
            (void)parse_engine(*o.engine);
        }
        cfg.engine = *o.engine;
    }
    if (o.out_dir) {
        cfg.out_dir = *o.out_dir;
    }
    if (o.tolerance) {
        if (*o.tolerance < 0.0) {
            fail(ErrorKind::Configuration, "tolerance must be non-negative");
        }
        cfg.surrogate_tolerance = *o.tolerance;
    }
    cfg.canonical = canonical_table(cfg).canonical_text();
}

CircuitIR build_circuit(const ExperimentConfig &cfg) {
    if (cfg.circuit_path) {
        return load_circuit(*cfg.circuit_path);
    }
    Rng rng(derive_seed(cfg.seed, 0));
    const CircuitSpec &s = cfg.circuit;
    if (s.qubits == 0 || s.qubits > OracleConfig{}.max_qubits) {
        fail(ErrorKind::Configuration, "circuit.qubits must be between 1 and " +
                                           std::to_string(OracleConfig{}.max_qubits));
    }
    if (s.generator == "brickwork") {
        return random_brickwork(s.qubits, std::max<std::uint32_t>(s.inputs, 1), s.depth, rng);
    }
    if (s.generator == "doped-clifford") {
        return random_doped_clifford(s.qubits, s.t, s.gates, rng);
    }
    if (s.generator == "flipped") {
        return random_flipped(s.qubits, s.layers, s.t, rng);
    }
    if (s.generator == "matchgate") {
        return random_matchgate(s.qubits, s.gates, s.layers, s.encoding_givens, rng);
    }
    if (s.generator == "flipped-matchgate") {
        return random_flipped_matchgate(s.qubits, s.layers, s.gates, rng);
    }
    fail(ErrorKind::Configuration, "unknown circuit generator '" + s.generator + "'");
}

RunReport run_experiment(const ExperimentConfig &cfg) {
    using clock = std::chrono::steady_clock;
    RunReport r;
    r.name = cfg.name;
    r.config_hash = cfg.config_hash();
    r.seed = cfg.seed;
    r.surrogate_tolerance = cfg.surrogate_tolerance;
    r.reduction_tolerance = cfg.reduction_tolerance;

    auto t0 = clock::now();
    const CircuitIR c = build_circuit(cfg);
    const ResourceProfile prof = profile(c);
    const ClassLabel label = classify(prof, cfg.classifier);
    r.class_label = class_tag_name(label.label);
    r.justification = rule_name(label.justification);
    r.recommended_engine = engine_name(label.recommended_engine);
    r.classifier_detail = label.detail;
    const Engine engine = resolve_engine(cfg, prof, label);
    r.engine_used = engine_name(engine);
    r.timings.classify = seconds_since(t0);

    t0 = clock::now();
    TaskSpec task = cfg.task;
    task.seed = derive_seed(cfg.seed, 1);
    TrainingSet data;
    std::string provenance = "{}\n";
    if (cfg.dataset_path) {
        data = load_dataset(*cfg.dataset_path, cfg.task.domain);
    } else {
        GeneratedTask g = generate_task(task, c);
        provenance = task_provenance_json(task, g);
        data = std::move(g.data);
    }
    if (data.dim() != c.num_inputs()) {
        fail(ErrorKind::Configuration, "dataset has " + std::to_string(data.dim()) + " inputs but the circuit reads " +
                                           std::to_string(c.num_inputs()));
    }
    r.timings.data = seconds_since(t0);

    t0 = clock::now();
    const RestrictedResult opt = restricted_optimize(c, data, cfg.optimizer, derive_seed(cfg.seed, 2));
    r.restricted_risk = opt.risk;
    r.optimizer_iterations = opt.iterations;
    r.optimizer_converged = opt.converged;
    r.timings.optimize = seconds_since(t0);

    t0 = clock::now();
    std::optional<FunctionSurrogate> surrogate;
    if (engine != Engine::None) {
        surrogate.emplace(make_surrogate(engine, c, opt.theta, cfg));
    }
    r.timings.extract = seconds_since(t0);

    t0 = clock::now();
    r.convex_basis = choose_basis(cfg, data.dim(), surrogate ? &*surrogate : nullptr);
    std::optional<FeatureBasis> basis = convex_basis(r.convex_basis, data.dim(), surrogate ? &*surrogate : nullptr);
    Eigen::VectorXd coefficients;
    if (basis) {
        const ErmSolution sol = solve_direct(build_quadratic(*basis, data), cfg.ridge);
        coefficients = sol.coefficients;
        r.convex_features = basis->size();
        r.convex_degenerate = sol.degenerate;
    }
    r.timings.convex = seconds_since(t0);

    Rng probe_rng(derive_seed(cfg.seed, 3));
    std::vector<std::vector<double>> probes;
    for (std::size_t k = 0; k < cfg.probe_points; ++k) {
        probes.push_back(random_inputs(probe_rng, data.dim(), cfg.task.domain));
    }

    // Persist, then compute every reported number from the reloaded artifacts.
    const auto &dir = cfg.out_dir;
    std::filesystem::create_directories(dir);
    save_circuit(c, dir / "circuit.json");
    save_dataset(data, dir / "dataset.csv");
    write_file_atomic(dir / "task.json", provenance);
    ojson sol;
    sol["theta"] = opt.theta;
    sol["optimizer_trajectory"] = opt.trajectory;
    sol["domain"] = input_domain_name(cfg.task.domain);
    sol["convex_basis"] = r.convex_basis;
    sol["convex_labels"] = basis ? basis->labels : std::vector<std::string>{};
    sol["coefficients"] = std::vector<double>(coefficients.data(), coefficients.data() + coefficients.size());
    sol["ridge"] = cfg.ridge;
    sol["probe_inputs"] = probes;
    write_file_atomic(dir / "solution.json", sol.dump(2) + "\n");
    if (surrogate) {
        save_surrogate(*surrogate, dir / "surrogate.json");
        r.has_surrogate = true;
        r.surrogate_basis = basis_name(surrogate->basis());
        r.surrogate_representation = surrogate->representation_name();
        r.surrogate_terms = surrogate->term_count();
        r.bond_dims = surrogate->bond_dims();
    } else {
        std::filesystem::remove(dir / "surrogate.json");
        std::filesystem::remove(dir / "surrogate.bin");
    }

    t0 = clock::now();
    const CircuitIR c2 = load_circuit(dir / "circuit.json");
    const TrainingSet d2 = load_dataset(dir / "dataset.csv", cfg.task.domain);
    std::optional<FunctionSurrogate> s2;
    if (surrogate) {
        s2.emplace(load_surrogate(dir / "surrogate.json"));
    }
    const Metrics m = compute_metrics(c2, d2, opt.theta, s2 ? &*s2 : nullptr, probes,
                                      convex_basis(r.convex_basis, d2.dim(), s2 ? &*s2 : nullptr), coefficients);
    r.oracle_risk = m.oracle_risk;
    r.surrogate_risk = m.surrogate_risk;
    r.surrogate_residual = m.surrogate_residual;
    r.convex_risk = m.convex_risk;
    r.reduction_residual = m.reduction_residual;
    r.within_tolerance = (!m.surrogate_residual || *m.surrogate_residual <= cfg.surrogate_tolerance) &&
                         (!m.reduction_residual || *m.reduction_residual <= cfg.reduction_tolerance);
    r.timings.verify = seconds_since(t0);

    write_file_atomic(dir / "config.canonical", cfg.canonical);
    write_file_atomic(dir / "report.json", report_to_json(r));
    return r;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") {
        return ReportFormat::Json;
    }
    if (name == "csv-summary") {
        return ReportFormat::CsvSummary;
    }
    if (name == "markdown") {
        return ReportFormat::Markdown;
    }
    fail(ErrorKind::Configuration, "unknown report format '" + std::string(name) + "'");
}

std::string report_to_json(const RunReport &r, bool include_timings) {
    ojson j;
    j["schema"] = "qsurrogate-report";
    j["schema_version"] = RunReport::kSchemaVersion;
    j["name"] = r.name;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["classification"] = {{"label", r.class_label},
                           {"justification", r.justification},
                           {"recommended_engine", r.recommended_engine},
                           {"detail", r.classifier_detail}};
    j["engine"] = r.engine_used;
    if (r.has_surrogate) {
        j["surrogate"] = {{"basis", r.surrogate_basis},
                          {"representation", r.surrogate_representation},
                          {"terms", r.surrogate_terms},
                          {"bond_dims", r.bond_dims}};
    } else {
        j["surrogate"] = nullptr;
    }
    j["solver"] = {{"convex_basis", r.convex_basis},
                   {"features", r.convex_features},
                   {"degenerate", r.convex_degenerate},
                   {"optimizer_iterations", r.optimizer_iterations},
                   {"optimizer_converged", r.optimizer_converged}};
    j["risks"] = {{"convex", opt_json(r.convex_risk)},
                  {"restricted", r.restricted_risk},
                  {"oracle", r.oracle_risk},
                  {"surrogate", opt_json(r.surrogate_risk)}};
    j["residuals"] = {{"surrogate_vs_oracle", opt_json(r.surrogate_residual)},
                      {"reduction_identity", opt_json(r.reduction_residual)}};
    j["tolerances"] = {{"surrogate", r.surrogate_tolerance}, {"reduction", r.reduction_tolerance}};
    j["within_tolerance"] = r.within_tolerance;
    if (include_timings) {
        j["timings_seconds"] = {{"classify", r.timings.classify}, {"data", r.timings.data},
                                {"optimize", r.timings.optimize}, {"extract", r.timings.extract},
                                {"convex", r.timings.convex},     {"verify", r.timings.verify}};
    }
    return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string &text) {
    RunReport r;
    try {
        const ojson j = ojson::parse(text);
        if (j.at("schema").get<std::string>() != "qsurrogate-report") {
            fail(ErrorKind::Validation, "not a report file");
        }
        if (j.at("schema_version").get<int>() != RunReport::kSchemaVersion) {
            fail(ErrorKind::Validation, "unsupported report schema version");
        }
        r.name = j.at("name").get<std::string>();
        r.config_hash = j.at("config_hash").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        const auto &cl = j.at("classification");
        r.class_label = cl.at("label").get<std::string>();
        r.justification = cl.at("justification").get<std::string>();
        r.recommended_engine = cl.at("recommended_engine").get<std::string>();
        r.classifier_detail = cl.at("detail").get<std::string>();
        r.engine_used = j.at("engine").get<std::string>();
        if (!j.at("surrogate").is_null()) {
            const auto &s = j.at("surrogate");
            r.has_surrogate = true;
            r.surrogate_basis = s.at("basis").get<std::string>();
            r.surrogate_representation = s.at("representation").get<std::string>();
            r.surrogate_terms = s.at("terms").get<std::size_t>();
            r.bond_dims = s.at("bond_dims").get<std::vector<std::size_t>>();
        }
        const auto &sv = j.at("solver");
        r.convex_basis = sv.at("convex_basis").get<std::string>();
        r.convex_features = sv.at("features").get<std::size_t>();
        r.convex_degenerate = sv.at("degenerate").get<bool>();
        r.optimizer_iterations = sv.at("optimizer_iterations").get<std::size_t>();
        r.optimizer_converged = sv.at("optimizer_converged").get<bool>();
        const auto &rk = j.at("risks");
        r.convex_risk = opt_from(rk.at("convex"));
        r.restricted_risk = rk.at("restricted").get<double>();
        r.oracle_risk = rk.at("oracle").get<double>();
        r.surrogate_risk = opt_from(rk.at("surrogate"));
        const auto &rs = j.at("residuals");
        r.surrogate_residual = opt_from(rs.at("surrogate_vs_oracle"));
        r.reduction_residual = opt_from(rs.at("reduction_identity"));
        r.surrogate_tolerance = j.at("tolerances").at("surrogate").get<double>();
        r.reduction_tolerance = j.at("tolerances").at("reduction").get<double>();
        r.within_tolerance = j.at("within_tolerance").get<bool>();
        if (j.contains("timings_seconds")) {
            const auto &t = j.at("timings_seconds");
            r.timings = {t.at("classify").get<double>(), t.at("data").get<double>(),
                         t.at("optimize").get<double>(), t.at("extract").get<double>(),
                         t.at("convex").get<double>(),   t.at("verify").get<double>()};
        }
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Validation, std::string("report JSON: ") + e.what());
    }
    return r;
}

namespace {

const std::vector<std::string> kSummaryColumns = {
    "name",           "config_hash",     "seed",          "class",          "justification",
    "engine",         "surrogate_basis", "terms",         "max_bond",       "convex_risk",
    "restricted_risk", "oracle_risk",    "surrogate_risk", "surrogate_residual", "reduction_residual",
    "within_tolerance"};

std::vector<std::string> summary_row(const RunReport &r, const std::string &missing) {
    const auto num = [&](const std::optional<double> &v) { return v ? format_double(*v) : missing; };
    std::size_t max_bond = 0;
    for (auto b : r.bond_dims) {
        max_bond = std::max(max_bond, b);
    }
    return {r.name,
            r.config_hash,
            std::to_string(r.seed),
            r.class_label,
            r.justification,
            r.engine_used,
            r.has_surrogate ? r.surrogate_basis : missing,
            r.has_surrogate ? std::to_string(r.surrogate_terms) : missing,
            r.bond_dims.empty() ? missing : std::to_string(max_bond),
            num(r.convex_risk),
            format_double(r.restricted_risk),
            format_double(r.oracle_risk),
            num(r.surrogate_risk),
            num(r.surrogate_residual),
            num(r.reduction_residual),
            r.within_tolerance ? "true" : "false"};
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return out + "\"";
}

}  // namespace

std::string reports_to_csv(const std::vector<RunReport> &reports) {
    std::string out;
    for (std::size_t i = 0; i < kSummaryColumns.size(); ++i) {
        out += (i ? "," : "") + kSummaryColumns[i];
    }
    out += "\n";
    for (const auto &r : reports) {
        const auto row = summary_row(r, "");
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + csv_field(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string reports_to_markdown(const std::vector<RunReport> &reports) {
    std::string out = "|";
    std::string rule = "|";
    for (const auto &c : kSummaryColumns) {
        out += " " + c + " |";
        rule += " --- |";
    }
    out += "\n" + rule + "\n";
    for (const auto &r : reports) {
        out += "|";
        for (const auto &f : summary_row(r, "-")) {
            out += " " + f + " |";
        }
        out += "\n";
    }
    return out;
}

void emit_report(const std::vector<RunReport> &reports, ReportFormat format, const std::filesystem::path &path) {
    std::string text;
    switch (format) {
        case ReportFormat::Json: {
            if (reports.size() == 1) {
                text = report_to_json(reports.front());
            } else {
                ojson arr = ojson::array();
                for (const auto &r : reports) {
                    arr.push_back(ojson::parse(report_to_json(r)));
                }
                text = arr.dump(2) + "\n";
            }
            break;
        }
        case ReportFormat::CsvSummary:
            text = reports_to_csv(reports);
            break;
        case ReportFormat::Markdown:
            text = reports_to_markdown(reports);
            break;
    }
    try {
        write_file_atomic(path, text);
    } catch (const Error &) {
        throw;
    } catch (const std::exception &e) {
        fail(ErrorKind::Io, "cannot write " + path.string() + ": " + e.what());
    }
}

std::string report_hash(const RunReport &r) {
    return hex64(fnv1a64(report_to_json(r, false)));
}

VerifyOutcome verify_run(const std::filesystem::path &dir) {
    const RunReport r = report_from_json(read_text_file(dir / "report.json"));
    const ojson sol = ojson::parse(read_text_file(dir / "solution.json"));
    const InputDomain domain = parse_input_domain(sol.at("domain").get<std::string>());
    const CircuitIR c = load_circuit(dir / "circuit.json");
    const TrainingSet data = load_dataset(dir / "dataset.csv", domain);
    const auto theta = sol.at("theta").get<std::vector<double>>();
    const auto coef = sol.at("coefficients").get<std::vector<double>>();
    const auto probes = sol.at("probe_inputs").get<std::vector<std::vector<double>>>();
    std::optional<FunctionSurrogate> s;
    if (r.has_surrogate) {
        s.emplace(load_surrogate(dir / "surrogate.json"));
    }
    const std::string basis_kind = sol.at("convex_basis").get<std::string>();
    const Eigen::VectorXd c_vec = Eigen::Map<const Eigen::VectorXd>(coef.data(), static_cast<Eigen::Index>(coef.size()));
    const Metrics m = compute_metrics(c, data, theta, s ? &*s : nullptr, probes,
                                      convex_basis(basis_kind, data.dim(), s ? &*s : nullptr), c_vec);

    VerifyOutcome out;
    const auto compare = [&](const std::string &what, const std::optional<double> &reported,
                             const std::optional<double> &recomputed) {
        const std::string a = reported ? format_double(*reported) : "null";
        const std::string b = recomputed ? format_double(*recomputed) : "null";
        if (a != b) {
            out.mismatches.push_back(what + ": report " + a + ", recomputed " + b);
        }
    };
    compare("oracle risk", r.oracle_risk, m.oracle_risk);
    compare("restricted risk", r.restricted_risk, m.oracle_risk);
    compare("surrogate risk", r.surrogate_risk, m.surrogate_risk);
    compare("surrogate residual", r.surrogate_residual, m.surrogate_residual);
    compare("convex risk", r.convex_risk, m.convex_risk);
    compare("reduction residual", r.reduction_residual, m.reduction_residual);
    out.within_tolerance = (!m.surrogate_residual || *m.surrogate_residual <= r.surrogate_tolerance) &&
                           (!m.reduction_residual || *m.reduction_residual <= r.reduction_tolerance);
    if (out.within_tolerance != r.within_tolerance) {
        out.mismatches.push_back("tolerance verdict differs from the report");
    }
    return out;
}

}  // namespace qsurrogate
