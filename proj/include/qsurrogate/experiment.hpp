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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsurrogate/circuit.hpp"
#include "qsurrogate/config.hpp"
#include "qsurrogate/dataset.hpp"
#include "qsurrogate/erm.hpp"
#include "qsurrogate/surrogate.hpp"

namespace qsurrogate {

/// Synthetic circuit recipe. Unused fields are ignored by each generator.
struct CircuitSpec {
    std::string generator = "brickwork";
    std::uint32_t qubits = 4;
    std::uint32_t inputs = 4;
    std::uint32_t depth = 4;
    std::uint32_t t = 0;
    std::uint32_t gates = 20;
    std::uint32_t layers = 2;
    bool encoding_givens = false;
};

struct ExperimentConfig {
    std::string name = "run";
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "out";

    std::optional<std::filesystem::path> circuit_path;
    CircuitSpec circuit;

    std::optional<std::filesystem::path> dataset_path;
    TaskSpec task;

    /// "auto", "mps", "pauli_backprop" or "free_fermion".
    std::string engine = "auto";
    ClassifierConfig classifier;

    double ridge = 0.0;
    /// "auto", "parity" or "surrogate".
    std::string basis = "auto";
    OptimizerConfig optimizer;

    double surrogate_tolerance = 1e-9;
    double reduction_tolerance = 1e-10;
    std::size_t probe_points = 20;

    /// Canonical key-value text the config hash is computed from.
    std::string canonical;

    std::string config_hash() const;
};

/// Reads a config file. Relative paths resolve against the file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path &path);
ExperimentConfig experiment_config_from_table(const ConfigTable &table);

/// Overrides applied after loading (CLI flags); re-renders the canonical text.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> engine;
    std::optional<std::filesystem::path> out_dir;
    std::optional<double> tolerance;
};
void apply_overrides(ExperimentConfig &cfg, const ConfigOverrides &o);

/// Deterministic sub-seeds for the circuit, data and optimizer streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

CircuitIR build_circuit(const ExperimentConfig &cfg);

struct Timings {
    double classify = 0.0;
    double data = 0.0;
    double optimize = 0.0;
    double extract = 0.0;
    double convex = 0.0;
    double verify = 0.0;
};

struct RunReport {
    static constexpr int kSchemaVersion = 1;

    std::string name;
    std::string config_hash;
    std::uint64_t seed = 0;

    std::string class_label;
    std::string justification;
    std::string recommended_engine;
    std::string classifier_detail;
    std::string engine_used;

    bool has_surrogate = false;
    std::string surrogate_basis;
    std::string surrogate_representation;
    std::size_t surrogate_terms = 0;
    std::vector<std::size_t> bond_dims;

    std::string convex_basis;
    std::size_t convex_features = 0;
    bool convex_degenerate = false;
    std::optional<double> convex_risk;
    double restricted_risk = 0.0;
    double oracle_risk = 0.0;
    std::optional<double> surrogate_risk;
    std::size_t optimizer_iterations = 0;
    bool optimizer_converged = false;

    std::optional<double> surrogate_residual;
    std::optional<double> reduction_residual;
    double surrogate_tolerance = 0.0;
    double reduction_tolerance = 0.0;
    bool within_tolerance = true;

    Timings timings;
};

/// Runs the whole pipeline and persists circuit.json, dataset.csv, task.json,
/// solution.json, surrogate.json (+ .bin) and report.json into cfg.out_dir.
RunReport run_experiment(const ExperimentConfig &cfg);

enum class ReportFormat { Json, CsvSummary, Markdown };
ReportFormat parse_report_format(std::string_view name);

std::string report_to_json(const RunReport &r, bool include_timings = true);
RunReport report_from_json(const std::string &text);
/// Header plus one row per report.
std::string reports_to_csv(const std::vector<RunReport> &reports);
std::string reports_to_markdown(const std::vector<RunReport> &reports);
void emit_report(const std::vector<RunReport> &reports, ReportFormat format, const std::filesystem::path &path);

/// FNV-1a of the JSON report without timings.
std::string report_hash(const RunReport &r);

struct VerifyOutcome {
    std::vector<std::string> mismatches;
    bool within_tolerance = true;
    bool ok() const {
        return mismatches.empty() && within_tolerance;
    }
};

/// Recomputes every residual and risk in <dir>/report.json from the persisted artifacts.
VerifyOutcome verify_run(const std::filesystem::path &dir);

}  // namespace qsurrogate
