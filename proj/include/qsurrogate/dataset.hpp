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

#include <filesystem>
#include <string>
#include <vector>

#include "qsurrogate/circuit.hpp"
#include "qsurrogate/erm.hpp"
#include "qsurrogate/surrogate.hpp"

namespace qsurrogate {

/// CSV has a header "x_1,...,x_d,y"; JSON is {"domain", "samples": [{"x": [...], "y": v}]}.
/// The format follows the file extension (.csv or .json).
TrainingSet load_dataset(const std::filesystem::path &path, InputDomain domain = InputDomain::Continuous);
std::string dataset_to_csv(const TrainingSet &s);
std::string dataset_to_json(const TrainingSet &s);
TrainingSet dataset_from_csv(const std::string &text, InputDomain domain);
TrainingSet dataset_from_json(const std::string &text);
void save_dataset(const TrainingSet &s, const std::filesystem::path &path);

struct TaskSpec {
    /// "teacher" labels with the circuit at random angles; "sparse-fourier" labels
    /// with a random sparse combination of basis functions.
    std::string generator = "teacher";
    std::size_t samples = 16;
    double noise = 0.0;
    InputDomain domain = InputDomain::Binary;
    /// Binary inputs are drawn without replacement whenever samples <= 2^d.
    bool with_replacement = false;
    std::size_t sparse_terms = 4;
    std::uint64_t seed = 0;
};

struct SparseLabelTerm {
    SpectralIndex alpha{0, 0};
    double coefficient = 0.0;
};

struct GeneratedTask {
    TrainingSet data;
    std::vector<double> clean_labels;
    /// Teacher generator: the angles that realize clean_labels.
    std::vector<double> teacher_theta;
    /// Sparse generator: parity masks (binary) or trig digits over the inputs (continuous).
    std::vector<SparseLabelTerm> sparse_terms;
};

GeneratedTask generate_task(const TaskSpec &spec, const CircuitIR &circuit);
/// Teacher angles and sparse terms as JSON, for realizability checks.
std::string task_provenance_json(const TaskSpec &spec, const GeneratedTask &task);

}  // namespace qsurrogate
