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

#include "qsurrogate/dataset.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/io_util.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"

namespace qsurrogate {

using ojson = nlohmann::ordered_json;

namespace {

double parse_number(const std::string &field, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    std::size_t end = used;
    while (end < field.size() && std::isspace(static_cast<unsigned char>(field[end]))) {
        ++end;
    }
    if (used == 0 || end != field.size()) {
        fail(ErrorKind::Validation, "line " + std::to_string(line) + ": '" + field + "' is not a number");
    }
    return v;
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

TrainingSet dataset_from_csv(const std::string &text, InputDomain domain) {
    std::stringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    TrainingSet s;
    s.domain = domain;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv(line);
        if (columns == 0) {
            if (fields.size() < 2 || fields.back() != "y") {
                fail(ErrorKind::Validation, "CSV header must be x_1,...,x_d,y");
            }
            for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
                if (fields[j] != "x_" + std::to_string(j + 1)) {
                    fail(ErrorKind::Validation, "CSV header column " + std::to_string(j + 1) + " must be x_" +
                                                    std::to_string(j + 1));
                }
            }
            columns = fields.size();
            continue;
        }
        if (fields.size() != columns) {
            fail(ErrorKind::Validation, "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                            " columns, expected " + std::to_string(columns));
        }
        Sample smp;
        for (std::size_t j = 0; j + 1 < columns; ++j) {
            smp.x.push_back(parse_number(fields[j], line_no));
        }
        smp.y = parse_number(fields.back(), line_no);
        s.samples.push_back(std::move(smp));
    }
    s.validate();
    return s;
}

std::string dataset_to_csv(const TrainingSet &s) {
    std::string out;
    for (std::size_t j = 0; j < s.dim(); ++j) {
        out += "x_" + std::to_string(j + 1) + ",";
    }
    out += "y\n";
    for (const auto &smp : s.samples) {
        for (double v : smp.x) {
            out += format_double(v) + ",";
        }
        out += format_double(smp.y) + "\n";
    }
    return out;
}

std::string dataset_to_json(const TrainingSet &s) {
    ojson j;
    j["domain"] = input_domain_name(s.domain);
    ojson samples = ojson::array();
    for (const auto &smp : s.samples) {
        samples.push_back({{"x", smp.x}, {"y", smp.y}});
    }
    j["samples"] = samples;
    return j.dump(2) + "\n";
}

TrainingSet dataset_from_json(const std::string &text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception &e) {
        fail(ErrorKind::Validation, std::string("dataset JSON: ") + e.what());
    }
    TrainingSet s;
    try {
        s.domain = parse_input_domain(j.value("domain", std::string("continuous")));
        for (const auto &smp : j.at("samples")) {
            s.samples.push_back({smp.at("x").get<std::vector<double>>(), smp.at("y").get<double>()});
        }
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Validation, std::string("dataset JSON: ") + e.what());
    }
    s.validate();
    return s;
}

TrainingSet load_dataset(const std::filesystem::path &path, InputDomain domain) {
    const std::string text = read_text_file(path);
    if (path.extension() == ".json") {
        return dataset_from_json(text);
    }
    if (path.extension() == ".csv") {
        return dataset_from_csv(text, domain);
    }
    fail(ErrorKind::Configuration, "dataset must be .csv or .json: " + path.string());
}

void save_dataset(const TrainingSet &s, const std::filesystem::path &path) {
    write_file_atomic(path, path.extension() == ".json" ? dataset_to_json(s) : dataset_to_csv(s));
}

namespace {

std::vector<std::vector<double>> draw_inputs(const TaskSpec &spec, std::size_t d, Rng &rng) {
    std::vector<std::vector<double>> xs;
    if (spec.domain == InputDomain::Continuous) {
        for (std::size_t i = 0; i < spec.samples; ++i) {
            xs.push_back(random_inputs(rng, d, InputDomain::Continuous));
        }
        return xs;
    }
    const bool distinct = !spec.with_replacement && d < 63 && spec.samples <= (std::uint64_t{1} << d);
    if (!spec.with_replacement && !distinct) {
        fail(ErrorKind::Configuration, "cannot draw " + std::to_string(spec.samples) + " distinct binary inputs in " +
                                           std::to_string(d) + " dimensions");
    }
    std::set<std::uint64_t> seen;
    while (xs.size() < spec.samples) {
        std::vector<double> x(d);
        std::uint64_t key = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const std::uint64_t bit = rng() & 1u;
            x[j] = static_cast<double>(bit);
            key |= bit << (j % 64);
        }
        if (distinct && !seen.insert(key).second) {
            continue;
        }
        xs.push_back(std::move(x));
    }
    return xs;
}

}  // namespace

GeneratedTask generate_task(const TaskSpec &spec, const CircuitIR &circuit) {
    if (spec.samples == 0) {
        fail(ErrorKind::Configuration, "a task needs at least one sample");
    }
    if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
        fail(ErrorKind::Configuration, "label noise must be a finite non-negative number");
    }
    Rng rng(spec.seed);
    const std::size_t d = circuit.num_inputs();
    if (d == 0) {
        fail(ErrorKind::Configuration, "circuit reads no inputs");
    }
    GeneratedTask task;
    task.data.domain = spec.domain;
    const auto xs = draw_inputs(spec, d, rng);

    if (spec.generator == "teacher") {
        task.teacher_theta = random_angles(rng, circuit.num_theta());
        for (const auto &x : xs) {
            task.clean_labels.push_back(expectation(circuit, x, task.teacher_theta));
        }
    } else if (spec.generator == "sparse-fourier") {
        std::vector<int> legs;
        for (std::size_t j = 0; j < d; ++j) {
            legs.push_back(static_cast<int>(j));
        }
        for (std::size_t k = 0; k < spec.sparse_terms; ++k) {
            SparseLabelTerm t;
            for (std::size_t j = 0; j < d && j < 64; ++j) {
                if (spec.domain == InputDomain::Binary) {
                    t.alpha[0] |= (rng() & 1u) << j;
                } else {
                    set_trig_digit(t.alpha, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(uniform_index(rng, 3)));
                }
            }
            t.coefficient = standard_normal(rng) / std::sqrt(static_cast<double>(spec.sparse_terms));
            task.sparse_terms.push_back(t);
        }
        const BasisKind kind = spec.domain == InputDomain::Binary ? BasisKind::FourierBinary : BasisKind::Trig3;
        for (const auto &x : xs) {
            double y = 0.0;
            for (const auto &t : task.sparse_terms) {
                y += t.coefficient * basis_value(kind, t.alpha, x, legs);
            }
            task.clean_labels.push_back(y);
        }
    } else {
        fail(ErrorKind::Configuration, "unknown task generator '" + spec.generator + "'");
    }

    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double y = task.clean_labels[i] + (spec.noise > 0.0 ? spec.noise * standard_normal(rng) : 0.0);
        task.data.samples.push_back({xs[i], y});
    }
    return task;
}

std::string task_provenance_json(const TaskSpec &spec, const GeneratedTask &task) {
    ojson j;
    j["generator"] = spec.generator;
    j["seed"] = spec.seed;
    j["samples"] = spec.samples;
    j["noise"] = spec.noise;
    j["domain"] = input_domain_name(spec.domain);
    j["teacher_theta"] = task.teacher_theta;
    ojson terms = ojson::array();
    for (const auto &t : task.sparse_terms) {
        terms.push_back({{"alpha", spectral_hex(t.alpha)}, {"coefficient", t.coefficient}});
    }
    j["sparse_terms"] = terms;
    return j.dump(2) + "\n";
}

}  // namespace qsurrogate
