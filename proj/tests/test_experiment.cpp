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

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qsurrogate/circuit_io.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/experiment.hpp"
#include "qsurrogate/io_util.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"
#include "qsurrogate/tensor.hpp"

using namespace qsurrogate;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("qsurrogate_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig config_from(const std::string &text, const fs::path &out) {
    ExperimentConfig cfg = experiment_config_from_table(ConfigTable::parse(text));
    ConfigOverrides o;
    o.out_dir = out;
    apply_overrides(cfg, o);
    return cfg;
}

ErrorKind kind_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Validation;
}

const char *kShallow = R"(
[run]
name = "shallow"
seed = 5
[circuit]
generator = "brickwork"
qubits = 4
depth = 4
[data]
samples = 12
noise = 0.05
[solver]
ridge = 1e-6
iterations = 4
)";

}  // namespace

TEST_CASE("config table parsing") {
    const auto t = ConfigTable::parse(R"(
# comment
[a]
x = 1.5   # trailing
s = "hi # not a comment"
b = true
v = [1, 2.5, -3]
[b]
n = -7
)");
    CHECK(t.number("a.x", 0) == 1.5);
    CHECK(t.string("a.s", "") == "hi # not a comment");
    CHECK(t.boolean("a.b", false));
    CHECK(t.numbers("a.v") == std::vector<double>{1, 2.5, -3});
    CHECK(t.integer("b.n", 0) == -7);
    CHECK(t.number("a.missing", 4.0) == 4.0);
    CHECK(kind_of([] { ConfigTable::parse("[a]\nx = 1\nx = 2\n"); }) == ErrorKind::Configuration);
    CHECK(kind_of([] { ConfigTable::parse("[a]\nx 1\n"); }) == ErrorKind::Configuration);
    CHECK(kind_of([&] { (void)t.integer("a.x", 0); }) == ErrorKind::Configuration);
    CHECK(kind_of([&] { (void)t.string("a.x", ""); }) == ErrorKind::Configuration);
    CHECK(kind_of([&] { t.require_known({"a.x"}); }) == ErrorKind::Configuration);
    // Canonical text is independent of the input layout.
    const auto u = ConfigTable::parse("[b]\nn=-7\n[a]\nv=[1,2.5,-3]\nb=true\ns=\"hi # not a comment\"\nx=1.5\n");
    CHECK(t.canonical_text() == u.canonical_text());
}

TEST_CASE("experiment config validation") {
    CHECK(kind_of([] { experiment_config_from_table(ConfigTable::parse("[run]\nname = \"x\"\n")); }) ==
          ErrorKind::Configuration);
    CHECK(kind_of([] {
              experiment_config_from_table(ConfigTable::parse("[run]\nseed = 1\n[circuit]\ngenerator = \"nope\"\n"));
          }) == ErrorKind::Configuration);
    CHECK(kind_of([] {
              experiment_config_from_table(ConfigTable::parse("[run]\nseed = 1\n[data]\ngenerator = \"nope\"\n"));
          }) == ErrorKind::Configuration);
    CHECK(kind_of([] {
              experiment_config_from_table(ConfigTable::parse("[run]\nseed = 1\n[engine]\nname = \"gpu\"\n"));
          }) == ErrorKind::Configuration);

    auto a = experiment_config_from_table(ConfigTable::parse(kShallow));
    auto b = experiment_config_from_table(ConfigTable::parse(kShallow));
    CHECK(a.config_hash() == b.config_hash());
    ConfigOverrides o;
    o.seed = 6;
    apply_overrides(b, o);
    CHECK(b.seed == 6);
    CHECK(a.config_hash() != b.config_hash());
    CHECK(derive_seed(5, 0) != derive_seed(5, 1));
    CHECK(derive_seed(5, 1) == derive_seed(5, 1));
}

TEST_CASE("teacher task with zero noise is realizable") {
    Rng rng(21);
    const auto c = random_brickwork(4, 4, 4, rng);
    TaskSpec spec;
    spec.samples = 10;
    spec.seed = 99;
    const auto task = generate_task(spec, c);
    REQUIRE(task.teacher_theta.size() == c.num_theta());
    CHECK(circuit_risk(c, task.teacher_theta, task.data) <= 1e-24);
    const auto again = generate_task(spec, c);
    CHECK(dataset_to_csv(again.data) == dataset_to_csv(task.data));
}

TEST_CASE("binary task without replacement has distinct inputs") {
    Rng rng(22);
    const auto c = random_brickwork(4, 4, 4, rng);
    TaskSpec spec;
    spec.samples = 16;
    spec.seed = 3;
    const auto task = generate_task(spec, c);
    std::set<std::vector<double>> seen;
    for (const auto &s : task.data.samples) {
        for (double v : s.x) {
            CHECK((v == 0.0 || v == 1.0));
        }
        seen.insert(s.x);
    }
    CHECK(seen.size() == 16);
    spec.samples = 17;
    CHECK(kind_of([&] { generate_task(spec, c); }) == ErrorKind::Configuration);
    spec.with_replacement = true;
    CHECK(generate_task(spec, c).data.size() == 17);
    spec.generator = "unknown";
    CHECK(kind_of([&] { generate_task(spec, c); }) == ErrorKind::Configuration);
}

TEST_CASE("label noise variance matches the requested sigma") {
    Rng rng(23);
    const auto c = random_brickwork(3, 3, 2, rng);
    TaskSpec spec;
    spec.samples = 1000;
    spec.noise = 0.1;
    spec.domain = InputDomain::Continuous;
    spec.seed = 17;
    const auto task = generate_task(spec, c);
    double mean = 0.0;
    for (std::size_t i = 0; i < task.data.size(); ++i) {
        mean += task.data.samples[i].y - task.clean_labels[i];
    }
    mean /= 1000.0;
    double var = 0.0;
    for (std::size_t i = 0; i < task.data.size(); ++i) {
        const double r = task.data.samples[i].y - task.clean_labels[i] - mean;
        var += r * r;
    }
    var /= 999.0;
    const double sigma2 = 0.01;
    const double se = sigma2 * std::sqrt(2.0 / 999.0);
    CHECK(std::abs(var - sigma2) <= 3.0 * se);
}

TEST_CASE("sparse Fourier labels are exact parity combinations") {
    Rng rng(24);
    const auto c = random_brickwork(4, 4, 4, rng);
    TaskSpec spec;
    spec.generator = "sparse-fourier";
    spec.samples = 16;
    spec.sparse_terms = 3;
    spec.seed = 8;
    const auto task = generate_task(spec, c);
    REQUIRE(task.sparse_terms.size() == 3);
    for (const auto &s : task.data.samples) {
        double y = 0.0;
        for (const auto &t : task.sparse_terms) {
            int ones = 0;
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                ones += s.x[k] == 1.0 && ((t.alpha[0] >> k) & 1u) ? 1 : 0;
            }
            y += t.coefficient * (ones % 2 ? -1.0 : 1.0);
        }
        CHECK(s.y == doctest::Approx(y).epsilon(1e-14));
    }
}

TEST_CASE("dataset csv and json round trip") {
    TrainingSet s;
    s.domain = InputDomain::Continuous;
    s.samples = {{{0.1, -2.0 / 3.0}, 1e-300}, {{1e10, 0.0}, -0.3}};
    const auto c = dataset_from_csv(dataset_to_csv(s), InputDomain::Continuous);
    const auto j = dataset_from_json(dataset_to_json(s));
    for (const auto *r : {&c, &j}) {
        REQUIRE(r->size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(r->samples[i].x == s.samples[i].x);
            CHECK(r->samples[i].y == s.samples[i].y);
        }
    }
    const auto dir = scratch("dataset");
    save_dataset(s, dir / "d.json");
    CHECK(load_dataset(dir / "d.json").samples[1].y == -0.3);
    CHECK(kind_of([] { dataset_from_csv("x_1,y\n0.5\n", InputDomain::Continuous); }) == ErrorKind::Validation);
    CHECK(kind_of([] { dataset_from_csv("x_1,y\n0.5,1\n", InputDomain::Binary); }) == ErrorKind::Validation);
    CHECK(kind_of([&] { load_dataset(dir / "missing.csv"); }) == ErrorKind::Io);
}

TEST_CASE("tensor-train surrogate save and load") {
    Rng rng(25);
    const auto c = random_brickwork(4, 4, 4, rng);
    const auto theta = random_angles(rng, c.num_theta());
    const auto s = extract_function_mps(c, theta, {});
    const auto dir = scratch("surrogate");
    save_surrogate(s, dir / "s.json");
    const auto back = load_surrogate(dir / "s.json");
    CHECK(back.bond_dims() == s.bond_dims());
    for (int k = 0; k < 20; ++k) {
        const auto x = random_inputs(rng, 4, InputDomain::Continuous);
        CHECK(back.evaluate(x) == s.evaluate(x));
    }
}

TEST_CASE("shallow run uses the tensor engine and verifies") {
    const auto dir = scratch("shallow");
    const auto cfg = config_from(kShallow, dir);
    const RunReport r = run_experiment(cfg);
    CHECK(r.class_label == "Class1");
    CHECK(r.engine_used == "mps");
    REQUIRE(r.has_surrogate);
    REQUIRE(r.surrogate_residual.has_value());
    CHECK(*r.surrogate_residual <= 1e-9);
    REQUIRE(r.convex_risk.has_value());
    CHECK(*r.convex_risk <= r.restricted_risk + 1e-8);
    CHECK(r.within_tolerance);
    for (const char *f : {"circuit.json", "dataset.csv", "task.json", "solution.json", "surrogate.json",
                          "report.json", "config.canonical"}) {
        CHECK(fs::exists(dir / f));
    }
    const auto v = verify_run(dir);
    CHECK(v.mismatches.empty());
    CHECK(v.ok());

    // Rerun with the same config: identical report apart from timings.
    const auto dir2 = scratch("shallow_again");
    const RunReport r2 = run_experiment(config_from(kShallow, dir2));
    CHECK(report_hash(r) == report_hash(r2));
    CHECK(report_to_json(r, false) == report_to_json(r2, false));
}

TEST_CASE("deep generic run has no surrogate section") {
    const auto dir = scratch("deep");
    const auto cfg = config_from(R"(
[run]
seed = 2
[circuit]
generator = "brickwork"
qubits = 4
depth = 40
[data]
samples = 6
[solver]
iterations = 1
)",
                                 dir);
    const RunReport r = run_experiment(cfg);
    CHECK(r.class_label == "Class3");
    CHECK(r.engine_used == "none");
    CHECK_FALSE(r.has_surrogate);
    const auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["surrogate"].is_null());
    CHECK(verify_run(dir).ok());
}

TEST_CASE("engine override rejected by the classifier") {
    const auto dir = scratch("override");
    auto cfg = config_from(R"(
[run]
seed = 3
[circuit]
generator = "brickwork"
qubits = 4
depth = 40
)",
                           dir);
    ConfigOverrides o;
    o.engine = "mps";
    apply_overrides(cfg, o);
    try {
        run_experiment(cfg);
        FAIL("expected a configuration error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Configuration);
        CHECK(std::string(e.what()).find("Class3") != std::string::npos);
    }
}

TEST_CASE("flipped run checks the reduction identity") {
    const auto dir = scratch("flipped");
    const auto cfg = config_from(R"(
[run]
seed = 4
[circuit]
generator = "flipped"
qubits = 3
layers = 2
t = 1
[data]
samples = 6
noise = 0.1
[solver]
iterations = 2
)",
                                 dir);
    const RunReport r = run_experiment(cfg);
    REQUIRE(r.reduction_residual.has_value());
    CHECK(*r.reduction_residual <= 1e-10);
    CHECK(verify_run(dir).ok());
}

TEST_CASE("verify detects tampering") {
    const auto dir = scratch("tamper");
    run_experiment(config_from(kShallow, dir));
    auto j = nlohmann::ordered_json::parse(read_text_file(dir / "report.json"));
    j["risks"]["oracle"] = 0.123;
    write_file_atomic(dir / "report.json", j.dump(2));
    CHECK_FALSE(verify_run(dir).mismatches.empty());
}

TEST_CASE("report emitters") {
    RunReport r;
    r.name = "a";
    r.config_hash = "00ff";
    r.seed = 9;
    r.class_label = "Class1";
    r.justification = "Observation 1";
    r.recommended_engine = "mps";
    r.engine_used = "mps";
    r.has_surrogate = true;
    r.surrogate_basis = "trig3";
    r.surrogate_representation = "tensor-train";
    r.surrogate_terms = 12;
    r.bond_dims = {2, 3};
    r.convex_basis = "parity";
    r.convex_features = 16;
    r.convex_risk = 0.25;
    r.restricted_risk = 0.5;
    r.oracle_risk = 0.5;
    r.surrogate_risk = 0.5000000001;
    r.surrogate_residual = 1e-15;
    r.surrogate_tolerance = 1e-9;
    r.reduction_tolerance = 1e-10;
    r.timings.extract = 0.75;

    const std::string text = report_to_json(r);
    const RunReport back = report_from_json(text);
    CHECK(report_to_json(back) == text);
    const auto j = nlohmann::ordered_json::parse(text);
    CHECK(j["schema_version"] == RunReport::kSchemaVersion);
    CHECK(j.begin().key() == "schema");

    RunReport b = r, c = r;
    b.name = "b";
    c.name = "c";
    c.has_surrogate = false;
    c.surrogate_residual.reset();
    const std::string csv = reports_to_csv({r, b, c});
    std::istringstream lines(csv);
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) {
        rows.push_back(line);
    }
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].rfind("name,config_hash,seed,class,justification,engine", 0) == 0);

    const std::string md = reports_to_markdown({r, b, c});
    CHECK(md.rfind("| name | config_hash | seed | class | justification | engine | surrogate_basis | terms | max_bond | "
                   "convex_risk | restricted_risk | oracle_risk | surrogate_risk | surrogate_residual | "
                   "reduction_residual | within_tolerance |",
                   0) == 0);

    CHECK(parse_report_format("csv-summary") == ReportFormat::CsvSummary);
    CHECK(kind_of([] { parse_report_format("xml"); }) == ErrorKind::Configuration);
    CHECK(kind_of([&] { emit_report({r}, ReportFormat::Json, "/proc/nonexistent/dir/r.json"); }) == ErrorKind::Io);
}
