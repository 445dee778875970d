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
#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "qsurrogate/backprop.hpp"
#include "qsurrogate/erm.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"
#include "support/dense_oracle.hpp"

using namespace qsurrogate;

namespace {

TrainingSet random_set(Rng &rng, std::size_t n_samples, std::size_t d, InputDomain domain) {
    TrainingSet s;
    s.domain = domain;
    for (std::size_t i = 0; i < n_samples; ++i) {
        s.samples.push_back({random_inputs(rng, d, domain), standard_normal(rng)});
    }
    return s;
}

FeatureBasis constant_basis() {
    FeatureBasis b;
    b.functions.emplace_back([](std::span<const double>) { return 1.0; });
    b.labels.push_back("1");
    return b;
}

/// A random subset of the trig product features on d inputs.
FeatureBasis random_trig_basis(Rng &rng, std::size_t d, std::size_t m) {
    std::vector<int> coords;
    for (std::size_t j = 0; j < d; ++j) {
        coords.push_back(static_cast<int>(j));
    }
    FeatureBasis full = trig_product_basis(coords);
    FeatureBasis out;
    std::vector<bool> used(full.size(), false);
    while (out.size() < m) {
        const auto k = static_cast<std::size_t>(uniform_index(rng, full.size()));
        if (!used[k]) {
            used[k] = true;
            out.functions.push_back(full.functions[k]);
            out.labels.push_back(full.labels[k]);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("quadratic form of a constant basis") {
    TrainingSet s;
    s.samples = {{{0.3}, 1.7}};
    auto q = build_quadratic(constant_basis(), s);
    CHECK(q.m(0, 0) == 1.0);
    CHECK(q.v(0) == 1.7);
    CHECK(q.z == doctest::Approx(1.7 * 1.7).epsilon(1e-15));
}

TEST_CASE("quadratic form matches a double-loop summation") {
    TrainingSet s;
    s.samples = {{{0.1, 0.7}, 0.5}, {{-0.4, 0.2}, -1.0}, {{0.9, -0.3}, 2.0}};
    FeatureBasis b;
    b.functions.emplace_back([](std::span<const double> x) { return std::cos(M_PI * x[0]); });
    b.functions.emplace_back([](std::span<const double> x) { return std::sin(M_PI * x[1]); });
    auto q = build_quadratic(b, s);
    for (int k = 0; k < 2; ++k) {
        double v = 0.0;
        for (const auto &smp : s.samples) {
            v += smp.y * b.functions[k](smp.x);
        }
        CHECK(std::abs(q.v(k) - v / 3.0) < 1e-14);
        for (int l = 0; l < 2; ++l) {
            double m = 0.0;
            for (const auto &smp : s.samples) {
                m += b.functions[k](smp.x) * b.functions[l](smp.x);
            }
            CHECK(std::abs(q.m(k, l) - m / 3.0) < 1e-14);
        }
    }
}

TEST_CASE("duplicating every sample leaves the quadratic form unchanged") {
    Rng rng(21);
    auto s = random_set(rng, 10, 3, InputDomain::Continuous);
    auto b = random_trig_basis(rng, 3, 6);
    auto twice = s;
    twice.samples.insert(twice.samples.end(), s.samples.begin(), s.samples.end());
    auto q1 = build_quadratic(b, s);
    auto q2 = build_quadratic(b, twice);
    CHECK((q1.m - q2.m).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((q1.v - q2.v).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(q1.z - q2.z) < 1e-14);
}

TEST_CASE("direct solver: interpolation and ridge limit") {
    TrainingSet s;
    s.samples = {{{0.0}, 2.5}};
    auto q = build_quadratic(constant_basis(), s);
    auto sol = solve_direct(q, 0.0);
    CHECK(sol.coefficients(0) == doctest::Approx(2.5));
    CHECK(sol.risk < 1e-15);

    Rng rng(22);
    auto big = random_set(rng, 20, 3, InputDomain::Continuous);
    auto b = random_trig_basis(rng, 3, 6);
    auto qb = build_quadratic(b, big);
    auto heavy = solve_direct(qb, 1e8);
    CHECK(heavy.coefficients.norm() < 1e-6);
    CHECK(std::abs(heavy.risk - qb.z) < 1e-6);
}

TEST_CASE("direct solution beats random probes and matches the sample risk") {
    Rng rng(23);
    for (int rep = 0; rep < 3; ++rep) {
        auto s = random_set(rng, 20, 3, InputDomain::Continuous);
        auto b = random_trig_basis(rng, 3, 6);
        auto q = build_quadratic(b, s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.m);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
        auto sol = solve_direct(q);
        CHECK(!sol.degenerate);
        CHECK(std::abs(sol.risk - empirical_risk(b, sol.coefficients, s)) < 1e-10);
        CHECK((q.m * sol.coefficients - q.v).norm() < 1e-8);
        for (int probe = 0; probe < 1000; ++probe) {
            Eigen::VectorXd delta(6);
            for (int k = 0; k < 6; ++k) {
                delta(k) = 0.1 * standard_normal(rng);
            }
            CHECK(q.value(sol.coefficients) <= q.value(sol.coefficients + delta) + 1e-14);
        }
    }
}

TEST_CASE("singular systems return the minimum-norm solution") {
    TrainingSet s;
    s.samples = {{{0.0}, 1.0}, {{1.0}, 3.0}};
    FeatureBasis b = constant_basis();
    b.functions.push_back(b.functions[0]);
    b.labels.push_back("1'");
    auto sol = solve_direct(build_quadratic(b, s));
    CHECK(sol.degenerate);
    CHECK(std::abs(sol.coefficients(0) - 1.0) < 1e-12);
    CHECK(std::abs(sol.coefficients(1) - 1.0) < 1e-12);
}

TEST_CASE("kernel dual: scalar ridge and primal agreement") {
    TrainingSet one;
    one.samples = {{{0.0}, 3.0}};
    auto k = solve_kernel(constant_basis(), one, 0.5);
    REQUIRE(k.dual_alphas);
    CHECK(std::abs((*k.dual_alphas)(0) - 3.0 / 1.5) < 1e-15);

    Rng rng(24);
    for (int rep = 0; rep < 3; ++rep) {
        auto s = random_set(rng, 25, 3, InputDomain::Continuous);
        auto b = random_trig_basis(rng, 3, 8);
        const double ridge = 1e-3;
        auto primal = solve_direct(build_quadratic(b, s), ridge);
        auto dual = solve_kernel(b, s, ridge);
        for (const auto &smp : s.samples) {
            CHECK(std::abs(predict(b, primal.coefficients, smp.x) - predict(b, dual.coefficients, smp.x)) < 1e-8);
        }
        for (int t = 0; t < 100; ++t) {
            auto x = random_inputs(rng, 3, InputDomain::Continuous);
            CHECK(std::abs(predict(b, primal.coefficients, x) - predict(b, dual.coefficients, x)) < 1e-8);
        }
    }
}

TEST_CASE("parity Gram matrix on the full grid") {
    const std::uint32_t d = 3;
    auto b = parity_basis(d);
    TrainingSet s;
    s.domain = InputDomain::Binary;
    for (const auto &x : binary_grid(d)) {
        s.samples.push_back({x, 0.0});
    }
    auto phi = design_matrix(b, s);
    Eigen::MatrixXd gram = phi * phi.transpose();
    // Orthogonal characters: K(x, x') = 2^d [x == x'].
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            double ref = 0.0;
            for (std::size_t k = 0; k < b.size(); ++k) {
                ref += b.functions[k](s.samples[i].x) * b.functions[k](s.samples[j].x);
            }
            CHECK(gram(i, j) == ref);
            CHECK(gram(i, j) == (i == j ? 8.0 : 0.0));
        }
    }
}

TEST_CASE("data Hamiltonian hand cases") {
    auto z = [](std::span<const double>) { return WeightedPauliSum::parse(1, {{1.0, "Z"}}); };
    TrainingSet s0;
    s0.samples = {{{0.0}, 0.0}};
    auto h0 = build_data_hamiltonian(s0, z);
    REQUIRE(h0.size() == 1);
    CHECK(h0.terms()[0].pauli.str() == "+ZZ");
    CHECK(h0.terms()[0].coefficient == complex(1.0));

    TrainingSet s1;
    s1.samples = {{{0.0}, 1.0}};
    auto h1 = build_data_hamiltonian(s1, z);
    auto expected = sum_normalize(WeightedPauliSum::parse(2, {{1.0, "ZZ"}, {-1.0, "ZI"}, {-1.0, "IZ"}, {1.0, "II"}}));
    REQUIRE(h1.size() == expected.size());
    for (std::size_t i = 0; i < h1.size(); ++i) {
        CHECK(h1.terms()[i].pauli == expected.terms()[i].pauli);
        CHECK(std::abs(h1.terms()[i].coefficient - expected.terms()[i].coefficient) < 1e-15);
    }
}

TEST_CASE("data Hamiltonian matches a dense build") {
    Rng rng(25);
    const std::uint32_t n = 2;
    auto family = [&](std::span<const double> x) {
        return WeightedPauliSum::parse(n, {{std::cos(x[0]), "XZ"}, {0.5, "YI"}, {x[0], "IZ"}});
    };
    TrainingSet s;
    s.samples = {{{0.3}, 0.7}, {{-1.1}, -0.2}};
    auto h = build_data_hamiltonian(s, family);
    CHECK(h.is_hermitian());
    testing::Matrix dense = testing::Matrix::Zero(16, 16);
    for (const auto &smp : s.samples) {
        testing::Matrix a = testing::sum_matrix(family(smp.x)) - smp.y * testing::Matrix::Identity(4, 4);
        dense += 0.5 * Eigen::kroneckerProduct(a, a).eval();
    }
    CHECK((testing::sum_matrix(h) - dense).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("reduction identity on hand states") {
    CircuitIR c;
    c.n = 1;
    c.architecture = Architecture::Flipped;
    c.layers = {{BlockKind::Trainable, {Gate::rotation(GateTag::RX, 0, 0)}},
                {BlockKind::Encoding, {Gate::encoding(GateTag::EncRZ, 0, 0)}}};
    c.observable = WeightedPauliSum::parse(1, {{1.0, "Z"}});
    TrainingSet s;
    s.samples = {{{0.0}, 0.0}};
    auto rep = verify_reduction(c, s, {{0.0}, {M_PI / 2}});
    CHECK(rep.rows[0].risk == 1.0);
    CHECK(rep.rows[0].energy_product == 1.0);
    CHECK(rep.rows[0].energy_direct == 1.0);
    CHECK(std::abs(rep.rows[1].risk) < 1e-15);
    CHECK(std::abs(rep.rows[1].energy_direct) < 1e-15);
}

TEST_CASE("reduction identity on random flipped circuits") {
    Rng rng(26);
    auto c = random_flipped(3, 3, 2, rng);
    auto s = random_set(rng, 5, c.num_inputs(), InputDomain::Continuous);
    std::vector<std::vector<double>> thetas;
    for (int k = 0; k < 10; ++k) {
        thetas.push_back(random_angles(rng, c.num_theta()));
    }
    auto rep = verify_reduction(c, s, thetas);
    CHECK(rep.max_discrepancy < 1e-10);
    CHECK(rep.max_route_discrepancy < 1e-10);
}

TEST_CASE("restricted optimizer: realizable start, determinism, relaxation") {
    Rng rng(27);
    auto c = random_flipped(3, 2, 1, rng);
    auto theta0 = random_angles(rng, c.num_theta());
    TrainingSet s;
    s.domain = InputDomain::Binary;
    for (const auto &x : binary_grid(static_cast<std::uint32_t>(c.num_inputs()))) {
        s.samples.push_back({x, expectation(c, x, theta0)});
    }
    OptimizerConfig opt;
    auto fixed = restricted_optimize(c, s, opt, 1, theta0);
    CHECK(fixed.risk <= 1e-10);
    CHECK(fixed.iterations == 0);

    for (auto method : {OptimizerMethod::CoordinateDescent, OptimizerMethod::GradientDescent}) {
        opt.method = method;
        opt.max_iterations = 5;
        auto noisy = s;
        for (auto &smp : noisy.samples) {
            smp.y += 0.3 * standard_normal(rng);
        }
        auto a = restricted_optimize(c, noisy, opt, 99);
        auto b = restricted_optimize(c, noisy, opt, 99);
        CHECK(a.theta == b.theta);
        CHECK(a.trajectory == b.trajectory);
        for (std::size_t i = 1; i < a.trajectory.size(); ++i) {
            CHECK(a.trajectory[i] <= a.trajectory[i - 1]);
        }
        auto basis = surrogate_basis(flipped_surrogate(c, a.theta));
        auto convex = solve_direct(build_quadratic(basis, noisy));
        CHECK(convex.risk <= a.risk + 1e-8);
    }
}

TEST_CASE("risk interval brackets the exact risk") {
    Rng rng(28);
    auto c = random_flipped(3, 3, 1, rng);
    auto theta = random_angles(rng, c.num_theta());
    std::vector<CoefficientEstimate> est;
    DenseState rho = run_blocks(c, 0, 1, {}, theta);
    for (const auto &p : required_paulis(c)) {
        est.push_back({p.letters(), rho.expectation(p).real() + 1e-3 * standard_normal(rng), 1e-3});
    }
    auto noisy = flipped_surrogate(c, theta, {}, &est);
    TrainingSet s;
    s.domain = InputDomain::Binary;
    for (const auto &x : binary_grid(static_cast<std::uint32_t>(c.num_inputs()))) {
        s.samples.push_back({x, standard_normal(rng)});
    }
    auto iv = risk_interval(noisy, s);
    const double exact = circuit_risk(c, theta, s);
    CHECK(iv.lower <= exact);
    CHECK(exact <= iv.upper);
}
