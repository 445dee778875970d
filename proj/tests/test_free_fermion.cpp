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

#include "doctest.h"
#include "qsurrogate/backprop.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/free_fermion.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"

using namespace qsurrogate;

namespace {

double orthogonality_residue(const Eigen::MatrixXd &r) {
    return (r * r.transpose() - Eigen::MatrixXd::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("compile_rotation basics") {
    std::vector<Gate> none;
    CHECK(compile_rotation(3, none, {}, {}).isIdentity(0));

    // RZ(a) rotates the mode pair of its qubit by a, as fixed by <X>, <Y> under the dense oracle.
    const double a = 0.7;
    auto r = gate_rotation(2, Gate::rotation_const(GateTag::RZ, a, 1), {}, {});
    CHECK(std::abs(r(2, 2) - std::cos(a)) < 1e-15);
    CHECK(std::abs(std::abs(r(2, 3)) - std::abs(std::sin(a))) < 1e-15);
    CHECK(r.block(0, 0, 2, 2).isIdentity(1e-15));
    CircuitIR probe;
    probe.n = 1;
    probe.layers = {{BlockKind::Trainable, {Gate::fixed(GateTag::H, 0), Gate::rotation_const(GateTag::RZ, a, 0)}}};
    probe.observable = WeightedPauliSum::parse(1, {{1.0, "X"}});
    // gamma_0 = X for one mode, and R row 0 gives RZ^dagger X RZ = r00 X + r01 Y.
    auto psi = run_blocks(probe, 0, 1, {}, {});
    DenseState plus = run_blocks(CircuitIR{1, Architecture::Alternating, {{BlockKind::Trainable, {Gate::fixed(GateTag::H, 0)}}}, probe.observable, {}}, 0, 1, {}, {});
    auto r1 = gate_rotation(1, Gate::rotation_const(GateTag::RZ, a, 0), {}, {});
    double via_rotation = r1(0, 0) * plus.expectation(PauliString::parse("X")).real() +
                          r1(0, 1) * plus.expectation(PauliString::parse("Y")).real();
    CHECK(std::abs(via_rotation - psi.expectation(PauliString::parse("X")).real()) < 1e-14);

    auto gv = gate_rotation(2, Gate::rotation_const(GateTag::Givens, 1.1, 0, 1), {}, {});
    CHECK(orthogonality_residue(gv) < 1e-12);
    CHECK(!gv.isIdentity(1e-6));
    CHECK_THROWS_AS(gate_rotation(2, Gate::fixed(GateTag::H, 0), {}, {}), Error);
    CHECK_THROWS_AS(gate_rotation(3, Gate::rotation_const(GateTag::Givens, 1.0, 0, 2), {}, {}), Error);
}

TEST_CASE("rotation is a homomorphism and preserves the spectrum") {
    Rng rng(2);
    for (int trial = 0; trial < 10; trial++) {
        auto c = random_matchgate(4, 6, 2, true, rng);
        auto x = random_inputs(rng, 4, InputDomain::Continuous);
        auto theta = random_angles(rng, c.num_theta());
        auto whole = compile_rotation(c, x, theta);
        auto first = compile_rotation(c.n, c.layers[0].gates, x, theta);
        auto second = compile_rotation(c.n, c.layers[1].gates, x, theta);
        CHECK((whole - second * first).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(orthogonality_residue(whole) < 1e-10);

        auto vac = CovarianceState::vacuum(4);
        auto evolved = evolve(vac, whole);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(evolved.gamma());
        CHECK((svd.singularValues().array() - 1.0).abs().maxCoeff() < 1e-10);
        CHECK((evolved.gamma() + evolved.gamma().transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(evolve(CovarianceState::vacuum(2), Eigen::MatrixXd::Identity(4, 4)).gamma() ==
          CovarianceState::vacuum(2).gamma());
    CHECK_THROWS_AS(evolve(CovarianceState::vacuum(1), Eigen::MatrixXd::Constant(2, 2, 1.0)), Error);
}

TEST_CASE("monomial expectations") {
    auto vac = CovarianceState::vacuum(1);
    // i gamma_0 gamma_1 = -Z_0, so the vacuum value is -1 in this convention.
    CHECK(expect_monomial(vac, {{0, 1}, complex{0, 1}}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(expect_monomial(vac, {{0, 0}, complex{0, 1}}), Error);
    CHECK_THROWS_AS(expect_monomial(CovarianceState::vacuum(2), {{0, 1, 2}, 1.0}), Error);

    Rng rng(5);
    for (int trial = 0; trial < 10; trial++) {
        auto c = random_matchgate(3, 8, 3, true, rng);
        auto x = random_inputs(rng, 3, InputDomain::Continuous);
        auto theta = random_angles(rng, c.num_theta());
        auto s = evolve(CovarianceState::vacuum(3), compile_rotation(c, x, theta));
        auto psi = run(c, x, theta);
        CHECK((s.gamma() - CovarianceState::from_dense(psi).gamma()).cwiseAbs().maxCoeff() < 1e-10);
        // degree 4 against the dense state
        std::vector<std::uint32_t> idx{0, 2, 3, 5};
        PauliString p = monomial_string(3, idx);
        double dense = psi.expectation(p).real();
        CHECK(std::abs(expect_monomial(s, {idx, 1.0}) - dense) < 1e-9);
        CHECK(std::abs(fermion_expectation(c, x, theta) - expectation(c, x, theta)) < 1e-9);
    }
}

TEST_CASE("flipped fermion surrogate") {
    Rng rng(9);
    SUBCASE("identity encoding gives constant pair functions") {
        auto c = random_flipped_matchgate(3, 3, 0, rng);
        auto theta = random_angles(rng, c.num_theta());
        auto s = fermion_flipped_surrogate(c, theta);
        CHECK(s.term_count() == 1);
        auto x = random_inputs(rng, c.num_inputs(), InputDomain::Continuous);
        CHECK(std::abs(s.evaluate(x) - expectation(c, x, theta)) < 1e-12);
    }
    SUBCASE("random matchgate encodings") {
        for (int trial = 0; trial < 5; trial++) {
            auto c = random_flipped_matchgate(4, 3, 10, rng);
            auto theta = random_angles(rng, c.num_theta());
            auto s = fermion_flipped_surrogate(c, theta);
            CHECK(s.term_count() <= 28);
            for (int k = 0; k < 10; k++) {
                auto x = random_inputs(rng, c.num_inputs(), InputDomain::Continuous);
                CHECK(std::abs(s.evaluate(x) - expectation(c, x, theta)) < 1e-9);
            }
        }
    }
    SUBCASE("agrees with the pauli surrogate on diagonal encodings") {
        CircuitIR c = random_flipped(3, 3, 0, rng);
        c.layers[1].gates.clear();
        for (std::uint32_t q = 0; q < 3; q++) {
            c.layers[1].gates.push_back(Gate::encoding(GateTag::EncRZ, static_cast<int>(q), q));
        }
        c.observable = WeightedPauliSum::from_pauli(random_quadratic_majorana(3, rng));
        auto theta = random_angles(rng, c.num_theta());
        auto fermion = fermion_flipped_surrogate(c, theta);
        BackpropOptions opts;
        opts.domain = InputDomain::Continuous;
        auto pauli = flipped_surrogate(c, theta, opts);
        for (int k = 0; k < 20; k++) {
            auto x = random_inputs(rng, 3, InputDomain::Continuous);
            CHECK(std::abs(fermion.evaluate(x) - pauli.evaluate(x)) < 1e-9);
        }
    }
    SUBCASE("non-matchgate encodings are rejected") {
        auto c = random_flipped(3, 2, 0, rng);
        c.observable = WeightedPauliSum::from_pauli(random_quadratic_majorana(3, rng));
        CHECK_THROWS_AS(fermion_flipped_surrogate(c, random_angles(rng, c.num_theta())), Error);
    }
}

TEST_CASE("whole-circuit fermion surrogate matches the oracle") {
    Rng rng(41);
    for (std::uint32_t n = 2; n <= 5; ++n) {
        auto c = random_matchgate(n, 6, 4, true, rng);
        auto theta = random_angles(rng, c.num_theta());
        auto s = fermion_surrogate(c, theta);
        for (int k = 0; k < 10; ++k) {
            auto x = random_inputs(rng, c.num_inputs(), InputDomain::Continuous);
            CHECK(std::abs(s.evaluate(x) - expectation(c, x, theta)) < 1e-9);
        }
    }
}
