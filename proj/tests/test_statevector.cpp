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
#include <numbers>

#include "doctest.h"
#include "qsurrogate/error.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"
#include "support/dense_oracle.hpp"

using namespace qsurrogate;

namespace {

CircuitIR single_qubit(std::vector<Gate> gates, const char *obs, BlockKind kind = BlockKind::Encoding) {
    CircuitIR c;
    c.n = 1;
    c.layers = {{kind, std::move(gates)}};
    c.observable = WeightedPauliSum::parse(1, {{1.0, obs}});
    return c;
}

}  // namespace

TEST_CASE("oracle basics") {
    CircuitIR empty = single_qubit({}, "Z", BlockKind::Trainable);
    auto psi = run(empty, {}, {});
    CHECK(psi.amplitudes()[0] == complex{1, 0});
    CHECK(expectation(empty, {}, {}) == 1.0);

    CircuitIR h = single_qubit({Gate::fixed(GateTag::H, 0)}, "Z", BlockKind::Trainable);
    auto ph = run(h, {}, {});
    CHECK(std::abs(ph.amplitudes()[0] - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(ph.amplitudes()[1] - 1 / std::sqrt(2.0)) < 1e-15);

    CircuitIR enc = single_qubit({Gate::fixed(GateTag::H, 0), Gate::encoding(GateTag::EncRZ, 0, 0)}, "X");
    for (double x : {0.0, 0.25, 0.5, 0.9, -0.3}) {
        std::vector<double> xs{x};
        CHECK(std::abs(expectation(enc, xs, {}) - std::cos(std::numbers::pi * x)) < 1e-14);
    }
    enc.observable = WeightedPauliSum::parse(1, {{1.0, "I"}});
    CHECK(std::abs(expectation(enc, std::vector<double>{0.3}, {}) - 1.0) < 1e-14);

    CHECK_THROWS_AS(expectation(single_qubit({Gate::encoding(GateTag::EncRZ, 0, 0)}, "Z"), {}, {}), Error);
    CircuitIR big;
    big.n = 15;
    big.layers = {{BlockKind::Trainable, {}}};
    big.observable = WeightedPauliSum::from_pauli(PauliString::single(15, 0, 'Z'));
    CHECK_THROWS_AS(run(big, {}, {}), Error);
}

TEST_CASE("oracle agrees with dense matrices on random circuits") {
    Rng rng(31);
    for (int trial = 0; trial < 12; trial++) {
        CircuitIR c;
        switch (trial % 4) {
            case 0:
                c = random_brickwork(4, 3, 6, rng);
                break;
            case 1:
                c = random_doped_clifford(4, 3, 15, rng);
                break;
            case 2:
                c = random_flipped(3, 2, 2, rng);
                break;
            default:
                c = random_matchgate(4, 5, 3, true, rng);
        }
        auto theta = random_angles(rng, c.num_theta());
        auto x = random_inputs(rng, c.num_inputs(), InputDomain::Continuous);
        auto psi = run(c, x, theta);
        CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-12);
        CHECK(std::abs(expectation(c, x, theta) - testing::reference_value(c, x, theta)) < 1e-12);
    }
}

TEST_CASE("norm is preserved across long gate sequences") {
    Rng rng(4);
    auto c = random_doped_clifford(6, 6, 2000, rng);
    auto psi = run(c, random_inputs(rng, 6, InputDomain::Continuous), random_angles(rng, c.num_theta()));
    CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("pauli expectations reconstruct the density matrix") {
    Rng rng(12);
    auto c = random_brickwork(3, 3, 4, rng);
    auto x = random_inputs(rng, 3, InputDomain::Continuous);
    auto theta = random_angles(rng, c.num_theta());
    auto psi = run(c, x, theta);
    testing::Matrix rho = testing::Matrix::Zero(8, 8);
    for (std::uint64_t z = 0; z < 8; z++) {
        for (std::uint64_t xb = 0; xb < 8; xb++) {
            PauliString p = PauliString::identity(3);
            p.z = z;
            p.x = xb;
            auto v = psi.expectation(p);
            CHECK(std::abs(v.imag()) < 1e-12);
            rho += v.real() * testing::pauli_matrix(p) / 8.0;
        }
    }
    Eigen::VectorXcd v(8);
    for (int j = 0; j < 8; j++) {
        v[j] = psi.amplitudes()[j];
    }
    CHECK((rho - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("tabulate and binary grid") {
    Rng rng(5);
    auto c = random_flipped(3, 2, 1, rng);
    auto theta = random_angles(rng, c.num_theta());
    auto table = tabulate(c, theta, binary_grid(3));
    CHECK(table.size() == 8);
    for (int k : {1, 4, 7}) {
        CHECK(table[k].second == expectation(c, table[k].first, theta));
    }
    CHECK_THROWS_AS(tabulate(c, theta, {}), Error);

    auto constant = c;
    constant.observable = WeightedPauliSum::parse(3, {{0.5, "III"}});
    for (const auto &[x, f] : tabulate(constant, theta, binary_grid(3))) {
        CHECK(std::abs(f - 0.5) < 1e-14);
    }
}

TEST_CASE("state dump round trip") {
    Rng rng(6);
    auto c = random_brickwork(3, 3, 4, rng);
    auto psi = run(c, random_inputs(rng, 3, InputDomain::Continuous), random_angles(rng, c.num_theta()));
    auto path = std::filesystem::temp_directory_path() / "qsurrogate_state_dump.bin";
    psi.dump(path);
    CHECK(std::filesystem::file_size(path) == 8 + 8 * 16);
    auto back = DenseState::load(path);
    CHECK(back.amplitudes() == psi.amplitudes());
    std::filesystem::remove(path);
}
