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

// Brute-force matrix reference used only by the tests. Everything is built
// from explicit 2^n x 2^n matrices so it shares no code path with the engines.

#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>

#include "qsurrogate/circuit.hpp"

namespace qsurrogate::testing {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Matrix of a Pauli word such as "-iXZY" (qubit 0 leftmost, least significant bit).
Matrix pauli_matrix(const std::string &text);
Matrix pauli_matrix(const PauliString &p);
Matrix sum_matrix(const WeightedPauliSum &s);

/// exp(-i t K) for Hermitian K.
Matrix hermitian_exp(const Matrix &k, double t);

Matrix gate_matrix(std::uint32_t n, const Gate &g, std::span<const double> x, std::span<const double> theta);
Matrix circuit_unitary(const CircuitIR &c, std::span<const double> x, std::span<const double> theta);
Vector initial_vector(const CircuitIR &c);

/// <psi_0| U^dagger O U |psi_0> computed with dense matrices.
double reference_value(const CircuitIR &c, std::span<const double> x, std::span<const double> theta);

/// Tr(P M) / 2^n.
std::complex<double> pauli_component(const Matrix &m, const std::string &pauli_text);

}  // namespace qsurrogate::testing
