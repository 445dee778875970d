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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "qsurrogate/circuit.hpp"
#include "qsurrogate/pauli.hpp"

namespace qsurrogate {

/// Dense amplitudes, little-endian in qubit index (qubit 0 is the least
/// significant bit of the basis-state index).
class DenseState {
   public:
    static DenseState zero(std::uint32_t n);
    static DenseState from_amplitudes(std::uint32_t n, std::vector<complex> amplitudes);

    std::uint32_t num_qubits() const {
        return n_;
    }
    const std::vector<complex> &amplitudes() const {
        return amps_;
    }
    std::size_t dim() const {
        return amps_.size();
    }
    double norm_squared() const;

    void apply_1q(std::uint32_t q, const std::array<complex, 4> &m);
    void apply_cnot(std::uint32_t control, std::uint32_t target);
    void apply_cz(std::uint32_t a, std::uint32_t b);
    void apply_swap(std::uint32_t a, std::uint32_t b);
    /// exp(-i angle P / 2) for a Hermitian Pauli string P.
    void apply_pauli_rotation(const PauliString &p, double angle);
    void apply_gate(const Gate &g, std::span<const double> x, std::span<const double> theta);

    complex expectation(const PauliString &p) const;
    complex expectation(const WeightedPauliSum &s) const;

    /// |this> (x) |other> with this state on the low qubits.
    DenseState tensor(const DenseState &other) const;

    /// Binary dump: n as uint64, then 2^n (re, im) pairs, all little-endian 64-bit.
    void dump(const std::filesystem::path &path) const;
    static DenseState load(const std::filesystem::path &path);

   private:
    std::uint32_t n_ = 0;
    std::vector<complex> amps_;
};

struct OracleConfig {
    std::uint32_t max_qubits = 14;
};

std::array<complex, 4> single_qubit_matrix(const Gate &g, std::span<const double> x, std::span<const double> theta);

/// U(x, theta)|psi_0>.
DenseState run(const CircuitIR &c, std::span<const double> x, std::span<const double> theta,
               const OracleConfig &cfg = {});
/// Applies blocks [first, last) to the circuit's initial state.
DenseState run_blocks(const CircuitIR &c, std::size_t first, std::size_t last, std::span<const double> x,
                      std::span<const double> theta, const OracleConfig &cfg = {});

/// f_theta(x) = <psi_0| U^dagger O U |psi_0>.
double expectation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta,
                   const OracleConfig &cfg = {});

/// Real part of <psi|O|psi> after checking Hermiticity and the imaginary residue.
double hermitian_expectation(const DenseState &psi, const WeightedPauliSum &observable);

using Tabulated = std::vector<std::pair<std::vector<double>, double>>;
Tabulated tabulate(const CircuitIR &c, std::span<const double> theta, const std::vector<std::vector<double>> &grid,
                   const OracleConfig &cfg = {});

/// All 2^d binary inputs in index order (bit k of the index is x_k).
std::vector<std::vector<double>> binary_grid(std::uint32_t d);

}  // namespace qsurrogate
