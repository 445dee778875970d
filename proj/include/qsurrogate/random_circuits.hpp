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
#include <random>
#include <vector>

#include "qsurrogate/circuit.hpp"

namespace qsurrogate {

using Rng = std::mt19937_64;

/// Uniform double in [lo, hi) built from the raw 64-bit stream so results do
/// not depend on the standard library's distribution implementation.
double uniform_real(Rng &rng, double lo = 0.0, double hi = 1.0);
std::uint64_t uniform_index(Rng &rng, std::uint64_t bound);
double standard_normal(Rng &rng);

std::vector<double> random_angles(Rng &rng, std::size_t count);
std::vector<double> random_inputs(Rng &rng, std::size_t d, InputDomain domain);

/// Hermitian Pauli supported on at most max_weight qubits, never the identity.
PauliString random_local_pauli(std::uint32_t n, std::uint32_t max_weight, Rng &rng);
/// i gamma_a gamma_b for a random pair a < b (Hermitian, Majorana degree 2).
PauliString random_quadratic_majorana(std::uint32_t n, Rng &rng);

/// Alternating encoding/trainable brickwork whose routed depth never exceeds max_depth.
/// Encoding layers use EncRZ on x_(q mod d); trainable layers use RX/RZ slots and CZ/CNOT bricks.
CircuitIR random_brickwork(std::uint32_t n, std::uint32_t d, std::uint32_t max_depth, Rng &rng);

/// Encoding-first circuit: H + EncRZ encoding, then a random Clifford trainable block
/// doped with exactly t non-Clifford rotations (T gates and RZ slots).
CircuitIR random_doped_clifford(std::uint32_t n, std::uint32_t t, std::uint32_t clifford_gates, Rng &rng);

/// Flipped circuit: deep generic trainable block, then an encoding block made of
/// Cliffords, EncRZ gates and encoding_t T gates.
CircuitIR random_flipped(std::uint32_t n, std::uint32_t trainable_layers, std::uint32_t encoding_t, Rng &rng);

/// Alternating matchgate circuit (Givens on neighbours, RZ, X, Z, S, T, EncRZ, optional EncGivens)
/// starting from half filling, with a quadratic Majorana observable.
CircuitIR random_matchgate(std::uint32_t n, std::uint32_t gates_per_block, std::uint32_t blocks, bool encoding_givens,
                           Rng &rng);

/// Flipped circuit with a matchgate encoding block and a generic trainable block.
CircuitIR random_flipped_matchgate(std::uint32_t n, std::uint32_t trainable_layers, std::uint32_t encoding_gates,
                                   Rng &rng);

}  // namespace qsurrogate
