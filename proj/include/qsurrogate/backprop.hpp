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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qsurrogate/circuit.hpp"
#include "qsurrogate/statevector.hpp"
#include "qsurrogate/surrogate.hpp"

namespace qsurrogate {

/// coefficient * T_alpha(x) * pauli, with pauli kept in its Hermitian (phase-free) form.
struct ExpansionTerm {
    SpectralIndex alpha{0, 0};
    PauliString pauli;
    double coefficient = 0.0;
};

/// Heisenberg-evolved observable O(x) = sum_k T_k(x) P_k. Binary inputs index
/// alpha by input coordinate; continuous inputs use trig3 digits per encoding gate.
struct ObservableExpansion {
    std::uint32_t n = 0;
    std::uint32_t n_inputs = 0;
    InputDomain domain = InputDomain::Binary;
    std::vector<ExpansionTerm> terms;
    /// Continuous domain: input coordinate of each trig leg (forward gate order).
    std::vector<int> leg_inputs;
    /// Gates that could branch a term (non-Clifford rotations, continuous encodings).
    std::uint32_t branching_count = 0;

    BasisKind basis() const {
        return domain == InputDomain::Binary ? BasisKind::FourierBinary : BasisKind::Trig3;
    }
};

struct BackpropOptions {
    InputDomain domain = InputDomain::Binary;
    std::size_t explosion_cap = std::size_t{1} << 20;
    double drop_below = 0.0;
};

/// Walks blocks [first_block, last_block) in reverse, conjugating the observable.
ObservableExpansion backpropagate(const CircuitIR &c, const WeightedPauliSum &observable, std::size_t first_block,
                                  std::size_t last_block, std::span<const double> theta,
                                  const BackpropOptions &opts = {});
/// Whole circuit with its own observable.
ObservableExpansion backpropagate(const CircuitIR &c, std::span<const double> theta, const BackpropOptions &opts = {});

/// sum_k T_k(x) <psi_0|P_k|psi_0>; the zero state is handled without a dense vector.
double evaluate_expansion(const ObservableExpansion &e, std::span<const double> x,
                          const DenseState *initial_state = nullptr);

/// Full-circuit expansion bound to the circuit's initial state (Class-1 route).
FunctionSurrogate expansion_surrogate(const ObservableExpansion &e, const CircuitIR &c);

struct CoefficientEstimate {
    std::string pauli;  // letters, qubit 0 first
    double value = 0.0;
    double std_error = 0.0;
};

/// Pauli strings P_k whose expectations a flipped surrogate needs, in canonical order.
std::vector<PauliString> required_paulis(const CircuitIR &c, const BackpropOptions &opts = {});

/// Class-2 surrogate sum_k C_k T_k(x) of a flipped circuit. C_k = Tr[rho(theta) P_k]
/// from the oracle, or from estimates (which must cover every required P_k).
FunctionSurrogate flipped_surrogate(const CircuitIR &c, std::span<const double> theta, const BackpropOptions &opts = {},
                                    const std::vector<CoefficientEstimate> *estimates = nullptr);

struct TermCensus {
    std::size_t term_count = 0;
    double max_abs_coefficient = 0.0;
    std::vector<SpectralIndex> fourier_support;
    std::size_t distinct_paulis = 0;
};

TermCensus term_census(const ObservableExpansion &e);

/// One line per term: "coefficient<TAB>alpha-hex<TAB>pauli-text".
std::string dump_expansion(const ObservableExpansion &e);

}  // namespace qsurrogate
