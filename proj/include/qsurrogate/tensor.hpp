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
#include <vector>

#include "qsurrogate/circuit.hpp"
#include "qsurrogate/statevector.hpp"
#include "qsurrogate/surrogate.hpp"

namespace qsurrogate {

/// One MPS site: shape (left, 2, right), row-major.
struct StateCore {
    std::size_t left = 1;
    std::size_t right = 1;
    std::vector<complex> data;

    complex &at(std::size_t l, std::size_t s, std::size_t r) {
        return data[(l * 2 + s) * right + r];
    }
    complex at(std::size_t l, std::size_t s, std::size_t r) const {
        return data[(l * 2 + s) * right + r];
    }
};

class Mps {
   public:
    static Mps zero(std::uint32_t n);

    std::uint32_t num_qubits() const {
        return static_cast<std::uint32_t>(cores_.size());
    }
    const std::vector<StateCore> &cores() const {
        return cores_;
    }
    std::vector<std::size_t> bond_dims() const;
    std::size_t max_bond() const;
    /// Sum of squared singular values dropped so far.
    double discarded_weight() const {
        return discarded_;
    }

    DenseState to_dense() const;
    complex expectation(const PauliString &p) const;

    /// Left-orthogonal cores left of center, right-orthogonal right of it.
    void canonicalize(std::size_t center);
    /// Largest deviation from the isometry condition under the gauge around center.
    double isometry_residue(std::size_t center) const;

   private:
    friend Mps mps_apply(const Mps &, const Gate &, std::span<const double>, std::span<const double>, std::size_t,
                         double);
    std::vector<StateCore> cores_;
    double discarded_ = 0.0;
};

struct TruncationPolicy {
    std::size_t max_chi = 256;
    /// Singular values at or below svd_tol * largest are dropped.
    double svd_tol = 1e-12;
};

/// Applies one gate. Two-qubit gates must act on neighbouring sites.
Mps mps_apply(const Mps &state, const Gate &g, std::span<const double> x, std::span<const double> theta,
              std::size_t max_chi = 256, double svd_tol = 1e-12);

/// Runs a circuit (non-adjacent gates SWAP-routed) and returns the final MPS.
Mps mps_run(const CircuitIR &c, std::span<const double> x, std::span<const double> theta,
            const TruncationPolicy &policy = {});
double mps_expectation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta,
                       const TruncationPolicy &policy = {});

struct ExtractOptions {
    /// 0 keeps every numerically non-zero singular value.
    std::size_t max_chi = 0;
    /// Relative cutoff; the default only removes rounding-level values.
    double svd_tol = 1e-13;
    bool require_class1 = true;
    ClassifierConfig classifier{};
};

struct ExtractionStats {
    std::size_t operator_max_bond = 0;
    std::size_t function_max_bond = 0;
    std::size_t legs = 0;
};

/// f_theta as a trig3 tensor train, one core per encoding gate ordered by
/// (qubit, forward time).
FunctionSurrogate extract_function_mps(const CircuitIR &c, std::span<const double> theta,
                                       const ExtractOptions &opts = {}, ExtractionStats *stats = nullptr);

struct TruncationResult {
    FunctionSurrogate surrogate;
    /// Upper bound on the 2-norm of the coefficient-array change.
    double coefficient_bound = 0.0;
    /// coefficient_bound * sqrt(2)^legs, a sup-norm bound on |f - f_truncated|.
    double evaluation_bound = 0.0;
};

TruncationResult truncate(const FunctionSurrogate &s, std::size_t max_chi, double tol);

}  // namespace qsurrogate
