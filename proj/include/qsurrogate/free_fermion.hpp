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

#include <Eigen/Dense>
#include <span>

#include "qsurrogate/circuit.hpp"
#include "qsurrogate/majorana.hpp"
#include "qsurrogate/statevector.hpp"
#include "qsurrogate/surrogate.hpp"

namespace qsurrogate {

/// Gamma_pq = i <gamma_p gamma_q> for p != q, real antisymmetric 2n x 2n.
class CovarianceState {
   public:
    static CovarianceState vacuum(std::uint32_t n_modes);
    /// Reads the quadratic moments off a dense state (any state, not only Gaussian ones).
    static CovarianceState from_dense(const DenseState &psi);
    static CovarianceState from_matrix(Eigen::MatrixXd gamma);

    std::uint32_t n_modes() const {
        return n_modes_;
    }
    const Eigen::MatrixXd &gamma() const {
        return gamma_;
    }

   private:
    std::uint32_t n_modes_ = 0;
    Eigen::MatrixXd gamma_;
};

/// Row r holds the coefficients of g^dagger gamma_r g in the gamma basis.
Eigen::MatrixXd gate_rotation(std::uint32_t n_modes, const Gate &g, std::span<const double> x,
                              std::span<const double> theta);
/// Product R_L ... R_1 for gates applied first to last.
Eigen::MatrixXd compile_rotation(std::uint32_t n_modes, std::span<const Gate> gates, std::span<const double> x,
                                 std::span<const double> theta);
Eigen::MatrixXd compile_rotation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta);

/// Gamma <- R Gamma R^T.
CovarianceState evolve(const CovarianceState &state, const Eigen::MatrixXd &rotation);

/// <prefactor gamma_{i1} ... gamma_{ik}> for k in {0, 2, 4}; requires a Gaussian state for k = 4.
double expect_monomial(const CovarianceState &state, const MajoranaMonomial &m);

/// f(x, theta) for a fully matchgate circuit from the vacuum.
double fermion_expectation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta);

/// Boolean support of the mode rotation of a gate list (independent of angles).
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> rotation_support(std::uint32_t n_modes,
                                                                      std::span<const Gate> gates);

struct CovarianceEstimate {
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    double value = 0.0;
    double std_error = 0.0;
};

/// Pairs (p < q) whose covariance entries the flipped fermion surrogate needs.
std::vector<std::pair<std::uint32_t, std::uint32_t>> required_pairs(const CircuitIR &c);

/// Surrogate of an all-matchgate circuit from the vacuum: trainable angles are
/// bound into fixed-angle gates and the vacuum covariance supplies the pairs.
FunctionSurrogate fermion_surrogate(const CircuitIR &c, std::span<const double> theta);

/// Class-2 surrogate of a flipped circuit with a matchgate encoding block.
/// Coefficients come from the oracle on the trainable block, or from estimates when given.
FunctionSurrogate fermion_flipped_surrogate(const CircuitIR &c, std::span<const double> theta,
                                            const std::vector<CovarianceEstimate> *estimates = nullptr);

}  // namespace qsurrogate
