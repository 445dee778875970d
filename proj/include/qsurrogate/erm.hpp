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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsurrogate/circuit.hpp"
#include "qsurrogate/surrogate.hpp"

namespace qsurrogate {

struct Sample {
    std::vector<double> x;
    double y = 0.0;
};

struct TrainingSet {
    std::vector<Sample> samples;
    InputDomain domain = InputDomain::Continuous;

    std::size_t size() const {
        return samples.size();
    }
    std::size_t dim() const {
        return samples.empty() ? 0 : samples.front().x.size();
    }
    /// Throws a validation error on empty sets, ragged inputs or non-finite values.
    void validate() const;
};

using BasisFunction = std::function<double(std::span<const double>)>;

struct FeatureBasis {
    std::vector<BasisFunction> functions;
    std::vector<std::string> labels;
    /// Fixed offset added to every prediction (non-zero only for fermionic surrogates).
    double offset = 0.0;

    std::size_t size() const {
        return functions.size();
    }
};

/// All 2^d parity functions (-1)^{alpha . x}, alpha in index order.
FeatureBasis parity_basis(std::uint32_t d);
/// Products of {1, cos(pi x_j), sin(pi x_j)} over the given coordinates (3^k functions).
FeatureBasis trig_product_basis(std::span<const int> coordinates);
/// Features whose span contains the surrogate for every value of its bound coefficients:
/// one per coefficient group, or one per spectral index when there is a single group,
/// one per Majorana pair, or the full trig product basis of a tensor train (at most 3^8).
FeatureBasis surrogate_basis(const FunctionSurrogate &s);

/// Design matrix Phi(i, k) = T_k(x_i).
Eigen::MatrixXd design_matrix(const FeatureBasis &basis, const TrainingSet &s);

struct QuadraticForm {
    Eigen::MatrixXd m;
    Eigen::VectorXd v;
    double z = 0.0;
    std::size_t n_samples = 0;

    /// C^T M C - 2 V^T C + Z.
    double value(const Eigen::VectorXd &c) const;
};

QuadraticForm build_quadratic(const FeatureBasis &basis, const TrainingSet &s);

enum class SolverKind { Direct, KernelDual };
std::string_view solver_name(SolverKind k);

struct ErmSolution {
    Eigen::VectorXd coefficients;
    double risk = 0.0;
    SolverKind solver = SolverKind::Direct;
    double ridge = 0.0;
    std::optional<Eigen::VectorXd> dual_alphas;
    /// Set when the ridge is zero and the system is rank deficient; the
    /// coefficients are then the minimum-norm minimizer.
    bool degenerate = false;
};

/// Minimizes Q(C) + ridge |C|^2.
ErmSolution solve_direct(const QuadraticForm &q, double ridge = 0.0);
/// Ridge regression in the dual: (K + N ridge I) alpha = y, C = Phi^T alpha.
ErmSolution solve_kernel(const FeatureBasis &basis, const TrainingSet &s, double ridge = 1e-10);

double predict(const FeatureBasis &basis, const Eigen::VectorXd &c, std::span<const double> x);
/// (1/N) sum_i (prediction_i - y_i)^2.
double empirical_risk(std::span<const double> predictions, const TrainingSet &s);
double empirical_risk(const FeatureBasis &basis, const Eigen::VectorXd &c, const TrainingSet &s);

enum class OptimizerMethod { CoordinateDescent, GradientDescent };
std::string_view optimizer_name(OptimizerMethod m);
OptimizerMethod parse_optimizer(std::string_view name);

struct OptimizerConfig {
    OptimizerMethod method = OptimizerMethod::CoordinateDescent;
    /// Sweeps for coordinate descent, steps for gradient descent.
    std::size_t max_iterations = 30;
    double learning_rate = 0.2;
    double fd_step = 1e-5;
    /// Stop once an iteration improves the risk by less than this.
    double tolerance = 1e-12;
};

struct RestrictedResult {
    std::vector<double> theta;
    double risk = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Risk after every iteration, starting with the initial point.
    std::vector<double> trajectory;
};

/// Oracle risk of f_theta on the training set.
double circuit_risk(const CircuitIR &c, std::span<const double> theta, const TrainingSet &s);

/// Minimizes the oracle risk over theta. Starts from initial_theta when given,
/// otherwise from angles drawn with the seed.
RestrictedResult restricted_optimize(const CircuitIR &c, const TrainingSet &s, const OptimizerConfig &opt,
                                     std::uint64_t seed, std::optional<std::vector<double>> initial_theta = {});

using ObservableFamily = std::function<WeightedPauliSum(std::span<const double>)>;

/// (1/N) sum_i A_i (x) A_i with A_i = O(x_i) - y_i I, merged, on 2n qubits.
WeightedPauliSum build_data_hamiltonian(const TrainingSet &s, const ObservableFamily &family);

/// x -> E(x)^dagger O E(x) for the encoding block of a flipped circuit.
ObservableFamily flipped_observable_family(const CircuitIR &c);

struct ReductionRow {
    double risk = 0.0;
    double energy_product = 0.0;
    double energy_direct = 0.0;
};

struct ReductionReport {
    std::vector<ReductionRow> rows;
    std::size_t hamiltonian_terms = 0;
    double max_discrepancy = 0.0;
    double max_route_discrepancy = 0.0;
};

/// Compares the empirical risk with the doubled-register energy for each theta,
/// both through products of n-qubit expectations and on a 2n-qubit state.
ReductionReport verify_reduction(const CircuitIR &c, const TrainingSet &s,
                                 const std::vector<std::vector<double>> &thetas);

struct RiskInterval {
    double lower = 0.0;
    double estimate = 0.0;
    double upper = 0.0;
};

/// Interval for the risk of the exact function given a surrogate with per-point error bounds.
RiskInterval risk_interval(const FunctionSurrogate &s, const TrainingSet &data, double coverage = 3.0);

}  // namespace qsurrogate
