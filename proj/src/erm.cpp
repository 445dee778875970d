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

#include "qsurrogate/erm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsurrogate/backprop.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/random_circuits.hpp"
#include "qsurrogate/statevector.hpp"

namespace qsurrogate {

void TrainingSet::validate() const {
    if (samples.empty()) {
        fail(ErrorKind::Validation, "training set is empty");
    }
    const std::size_t d = dim();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto &s = samples[i];
        if (s.x.size() != d) {
            fail(ErrorKind::Validation, "sample " + std::to_string(i) + " has " + std::to_string(s.x.size()) +
                                            " inputs, expected " + std::to_string(d));
        }
        if (!std::isfinite(s.y) || !std::all_of(s.x.begin(), s.x.end(), [](double v) { return std::isfinite(v); })) {
            fail(ErrorKind::Validation, "sample " + std::to_string(i) + " is not finite");
        }
        if (domain == InputDomain::Binary &&
            !std::all_of(s.x.begin(), s.x.end(), [](double v) { return v == 0.0 || v == 1.0; })) {
            fail(ErrorKind::Validation, "sample " + std::to_string(i) + " is not binary");
        }
    }
}

FeatureBasis parity_basis(std::uint32_t d) {
    if (d > 20) {
        fail(ErrorKind::Capacity, "parity basis limited to 20 inputs");
    }
    FeatureBasis b;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        b.functions.emplace_back([mask, d](std::span<const double> x) {
            int parity = 0;
            for (std::uint32_t j = 0; j < d; ++j) {
                if ((mask >> j) & 1u) {
                    parity ^= x[j] != 0.0 ? 1 : 0;
                }
            }
            return parity ? -1.0 : 1.0;
        });
        b.labels.push_back(spectral_hex({mask, 0}));
    }
    return b;
}

FeatureBasis trig_product_basis(std::span<const int> coordinates) {
    const std::size_t k = coordinates.size();
    if (k > 12) {
        fail(ErrorKind::Capacity, "trig product basis limited to 12 legs");
    }
    std::size_t count = 1;
    for (std::size_t i = 0; i < k; ++i) {
        count *= 3;
    }
    FeatureBasis b;
    std::vector<int> coords(coordinates.begin(), coordinates.end());
    for (std::size_t idx = 0; idx < count; ++idx) {
        SpectralIndex alpha{0, 0};
        std::size_t rem = idx;
        for (std::size_t l = k; l-- > 0;) {
            set_trig_digit(alpha, static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(rem % 3));
            rem /= 3;
        }
        b.functions.emplace_back([alpha, coords](std::span<const double> x) {
            return basis_value(BasisKind::Trig3, alpha, x, coords);
        });
        b.labels.push_back(spectral_hex(alpha));
    }
    return b;
}

FeatureBasis surrogate_basis(const FunctionSurrogate &s) {
    const BasisKind kind = s.basis();
    if (const auto *sp = std::get_if<SparseRepresentation>(&s.representation())) {
        FeatureBasis b;
        const std::vector<int> legs = sp->leg_inputs;
        if (sp->groups.size() > 1) {
            for (std::uint32_t g = 0; g < sp->groups.size(); ++g) {
                std::vector<SparseTerm> terms;
                for (const auto &t : sp->terms) {
                    if (t.group == g) {
                        terms.push_back(t);
                    }
                }
                b.functions.emplace_back([kind, terms, legs](std::span<const double> x) {
                    double acc = 0.0;
                    for (const auto &t : terms) {
                        acc += t.weight * basis_value(kind, t.alpha, x, legs);
                    }
                    return acc;
                });
                b.labels.push_back(sp->groups[g].label);
            }
            return b;
        }
        std::vector<SpectralIndex> seen;
        for (const auto &t : sp->terms) {
            if (std::find(seen.begin(), seen.end(), t.alpha) != seen.end()) {
                continue;
            }
            seen.push_back(t.alpha);
            const SpectralIndex alpha = t.alpha;
            b.functions.emplace_back(
                [kind, alpha, legs](std::span<const double> x) { return basis_value(kind, alpha, x, legs); });
            b.labels.push_back(spectral_hex(alpha));
        }
        return b;
    }
    if (const auto *tt = std::get_if<TensorTrain>(&s.representation())) {
        if (tt->leg_inputs.size() > 8) {
            fail(ErrorKind::Capacity, "tensor-train feature expansion limited to 8 legs");
        }
        return trig_product_basis(tt->leg_inputs);
    }
    const auto &mq = std::get<MajoranaQuadratic>(s.representation());
    FeatureBasis b;
    b.offset = mq.constant;
    const std::uint32_t n_inputs = s.n_inputs();
    for (const auto &pair : mq.pairs) {
        MajoranaQuadratic single = mq;
        single.constant = 0.0;
        single.pairs = {{pair.p, pair.q, 1.0, 0.0}};
        const FunctionSurrogate unit(BasisKind::MajoranaQuadratic, n_inputs, std::move(single));
        b.functions.emplace_back([unit](std::span<const double> x) { return unit.evaluate(x); });
        b.labels.push_back(std::to_string(pair.p) + "," + std::to_string(pair.q));
    }
    return b;
}

Eigen::MatrixXd design_matrix(const FeatureBasis &basis, const TrainingSet &s) {
    s.validate();
    Eigen::MatrixXd phi(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const double v = basis.functions[k](s.samples[i].x);
            if (!std::isfinite(v)) {
                fail(ErrorKind::Numeric, "basis function " + std::to_string(k) + " is not finite at sample " +
                                             std::to_string(i));
            }
            phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
        }
    }
    return phi;
}

namespace {

Eigen::VectorXd shifted_labels(const FeatureBasis &basis, const TrainingSet &s) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        y(static_cast<Eigen::Index>(i)) = s.samples[i].y - basis.offset;
    }
    return y;
}

}  // namespace

double QuadraticForm::value(const Eigen::VectorXd &c) const {
    return c.dot(m * c) - 2.0 * v.dot(c) + z;
}

QuadraticForm build_quadratic(const FeatureBasis &basis, const TrainingSet &s) {
    if (basis.size() == 0) {
        fail(ErrorKind::Validation, "basis is empty");
    }
    const Eigen::MatrixXd phi = design_matrix(basis, s);
    const Eigen::VectorXd y = shifted_labels(basis, s);
    const double inv_n = 1.0 / static_cast<double>(s.size());
    QuadraticForm q;
    q.n_samples = s.size();
    q.m = inv_n * (phi.transpose() * phi);
    q.m = 0.5 * (q.m + q.m.transpose()).eval();
    q.v = inv_n * (phi.transpose() * y);
    q.z = inv_n * y.squaredNorm();
    return q;
}

std::string_view solver_name(SolverKind k) {
    return k == SolverKind::Direct ? "direct" : "kernel-dual";
}

namespace {

/// Minimum-norm solve of a symmetric PSD system; reports rank deficiency.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, bool &degenerate) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    // Pivots below this fraction of the largest count as zero.
    cod.setThreshold(1e-11);
    cod.compute(a);
    degenerate = cod.rank() < a.rows();
    return cod.solve(b);
}

void check_ridge(double ridge) {
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
        fail(ErrorKind::Configuration, "ridge must be a finite non-negative number");
    }
}

}  // namespace

ErmSolution solve_direct(const QuadraticForm &q, double ridge) {
    check_ridge(ridge);
    ErmSolution sol;
    sol.solver = SolverKind::Direct;
    sol.ridge = ridge;
    const auto m = q.m.rows();
    if (ridge > 0.0) {
        Eigen::MatrixXd a = q.m + ridge * Eigen::MatrixXd::Identity(m, m);
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() != Eigen::Success) {
            fail(ErrorKind::Numeric, "regularized system is not positive definite");
        }
        sol.coefficients = llt.solve(q.v);
    } else {
        sol.coefficients = min_norm_solve(q.m, q.v, sol.degenerate);
    }
    sol.risk = std::max(0.0, q.value(sol.coefficients));
    return sol;
}

ErmSolution solve_kernel(const FeatureBasis &basis, const TrainingSet &s, double ridge) {
    check_ridge(ridge);
    const Eigen::MatrixXd phi = design_matrix(basis, s);
    const Eigen::VectorXd y = shifted_labels(basis, s);
    const auto n = phi.rows();
    Eigen::MatrixXd gram = phi * phi.transpose();
    gram = 0.5 * (gram + gram.transpose()).eval();
    ErmSolution sol;
    sol.solver = SolverKind::KernelDual;
    sol.ridge = ridge;
    Eigen::VectorXd alpha;
    if (ridge > 0.0) {
        Eigen::MatrixXd a = gram + static_cast<double>(n) * ridge * Eigen::MatrixXd::Identity(n, n);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
        if (ldlt.info() != Eigen::Success) {
            fail(ErrorKind::Numeric, "regularized Gram system failed to factor");
        }
        alpha = ldlt.solve(y);
    } else {
        alpha = min_norm_solve(gram, y, sol.degenerate);
    }
    sol.coefficients = phi.transpose() * alpha;
    sol.dual_alphas = alpha;
    sol.risk = empirical_risk(basis, sol.coefficients, s);
    return sol;
}

double predict(const FeatureBasis &basis, const Eigen::VectorXd &c, std::span<const double> x) {
    if (static_cast<std::size_t>(c.size()) != basis.size()) {
        fail(ErrorKind::Dimension, "coefficient count does not match the basis");
    }
    double acc = basis.offset;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        acc += c(static_cast<Eigen::Index>(k)) * basis.functions[k](x);
    }
    return acc;
}

double empirical_risk(std::span<const double> predictions, const TrainingSet &s) {
    if (predictions.size() != s.size() || s.size() == 0) {
        fail(ErrorKind::Dimension, "prediction count does not match the training set");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = predictions[i] - s.samples[i].y;
        acc += r * r;
    }
    return acc / static_cast<double>(s.size());
}

double empirical_risk(const FeatureBasis &basis, const Eigen::VectorXd &c, const TrainingSet &s) {
    std::vector<double> pred;
    pred.reserve(s.size());
    for (const auto &smp : s.samples) {
        pred.push_back(predict(basis, c, smp.x));
    }
    return empirical_risk(pred, s);
}

std::string_view optimizer_name(OptimizerMethod m) {
    return m == OptimizerMethod::CoordinateDescent ? "coordinate-descent" : "gradient-descent";
}

OptimizerMethod parse_optimizer(std::string_view name) {
    if (name == "coordinate-descent") {
        return OptimizerMethod::CoordinateDescent;
    }
    if (name == "gradient-descent") {
        return OptimizerMethod::GradientDescent;
    }
    fail(ErrorKind::Configuration, "unknown optimizer '" + std::string(name) + "'");
}

double circuit_risk(const CircuitIR &c, std::span<const double> theta, const TrainingSet &s) {
    s.validate();
    std::vector<double> pred;
    pred.reserve(s.size());
    for (const auto &smp : s.samples) {
        pred.push_back(expectation(c, smp.x, theta));
    }
    return empirical_risk(pred, s);
}

namespace {

struct SlotUse {
    std::size_t gates = 0;
    bool half_angle = false;
};

/// Gates reading each theta slot. Givens angles enter through half-angle rotations.
std::vector<SlotUse> slot_uses(const CircuitIR &c) {
    std::vector<SlotUse> uses(c.num_theta());
    for (const auto &b : c.layers) {
        for (const auto &g : b.gates) {
            if (is_rotation_tag(g.tag) && !is_encoding_tag(g.tag) && g.slot >= 0 && !g.angle) {
                auto &u = uses[static_cast<std::size_t>(g.slot)];
                u.gates++;
                u.half_angle = u.half_angle || g.tag == GateTag::Givens;
            }
        }
    }
    return uses;
}

/// Exact line minimization along one angle. With t = angle / scale, f is a
/// trigonometric polynomial of degree scale * uses in t, so the risk has degree
/// twice that and is recovered from 2K + 1 equispaced samples.
double minimize_coordinate(const CircuitIR &c, const TrainingSet &s, std::vector<double> &theta, std::size_t j,
                           const SlotUse &use) {
    const double scale = use.half_angle ? 2.0 : 1.0;
    const std::size_t degree = 2 * static_cast<std::size_t>(scale) * std::max<std::size_t>(use.gates, 1);
    const std::size_t points = 2 * degree + 1;
    const double base = theta[j];
    std::vector<double> samples(points);
    for (std::size_t p = 0; p < points; ++p) {
        theta[j] = base + scale * 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(points);
        samples[p] = circuit_risk(c, theta, s);
    }
    std::vector<double> a(degree + 1, 0.0);
    std::vector<double> b(degree + 1, 0.0);
    for (std::size_t k = 0; k <= degree; ++k) {
        for (std::size_t p = 0; p < points; ++p) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * p) / static_cast<double>(points);
            a[k] += samples[p] * std::cos(phase);
            b[k] += samples[p] * std::sin(phase);
        }
        const double norm = (k == 0 ? 1.0 : 2.0) / static_cast<double>(points);
        a[k] *= norm;
        b[k] *= norm;
    }
    const auto model = [&](double t) {
        double v = a[0];
        for (std::size_t k = 1; k <= degree; ++k) {
            v += a[k] * std::cos(static_cast<double>(k) * t) + b[k] * std::sin(static_cast<double>(k) * t);
        }
        return v;
    };
    const auto slope = [&](double t, double &second) {
        double d1 = 0.0;
        second = 0.0;
        for (std::size_t k = 1; k <= degree; ++k) {
            const double kk = static_cast<double>(k);
            d1 += kk * (-a[k] * std::sin(kk * t) + b[k] * std::cos(kk * t));
            second += -kk * kk * (a[k] * std::cos(kk * t) + b[k] * std::sin(kk * t));
        }
        return d1;
    };
    const std::size_t grid = 180 * degree;
    double best_t = 0.0;
    double best_v = model(0.0);
    for (std::size_t g = 1; g < grid; ++g) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(grid);
        const double v = model(t);
        if (v < best_v) {
            best_v = v;
            best_t = t;
        }
    }
    for (int it = 0; it < 20; ++it) {
        double second = 0.0;
        const double d1 = slope(best_t, second);
        if (second <= 0.0) {
            break;
        }
        const double next = best_t - d1 / second;
        if (model(next) > best_v) {
            break;
        }
        best_t = next;
        best_v = model(next);
    }
    theta[j] = std::remainder(base + scale * best_t, scale * 2.0 * std::numbers::pi);
    const double actual = circuit_risk(c, theta, s);
    if (actual > samples[0]) {
        theta[j] = base;
        return samples[0];
    }
    return actual;
}

}  // namespace

RestrictedResult restricted_optimize(const CircuitIR &c, const TrainingSet &s, const OptimizerConfig &opt,
                                     std::uint64_t seed, std::optional<std::vector<double>> initial_theta) {
    require_valid(c);
    s.validate();
    const std::size_t p = c.num_theta();
    RestrictedResult res;
    if (initial_theta) {
        if (initial_theta->size() != p) {
            fail(ErrorKind::Binding, "initial parameters have the wrong length");
        }
        res.theta = *initial_theta;
    } else {
        Rng rng(seed);
        res.theta = random_angles(rng, p);
    }
    res.risk = circuit_risk(c, res.theta, s);
    res.trajectory.push_back(res.risk);
    if (p == 0 || res.risk <= opt.tolerance) {
        res.converged = true;
        return res;
    }
    const auto uses = slot_uses(c);
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        const double before = res.risk;
        if (opt.method == OptimizerMethod::CoordinateDescent) {
            for (std::size_t j = 0; j < p; ++j) {
                res.risk = minimize_coordinate(c, s, res.theta, j, uses[j]);
            }
        } else {
            std::vector<double> grad(p);
            for (std::size_t j = 0; j < p; ++j) {
                std::vector<double> plus = res.theta;
                std::vector<double> minus = res.theta;
                plus[j] += opt.fd_step;
                minus[j] -= opt.fd_step;
                grad[j] = (circuit_risk(c, plus, s) - circuit_risk(c, minus, s)) / (2.0 * opt.fd_step);
            }
            // Backtracking keeps the risk monotone.
            double step = opt.learning_rate;
            for (int attempt = 0; attempt < 30; ++attempt) {
                std::vector<double> trial = res.theta;
                for (std::size_t j = 0; j < p; ++j) {
                    trial[j] -= step * grad[j];
                }
                const double r = circuit_risk(c, trial, s);
                if (r < res.risk) {
                    res.theta = std::move(trial);
                    res.risk = r;
                    break;
                }
                step *= 0.5;
            }
        }
        res.iterations = it + 1;
        res.trajectory.push_back(res.risk);
        if (before - res.risk < opt.tolerance) {
            res.converged = true;
            break;
        }
    }
    return res;
}

WeightedPauliSum build_data_hamiltonian(const TrainingSet &s, const ObservableFamily &family) {
    s.validate();
    const double inv_n = 1.0 / static_cast<double>(s.size());
    WeightedPauliSum h;
    for (std::size_t i = 0; i < s.size(); ++i) {
        WeightedPauliSum o = family(s.samples[i].x);
        if (!o.is_hermitian(1e-12)) {
            fail(ErrorKind::Validation, "observable at sample " + std::to_string(i) + " is not Hermitian");
        }
        const std::uint32_t n = o.num_qubits();
        if (i == 0) {
            h = WeightedPauliSum(2 * n);
        } else if (2 * n != h.num_qubits()) {
            fail(ErrorKind::Dimension, "observable family changes qubit count");
        }
        WeightedPauliSum a = o;
        a.add(-s.samples[i].y, PauliString::identity(n));
        a = sum_normalize(a);
        h.add(sum_tensor(a, a), inv_n);
    }
    return sum_normalize(h);
}

namespace {

std::size_t encoding_block_index(const CircuitIR &c) {
    if (c.architecture != Architecture::Flipped) {
        fail(ErrorKind::Validation, "expected a flipped circuit");
    }
    for (std::size_t b = 0; b < c.layers.size(); ++b) {
        if (c.layers[b].kind == BlockKind::Encoding) {
            return b;
        }
    }
    fail(ErrorKind::Validation, "flipped circuit has no encoding block");
}

}  // namespace

ObservableFamily flipped_observable_family(const CircuitIR &c) {
    const std::size_t b = encoding_block_index(c);
    BackpropOptions opts;
    opts.domain = InputDomain::Continuous;
    const ObservableExpansion e = backpropagate(c, c.observable, b, b + 1, {}, opts);
    return [e](std::span<const double> x) {
        WeightedPauliSum o(e.n);
        for (const auto &t : e.terms) {
            o.add(t.coefficient * basis_value(BasisKind::Trig3, t.alpha, x, e.leg_inputs), t.pauli);
        }
        return sum_normalize(o);
    };
}

ReductionReport verify_reduction(const CircuitIR &c, const TrainingSet &s,
                                 const std::vector<std::vector<double>> &thetas) {
    require_valid(c);
    const std::size_t enc = encoding_block_index(c);
    if (2 * c.n > OracleConfig{}.max_qubits) {
        fail(ErrorKind::Capacity, "doubled register of " + std::to_string(2 * c.n) + " qubits exceeds the oracle");
    }
    const WeightedPauliSum h = build_data_hamiltonian(s, flipped_observable_family(c));
    ReductionReport rep;
    rep.hamiltonian_terms = h.size();
    const std::uint64_t low = qubit_mask(c.n);
    for (const auto &theta : thetas) {
        const DenseState rho = run_blocks(c, 0, enc, {}, theta);
        ReductionRow row;
        row.risk = circuit_risk(c, theta, s);
        complex product = 0.0;
        for (const auto &t : h.terms()) {
            PauliString a = PauliString::identity(c.n);
            PauliString b = PauliString::identity(c.n);
            a.z = t.pauli.z & low;
            a.x = t.pauli.x & low;
            b.z = t.pauli.z >> c.n;
            b.x = t.pauli.x >> c.n;
            product += t.coefficient * rho.expectation(a) * rho.expectation(b);
        }
        row.energy_product = product.real();
        row.energy_direct = hermitian_expectation(rho.tensor(rho), h);
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(row.risk - row.energy_product));
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(row.risk - row.energy_direct));
        rep.max_route_discrepancy =
            std::max(rep.max_route_discrepancy, std::abs(row.energy_product - row.energy_direct));
        rep.rows.push_back(row);
    }
    return rep;
}

RiskInterval risk_interval(const FunctionSurrogate &s, const TrainingSet &data, double coverage) {
    data.validate();
    RiskInterval out;
    for (const auto &smp : data.samples) {
        const double r = s.evaluate(smp.x) - smp.y;
        const double b = s.error_bound(smp.x, coverage);
        const double lo = std::max(0.0, std::abs(r) - b);
        out.lower += lo * lo;
        out.estimate += r * r;
        out.upper += (std::abs(r) + b) * (std::abs(r) + b);
    }
    const double inv_n = 1.0 / static_cast<double>(data.size());
    out.lower *= inv_n;
    out.estimate *= inv_n;
    out.upper *= inv_n;
    return out;
}

}  // namespace qsurrogate
