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

#include "qsurrogate/free_fermion.hpp"

#include <algorithm>
#include <cmath>

#include "qsurrogate/error.hpp"

namespace qsurrogate {

namespace {

constexpr double kOrthogonalityTolerance = 1e-10;

// Hermitian operator i gamma_p gamma_q as a Pauli string with folded phase.
PauliString quadratic_string(std::uint32_t n, std::uint32_t p, std::uint32_t q) {
    PauliString s = monomial_string(n, {p, q});
    s.phase = static_cast<std::uint8_t>((s.phase + 1) & 3);
    return s;
}

struct QuadraticObservable {
    double constant = 0.0;
    std::vector<MajoranaQuadratic::Term> terms;
};

QuadraticObservable decompose_quadratic(const WeightedPauliSum &obs) {
    QuadraticObservable out;
    for (const auto &t : obs.terms()) {
        MajoranaMonomial m = majorana_decompose(t.pauli);
        complex w = t.coefficient * m.prefactor;
        if (m.degree() == 0) {
            out.constant += w.real();
        } else if (m.degree() == 2) {
            // w gamma_a gamma_b = (w (-i)) (i gamma_a gamma_b), and <i gamma_a gamma_b> = Gamma_ab.
            complex real_weight = w * complex{0, -1};
            if (std::abs(real_weight.imag()) > 1e-12) {
                fail(ErrorKind::Validation, "quadratic observable term is not Hermitian");
            }
            out.terms.push_back({m.indices[0], m.indices[1], real_weight.real()});
        } else {
            fail(ErrorKind::UnsupportedDegree,
                 "observable term " + t.pauli.str() + " has Majorana degree " + std::to_string(m.degree()));
        }
    }
    return out;
}

}  // namespace

CovarianceState CovarianceState::vacuum(std::uint32_t n_modes) {
    CovarianceState s;
    s.n_modes_ = n_modes;
    s.gamma_ = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (std::uint32_t j = 0; j < n_modes; j++) {
        // i gamma_{2j} gamma_{2j+1} = -Z_j, and <0|Z_j|0> = 1.
        s.gamma_(2 * j, 2 * j + 1) = -1;
        s.gamma_(2 * j + 1, 2 * j) = 1;
    }
    return s;
}

CovarianceState CovarianceState::from_dense(const DenseState &psi) {
    const std::uint32_t n = psi.num_qubits();
    CovarianceState s;
    s.n_modes_ = n;
    s.gamma_ = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (std::uint32_t p = 0; p < 2 * n; p++) {
        for (std::uint32_t q = p + 1; q < 2 * n; q++) {
            double v = psi.expectation(quadratic_string(n, p, q)).real();
            s.gamma_(p, q) = v;
            s.gamma_(q, p) = -v;
        }
    }
    return s;
}

CovarianceState CovarianceState::from_matrix(Eigen::MatrixXd gamma) {
    if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0) {
        fail(ErrorKind::Dimension, "covariance matrix must be square with even size");
    }
    if ((gamma + gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        fail(ErrorKind::Validation, "covariance matrix is not antisymmetric");
    }
    CovarianceState s;
    s.n_modes_ = static_cast<std::uint32_t>(gamma.rows() / 2);
    s.gamma_ = std::move(gamma);
    return s;
}

Eigen::MatrixXd gate_rotation(std::uint32_t n_modes, const Gate &g, std::span<const double> x,
                              std::span<const double> theta) {
    if (!is_matchgate(g)) {
        fail(ErrorKind::GateSet, "gate " + std::string(gate_tag_name(g.tag)) + " is not a nearest-neighbour matchgate");
    }
    const std::uint32_t dim = 2 * n_modes;
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(dim, dim);
    GateAction act = gate_action(g, n_modes, x, theta);
    for (std::uint32_t row = 0; row < dim; row++) {
        WeightedPauliSum image = WeightedPauliSum::from_pauli(majorana_string(n_modes, row));
        if (act.clifford) {
            image = WeightedPauliSum::from_pauli(conjugate_clifford(*act.clifford, image.terms()[0].pauli));
        } else {
            // Rotations within one gate commute, so the application order is immaterial.
            for (const auto &rot : act.rotations) {
                WeightedPauliSum next(n_modes);
                for (const auto &t : image.terms()) {
                    next.add(conjugate_rotation(rot.generator, rot.angle, t.pauli), t.coefficient);
                }
                image = sum_normalize(next);
            }
        }
        for (const auto &t : image.terms()) {
            MajoranaMonomial m = majorana_decompose(t.pauli);
            if (m.degree() != 1) {
                fail(ErrorKind::GateSet, "gate maps a Majorana mode outside the linear span");
            }
            complex c = t.coefficient * m.prefactor;
            r(row, m.indices[0]) += c.real();
        }
    }
    return r;
}

Eigen::MatrixXd compile_rotation(std::uint32_t n_modes, std::span<const Gate> gates, std::span<const double> x,
                                 std::span<const double> theta) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    for (const Gate &g : gates) {
        r = gate_rotation(n_modes, g, x, theta) * r;
    }
    return r;
}

Eigen::MatrixXd compile_rotation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta) {
    std::vector<Gate> all;
    for (const auto &b : c.layers) {
        all.insert(all.end(), b.gates.begin(), b.gates.end());
    }
    return compile_rotation(c.n, all, x, theta);
}

CovarianceState evolve(const CovarianceState &state, const Eigen::MatrixXd &rotation) {
    const auto dim = state.gamma().rows();
    if (rotation.rows() != dim || rotation.cols() != dim) {
        fail(ErrorKind::Dimension, "rotation size does not match the covariance matrix");
    }
    double residue = (rotation * rotation.transpose() - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (residue > kOrthogonalityTolerance) {
        fail(ErrorKind::Validation, "rotation is not orthogonal (residue " + std::to_string(residue) + ")");
    }
    Eigen::MatrixXd g = rotation * state.gamma() * rotation.transpose();
    // Re-antisymmetrize to keep rounding from accumulating in the symmetric part.
    return CovarianceState::from_matrix((g - g.transpose()) / 2);
}

double expect_monomial(const CovarianceState &state, const MajoranaMonomial &m) {
    const auto &idx = m.indices;
    for (std::size_t k = 0; k < idx.size(); k++) {
        if (idx[k] >= 2 * state.n_modes()) {
            fail(ErrorKind::Dimension, "Majorana index out of range");
        }
        if (k > 0 && idx[k] <= idx[k - 1]) {
            fail(ErrorKind::Validation, "Majorana indices must be strictly increasing");
        }
    }
    const auto &g = state.gamma();
    // <gamma_a gamma_b> = -i Gamma_ab
    complex v;
    switch (idx.size()) {
        case 0:
            v = m.prefactor;
            break;
        case 2:
            v = m.prefactor * complex{0, -1} * g(idx[0], idx[1]);
            break;
        case 4: {
            double pf = g(idx[0], idx[1]) * g(idx[2], idx[3]) - g(idx[0], idx[2]) * g(idx[1], idx[3]) +
                        g(idx[0], idx[3]) * g(idx[1], idx[2]);
            v = -m.prefactor * pf;
            break;
        }
        default:
            fail(ErrorKind::UnsupportedDegree, "monomial degree " + std::to_string(idx.size()) + " not in {0, 2, 4}");
    }
    if (std::abs(v.imag()) > 1e-12) {
        fail(ErrorKind::Validation, "monomial prefactor does not make the operator Hermitian");
    }
    return v.real();
}

double fermion_expectation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta) {
    require_valid(c);
    if (!c.zero_initial_state()) {
        fail(ErrorKind::Classification, "free-fermion simulation requires the zero initial state");
    }
    CovarianceState s = evolve(CovarianceState::vacuum(c.n), compile_rotation(c, x, theta));
    double acc = 0;
    for (const auto &t : c.observable.terms()) {
        MajoranaMonomial m = majorana_decompose(t.pauli);
        m.prefactor *= t.coefficient;
        acc += expect_monomial(s, m);
    }
    return acc;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> rotation_support(std::uint32_t n_modes,
                                                                      std::span<const Gate> gates) {
    using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
    const std::uint32_t dim = 2 * n_modes;
    BoolMatrix support = BoolMatrix::Identity(dim, dim);
    // A generic angle makes every structurally non-zero entry non-zero.
    const double generic = 0.3183098861837907;
    for (const Gate &g : gates) {
        Gate probe = g;
        if (g.tag == GateTag::EncRZ || g.tag == GateTag::RZ) {
            probe = Gate::rotation_const(GateTag::RZ, generic, g.qubits[0]);
        } else if (g.tag == GateTag::EncGivens || g.tag == GateTag::Givens) {
            probe = Gate::rotation_const(GateTag::Givens, generic, g.qubits[0], g.qubits[1]);
        }
        Eigen::MatrixXd r = gate_rotation(n_modes, probe, {}, {});
        BoolMatrix next = BoolMatrix::Constant(dim, dim, false);
        for (std::uint32_t i = 0; i < dim; i++) {
            for (std::uint32_t k = 0; k < dim; k++) {
                if (std::abs(r(i, k)) > 1e-12) {
                    next.row(i) = next.row(i) || support.row(k);
                }
            }
        }
        support = next;
    }
    return support;
}

namespace {

const Block &matchgate_encoding(const CircuitIR &c) {
    require_valid(c);
    if (c.architecture != Architecture::Flipped) {
        fail(ErrorKind::Classification, "fermion surrogate requires a flipped circuit");
    }
    const Block &enc = c.flipped_encoding();
    for (const Gate &g : enc.gates) {
        if (!is_matchgate(g)) {
            fail(ErrorKind::GateSet, "encoding gate " + std::string(gate_tag_name(g.tag)) + " is not a matchgate");
        }
    }
    return enc;
}

}  // namespace

std::vector<std::pair<std::uint32_t, std::uint32_t>> required_pairs(const CircuitIR &c) {
    const Block &enc = matchgate_encoding(c);
    QuadraticObservable obs = decompose_quadratic(c.observable);
    auto support = rotation_support(c.n, enc.gates);
    const std::uint32_t dim = 2 * c.n;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t p = 0; p < dim; p++) {
        for (std::uint32_t q = p + 1; q < dim; q++) {
            bool active = false;
            for (const auto &t : obs.terms) {
                active = active || (support(t.a, p) && support(t.b, q)) || (support(t.a, q) && support(t.b, p));
            }
            if (active) {
                pairs.emplace_back(p, q);
            }
        }
    }
    return pairs;
}

FunctionSurrogate fermion_flipped_surrogate(const CircuitIR &c, std::span<const double> theta,
                                            const std::vector<CovarianceEstimate> *estimates) {
    const Block &enc = matchgate_encoding(c);
    QuadraticObservable obs = decompose_quadratic(c.observable);
    MajoranaQuadratic rep;
    rep.n_modes = c.n;
    rep.encoding = enc.gates;
    rep.observable = obs.terms;
    rep.constant = obs.constant;

    auto pairs = required_pairs(c);
    if (estimates) {
        for (auto [p, q] : pairs) {
            auto it = std::find_if(estimates->begin(), estimates->end(),
                                   [&](const CovarianceEstimate &e) { return e.p == p && e.q == q; });
            if (it == estimates->end()) {
                fail(ErrorKind::Binding,
                     "missing covariance estimate for pair (" + std::to_string(p) + ", " + std::to_string(q) + ")");
            }
            rep.pairs.push_back({p, q, it->value, it->std_error});
        }
    } else {
        DenseState rho = run_blocks(c, 0, 1, {}, theta);
        for (auto [p, q] : pairs) {
            rep.pairs.push_back({p, q, rho.expectation(quadratic_string(c.n, p, q)).real(), 0.0});
        }
    }
    return FunctionSurrogate(BasisKind::MajoranaQuadratic, static_cast<std::uint32_t>(c.num_inputs()), std::move(rep));
}

FunctionSurrogate fermion_surrogate(const CircuitIR &c, std::span<const double> theta) {
    require_valid(c);
    if (!c.zero_initial_state()) {
        fail(ErrorKind::Validation, "fermion surrogate starts from the vacuum");
    }
    if (theta.size() < c.num_theta()) {
        fail(ErrorKind::Binding, "expected " + std::to_string(c.num_theta()) + " parameters");
    }
    MajoranaQuadratic rep;
    rep.n_modes = c.n;
    for (const auto &b : c.layers) {
        for (const auto &g : b.gates) {
            if (!is_matchgate(g)) {
                fail(ErrorKind::GateSet, std::string(gate_tag_name(g.tag)) + " is not a matchgate");
            }
            if (!is_encoding_tag(g.tag) && g.slot >= 0) {
                rep.encoding.push_back(Gate::rotation_const(g.tag, gate_angle(g, {}, theta), g.qubits[0], g.qubits[1]));
            } else {
                rep.encoding.push_back(g);
            }
        }
    }
    const QuadraticObservable obs = decompose_quadratic(c.observable);
    rep.observable = obs.terms;
    rep.constant = obs.constant;
    const CovarianceState vac = CovarianceState::vacuum(c.n);
    for (std::uint32_t j = 0; j < c.n; ++j) {
        rep.pairs.push_back({2 * j, 2 * j + 1, vac.gamma()(2 * j, 2 * j + 1), 0.0});
    }
    return FunctionSurrogate(BasisKind::MajoranaQuadratic, static_cast<std::uint32_t>(c.num_inputs()), std::move(rep));
}

}  // namespace qsurrogate
