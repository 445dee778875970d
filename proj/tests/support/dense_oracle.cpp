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

#include "support/dense_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsurrogate::testing {

namespace {

Matrix single(char op) {
    const std::complex<double> i{0, 1};
    Matrix m(2, 2);
    switch (op) {
        case 'I':
            m << 1, 0, 0, 1;
            break;
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << 0, -i, i, 0;
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("bad pauli letter");
    }
    return m;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); r++) {
        for (Eigen::Index c = 0; c < a.cols(); c++) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

// Places a k-qubit operator (local bit j <-> qubits[j]) into the n-qubit space.
Matrix embed(std::uint32_t n, const std::vector<std::uint32_t> &qubits, const Matrix &local) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix out = Matrix::Zero(dim, dim);
    auto local_index = [&](std::size_t full) {
        std::size_t l = 0;
        for (std::size_t j = 0; j < qubits.size(); j++) {
            l |= ((full >> qubits[j]) & 1u) << j;
        }
        return l;
    };
    std::size_t mask = 0;
    for (auto q : qubits) {
        mask |= std::size_t{1} << q;
    }
    for (std::size_t col = 0; col < dim; col++) {
        std::size_t lc = local_index(col);
        for (std::size_t lr = 0; lr < static_cast<std::size_t>(local.rows()); lr++) {
            std::size_t row = col & ~mask;
            for (std::size_t j = 0; j < qubits.size(); j++) {
                row |= ((lr >> j) & 1u) << qubits[j];
            }
            out(row, col) = local(lr, lc);
        }
    }
    return out;
}

double angle_of(const Gate &g, std::span<const double> x, std::span<const double> theta) {
    if (g.tag == GateTag::EncRZ || g.tag == GateTag::EncGivens) {
        return x[g.slot];
    }
    if (g.angle) {
        return *g.angle;
    }
    return theta[g.slot];
}

}  // namespace

Matrix pauli_matrix(const std::string &text) {
    std::size_t pos = 0;
    std::complex<double> phase = 1;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        phase = text[pos] == '-' ? -1.0 : 1.0;
        pos++;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase *= std::complex<double>{0, 1};
        pos++;
    }
    Matrix m = Matrix::Identity(1, 1);
    for (std::size_t k = pos; k < text.size(); k++) {
        // Later letters are higher qubits, hence more significant.
        m = kron(single(text[k] == '_' ? 'I' : text[k]), m);
    }
    return phase * m;
}

Matrix pauli_matrix(const PauliString &p) {
    return pauli_matrix(p.str());
}

Matrix sum_matrix(const WeightedPauliSum &s) {
    const std::size_t dim = std::size_t{1} << s.num_qubits();
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto &t : s.terms()) {
        m += t.coefficient * pauli_matrix(t.pauli);
    }
    return m;
}

Matrix hermitian_exp(const Matrix &k, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
    Eigen::VectorXcd d(eig.eigenvalues().size());
    for (Eigen::Index j = 0; j < d.size(); j++) {
        d[j] = std::polar(1.0, -t * eig.eigenvalues()[j]);
    }
    return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().adjoint();
}

Matrix gate_matrix(std::uint32_t n, const Gate &g, std::span<const double> x, std::span<const double> theta) {
    const std::complex<double> i{0, 1};
    const double pi = std::numbers::pi;
    const auto q0 = g.qubits[0];
    const auto q1 = g.qubits[1];
    Matrix local;
    std::vector<std::uint32_t> qs{q0};
    switch (g.tag) {
        case GateTag::H:
            local = (single('X') + single('Z')) / std::sqrt(2.0);
            break;
        case GateTag::S:
            local = Matrix::Identity(2, 2);
            local(1, 1) = i;
            break;
        case GateTag::T:
            local = Matrix::Identity(2, 2);
            local(1, 1) = std::polar(1.0, pi / 4);
            break;
        case GateTag::X:
        case GateTag::Y:
        case GateTag::Z:
            local = single(std::string_view("XYZ")[static_cast<int>(g.tag) - static_cast<int>(GateTag::X)]);
            break;
        case GateTag::RZ:
            local = hermitian_exp(single('Z'), angle_of(g, x, theta) / 2);
            break;
        case GateTag::RX:
            local = hermitian_exp(single('X'), angle_of(g, x, theta) / 2);
            break;
        case GateTag::EncRZ:
            local = hermitian_exp(single('Z'), -pi * angle_of(g, x, theta) / 2);
            break;
        case GateTag::CNOT:
            qs = {q0, q1};
            local = Matrix::Zero(4, 4);
            // local bit 0 = control, bit 1 = target
            local(0, 0) = 1;
            local(2, 2) = 1;
            local(3, 1) = 1;
            local(1, 3) = 1;
            break;
        case GateTag::CZ:
            qs = {q0, q1};
            local = Matrix::Identity(4, 4);
            local(3, 3) = -1;
            break;
        case GateTag::SWAP:
            qs = {q0, q1};
            local = Matrix::Zero(4, 4);
            local(0, 0) = 1;
            local(3, 3) = 1;
            local(1, 2) = 1;
            local(2, 1) = 1;
            break;
        case GateTag::Givens:
        case GateTag::EncGivens: {
            qs = {q0, q1};
            double a = angle_of(g, x, theta);
            if (g.tag == GateTag::EncGivens) {
                a *= pi;
            }
            Matrix gen = kron(single('Y'), single('X')) - kron(single('X'), single('Y'));
            local = hermitian_exp(gen, a / 4);
            break;
        }
    }
    return embed(n, qs, local);
}

Matrix circuit_unitary(const CircuitIR &c, std::span<const double> x, std::span<const double> theta) {
    const std::size_t dim = std::size_t{1} << c.n;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto &b : c.layers) {
        for (const auto &g : b.gates) {
            u = gate_matrix(c.n, g, x, theta) * u;
        }
    }
    return u;
}

Vector initial_vector(const CircuitIR &c) {
    const std::size_t dim = std::size_t{1} << c.n;
    Vector v = Vector::Zero(dim);
    if (c.initial_amplitudes.empty()) {
        v[0] = 1;
    } else {
        for (std::size_t j = 0; j < dim; j++) {
            v[j] = c.initial_amplitudes[j];
        }
    }
    return v;
}

double reference_value(const CircuitIR &c, std::span<const double> x, std::span<const double> theta) {
    Vector psi = circuit_unitary(c, x, theta) * initial_vector(c);
    return (psi.adjoint() * sum_matrix(c.observable) * psi)(0, 0).real();
}

std::complex<double> pauli_component(const Matrix &m, const std::string &pauli_text) {
    return (pauli_matrix(pauli_text) * m).trace() / static_cast<double>(m.rows());
}

}  // namespace qsurrogate::testing
