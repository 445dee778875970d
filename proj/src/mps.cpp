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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qsurrogate/error.hpp"
#include "qsurrogate/tensor.hpp"

namespace qsurrogate {
namespace {

using CMatrix = Eigen::MatrixXcd;

Gate localize(const Gate &g, std::uint32_t left) {
    Gate local = g;
    for (std::uint32_t k = 0; k < g.arity(); ++k) {
        local.qubits[k] = g.qubits[k] - left;
    }
    return local;
}

/// Matrix of a gate on k local qubits, entry (out, in), local qubit 0 least significant.
CMatrix local_unitary(const Gate &g, std::uint32_t k, std::span<const double> x, std::span<const double> theta) {
    const std::size_t dim = std::size_t{1} << k;
    CMatrix m(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        std::vector<complex> amps(dim, 0.0);
        amps[col] = 1.0;
        DenseState psi = DenseState::from_amplitudes(k, std::move(amps));
        psi.apply_gate(g, x, theta);
        for (std::size_t row = 0; row < dim; ++row) {
            m(row, col) = psi.amplitudes()[row];
        }
    }
    return m;
}

std::array<complex, 4> site_pauli(const PauliString &p, std::uint32_t q) {
    switch (p.op_at(q)) {
        case 'X':
            return {0.0, 1.0, 1.0, 0.0};
        case 'Y':
            return {0.0, complex(0, -1), complex(0, 1), 0.0};
        case 'Z':
            return {1.0, 0.0, 0.0, -1.0};
        default:
            return {1.0, 0.0, 0.0, 1.0};
    }
}

/// Core reshaped to (left * 2, right).
CMatrix as_left_matrix(const StateCore &c) {
    CMatrix m(c.left * 2, c.right);
    for (std::size_t i = 0; i < c.left * 2; ++i) {
        for (std::size_t r = 0; r < c.right; ++r) {
            m(i, r) = c.data[i * c.right + r];
        }
    }
    return m;
}

/// Core reshaped to (left, 2 * right).
CMatrix as_right_matrix(const StateCore &c) {
    CMatrix m(c.left, 2 * c.right);
    for (std::size_t l = 0; l < c.left; ++l) {
        for (std::size_t j = 0; j < 2 * c.right; ++j) {
            m(l, j) = c.data[l * 2 * c.right + j];
        }
    }
    return m;
}

StateCore from_matrix(const CMatrix &m, std::size_t left, std::size_t right) {
    StateCore c;
    c.left = left;
    c.right = right;
    c.data.resize(left * 2 * right);
    // Both reshapes share the same row-major layout.
    const std::size_t cols = static_cast<std::size_t>(m.cols());
    for (std::size_t i = 0; i < static_cast<std::size_t>(m.rows()); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            c.data[i * cols + j] = m(i, j);
        }
    }
    return c;
}

}  // namespace

Mps Mps::zero(std::uint32_t n) {
    if (n == 0) {
        fail(ErrorKind::Dimension, "an MPS needs at least one site");
    }
    Mps s;
    s.cores_.resize(n);
    for (auto &c : s.cores_) {
        c.data = {1.0, 0.0};
    }
    return s;
}

std::vector<std::size_t> Mps::bond_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k + 1 < cores_.size(); ++k) {
        out.push_back(cores_[k].right);
    }
    return out;
}

std::size_t Mps::max_bond() const {
    std::size_t b = 1;
    for (const auto &c : cores_) {
        b = std::max(b, c.right);
    }
    return b;
}

DenseState Mps::to_dense() const {
    const std::uint32_t n = num_qubits();
    if (n > 24) {
        fail(ErrorKind::Capacity, "to_dense is limited to 24 sites");
    }
    // psi[index][bond], growing one site at a time; site k is bit k.
    std::vector<complex> acc{1.0};
    std::size_t bond = 1;
    std::size_t dim = 1;
    for (std::uint32_t k = 0; k < n; ++k) {
        const StateCore &c = cores_[k];
        std::vector<complex> next(dim * 2 * c.right, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t l = 0; l < bond; ++l) {
                const complex a = acc[i * bond + l];
                if (a == 0.0) {
                    continue;
                }
                for (std::size_t s = 0; s < 2; ++s) {
                    for (std::size_t r = 0; r < c.right; ++r) {
                        next[((s * dim) + i) * c.right + r] += a * c.at(l, s, r);
                    }
                }
            }
        }
        acc = std::move(next);
        dim *= 2;
        bond = c.right;
    }
    return DenseState::from_amplitudes(n, std::move(acc));
}

complex Mps::expectation(const PauliString &p) const {
    if (p.n != num_qubits()) {
        fail(ErrorKind::Dimension, "Pauli string size does not match the MPS");
    }
    CMatrix env = CMatrix::Ones(1, 1);
    for (std::uint32_t k = 0; k < num_qubits(); ++k) {
        const StateCore &c = cores_[k];
        const auto op = site_pauli(p, k);
        CMatrix next = CMatrix::Zero(c.right, c.right);
        for (std::size_t s = 0; s < 2; ++s) {
            for (std::size_t t = 0; t < 2; ++t) {
                const complex o = op[s * 2 + t];
                if (o == 0.0) {
                    continue;
                }
                CMatrix bra(c.left, c.right);
                CMatrix ket(c.left, c.right);
                for (std::size_t l = 0; l < c.left; ++l) {
                    for (std::size_t r = 0; r < c.right; ++r) {
                        bra(l, r) = c.at(l, s, r);
                        ket(l, r) = c.at(l, t, r);
                    }
                }
                next += o * (bra.adjoint() * env * ket);
            }
        }
        env = std::move(next);
    }
    return env(0, 0) * p.phase_value();
}

void Mps::canonicalize(std::size_t center) {
    if (center >= cores_.size()) {
        fail(ErrorKind::Dimension, "canonical center out of range");
    }
    for (std::size_t k = 0; k < center; ++k) {
        CMatrix m = as_left_matrix(cores_[k]);
        Eigen::HouseholderQR<CMatrix> qr(m);
        const auto rank = std::min<Eigen::Index>(m.rows(), m.cols());
        CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), rank);
        CMatrix r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
        cores_[k] = from_matrix(q, cores_[k].left, static_cast<std::size_t>(rank));
        CMatrix nxt = r * as_right_matrix(cores_[k + 1]);
        cores_[k + 1] = from_matrix(nxt, static_cast<std::size_t>(rank), cores_[k + 1].right);
    }
    for (std::size_t k = cores_.size() - 1; k > center; --k) {
        CMatrix m = as_right_matrix(cores_[k]).adjoint();
        Eigen::HouseholderQR<CMatrix> qr(m);
        const auto rank = std::min<Eigen::Index>(m.rows(), m.cols());
        CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), rank);
        CMatrix r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
        cores_[k] = from_matrix(q.adjoint(), static_cast<std::size_t>(rank), cores_[k].right);
        CMatrix prev = as_left_matrix(cores_[k - 1]) * r.adjoint();
        cores_[k - 1] = from_matrix(prev, cores_[k - 1].left, static_cast<std::size_t>(rank));
    }
}

double Mps::isometry_residue(std::size_t center) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < cores_.size(); ++k) {
        if (k < center) {
            CMatrix m = as_left_matrix(cores_[k]);
            worst = std::max(worst, (m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff());
        } else if (k > center) {
            CMatrix m = as_right_matrix(cores_[k]);
            worst = std::max(worst, (m * m.adjoint() - CMatrix::Identity(m.rows(), m.rows())).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

Mps mps_apply(const Mps &state, const Gate &g, std::span<const double> x, std::span<const double> theta,
              std::size_t max_chi, double svd_tol) {
    const std::uint32_t n = state.num_qubits();
    for (std::uint32_t k = 0; k < g.arity(); ++k) {
        if (g.qubits[k] >= n) {
            fail(ErrorKind::Dimension, "gate acts outside the MPS");
        }
    }
    Mps out = state;
    if (g.arity() == 1) {
        const std::uint32_t q = g.qubits[0];
        const CMatrix u = local_unitary(localize(g, q), 1, x, theta);
        StateCore &c = out.cores_[q];
        StateCore next = c;
        for (std::size_t l = 0; l < c.left; ++l) {
            for (std::size_t r = 0; r < c.right; ++r) {
                for (std::size_t s = 0; s < 2; ++s) {
                    next.at(l, s, r) = u(s, 0) * c.at(l, 0, r) + u(s, 1) * c.at(l, 1, r);
                }
            }
        }
        c = std::move(next);
        return out;
    }

    const std::uint32_t a = std::min(g.qubits[0], g.qubits[1]);
    const std::uint32_t b = std::max(g.qubits[0], g.qubits[1]);
    if (b != a + 1) {
        fail(ErrorKind::Routing, "two-qubit gate on non-adjacent sites " + std::to_string(a) + " and " +
                                     std::to_string(b) + "; route the circuit first");
    }
    const CMatrix u = local_unitary(localize(g, a), 2, x, theta);
    const StateCore &ca = out.cores_[a];
    const StateCore &cb = out.cores_[b];
    const std::size_t left = ca.left;
    const std::size_t right = cb.right;

    // theta[l, s1, s2, r]
    CMatrix merged = as_left_matrix(ca) * as_right_matrix(cb);
    CMatrix applied = CMatrix::Zero(left * 2, 2 * right);
    for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t r = 0; r < right; ++r) {
            complex in[4];
            for (std::size_t s1 = 0; s1 < 2; ++s1) {
                for (std::size_t s2 = 0; s2 < 2; ++s2) {
                    in[s1 + 2 * s2] = merged(l * 2 + s1, s2 * right + r);
                }
            }
            for (std::size_t o = 0; o < 4; ++o) {
                complex v = 0.0;
                for (std::size_t i = 0; i < 4; ++i) {
                    v += u(o, i) * in[i];
                }
                applied(l * 2 + (o & 1), (o >> 1) * right + r) = v;
            }
        }
    }

    Eigen::BDCSVD<CMatrix> svd(applied, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    std::size_t keep = 0;
    while (keep < static_cast<std::size_t>(sv.size()) && sv(keep) > svd_tol * largest) {
        ++keep;
    }
    if (max_chi > 0) {
        keep = std::min(keep, max_chi);
    }
    keep = std::max<std::size_t>(keep, 1);
    double dropped = 0.0;
    for (auto i = static_cast<Eigen::Index>(keep); i < sv.size(); ++i) {
        dropped += sv(i) * sv(i);
    }
    out.discarded_ += dropped;
    CMatrix uk = svd.matrixU().leftCols(keep);
    CMatrix vk = sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
    out.cores_[a] = from_matrix(uk, left, keep);
    out.cores_[b] = from_matrix(vk, keep, right);
    return out;
}

Mps mps_run(const CircuitIR &c, std::span<const double> x, std::span<const double> theta,
            const TruncationPolicy &policy) {
    require_valid(c);
    if (!c.zero_initial_state()) {
        fail(ErrorKind::Validation, "the MPS simulator starts from the zero state only");
    }
    const CircuitIR routed = route_nearest_neighbor(c);
    Mps s = Mps::zero(c.n);
    for (const auto &block : routed.layers) {
        for (const auto &g : block.gates) {
            s = mps_apply(s, g, x, theta, policy.max_chi, policy.svd_tol);
        }
    }
    return s;
}

double mps_expectation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta,
                       const TruncationPolicy &policy) {
    const Mps s = mps_run(c, x, theta, policy);
    complex v = 0.0;
    for (const auto &t : c.observable.terms()) {
        v += t.coefficient * s.expectation(t.pauli);
    }
    return v.real();
}

}  // namespace qsurrogate
