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

using Matrix = Eigen::MatrixXd;

// Local Pauli index: z + 2x per qubit, i.e. I=0, Z=1, X=2, Y=3.
PauliString local_pauli(std::uint32_t k, std::size_t mu) {
    PauliString p = PauliString::identity(k);
    for (std::uint32_t q = 0; q < k; ++q) {
        const std::size_t m = (mu >> (2 * q)) & 3u;
        p.z |= std::uint64_t(m & 1u) << q;
        p.x |= std::uint64_t(m >> 1) << q;
    }
    return p;
}

std::size_t local_index(const PauliString &p) {
    std::size_t mu = 0;
    for (std::uint32_t q = 0; q < p.n; ++q) {
        mu |= (((p.z >> q) & 1u) | (((p.x >> q) & 1u) << 1)) << (2 * q);
    }
    return mu;
}

double sign_of(const PauliString &p) {
    if (!p.is_hermitian()) {
        fail(ErrorKind::Numeric, "conjugation produced a non-Hermitian string");
    }
    return p.phase == 0 ? 1.0 : -1.0;
}

/// transfer(nu, mu) = coefficient of P_nu in g^dagger P_mu g.
Matrix transfer_matrix(const Gate &local, std::uint32_t k, std::span<const double> theta) {
    const std::size_t dim = std::size_t{1} << (2 * k);
    Matrix t = Matrix::Zero(dim, dim);
    const GateAction act = gate_action(local, k, {}, theta);
    for (std::size_t mu = 0; mu < dim; ++mu) {
        const PauliString p = local_pauli(k, mu);
        if (act.clifford) {
            const PauliString img = conjugate_clifford(*act.clifford, p);
            t(local_index(img), mu) += sign_of(img);
            continue;
        }
        WeightedPauliSum cur = WeightedPauliSum::from_pauli(p);
        for (const auto &rot : act.rotations) {
            WeightedPauliSum next(k);
            for (const auto &term : cur.terms()) {
                next.add(conjugate_rotation(rot.generator, rot.angle, term.pauli), term.coefficient);
            }
            cur = sum_normalize(next);
        }
        for (const auto &term : cur.terms()) {
            if (std::abs(term.coefficient.imag()) > 1e-12) {
                fail(ErrorKind::Numeric, "rotation produced a complex coefficient");
            }
            t(local_index(term.pauli), mu) += term.coefficient.real();
        }
    }
    return t;
}

/// Operator-train core (left, 4, legs, right), row-major. legs is the product of
/// the trig legs stacked on this site, first listed leg most significant.
struct OpCore {
    std::size_t left = 1;
    std::size_t legs = 1;
    std::size_t right = 1;
    std::vector<double> data;
    std::vector<std::size_t> leg_ids;

    std::size_t index(std::size_t l, std::size_t mu, std::size_t a, std::size_t r) const {
        return ((l * 4 + mu) * legs + a) * right + r;
    }
};

Matrix core_left_matrix(const OpCore &c) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        c.data.data(), static_cast<Eigen::Index>(c.left * 4 * c.legs), static_cast<Eigen::Index>(c.right));
}

Matrix core_right_matrix(const OpCore &c) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        c.data.data(), static_cast<Eigen::Index>(c.left), static_cast<Eigen::Index>(4 * c.legs * c.right));
}

std::vector<double> row_major(const Matrix &m) {
    std::vector<double> out(static_cast<std::size_t>(m.size()));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out.data(), m.rows(),
                                                                                      m.cols()) = m;
    return out;
}

std::size_t kept_rank(const Eigen::VectorXd &sv, std::size_t max_chi, double tol) {
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    std::size_t keep = 0;
    while (keep < static_cast<std::size_t>(sv.size()) && sv(static_cast<Eigen::Index>(keep)) > tol * largest) {
        ++keep;
    }
    if (max_chi > 0) {
        keep = std::min(keep, max_chi);
    }
    return std::max<std::size_t>(keep, 1);
}

void apply_single(OpCore &c, const Matrix &t) {
    std::vector<double> out(c.data.size(), 0.0);
    for (std::size_t l = 0; l < c.left; ++l) {
        for (std::size_t nu = 0; nu < 4; ++nu) {
            for (std::size_t mu = 0; mu < 4; ++mu) {
                const double w = t(nu, mu);
                if (w == 0.0) {
                    continue;
                }
                const std::size_t span = c.legs * c.right;
                const double *src = &c.data[c.index(l, mu, 0, 0)];
                double *dst = &out[c.index(l, nu, 0, 0)];
                for (std::size_t i = 0; i < span; ++i) {
                    dst[i] += w * src[i];
                }
            }
        }
    }
    c.data = std::move(out);
}

/// Conjugation by S(x) on one site: adds a trig leg as the least significant digit.
void apply_encoding(OpCore &c, std::size_t leg_id) {
    OpCore out;
    out.left = c.left;
    out.legs = c.legs * 3;
    out.right = c.right;
    out.data.assign(c.left * 4 * out.legs * c.right, 0.0);
    out.leg_ids = c.leg_ids;
    out.leg_ids.push_back(leg_id);
    // (target mu, digit, sign) for each source mu.
    struct Image {
        std::size_t nu;
        std::size_t digit;
        double sign;
    };
    std::array<std::vector<Image>, 4> images;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const auto split = conjugate_encoding(0, local_pauli(1, mu));
        if (!split.odd) {
            images[mu].push_back({local_index(split.even), 0, sign_of(split.even)});
        } else {
            images[mu].push_back({local_index(split.even), 1, sign_of(split.even)});
            images[mu].push_back({local_index(*split.odd), 2, sign_of(*split.odd)});
        }
    }
    for (std::size_t l = 0; l < c.left; ++l) {
        for (std::size_t mu = 0; mu < 4; ++mu) {
            for (std::size_t a = 0; a < c.legs; ++a) {
                for (const auto &im : images[mu]) {
                    const double *src = &c.data[c.index(l, mu, a, 0)];
                    double *dst = &out.data[out.index(l, im.nu, a * 3 + im.digit, 0)];
                    for (std::size_t r = 0; r < c.right; ++r) {
                        dst[r] += im.sign * src[r];
                    }
                }
            }
        }
    }
    c = std::move(out);
}

void apply_pair(OpCore &a, OpCore &b, const Matrix &t, std::size_t max_chi, double tol) {
    const Matrix merged = core_left_matrix(a) * core_right_matrix(b);
    const std::size_t seg = b.legs * b.right;
    Matrix out = Matrix::Zero(merged.rows(), merged.cols());
    for (Eigen::Index col = 0; col < t.cols(); ++col) {
        for (Eigen::Index row = 0; row < t.rows(); ++row) {
            const double w = t(row, col);
            if (w == 0.0) {
                continue;
            }
            const std::size_t mu1 = static_cast<std::size_t>(col) & 3u;
            const std::size_t mu2 = static_cast<std::size_t>(col) >> 2;
            const std::size_t nu1 = static_cast<std::size_t>(row) & 3u;
            const std::size_t nu2 = static_cast<std::size_t>(row) >> 2;
            for (std::size_t l = 0; l < a.left; ++l) {
                for (std::size_t x = 0; x < a.legs; ++x) {
                    const auto src = static_cast<Eigen::Index>((l * 4 + mu1) * a.legs + x);
                    const auto dst = static_cast<Eigen::Index>((l * 4 + nu1) * a.legs + x);
                    out.row(dst).segment(static_cast<Eigen::Index>(nu2 * seg), static_cast<Eigen::Index>(seg)) +=
                        w * merged.row(src).segment(static_cast<Eigen::Index>(mu2 * seg),
                                                    static_cast<Eigen::Index>(seg));
                }
            }
        }
    }
    Eigen::BDCSVD<Matrix> svd(out, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const std::size_t keep = kept_rank(svd.singularValues(), max_chi, tol);
    const auto k = static_cast<Eigen::Index>(keep);
    a.data = row_major(svd.matrixU().leftCols(k));
    a.right = keep;
    b.data = row_major(svd.singularValues().head(k).asDiagonal() * svd.matrixV().leftCols(k).transpose());
    b.left = keep;
}

Gate localize(const Gate &g, std::uint32_t left) {
    Gate local = g;
    for (std::uint32_t k = 0; k < g.arity(); ++k) {
        local.qubits[k] = g.qubits[k] - left;
    }
    return local;
}

std::vector<OpCore> observable_train(const WeightedPauliSum &obs, std::uint32_t n) {
    const std::size_t terms = obs.size();
    std::vector<OpCore> cores(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        OpCore &c = cores[k];
        c.left = k == 0 ? 1 : terms;
        c.right = k + 1 == n ? 1 : terms;
        c.data.assign(c.left * 4 * c.right, 0.0);
        for (std::size_t t = 0; t < terms; ++t) {
            const auto &term = obs.terms()[t];
            const std::size_t mu = ((term.pauli.z >> k) & 1u) | (((term.pauli.x >> k) & 1u) << 1);
            const double w = k == 0 ? term.coefficient.real() : 1.0;
            c.data[c.index(k == 0 ? 0 : t, mu, 0, k + 1 == n ? 0 : t)] = w;
        }
    }
    return cores;
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix train_left(const TrainCore &c) {
    return Eigen::Map<const RowMatrix>(c.data.data(), static_cast<Eigen::Index>(c.left * 3),
                                       static_cast<Eigen::Index>(c.right));
}

Matrix train_right(const TrainCore &c) {
    return Eigen::Map<const RowMatrix>(c.data.data(), static_cast<Eigen::Index>(c.left),
                                       static_cast<Eigen::Index>(3 * c.right));
}

TrainCore train_core(const Matrix &m, std::size_t left, std::size_t right) {
    TrainCore c;
    c.left = left;
    c.right = right;
    c.data = row_major(m);
    return c;
}

/// Left-orthogonalizes, then sweeps right to left with truncated SVDs.
/// Returns the sum of squared discarded singular values.
double compress(std::vector<TrainCore> &cores, std::size_t max_chi, double tol) {
    if (cores.size() < 2) {
        return 0.0;
    }
    for (std::size_t k = 0; k + 1 < cores.size(); ++k) {
        const Matrix m = train_left(cores[k]);
        Eigen::HouseholderQR<Matrix> qr(m);
        const auto rank = std::min(m.rows(), m.cols());
        const Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
        const Matrix r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
        cores[k] = train_core(q, cores[k].left, static_cast<std::size_t>(rank));
        cores[k + 1] = train_core(r * train_right(cores[k + 1]), static_cast<std::size_t>(rank), cores[k + 1].right);
    }
    double dropped = 0.0;
    for (std::size_t k = cores.size() - 1; k > 0; --k) {
        const Matrix m = train_right(cores[k]);
        Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto &sv = svd.singularValues();
        const std::size_t keep = kept_rank(sv, max_chi, tol);
        for (auto i = static_cast<Eigen::Index>(keep); i < sv.size(); ++i) {
            dropped += sv(i) * sv(i);
        }
        const auto kk = static_cast<Eigen::Index>(keep);
        cores[k] = train_core(svd.matrixV().leftCols(kk).transpose(), keep, cores[k].right);
        const Matrix us = svd.matrixU().leftCols(kk) * sv.head(kk).asDiagonal();
        cores[k - 1] = train_core(train_left(cores[k - 1]) * us, cores[k - 1].left, keep);
    }
    return dropped;
}

std::size_t reverse_digits(std::size_t a, std::size_t m) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < m; ++i) {
        out = out * 3 + a % 3;
        a /= 3;
    }
    return out;
}

}  // namespace

FunctionSurrogate extract_function_mps(const CircuitIR &c, std::span<const double> theta, const ExtractOptions &opts,
                                       ExtractionStats *stats) {
    require_valid(c);
    if (theta.size() < c.num_theta()) {
        fail(ErrorKind::Binding, "expected " + std::to_string(c.num_theta()) + " parameters, got " +
                                     std::to_string(theta.size()));
    }
    if (!c.zero_initial_state()) {
        fail(ErrorKind::Validation, "function extraction needs the zero initial state");
    }
    const ResourceProfile prof = profile(c);
    if (prof.encoding_givens_count > 0) {
        fail(ErrorKind::Basis, "the trig basis covers single-qubit encodings only");
    }
    if (opts.require_class1) {
        std::string why;
        if (!engine_admits(Engine::Mps, prof, opts.classifier, &why)) {
            fail(ErrorKind::Classification, "circuit is not shallow enough for tensor extraction: " + why);
        }
    }

    const CircuitIR routed = route_nearest_neighbor(c);
    std::vector<const Gate *> gates;
    for (const auto &block : routed.layers) {
        for (const auto &g : block.gates) {
            gates.push_back(&g);
        }
    }
    // Leg ids follow forward time so that sorting recovers time order per site.
    std::vector<std::size_t> leg_of(gates.size(), 0);
    std::vector<int> slot_of_leg;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i]->tag == GateTag::EncRZ) {
            leg_of[i] = slot_of_leg.size();
            slot_of_leg.push_back(gates[i]->slot);
        }
    }

    const std::uint32_t n = c.n;
    std::vector<OpCore> ops = observable_train(c.observable, n);
    std::size_t op_bond = c.observable.size();
    for (std::size_t i = gates.size(); i-- > 0;) {
        const Gate &g = *gates[i];
        if (g.tag == GateTag::EncRZ) {
            apply_encoding(ops[g.qubits[0]], leg_of[i]);
        } else if (g.arity() == 1) {
            apply_single(ops[g.qubits[0]], transfer_matrix(localize(g, g.qubits[0]), 1, theta));
        } else {
            const std::uint32_t a = std::min(g.qubits[0], g.qubits[1]);
            apply_pair(ops[a], ops[a + 1], transfer_matrix(localize(g, a), 2, theta), opts.max_chi, opts.svd_tol);
            op_bond = std::max(op_bond, ops[a].right);
        }
    }

    // Close the Pauli leg against |0><0| (I and Z have unit expectation), then
    // split each site's stacked legs into one core per leg in forward time.
    std::vector<TrainCore> cores;
    std::vector<int> leg_inputs;
    Matrix pending = Matrix::Identity(1, 1);
    for (std::uint32_t k = 0; k < n; ++k) {
        const OpCore &op = ops[k];
        const std::size_t m = op.leg_ids.size();
        Matrix site(op.left, op.legs * op.right);
        for (std::size_t l = 0; l < op.left; ++l) {
            for (std::size_t a = 0; a < op.legs; ++a) {
                const std::size_t fa = reverse_digits(a, m);
                for (std::size_t r = 0; r < op.right; ++r) {
                    site(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(fa * op.right + r)) =
                        op.data[op.index(l, 0, a, r)] + op.data[op.index(l, 1, a, r)];
                }
            }
        }
        Matrix rest = pending * site;
        if (m == 0) {
            pending = rest;
            continue;
        }
        std::vector<std::size_t> ids(op.leg_ids.rbegin(), op.leg_ids.rend());
        std::size_t left = static_cast<std::size_t>(rest.rows());
        std::size_t tail = op.legs * op.right / 3;
        for (std::size_t j = 0; j + 1 < m; ++j) {
            RowMatrix rm = rest;
            const Matrix shaped = Eigen::Map<RowMatrix>(rm.data(), static_cast<Eigen::Index>(left * 3),
                                                        static_cast<Eigen::Index>(tail));
            Eigen::BDCSVD<Matrix> svd(shaped, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const std::size_t keep = kept_rank(svd.singularValues(), 0, opts.svd_tol);
            const auto kk = static_cast<Eigen::Index>(keep);
            cores.push_back(train_core(svd.matrixU().leftCols(kk), left, keep));
            leg_inputs.push_back(slot_of_leg[ids[j]]);
            rest = svd.singularValues().head(kk).asDiagonal() * svd.matrixV().leftCols(kk).transpose();
            left = keep;
            tail /= 3;
        }
        RowMatrix rm = rest;
        const Matrix last = Eigen::Map<RowMatrix>(rm.data(), static_cast<Eigen::Index>(left * 3),
                                                  static_cast<Eigen::Index>(op.right));
        cores.push_back(train_core(last, left, op.right));
        leg_inputs.push_back(slot_of_leg[ids[m - 1]]);
        pending = Matrix::Identity(static_cast<Eigen::Index>(op.right), static_cast<Eigen::Index>(op.right));
    }

    TensorTrain train;
    if (cores.empty()) {
        train.scale = pending(0, 0);
    } else {
        TrainCore &back = cores.back();
        back = train_core(train_left(back) * pending, back.left, 1);
        compress(cores, opts.max_chi, opts.svd_tol);
    }
    train.cores = std::move(cores);
    train.leg_inputs = std::move(leg_inputs);

    if (stats) {
        stats->operator_max_bond = op_bond;
        stats->function_max_bond = train.max_bond();
        stats->legs = train.cores.size();
    }
    return FunctionSurrogate(BasisKind::Trig3, static_cast<std::uint32_t>(c.num_inputs()), std::move(train));
}

TruncationResult truncate(const FunctionSurrogate &s, std::size_t max_chi, double tol) {
    const auto *tt = std::get_if<TensorTrain>(&s.representation());
    if (!tt) {
        fail(ErrorKind::Basis, "truncation applies to tensor-train surrogates only");
    }
    if (max_chi == 0) {
        fail(ErrorKind::Configuration, "max_chi must be at least 1");
    }
    if (tol < 0.0) {
        fail(ErrorKind::Configuration, "truncation tolerance must be non-negative");
    }
    TensorTrain next = *tt;
    const double dropped = compress(next.cores, max_chi, tol);
    if (dropped == 0.0 && next.max_bond() >= tt->max_bond()) {
        return {s, 0.0, 0.0};
    }
    const double coef = std::sqrt(dropped) * std::abs(tt->scale);
    const double eval = coef * std::pow(std::sqrt(2.0), static_cast<double>(next.cores.size()));
    next.evaluation_bound += eval;
    return {FunctionSurrogate(s.basis(), s.n_inputs(), std::move(next)), coef, eval};
}

}  // namespace qsurrogate
