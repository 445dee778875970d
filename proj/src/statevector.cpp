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

#include "qsurrogate/statevector.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "qsurrogate/error.hpp"
#include "qsurrogate/kernels.hpp"

namespace qsurrogate {

namespace {

constexpr double kImagTolerance = 1e-10;

void check_capacity(std::uint32_t n, const OracleConfig &cfg) {
    if (n > cfg.max_qubits) {
        fail(ErrorKind::Capacity,
             "dense oracle capped at " + std::to_string(cfg.max_qubits) + " qubits, got " + std::to_string(n));
    }
}

}  // namespace

DenseState DenseState::zero(std::uint32_t n) {
    if (n > 30) {
        fail(ErrorKind::Capacity, "dense state of " + std::to_string(n) + " qubits");
    }
    DenseState s;
    s.n_ = n;
    s.amps_.assign(std::size_t{1} << n, complex{0, 0});
    s.amps_[0] = 1;
    return s;
}

DenseState DenseState::from_amplitudes(std::uint32_t n, std::vector<complex> amplitudes) {
    if (n > 30 || amplitudes.size() != (std::size_t{1} << n)) {
        fail(ErrorKind::Dimension, "amplitude vector length does not match 2^n");
    }
    DenseState s;
    s.n_ = n;
    s.amps_ = std::move(amplitudes);
    return s;
}

double DenseState::norm_squared() const {
    double acc = 0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

void DenseState::apply_1q(std::uint32_t q, const std::array<complex, 4> &m) {
    if (q >= n_) {
        fail(ErrorKind::Dimension, "qubit out of range");
    }
    kernels::active().apply_1q(amps_.data(), amps_.size(), q, m.data());
}

void DenseState::apply_cnot(std::uint32_t control, std::uint32_t target) {
    const std::size_t cb = std::size_t{1} << control;
    const std::size_t tb = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if ((i & cb) && !(i & tb)) {
            std::swap(amps_[i], amps_[i | tb]);
        }
    }
}

void DenseState::apply_cz(std::uint32_t a, std::uint32_t b) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if ((i & mask) == mask) {
            amps_[i] = -amps_[i];
        }
    }
}

void DenseState::apply_swap(std::uint32_t a, std::uint32_t b) {
    const std::size_t ab = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if ((i & ab) && !(i & bb)) {
            std::swap(amps_[i], amps_[(i & ~ab) | bb]);
        }
    }
}

void DenseState::apply_pauli_rotation(const PauliString &p, double angle) {
    if (p.n != n_) {
        fail(ErrorKind::Dimension, "rotation generator width mismatch");
    }
    if (!p.is_hermitian()) {
        fail(ErrorKind::Validation, "rotation generator must be Hermitian");
    }
    // P|j> = c (-1)^{popcount(z & (j ^ x))} |j ^ x>
    const complex c = p.phase_value() * std::pow(complex{0, -1}, std::popcount(p.z & p.x) & 3);
    const double cs = std::cos(angle / 2);
    const complex minus_i_sin{0, -std::sin(angle / 2)};
    auto sign = [&](std::size_t j) { return (std::popcount(p.z & j) & 1) ? -1.0 : 1.0; };
    if (p.x == 0) {
        for (std::size_t j = 0; j < amps_.size(); j++) {
            amps_[j] *= cs + minus_i_sin * c * sign(j);
        }
        return;
    }
    for (std::size_t j = 0; j < amps_.size(); j++) {
        std::size_t k = j ^ p.x;
        if (k < j) {
            continue;
        }
        complex aj = amps_[j];
        complex ak = amps_[k];
        // (P psi)[j] = c sign(j) psi[k]
        amps_[j] = cs * aj + minus_i_sin * c * sign(j) * ak;
        amps_[k] = cs * ak + minus_i_sin * c * sign(k) * aj;
    }
}

std::array<complex, 4> single_qubit_matrix(const Gate &g, std::span<const double> x, std::span<const double> theta) {
    const double r = 1.0 / std::sqrt(2.0);
    const complex i{0, 1};
    switch (g.tag) {
        case GateTag::H:
            return {r, r, r, -r};
        case GateTag::S:
            return {1, 0, 0, i};
        case GateTag::X:
            return {0, 1, 1, 0};
        case GateTag::Y:
            return {0, -i, i, 0};
        case GateTag::Z:
            return {1, 0, 0, -1};
        case GateTag::T:
            return {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)};
        case GateTag::RZ:
        case GateTag::EncRZ: {
            double a = gate_angle(g, x, theta);
            return {std::polar(1.0, -a / 2), 0, 0, std::polar(1.0, a / 2)};
        }
        case GateTag::RX: {
            double a = gate_angle(g, x, theta);
            return {std::cos(a / 2), -i * std::sin(a / 2), -i * std::sin(a / 2), std::cos(a / 2)};
        }
        default:
            fail(ErrorKind::GateSet, "gate " + std::string(gate_tag_name(g.tag)) + " is not single-qubit");
    }
}

void DenseState::apply_gate(const Gate &g, std::span<const double> x, std::span<const double> theta) {
    for (std::uint32_t k = 0; k < g.arity(); k++) {
        if (g.qubits[k] >= n_) {
            fail(ErrorKind::Dimension, "gate qubit out of range");
        }
    }
    switch (g.tag) {
        case GateTag::CNOT:
            apply_cnot(g.qubits[0], g.qubits[1]);
            return;
        case GateTag::CZ:
            apply_cz(g.qubits[0], g.qubits[1]);
            return;
        case GateTag::SWAP:
            apply_swap(g.qubits[0], g.qubits[1]);
            return;
        case GateTag::Givens:
        case GateTag::EncGivens:
            for (const auto &rot : gate_action(g, n_, x, theta).rotations) {
                apply_pauli_rotation(rot.generator, rot.angle);
            }
            return;
        default:
            apply_1q(g.qubits[0], single_qubit_matrix(g, x, theta));
    }
}

complex DenseState::expectation(const PauliString &p) const {
    if (p.n != n_) {
        fail(ErrorKind::Dimension, "pauli width " + std::to_string(p.n) + " vs state " + std::to_string(n_));
    }
    complex zx = kernels::active().zx_expectation(amps_.data(), amps_.size(), p.z, p.x);
    return p.phase_value() * std::pow(complex{0, -1}, std::popcount(p.z & p.x) & 3) * zx;
}

complex DenseState::expectation(const WeightedPauliSum &s) const {
    complex acc = 0;
    for (const auto &t : s.terms()) {
        acc += t.coefficient * expectation(t.pauli);
    }
    return acc;
}

DenseState DenseState::tensor(const DenseState &other) const {
    DenseState out;
    out.n_ = n_ + other.n_;
    out.amps_.resize(amps_.size() * other.amps_.size());
    for (std::size_t hi = 0; hi < other.amps_.size(); hi++) {
        for (std::size_t lo = 0; lo < amps_.size(); lo++) {
            out.amps_[hi * amps_.size() + lo] = amps_[lo] * other.amps_[hi];
        }
    }
    return out;
}

namespace {

void put_u64(std::ofstream &out, std::uint64_t v) {
    unsigned char buf[8];
    for (int k = 0; k < 8; k++) {
        buf[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xff);
    }
    out.write(reinterpret_cast<const char *>(buf), 8);
}

std::uint64_t get_u64(std::ifstream &in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char *>(buf), 8);
    if (!in) {
        fail(ErrorKind::Io, "truncated state dump");
    }
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; k--) {
        v = (v << 8) | buf[k];
    }
    return v;
}

}  // namespace

void DenseState::dump(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorKind::Io, "cannot write " + path.string());
    }
    put_u64(out, n_);
    for (const auto &a : amps_) {
        put_u64(out, std::bit_cast<std::uint64_t>(a.real()));
        put_u64(out, std::bit_cast<std::uint64_t>(a.imag()));
    }
}

DenseState DenseState::load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::Io, "cannot read " + path.string());
    }
    auto n = static_cast<std::uint32_t>(get_u64(in));
    if (n > 30) {
        fail(ErrorKind::Io, "state dump declares too many qubits");
    }
    std::vector<complex> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        double re = std::bit_cast<double>(get_u64(in));
        double im = std::bit_cast<double>(get_u64(in));
        a = {re, im};
    }
    return from_amplitudes(n, std::move(amps));
}

DenseState run_blocks(const CircuitIR &c, std::size_t first, std::size_t last, std::span<const double> x,
                      std::span<const double> theta, const OracleConfig &cfg) {
    check_capacity(c.n, cfg);
    require_valid(c);
    DenseState psi = c.zero_initial_state() ? DenseState::zero(c.n) : DenseState::from_amplitudes(c.n, c.initial_amplitudes);
    for (std::size_t b = first; b < last && b < c.layers.size(); b++) {
        for (const Gate &g : c.layers[b].gates) {
            psi.apply_gate(g, x, theta);
        }
    }
    return psi;
}

DenseState run(const CircuitIR &c, std::span<const double> x, std::span<const double> theta, const OracleConfig &cfg) {
    return run_blocks(c, 0, c.layers.size(), x, theta, cfg);
}

double hermitian_expectation(const DenseState &psi, const WeightedPauliSum &observable) {
    if (!observable.is_hermitian(1e-12)) {
        fail(ErrorKind::Validation, "observable is not Hermitian");
    }
    complex v = psi.expectation(observable);
    double scale = 0;
    for (const auto &t : observable.terms()) {
        scale += std::abs(t.coefficient);
    }
    if (std::abs(v.imag()) > kImagTolerance * std::max(1.0, scale)) {
        fail(ErrorKind::Numeric, "expectation has imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

double expectation(const CircuitIR &c, std::span<const double> x, std::span<const double> theta,
                   const OracleConfig &cfg) {
    return hermitian_expectation(run(c, x, theta, cfg), c.observable);
}

Tabulated tabulate(const CircuitIR &c, std::span<const double> theta, const std::vector<std::vector<double>> &grid,
                   const OracleConfig &cfg) {
    if (grid.empty()) {
        fail(ErrorKind::Validation, "tabulation grid is empty");
    }
    Tabulated out;
    out.reserve(grid.size());
    for (const auto &x : grid) {
        out.emplace_back(x, expectation(c, x, theta, cfg));
    }
    return out;
}

std::vector<std::vector<double>> binary_grid(std::uint32_t d) {
    if (d > 24) {
        fail(ErrorKind::Capacity, "binary grid of dimension " + std::to_string(d));
    }
    std::vector<std::vector<double>> grid(std::size_t{1} << d, std::vector<double>(d));
    for (std::size_t idx = 0; idx < grid.size(); idx++) {
        for (std::uint32_t k = 0; k < d; k++) {
            grid[idx][k] = static_cast<double>((idx >> k) & 1u);
        }
    }
    return grid;
}

}  // namespace qsurrogate
