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

#include "qsurrogate/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "qsurrogate/error.hpp"

namespace qsurrogate {

namespace {

void check_n(std::uint32_t n) {
    if (n > PauliString::kMaxQubits) {
        fail(ErrorKind::Dimension, "pauli strings support at most 64 qubits, got " + std::to_string(n));
    }
}

void check_same_n(const PauliString &a, const PauliString &b) {
    if (a.n != b.n) {
        fail(ErrorKind::Dimension,
             "pauli size mismatch: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
    }
}

std::uint8_t popcount_mod4(std::uint64_t v) {
    return static_cast<std::uint8_t>(std::popcount(v) & 3);
}

}  // namespace

std::uint64_t qubit_mask(std::uint32_t n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

PauliString PauliString::identity(std::uint32_t n) {
    check_n(n);
    PauliString p;
    p.n = n;
    return p;
}

PauliString PauliString::single(std::uint32_t n, std::uint32_t q, char op) {
    check_n(n);
    if (q >= n) {
        fail(ErrorKind::Dimension, "qubit " + std::to_string(q) + " out of range for n=" + std::to_string(n));
    }
    PauliString p = identity(n);
    std::uint64_t bit = std::uint64_t{1} << q;
    switch (op) {
        case 'I':
            break;
        case 'X':
            p.x = bit;
            break;
        case 'Y':
            p.x = bit;
            p.z = bit;
            break;
        case 'Z':
            p.z = bit;
            break;
        default:
            fail(ErrorKind::Validation, std::string("unknown pauli letter '") + op + "'");
    }
    return p;
}

PauliString PauliString::parse(std::string_view text) {
    std::uint8_t phase = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        phase = text[pos] == '-' ? 2 : 0;
        pos++;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase = static_cast<std::uint8_t>((phase + 1) & 3);
        pos++;
    }
    std::string_view body = text.substr(pos);
    check_n(static_cast<std::uint32_t>(body.size()));
    PauliString p = identity(static_cast<std::uint32_t>(body.size()));
    p.phase = phase;
    for (std::size_t k = 0; k < body.size(); k++) {
        std::uint64_t bit = std::uint64_t{1} << k;
        switch (body[k]) {
            case 'I':
            case '_':
                break;
            case 'X':
                p.x |= bit;
                break;
            case 'Y':
                p.x |= bit;
                p.z |= bit;
                break;
            case 'Z':
                p.z |= bit;
                break;
            default:
                fail(ErrorKind::Validation, "bad pauli text '" + std::string(text) + "'");
        }
    }
    return p;
}

char PauliString::op_at(std::uint32_t q) const {
    bool zb = (z >> q) & 1u;
    bool xb = (x >> q) & 1u;
    if (zb && xb) {
        return 'Y';
    }
    if (xb) {
        return 'X';
    }
    if (zb) {
        return 'Z';
    }
    return 'I';
}

std::string PauliString::letters() const {
    std::string out;
    out.reserve(n);
    for (std::uint32_t q = 0; q < n; q++) {
        out.push_back(op_at(q));
    }
    return out;
}

std::string PauliString::str() const {
    static constexpr const char *kPrefix[4] = {"+", "+i", "-", "-i"};
    return kPrefix[phase & 3] + letters();
}

bool PauliString::commutes_with(const PauliString &other) const {
    check_same_n(*this, other);
    return ((std::popcount(z & other.x) + std::popcount(x & other.z)) & 1) == 0;
}

std::uint32_t PauliString::weight() const {
    return static_cast<std::uint32_t>(std::popcount(z | x));
}

complex PauliString::phase_value() const {
    static const complex kUnits[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kUnits[phase & 3];
}

PauliString PauliString::unsigned_string() const {
    PauliString p = *this;
    p.phase = 0;
    return p;
}

PauliString pauli_mul(const PauliString &a, const PauliString &b) {
    check_same_n(a, b);
    PauliString out;
    out.n = a.n;
    out.z = a.z ^ b.z;
    out.x = a.x ^ b.x;
    // Hermitian factors carry (-i)^{zx}; X^{x1} Z^{z2} = (-1)^{x1 z2} Z^{z2} X^{x1}.
    int ph = a.phase + b.phase;
    ph -= popcount_mod4(a.z & a.x);
    ph -= popcount_mod4(b.z & b.x);
    ph += 2 * popcount_mod4(a.x & b.z);
    ph += popcount_mod4(out.z & out.x);
    out.phase = static_cast<std::uint8_t>(((ph % 4) + 4) % 4);
    return out;
}

PauliString pauli_tensor(const PauliString &a, const PauliString &b) {
    check_n(a.n + b.n);
    PauliString out;
    out.n = a.n + b.n;
    out.z = a.z | (b.n == 0 ? 0 : (b.z << a.n));
    out.x = a.x | (b.n == 0 ? 0 : (b.x << a.n));
    out.phase = static_cast<std::uint8_t>((a.phase + b.phase) & 3);
    return out;
}

WeightedPauliSum WeightedPauliSum::from_pauli(const PauliString &p, complex coefficient) {
    WeightedPauliSum s(p.n);
    s.add(coefficient, p);
    return s;
}

WeightedPauliSum WeightedPauliSum::parse(std::uint32_t n, const std::vector<std::pair<double, std::string>> &terms) {
    WeightedPauliSum s(n);
    for (const auto &[c, text] : terms) {
        PauliString p = PauliString::parse(text);
        if (p.n != n) {
            fail(ErrorKind::Dimension, "observable term '" + text + "' does not have " + std::to_string(n) + " qubits");
        }
        s.add(c, p);
    }
    return s;
}

void WeightedPauliSum::add(complex coefficient, const PauliString &p) {
    if (terms_.empty() && n_ == 0) {
        n_ = p.n;
    }
    if (p.n != n_) {
        fail(ErrorKind::Dimension, "term has " + std::to_string(p.n) + " qubits, sum has " + std::to_string(n_));
    }
    terms_.push_back({coefficient * p.phase_value(), p.unsigned_string()});
}

void WeightedPauliSum::add(const WeightedPauliSum &other, complex scale) {
    for (const auto &t : other.terms_) {
        add(t.coefficient * scale, t.pauli);
    }
}

bool WeightedPauliSum::is_hermitian(double tol) const {
    WeightedPauliSum merged = sum_normalize(*this);
    return std::all_of(merged.terms_.begin(), merged.terms_.end(),
                       [tol](const PauliTerm &t) { return std::abs(t.coefficient.imag()) <= tol; });
}

double WeightedPauliSum::norm2() const {
    double acc = 0;
    for (const auto &t : terms_) {
        acc += std::norm(t.coefficient);
    }
    return acc;
}

WeightedPauliSum WeightedPauliSum::operator*(const WeightedPauliSum &other) const {
    if (n_ != other.n_) {
        fail(ErrorKind::Dimension, "sum product size mismatch");
    }
    WeightedPauliSum out(n_);
    for (const auto &a : terms_) {
        for (const auto &b : other.terms_) {
            out.add(a.coefficient * b.coefficient, pauli_mul(a.pauli, b.pauli));
        }
    }
    return sum_normalize(out);
}

WeightedPauliSum sum_normalize(const WeightedPauliSum &s, double drop_below) {
    if (drop_below < 0) {
        fail(ErrorKind::Validation, "drop_below must be non-negative");
    }
    std::vector<PauliTerm> terms = s.terms();
    std::stable_sort(terms.begin(), terms.end(),
                     [](const PauliTerm &a, const PauliTerm &b) { return a.pauli.key() < b.pauli.key(); });
    WeightedPauliSum out(s.num_qubits());
    std::size_t i = 0;
    while (i < terms.size()) {
        complex acc = 0;
        std::size_t j = i;
        while (j < terms.size() && terms[j].pauli.key() == terms[i].pauli.key()) {
            acc += terms[j].coefficient;
            j++;
        }
        if (std::abs(acc) > drop_below) {
            out.add(acc, terms[i].pauli);
        }
        i = j;
    }
    return out;
}

WeightedPauliSum sum_tensor(const WeightedPauliSum &a, const WeightedPauliSum &b) {
    WeightedPauliSum out(a.num_qubits() + b.num_qubits());
    for (const auto &ta : a.terms()) {
        for (const auto &tb : b.terms()) {
            out.add(ta.coefficient * tb.coefficient, pauli_tensor(ta.pauli, tb.pauli));
        }
    }
    return out;
}

namespace {

struct LocalImages {
    PauliString of_z;
    PauliString of_x;
};

// Images U^dagger Z_q U and U^dagger X_q U of the local generators.
LocalImages clifford_images(const CliffordGate &g, std::uint32_t n, std::uint32_t q) {
    auto p = [n](std::uint32_t qubit, char op, std::uint8_t phase = 0) {
        PauliString s = PauliString::single(n, qubit, op);
        s.phase = phase;
        return s;
    };
    auto two = [n](std::uint32_t a, char oa, std::uint32_t b, char ob) {
        return pauli_mul(PauliString::single(n, a, oa), PauliString::single(n, b, ob));
    };
    switch (g.kind) {
        case CliffordKind::I:
            return {p(q, 'Z'), p(q, 'X')};
        case CliffordKind::H:
            return {p(q, 'X'), p(q, 'Z')};
        case CliffordKind::S:
            return {p(q, 'Z'), p(q, 'Y', 2)};
        case CliffordKind::Sdg:
            return {p(q, 'Z'), p(q, 'Y')};
        case CliffordKind::X:
            return {p(q, 'Z', 2), p(q, 'X')};
        case CliffordKind::Y:
            return {p(q, 'Z', 2), p(q, 'X', 2)};
        case CliffordKind::Z:
            return {p(q, 'Z'), p(q, 'X', 2)};
        case CliffordKind::CNOT:
            if (q == g.q0) {
                return {p(q, 'Z'), two(g.q0, 'X', g.q1, 'X')};
            }
            return {two(g.q0, 'Z', g.q1, 'Z'), p(q, 'X')};
        case CliffordKind::CZ: {
            std::uint32_t other = q == g.q0 ? g.q1 : g.q0;
            return {p(q, 'Z'), two(q, 'X', other, 'Z')};
        }
        case CliffordKind::SWAP: {
            std::uint32_t other = q == g.q0 ? g.q1 : g.q0;
            return {p(other, 'Z'), p(other, 'X')};
        }
    }
    fail(ErrorKind::GateSet, "unsupported clifford gate");
}

bool is_two_qubit(CliffordKind k) {
    return k == CliffordKind::CNOT || k == CliffordKind::CZ || k == CliffordKind::SWAP;
}

}  // namespace

PauliString conjugate_clifford(const CliffordGate &gate, const PauliString &p) {
    std::vector<std::uint32_t> qubits{gate.q0};
    if (is_two_qubit(gate.kind)) {
        if (gate.q0 == gate.q1) {
            fail(ErrorKind::Validation, "two-qubit clifford acting twice on qubit " + std::to_string(gate.q0));
        }
        qubits.push_back(gate.q1);
        std::sort(qubits.begin(), qubits.end());
    }
    for (auto q : qubits) {
        if (q >= p.n) {
            fail(ErrorKind::Dimension, "clifford qubit " + std::to_string(q) + " out of range");
        }
    }
    PauliString out = p;
    for (auto q : qubits) {
        out.z &= ~(std::uint64_t{1} << q);
        out.x &= ~(std::uint64_t{1} << q);
    }
    for (auto q : qubits) {
        bool zb = (p.z >> q) & 1u;
        bool xb = (p.x >> q) & 1u;
        if (!zb && !xb) {
            continue;
        }
        LocalImages img = clifford_images(gate, p.n, q);
        PauliString factor = PauliString::identity(p.n);
        if (zb && xb) {
            factor.phase = 3;  // (-i)
        }
        if (zb) {
            factor = pauli_mul(factor, img.of_z);
        }
        if (xb) {
            factor = pauli_mul(factor, img.of_x);
        }
        out = pauli_mul(out, factor);
    }
    return out;
}

WeightedPauliSum conjugate_rotation(const PauliString &generator, double angle, const PauliString &p) {
    if (!generator.is_hermitian()) {
        fail(ErrorKind::Validation, "rotation generator must be Hermitian");
    }
    WeightedPauliSum out(p.n);
    if (p.commutes_with(generator)) {
        out.add(1.0, p);
        return out;
    }
    // e^{i a G/2} P e^{-i a G/2} = cos(a) P + sin(a) (i G P) when {G, P} = 0.
    PauliString i_unit = PauliString::identity(p.n);
    i_unit.phase = 1;
    out.add(std::cos(angle), p);
    out.add(std::sin(angle), pauli_mul(pauli_mul(i_unit, generator), p));
    return out;
}

WeightedPauliSum conjugate_t(std::uint32_t qubit, const PauliString &p) {
    if (qubit >= p.n) {
        fail(ErrorKind::Dimension, "T qubit " + std::to_string(qubit) + " out of range");
    }
    return conjugate_rotation(PauliString::single(p.n, qubit, 'Z'), std::numbers::pi / 4, p);
}

EncodingSplit conjugate_encoding(std::uint32_t qubit, const PauliString &p) {
    if (qubit >= p.n) {
        fail(ErrorKind::Dimension, "encoding qubit " + std::to_string(qubit) + " out of range");
    }
    EncodingSplit split{p, std::nullopt};
    if (((p.x >> qubit) & 1u) == 0) {
        return split;
    }
    // S(x) = exp(-i (-pi x) Z / 2), so the odd part is -(i Z P) = (-i) Z P.
    PauliString minus_i_z = PauliString::single(p.n, qubit, 'Z');
    minus_i_z.phase = 3;
    split.odd = pauli_mul(minus_i_z, p);
    return split;
}

}  // namespace qsurrogate
