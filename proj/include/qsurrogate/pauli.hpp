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

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qsurrogate {

using complex = std::complex<double>;

/// An n-qubit Pauli operator i^phase * (x) (-i)^{z_k x_k} Z_k^{z_k} X_k^{x_k}.
///
/// The bit-pair (z, x) per qubit selects I, Z, X or Y; the (-i)^{zx} prefactor
/// makes every phase-0 string Hermitian, so (1,1) is exactly Y. Qubit k lives in
/// bit k of both masks. Phases are tracked exactly modulo 4.
struct PauliString {
    std::uint64_t z = 0;
    std::uint64_t x = 0;
    std::uint8_t phase = 0;
    std::uint32_t n = 0;

    static constexpr std::uint32_t kMaxQubits = 64;

    static PauliString identity(std::uint32_t n);
    /// Single-qubit operator ('I', 'X', 'Y' or 'Z') on qubit q.
    static PauliString single(std::uint32_t n, std::uint32_t q, char op);
    /// Parses "+XIZY", "-Z", "+iX", "-iY" or a bare "XYZ". Character k acts on qubit k.
    static PauliString parse(std::string_view text);

    std::string str() const;
    /// The operator letters only, without the sign prefix.
    std::string letters() const;
    char op_at(std::uint32_t q) const;

    bool is_identity() const {
        return z == 0 && x == 0;
    }
    bool is_hermitian() const {
        return (phase & 1u) == 0;
    }
    bool commutes_with(const PauliString &other) const;
    std::uint32_t weight() const;
    complex phase_value() const;
    /// Same operator with phase reset to +1.
    PauliString unsigned_string() const;
    std::pair<std::uint64_t, std::uint64_t> key() const {
        return {z, x};
    }

    bool operator==(const PauliString &other) const = default;
};

std::uint64_t qubit_mask(std::uint32_t n);

/// Group product a*b with exact phase.
PauliString pauli_mul(const PauliString &a, const PauliString &b);

struct PauliTerm {
    complex coefficient;
    PauliString pauli;  // phase always 0 once stored in a sum
};

/// A finite linear combination of Pauli strings over n qubits.
class WeightedPauliSum {
   public:
    WeightedPauliSum() = default;
    explicit WeightedPauliSum(std::uint32_t n) : n_(n) {
    }

    static WeightedPauliSum from_pauli(const PauliString &p, complex coefficient = 1.0);
    static WeightedPauliSum parse(std::uint32_t n, const std::vector<std::pair<double, std::string>> &terms);

    std::uint32_t num_qubits() const {
        return n_;
    }
    const std::vector<PauliTerm> &terms() const {
        return terms_;
    }
    std::size_t size() const {
        return terms_.size();
    }
    bool empty() const {
        return terms_.empty();
    }

    /// Appends coefficient * p, folding p's phase into the coefficient. Does not merge.
    void add(complex coefficient, const PauliString &p);
    void add(const WeightedPauliSum &other, complex scale = 1.0);

    /// True when every coefficient is real within tol (phases already folded).
    bool is_hermitian(double tol = 1e-12) const;
    double norm2() const;

    WeightedPauliSum operator*(const WeightedPauliSum &other) const;

   private:
    std::uint32_t n_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Merges duplicate strings and drops terms with |coefficient| <= drop_below.
/// Output is sorted by (z, x), so equal sums compare equal term by term.
WeightedPauliSum sum_normalize(const WeightedPauliSum &s, double drop_below = 0.0);

/// Tensor product a (x) b with a on the low qubits.
PauliString pauli_tensor(const PauliString &a, const PauliString &b);
WeightedPauliSum sum_tensor(const WeightedPauliSum &a, const WeightedPauliSum &b);

enum class CliffordKind { I, H, S, Sdg, X, Y, Z, CNOT, CZ, SWAP };

struct CliffordGate {
    CliffordKind kind = CliffordKind::I;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;  // target for CNOT, second qubit for CZ/SWAP
};

/// U^dagger P U for a Clifford U. Always a single signed string.
PauliString conjugate_clifford(const CliffordGate &gate, const PauliString &p);

/// U^dagger P U for U = exp(-i angle G / 2), G a Hermitian Pauli string (sign allowed).
WeightedPauliSum conjugate_rotation(const PauliString &generator, double angle, const PauliString &p);

/// T^dagger P T with T = diag(1, e^{i pi/4}) on the given qubit.
WeightedPauliSum conjugate_t(std::uint32_t qubit, const PauliString &p);

/// S(x)^dagger P S(x) for S(x) = exp(i pi x Z / 2) = cos(pi x) even + sin(pi x) odd.
/// odd is empty when P commutes with Z on the qubit (then even == P).
struct EncodingSplit {
    PauliString even;
    std::optional<PauliString> odd;
};
EncodingSplit conjugate_encoding(std::uint32_t qubit, const PauliString &p);

}  // namespace qsurrogate
