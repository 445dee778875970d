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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsurrogate/circuit.hpp"

namespace qsurrogate {

/// Per-leg function basis of a surrogate.
///   Trig3: one leg per encoding gate, digit 0 -> 1, 1 -> cos(pi x), 2 -> sin(pi x).
///   FourierBinary: one bit per input coordinate, T_alpha(x) = (-1)^{alpha . x}.
///   MajoranaQuadratic: pair functions of the encoding block's mode rotation (see MajoranaQuadratic).
enum class BasisKind { Trig3, FourierBinary, MajoranaQuadratic };

std::string_view basis_name(BasisKind b);
BasisKind parse_basis(std::string_view name);

/// Multi-index. FourierBinary uses it as a 128-bit input mask; Trig3 packs
/// two bits per leg (leg l in word l / 32), so at most 64 legs.
using SpectralIndex = std::array<std::uint64_t, 2>;

constexpr std::uint32_t kMaxTrigLegs = 64;

std::uint32_t trig_digit(const SpectralIndex &alpha, std::uint32_t leg);
void set_trig_digit(SpectralIndex &alpha, std::uint32_t leg, std::uint32_t digit);
std::string spectral_hex(const SpectralIndex &alpha);

/// Value of one basis element. leg_inputs maps trig legs to input coordinates.
double basis_value(BasisKind basis, const SpectralIndex &alpha, std::span<const double> x,
                   std::span<const int> leg_inputs);

/// A bound coefficient C_k shared by a group of sparse terms, with an optional
/// standard error when it came from measured estimates.
struct CoefficientGroup {
    std::string label;
    double value = 1.0;
    double std_error = 0.0;
};

struct SparseTerm {
    SpectralIndex alpha{0, 0};
    double weight = 0.0;
    std::uint32_t group = 0;
};

/// f(x) = sum_terms groups[group].value * weight * T_alpha(x).
/// (alpha, group) pairs are unique; terms are sorted by (group, alpha).
struct SparseRepresentation {
    std::vector<CoefficientGroup> groups;
    std::vector<SparseTerm> terms;
    std::vector<int> leg_inputs;
};

/// Core of a tensor train: shape (left, 3, right), row-major.
struct TrainCore {
    std::size_t left = 1;
    std::size_t right = 1;
    std::vector<double> data;

    double at(std::size_t l, std::size_t p, std::size_t r) const {
        return data[(l * 3 + p) * right + r];
    }
    double &at(std::size_t l, std::size_t p, std::size_t r) {
        return data[(l * 3 + p) * right + r];
    }
};

/// f(x) = scale * prod_legs core_l[basis(x_{leg_inputs[l]})]. With no legs f is the constant scale.
struct TensorTrain {
    std::vector<TrainCore> cores;
    std::vector<int> leg_inputs;
    double scale = 1.0;
    /// Sup-norm bound on |f - f_exact| accumulated by truncations.
    double evaluation_bound = 0.0;

    std::vector<std::size_t> bond_dims() const;
    std::size_t max_bond() const;
};

/// f(x) = constant + sum_pairs value_pq * h_pq(x), with
/// h_pq(x) = sum_terms w (R_ap R_bq - R_aq R_bp) and R = R(x) the mode rotation of
/// the encoding gates. value_pq is the covariance entry i <gamma_p gamma_q>.
struct MajoranaQuadratic {
    struct Term {
        std::uint32_t a = 0;
        std::uint32_t b = 0;
        double weight = 0.0;
    };
    struct Pair {
        std::uint32_t p = 0;
        std::uint32_t q = 0;
        double value = 0.0;
        double std_error = 0.0;
    };
    std::uint32_t n_modes = 0;
    std::vector<Gate> encoding;
    std::vector<Term> observable;
    double constant = 0.0;
    std::vector<Pair> pairs;
};

class FunctionSurrogate {
   public:
    using Representation = std::variant<SparseRepresentation, TensorTrain, MajoranaQuadratic>;

    FunctionSurrogate(BasisKind basis, std::uint32_t n_inputs, Representation rep);

    BasisKind basis() const {
        return basis_;
    }
    std::uint32_t n_inputs() const {
        return n_inputs_;
    }
    const Representation &representation() const {
        return rep_;
    }
    std::string_view representation_name() const;

    double evaluate(std::span<const double> x) const;
    /// Worst-case |f_reported - f_true| at x: coverage * sum_k |h_k(x)| se_k for
    /// estimated coefficients, plus any truncation bound.
    double error_bound(std::span<const double> x, double coverage = 3.0) const;

    /// Sparse terms, Majorana pairs, or sum of core sizes.
    std::size_t term_count() const;
    std::vector<std::size_t> bond_dims() const;

   private:
    void check_input(std::span<const double> x) const;

    BasisKind basis_;
    std::uint32_t n_inputs_;
    Representation rep_;
};

/// Sorts by (group, alpha), merges duplicates and drops exact zeros.
void normalize_sparse(SparseRepresentation &rep);

/// Serialization: <stem>.json header plus <stem>.bin with row-major float64 core data
/// (tensor trains only; other kinds keep everything in the header).
std::string surrogate_header_json(const FunctionSurrogate &s);
void save_surrogate(const FunctionSurrogate &s, const std::filesystem::path &json_path);
FunctionSurrogate load_surrogate(const std::filesystem::path &json_path);

}  // namespace qsurrogate
