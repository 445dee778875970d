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

#include <cstdint>
#include <vector>

#include "qsurrogate/pauli.hpp"

namespace qsurrogate {

/// prefactor * gamma_{i_1} gamma_{i_2} ... gamma_{i_k} with strictly increasing indices.
///
/// Jordan-Wigner convention (0-based): gamma_{2j} = Z_0..Z_{j-1} X_j and
/// gamma_{2j+1} = Z_0..Z_{j-1} Y_j.
struct MajoranaMonomial {
    std::vector<std::uint32_t> indices;
    complex prefactor = 1.0;

    std::size_t degree() const {
        return indices.size();
    }
};

PauliString majorana_string(std::uint32_t n_modes, std::uint32_t index);

/// The product gamma_{i_1}...gamma_{i_k} as a (possibly non-Hermitian) Pauli string.
PauliString monomial_string(std::uint32_t n_modes, const std::vector<std::uint32_t> &indices);

/// Every Pauli string is, up to a unit prefactor, exactly one Majorana monomial.
MajoranaMonomial majorana_decompose(const PauliString &p);

}  // namespace qsurrogate
