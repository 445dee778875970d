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

#include "qsurrogate/majorana.hpp"

#include "qsurrogate/error.hpp"

namespace qsurrogate {

PauliString majorana_string(std::uint32_t n_modes, std::uint32_t index) {
    if (index >= 2 * n_modes) {
        fail(ErrorKind::Dimension, "majorana index " + std::to_string(index) + " out of range");
    }
    std::uint32_t j = index / 2;
    PauliString p = PauliString::identity(n_modes);
    p.z = qubit_mask(j);
    p.x = std::uint64_t{1} << j;
    if (index % 2 == 1) {
        p.z |= std::uint64_t{1} << j;
    }
    return p;
}

PauliString monomial_string(std::uint32_t n_modes, const std::vector<std::uint32_t> &indices) {
    PauliString acc = PauliString::identity(n_modes);
    for (auto idx : indices) {
        acc = pauli_mul(acc, majorana_string(n_modes, idx));
    }
    return acc;
}

MajoranaMonomial majorana_decompose(const PauliString &p) {
    std::vector<bool> occupied(2 * static_cast<std::size_t>(p.n), false);
    bool parity_above = false;
    for (std::uint32_t jj = p.n; jj-- > 0;) {
        bool xb = (p.x >> jj) & 1u;
        bool zb = (p.z >> jj) & 1u;
        bool odd = zb != parity_above;
        occupied[2 * jj + 1] = odd;
        occupied[2 * jj] = xb != odd;
        parity_above = parity_above != xb;
    }
    MajoranaMonomial m;
    for (std::uint32_t k = 0; k < occupied.size(); k++) {
        if (occupied[k]) {
            m.indices.push_back(k);
        }
    }
    PauliString prod = monomial_string(p.n, m.indices);
    if (prod.z != p.z || prod.x != p.x) {
        fail(ErrorKind::Numeric, "jordan-wigner decomposition mismatch for " + p.str());
    }
    PauliString rel = PauliString::identity(p.n);
    rel.phase = static_cast<std::uint8_t>((p.phase - prod.phase + 4) & 3);
    m.prefactor = rel.phase_value();
    return m;
}

}  // namespace qsurrogate
