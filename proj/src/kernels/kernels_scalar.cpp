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

#include <bit>

#include "qsurrogate/kernels.hpp"

namespace qsurrogate::kernels {

namespace {

void apply_1q_scalar(complex *amps, std::size_t dim, std::uint32_t q, const complex *m) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; off++) {
            std::size_t i0 = base + off;
            std::size_t i1 = i0 + bit;
            complex a0 = amps[i0];
            complex a1 = amps[i1];
            amps[i0] = m[0] * a0 + m[1] * a1;
            amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }
}

complex zx_expectation_scalar(const complex *amps, std::size_t dim, std::uint64_t z, std::uint64_t x) {
    double re = 0;
    double im = 0;
    for (std::size_t j = 0; j < dim; j++) {
        complex v = std::conj(amps[j]) * amps[j ^ x];
        if (std::popcount(z & j) & 1) {
            v = -v;
        }
        re += v.real();
        im += v.imag();
    }
    return {re, im};
}

double dot_scalar(const double *a, const double *b, std::size_t len) {
    // Four interleaved partial sums, matching the lane layout of the vector path.
    double acc[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        for (int k = 0; k < 4; k++) {
            acc[k] += a[i + k] * b[i + k];
        }
    }
    double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
    for (; i < len; i++) {
        total += a[i] * b[i];
    }
    return total;
}

}  // namespace

const KernelTable &scalar_table() {
    static const KernelTable table{apply_1q_scalar, zx_expectation_scalar, dot_scalar};
    return table;
}

}  // namespace qsurrogate::kernels
