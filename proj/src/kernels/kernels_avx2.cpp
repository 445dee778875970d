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

#include <immintrin.h>

#include <bit>

#include "qsurrogate/kernels.hpp"

namespace qsurrogate::kernels {

namespace {

// (a * m) for two packed complex numbers a and a broadcast complex m.
inline __m256d cmul(__m256d a, __m256d m_re, __m256d m_im) {
    __m256d swapped = _mm256_permute_pd(a, 0b0101);
    return _mm256_addsub_pd(_mm256_mul_pd(a, m_re), _mm256_mul_pd(swapped, m_im));
}

void apply_1q_avx2(complex *amps, std::size_t dim, std::uint32_t q, const complex *m) {
    const std::size_t bit = std::size_t{1} << q;
    if (bit < 2) {
        scalar_table().apply_1q(amps, dim, q, m);
        return;
    }
    __m256d mr[4];
    __m256d mi[4];
    for (int k = 0; k < 4; k++) {
        mr[k] = _mm256_set1_pd(m[k].real());
        mi[k] = _mm256_set1_pd(m[k].imag());
    }
    auto *raw = reinterpret_cast<double *>(amps);
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; off += 2) {
            double *p0 = raw + 2 * (base + off);
            double *p1 = raw + 2 * (base + off + bit);
            __m256d a0 = _mm256_loadu_pd(p0);
            __m256d a1 = _mm256_loadu_pd(p1);
            __m256d n0 = _mm256_add_pd(cmul(a0, mr[0], mi[0]), cmul(a1, mr[1], mi[1]));
            __m256d n1 = _mm256_add_pd(cmul(a0, mr[2], mi[2]), cmul(a1, mr[3], mi[3]));
            _mm256_storeu_pd(p0, n0);
            _mm256_storeu_pd(p1, n1);
        }
    }
}

complex zx_expectation_avx2(const complex *amps, std::size_t dim, std::uint64_t z, std::uint64_t x) {
    if (dim < 2) {
        return scalar_table().zx_expectation(amps, dim, z, x);
    }
    const auto *raw = reinterpret_cast<const double *>(amps);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const bool flip_pair = (x & 1u) != 0;
    const bool z0 = (z & 1u) != 0;
    for (std::size_t j = 0; j < dim; j += 2) {
        __m256d a = _mm256_loadu_pd(raw + 2 * j);
        std::size_t partner = (j ^ x) & ~std::size_t{1};
        __m256d b = _mm256_loadu_pd(raw + 2 * partner);
        if (flip_pair) {
            b = _mm256_permute2f128_pd(b, b, 0x01);
        }
        double s0 = (std::popcount(z & j) & 1) ? -1.0 : 1.0;
        double s1 = z0 ? -s0 : s0;
        __m256d sign = _mm256_setr_pd(s0, s0, s1, s1);
        b = _mm256_mul_pd(b, sign);
        // conj(a) b = (ar br + ai bi) + i (ar bi - ai br)
        acc_re = _mm256_fmadd_pd(a, b, acc_re);
        __m256d bswap = _mm256_permute_pd(b, 0b0101);
        acc_im = _mm256_fmadd_pd(a, bswap, acc_im);
    }
    alignas(32) double re[4];
    alignas(32) double im[4];
    _mm256_store_pd(re, acc_re);
    _mm256_store_pd(im, acc_im);
    return {(re[0] + re[1]) + (re[2] + re[3]), (im[0] - im[1]) + (im[2] - im[3])};
}

double dot_avx2(const double *a, const double *b, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
    for (; i < len; i++) {
        total += a[i] * b[i];
    }
    return total;
}

}  // namespace

const KernelTable *avx2_table() {
    static const KernelTable table{apply_1q_avx2, zx_expectation_avx2, dot_avx2};
    return &table;
}

}  // namespace qsurrogate::kernels
