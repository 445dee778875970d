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
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace qsurrogate::kernels {

using complex = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Inner loops shared by the dense oracle and the ERM assembly. Every entry
/// has a scalar reference version; vector versions must agree with it to
/// rounding (see test_kernels).
struct KernelTable {
    /// amps <- (m on qubit q) amps, m row-major 2x2.
    void (*apply_1q)(complex *amps, std::size_t dim, std::uint32_t q, const complex *m);
    /// sum_j conj(amps[j]) (-1)^{popcount(z & j)} amps[j ^ x], i.e. <psi| Z^z X^x |psi>.
    complex (*zx_expectation)(const complex *amps, std::size_t dim, std::uint64_t z, std::uint64_t x);
    double (*dot)(const double *a, const double *b, std::size_t len);
};

const KernelTable &scalar_table();
/// nullptr when the binary was built without AVX2 support.
const KernelTable *avx2_table();

bool isa_available(Isa isa);

/// Chosen once from CPUID; QSURROGATE_ISA=scalar forces the reference path.
Isa active_isa();
const KernelTable &active();
const KernelTable &table(Isa isa);

/// Process-wide override, intended for tests and benchmarks.
void force_isa(Isa isa);

}  // namespace qsurrogate::kernels
