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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "qsurrogate/kernels.hpp"

namespace qsurrogate::kernels {

#if !defined(QSURROGATE_HAVE_AVX2)
const KernelTable *avx2_table() {
    return nullptr;
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(QSURROGATE_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char *env = std::getenv("QSURROGATE_ISA"); env && std::string_view(env) == "scalar") {
        return Isa::Scalar;
    }
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa> &current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) {
    return isa == Isa::Scalar || (avx2_table() != nullptr && cpu_has_avx2());
}

Isa active_isa() {
    return current().load(std::memory_order_relaxed);
}

const KernelTable &table(Isa isa) {
    if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
        return *avx2_table();
    }
    return scalar_table();
}

const KernelTable &active() {
    return table(active_isa());
}

void force_isa(Isa isa) {
    current().store(isa_available(isa) ? isa : Isa::Scalar, std::memory_order_relaxed);
}

}  // namespace qsurrogate::kernels
