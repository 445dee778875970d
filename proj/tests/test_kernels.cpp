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

#include <vector>

#include "doctest.h"
#include "qsurrogate/kernels.hpp"
#include "qsurrogate/random_circuits.hpp"

using namespace qsurrogate;
using kernels::complex;

namespace {

std::vector<complex> random_amps(std::size_t dim, Rng &rng) {
    std::vector<complex> a(dim);
    for (auto &v : a) {
        v = {uniform_real(rng, -1, 1), uniform_real(rng, -1, 1)};
    }
    return a;
}

double max_diff(const std::vector<complex> &a, const std::vector<complex> &b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto *avx = kernels::avx2_table();
    if (!avx || !kernels::isa_available(kernels::Isa::Avx2)) {
        MESSAGE("AVX2 kernels unavailable; only the scalar path is exercised");
        return;
    }
    const auto &ref = kernels::scalar_table();
    Rng rng(99);
    for (std::uint32_t n = 1; n <= 7; n++) {
        const std::size_t dim = std::size_t{1} << n;
        for (std::uint32_t q = 0; q < n; q++) {
            auto a = random_amps(dim, rng);
            auto b = a;
            auto m = random_amps(4, rng);
            ref.apply_1q(a.data(), dim, q, m.data());
            avx->apply_1q(b.data(), dim, q, m.data());
            CHECK(max_diff(a, b) < 1e-14);
        }
        for (int trial = 0; trial < 20; trial++) {
            auto a = random_amps(dim, rng);
            std::uint64_t z = rng() & (dim - 1);
            std::uint64_t x = rng() & (dim - 1);
            auto r = ref.zx_expectation(a.data(), dim, z, x);
            auto v = avx->zx_expectation(a.data(), dim, z, x);
            CHECK(std::abs(r - v) < 1e-12);
        }
    }
    for (std::size_t len : {0u, 1u, 3u, 4u, 7u, 8u, 33u, 1000u}) {
        std::vector<double> a(len);
        std::vector<double> b(len);
        for (std::size_t i = 0; i < len; i++) {
            a[i] = uniform_real(rng, -1, 1);
            b[i] = uniform_real(rng, -1, 1);
        }
        CHECK(std::abs(ref.dot(a.data(), b.data(), len) - avx->dot(a.data(), b.data(), len)) < 1e-12);
    }
}

TEST_CASE("scalar zx expectation on basis states") {
    const auto &ref = kernels::scalar_table();
    std::vector<complex> a(8, 0.0);
    a[5] = 1.0;  // |101>
    CHECK(ref.zx_expectation(a.data(), 8, 0b001, 0) == complex{-1, 0});
    CHECK(ref.zx_expectation(a.data(), 8, 0b010, 0) == complex{1, 0});
    CHECK(ref.zx_expectation(a.data(), 8, 0, 0b001) == complex{0, 0});
}

TEST_CASE("forced isa selection") {
    auto before = kernels::active_isa();
    kernels::force_isa(kernels::Isa::Scalar);
    CHECK(kernels::active_isa() == kernels::Isa::Scalar);
    kernels::force_isa(before);
    CHECK(kernels::active_isa() == before);
}
