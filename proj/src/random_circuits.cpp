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

#include "qsurrogate/random_circuits.hpp"

#include <cmath>
#include <numbers>

#include "qsurrogate/majorana.hpp"

namespace qsurrogate {

double uniform_real(Rng &rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::uint64_t uniform_index(Rng &rng, std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

double standard_normal(Rng &rng) {
    // Box-Muller; consumes exactly two draws.
    double u1 = uniform_real(rng);
    double u2 = uniform_real(rng);
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2 * std::numbers::pi * u2);
}

std::vector<double> random_angles(Rng &rng, std::size_t count) {
    std::vector<double> out(count);
    for (auto &v : out) {
        v = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
    }
    return out;
}

std::vector<double> random_inputs(Rng &rng, std::size_t d, InputDomain domain) {
    std::vector<double> out(d);
    for (auto &v : out) {
        v = domain == InputDomain::Binary ? static_cast<double>(rng() & 1) : uniform_real(rng, -1, 1);
    }
    return out;
}

PauliString random_local_pauli(std::uint32_t n, std::uint32_t max_weight, Rng &rng) {
    PauliString p = PauliString::identity(n);
    std::uint32_t w = 1 + static_cast<std::uint32_t>(uniform_index(rng, std::min(max_weight, n)));
    auto start = static_cast<std::uint32_t>(uniform_index(rng, n - w + 1));
    for (std::uint32_t q = start; q < start + w; q++) {
        auto op = uniform_index(rng, 3);
        if (op != 1) {
            p.z |= std::uint64_t{1} << q;
        }
        if (op != 0) {
            p.x |= std::uint64_t{1} << q;
        }
    }
    return p;
}

PauliString random_quadratic_majorana(std::uint32_t n, Rng &rng) {
    auto a = static_cast<std::uint32_t>(uniform_index(rng, 2 * n));
    std::uint32_t b;
    do {
        b = static_cast<std::uint32_t>(uniform_index(rng, 2 * n));
    } while (b == a);
    PauliString p = monomial_string(n, {std::min(a, b), std::max(a, b)});
    // gamma_a gamma_b is anti-Hermitian; multiplying by i makes it Hermitian.
    p.phase = static_cast<std::uint8_t>((p.phase + 1) & 3);
    return p;
}

namespace {

void set_observable(CircuitIR &c, const PauliString &p) {
    c.observable = WeightedPauliSum(c.n);
    c.observable.add(1.0, p);
}

std::vector<Gate> brick(std::uint32_t n, std::uint32_t parity, GateTag tag) {
    std::vector<Gate> gates;
    for (std::uint32_t q = parity; q + 1 < n; q += 2) {
        gates.push_back(Gate::fixed(tag, q, q + 1));
    }
    return gates;
}

}  // namespace

CircuitIR random_brickwork(std::uint32_t n, std::uint32_t d, std::uint32_t max_depth, Rng &rng) {
    CircuitIR c;
    c.n = n;
    c.architecture = Architecture::Alternating;
    int theta = 0;
    std::uint32_t depth = 0;
    std::uint32_t parity = 0;
    bool encoding_turn = true;
    while (depth < max_depth) {
        const int theta_before = theta;
        Block b;
        b.kind = encoding_turn ? BlockKind::Encoding : BlockKind::Trainable;
        if (encoding_turn) {
            std::uint32_t budget = std::min<std::uint32_t>(max_depth - depth, 2);
            for (std::uint32_t q = 0; q < n; q++) {
                if (budget == 2 && (rng() & 1)) {
                    b.gates.push_back(Gate::fixed(GateTag::H, q));
                }
                b.gates.push_back(Gate::encoding(GateTag::EncRZ, static_cast<int>(q % d), q));
            }
        } else {
            std::uint32_t layers = 1 + static_cast<std::uint32_t>(uniform_index(rng, 2));
            for (std::uint32_t l = 0; l < layers && depth + routed_depth(n, b.gates) < max_depth; l++) {
                std::vector<Gate> next = b.gates;
                if (l % 2 == 0) {
                    for (std::uint32_t q = 0; q < n; q++) {
                        next.push_back(Gate::rotation((rng() & 1) ? GateTag::RX : GateTag::RZ, theta++, q));
                    }
                } else {
                    for (auto &g : brick(n, parity, (rng() & 1) ? GateTag::CZ : GateTag::CNOT)) {
                        next.push_back(g);
                    }
                    parity ^= 1;
                }
                b.gates = std::move(next);
            }
        }
        std::uint32_t bd = routed_depth(n, b.gates);
        if (bd == 0 || depth + bd > max_depth) {
            theta = theta_before;
            break;
        }
        depth += bd;
        c.layers.push_back(std::move(b));
        encoding_turn = !encoding_turn;
    }
    set_observable(c, random_local_pauli(n, 2, rng));
    return c;
}

CircuitIR random_doped_clifford(std::uint32_t n, std::uint32_t t, std::uint32_t clifford_gates, Rng &rng) {
    CircuitIR c;
    c.n = n;
    c.architecture = Architecture::EncodingFirst;
    Block enc{BlockKind::Encoding, {}};
    for (std::uint32_t q = 0; q < n; q++) {
        enc.gates.push_back(Gate::fixed(GateTag::H, q));
        enc.gates.push_back(Gate::encoding(GateTag::EncRZ, static_cast<int>(q), q));
    }
    Block tr{BlockKind::Trainable, {}};
    const std::uint32_t total = clifford_gates + t;
    std::vector<bool> doped(total, false);
    for (std::uint32_t k = 0; k < t; k++) {
        std::uint32_t pos;
        do {
            pos = static_cast<std::uint32_t>(uniform_index(rng, total));
        } while (doped[pos]);
        doped[pos] = true;
    }
    int theta = 0;
    const GateTag one_q[] = {GateTag::H, GateTag::S, GateTag::X, GateTag::Y, GateTag::Z};
    for (std::uint32_t k = 0; k < total; k++) {
        auto q = static_cast<std::uint32_t>(uniform_index(rng, n));
        if (doped[k]) {
            if (rng() & 1) {
                tr.gates.push_back(Gate::fixed(GateTag::T, q));
            } else {
                tr.gates.push_back(Gate::rotation(GateTag::RZ, theta++, q));
            }
        } else if (n > 1 && (rng() % 3 == 0)) {
            auto q2 = static_cast<std::uint32_t>(uniform_index(rng, n - 1));
            if (q2 >= q) {
                q2++;
            }
            tr.gates.push_back(Gate::fixed((rng() & 1) ? GateTag::CNOT : GateTag::CZ, q, q2));
        } else {
            tr.gates.push_back(Gate::fixed(one_q[uniform_index(rng, 5)], q));
        }
    }
    c.layers = {std::move(enc), std::move(tr)};
    set_observable(c, random_local_pauli(n, 2, rng));
    return c;
}

CircuitIR random_flipped(std::uint32_t n, std::uint32_t trainable_layers, std::uint32_t encoding_t, Rng &rng) {
    CircuitIR c;
    c.n = n;
    c.architecture = Architecture::Flipped;
    Block tr{BlockKind::Trainable, {}};
    int theta = 0;
    for (std::uint32_t l = 0; l < trainable_layers; l++) {
        for (std::uint32_t q = 0; q < n; q++) {
            tr.gates.push_back(Gate::rotation(GateTag::RX, theta++, q));
            tr.gates.push_back(Gate::rotation(GateTag::RZ, theta++, q));
        }
        for (auto &g : brick(n, l & 1, GateTag::CNOT)) {
            tr.gates.push_back(g);
        }
    }
    Block enc{BlockKind::Encoding, {}};
    std::uint32_t t_left = encoding_t;
    for (std::uint32_t q = 0; q < n; q++) {
        if (rng() & 1) {
            enc.gates.push_back(Gate::fixed(GateTag::H, q));
        }
        enc.gates.push_back(Gate::encoding(GateTag::EncRZ, static_cast<int>(q), q));
    }
    for (auto &g : brick(n, 0, GateTag::CNOT)) {
        enc.gates.push_back(g);
    }
    for (std::uint32_t q = 0; q < n; q++) {
        if (t_left > 0 && (rng() & 1)) {
            enc.gates.push_back(Gate::fixed(GateTag::T, q));
            t_left--;
        }
        enc.gates.push_back(Gate::fixed(GateTag::H, q));
    }
    while (t_left > 0) {
        enc.gates.push_back(Gate::fixed(GateTag::T, static_cast<std::uint32_t>(uniform_index(rng, n))));
        enc.gates.push_back(Gate::fixed(GateTag::H, static_cast<std::uint32_t>(uniform_index(rng, n))));
        t_left--;
    }
    c.layers = {std::move(tr), std::move(enc)};
    set_observable(c, random_local_pauli(n, 2, rng));
    return c;
}

namespace {

Gate random_matchgate_gate(std::uint32_t n, bool encoding, bool encoding_givens, int &theta, std::uint32_t d,
                           Rng &rng) {
    auto q = static_cast<std::uint32_t>(uniform_index(rng, n));
    auto pick = uniform_index(rng, 4);
    if (n > 1 && pick == 0) {
        std::uint32_t a = static_cast<std::uint32_t>(uniform_index(rng, n - 1));
        if (encoding) {
            if (encoding_givens) {
                return Gate::encoding(GateTag::EncGivens, static_cast<int>(uniform_index(rng, d)), a, a + 1);
            }
            return Gate::rotation_const(GateTag::Givens, uniform_real(rng, -3, 3), a, a + 1);
        }
        return Gate::rotation(GateTag::Givens, theta++, a, a + 1);
    }
    if (pick == 1) {
        const GateTag fixed[] = {GateTag::X, GateTag::Z, GateTag::S, GateTag::T};
        return Gate::fixed(fixed[uniform_index(rng, 4)], q);
    }
    if (n > 1 && pick == 2) {
        std::uint32_t a = static_cast<std::uint32_t>(uniform_index(rng, n - 1));
        return encoding ? Gate::rotation_const(GateTag::Givens, uniform_real(rng, -3, 3), a + 1, a)
                        : Gate::rotation(GateTag::Givens, theta++, a + 1, a);
    }
    if (encoding) {
        return Gate::encoding(GateTag::EncRZ, static_cast<int>(uniform_index(rng, d)), q);
    }
    return Gate::rotation(GateTag::RZ, theta++, q);
}

}  // namespace

CircuitIR random_matchgate(std::uint32_t n, std::uint32_t gates_per_block, std::uint32_t blocks, bool encoding_givens,
                           Rng &rng) {
    CircuitIR c;
    c.n = n;
    c.architecture = Architecture::Alternating;
    int theta = 0;
    for (std::uint32_t b = 0; b < blocks; b++) {
        bool enc = (b % 2 == 0);
        Block blk{enc ? BlockKind::Encoding : BlockKind::Trainable, {}};
        if (b == 0) {
            // Half filling; from the vacuum alone the hopping gates act trivially.
            for (std::uint32_t q = 0; q < n; q += 2) {
                blk.gates.push_back(Gate::fixed(GateTag::X, q));
            }
        }
        for (std::uint32_t k = 0; k < gates_per_block; k++) {
            blk.gates.push_back(random_matchgate_gate(n, enc, encoding_givens, theta, n, rng));
        }
        c.layers.push_back(std::move(blk));
    }
    set_observable(c, random_quadratic_majorana(n, rng));
    return c;
}

CircuitIR random_flipped_matchgate(std::uint32_t n, std::uint32_t trainable_layers, std::uint32_t encoding_gates,
                                   Rng &rng) {
    CircuitIR c = random_flipped(n, trainable_layers, 0, rng);
    Block enc{BlockKind::Encoding, {}};
    int unused = 0;
    for (std::uint32_t k = 0; k < encoding_gates; k++) {
        enc.gates.push_back(random_matchgate_gate(n, true, true, unused, n, rng));
    }
    c.layers[1] = std::move(enc);
    set_observable(c, random_quadratic_majorana(n, rng));
    return c;
}

}  // namespace qsurrogate
