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

#include "doctest.h"
#include "qsurrogate/circuit.hpp"
#include "qsurrogate/circuit_io.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/random_circuits.hpp"

using namespace qsurrogate;

namespace {

CircuitIR make(std::uint32_t n, Architecture arch, std::vector<Block> layers, const char *obs) {
    CircuitIR c;
    c.n = n;
    c.architecture = arch;
    c.layers = std::move(layers);
    c.observable = WeightedPauliSum::parse(n, {{1.0, obs}});
    return c;
}

Block trainable(std::vector<Gate> g) {
    return {BlockKind::Trainable, std::move(g)};
}
Block encoding(std::vector<Gate> g) {
    return {BlockKind::Encoding, std::move(g)};
}

}  // namespace

TEST_CASE("validate reports structural violations") {
    auto ok = make(2, Architecture::Flipped,
                   {trainable({Gate::rotation(GateTag::RX, 0, 0)}), encoding({Gate::encoding(GateTag::EncRZ, 0, 1)})},
                   "ZI");
    CHECK(validate(ok).ok());

    auto swapped = ok;
    std::swap(swapped.layers[0], swapped.layers[1]);
    auto d = validate(swapped);
    REQUIRE(!d.ok());
    CHECK(d.violations[0].find("architecture") != std::string::npos);

    auto range = ok;
    range.layers[0].gates.push_back(Gate::fixed(GateTag::H, 2));
    d = validate(range);
    REQUIRE(!d.ok());
    CHECK(d.violations[0].find("range") != std::string::npos);

    auto dup = ok;
    dup.layers[0].gates.push_back(Gate::rotation(GateTag::RZ, 0, 1));
    CHECK(!validate(dup).ok());
    CHECK_THROWS_AS(require_valid(dup), Error);

    auto misplaced = ok;
    misplaced.layers[0].gates.push_back(Gate::encoding(GateTag::EncRZ, 0, 1));
    CHECK(!validate(misplaced).ok());
}

TEST_CASE("profile counts") {
    std::vector<Gate> cnots;
    for (int layer = 0; layer < 3; layer++) {
        cnots.push_back(Gate::fixed(GateTag::CNOT, 0, 1));
        cnots.push_back(Gate::fixed(GateTag::CNOT, 2, 3));
    }
    auto c = make(4, Architecture::Alternating, {trainable(cnots)}, "ZIII");
    auto p = profile(c);
    CHECK(p.total_t_count() == 0);
    CHECK(p.depth_trainable == 3);

    std::vector<Gate> ts;
    for (int k = 0; k < 5; k++) {
        ts.push_back(Gate::fixed(GateTag::T, k % 2));
    }
    CHECK(profile(make(2, Architecture::Alternating, {trainable(ts)}, "ZI")).t_count_trainable == 5);

    auto givens = make(3, Architecture::Alternating,
                       {trainable({Gate::rotation(GateTag::Givens, 0, 0, 1), Gate::rotation(GateTag::Givens, 1, 1, 2)})},
                       "ZII");
    CHECK(profile(givens).is_matchgate);

    // A CNOT across three sites costs SWAP-routing depth.
    auto far = make(4, Architecture::Alternating, {trainable({Gate::fixed(GateTag::CNOT, 0, 3)})}, "ZIII");
    CHECK(profile(far).depth_trainable > 1);
}

TEST_CASE("classifier rule table") {
    ClassifierConfig cfg;
    CHECK(cfg.depth_budget(8) == 6);
    CHECK(cfg.t_budget(8) == 6);
    CHECK(cfg.depth_budget(1) >= 1);

    SUBCASE("shallow alternating -> observation 1") {
        std::vector<Gate> enc;
        for (std::uint32_t q = 0; q < 8; q++) {
            enc.push_back(Gate::encoding(GateTag::EncRZ, q, q));
        }
        std::vector<Gate> tr;
        for (std::uint32_t q = 0; q < 8; q++) {
            tr.push_back(Gate::rotation(GateTag::RX, q, q));
        }
        for (std::uint32_t q = 0; q + 1 < 8; q += 2) {
            tr.push_back(Gate::fixed(GateTag::CZ, q, q + 1));
        }
        auto c = make(8, Architecture::Alternating, {encoding(enc), trainable(tr)}, "ZIIIIIII");
        CHECK(profile(c).total_depth() == 3);
        auto label = classify(c, cfg);
        CHECK(label.label == ClassTag::Class1);
        CHECK(label.justification == Rule::Observation1);
        CHECK(label.recommended_engine == Engine::Mps);
    }
    SUBCASE("flipped with Clifford encoding -> observation 3") {
        std::vector<Gate> tr;
        int slot = 0;
        for (int layer = 0; layer < 12; layer++) {
            for (std::uint32_t q = 0; q < 4; q++) {
                tr.push_back(Gate::rotation(GateTag::RX, slot++, q));
            }
            tr.push_back(Gate::fixed(GateTag::CNOT, layer % 2, layer % 2 + 1));
        }
        std::vector<Gate> enc{Gate::fixed(GateTag::H, 0), Gate::encoding(GateTag::EncRZ, 0, 0),
                              Gate::fixed(GateTag::CNOT, 0, 1)};
        auto c = make(4, Architecture::Flipped, {trainable(tr), encoding(enc)}, "ZIII");
        auto label = classify(c, cfg);
        CHECK(label.label == ClassTag::Class2);
        CHECK(label.justification == Rule::Observation3);
        CHECK(label.recommended_engine == Engine::PauliBackprop);
    }
    SUBCASE("deep doped alternating -> fallback") {
        Rng rng(3);
        std::vector<Block> layers;
        int slot = 0;
        for (int b = 0; b < 6; b++) {
            std::vector<Gate> g;
            for (std::uint32_t q = 0; q < 4; q++) {
                g.push_back(Gate::fixed(GateTag::H, q));
                g.push_back(b % 2 == 0 ? Gate::encoding(GateTag::EncRZ, q, q) : Gate::rotation(GateTag::RX, slot++, q));
                g.push_back(Gate::fixed(GateTag::T, q));
            }
            for (std::uint32_t q = 0; q + 1 < 4; q++) {
                g.push_back(Gate::fixed(GateTag::CNOT, q, q + 1));
            }
            layers.push_back(b % 2 == 0 ? encoding(g) : trainable(g));
        }
        auto c = make(4, Architecture::Alternating, layers, "ZIII");
        auto label = classify(c, cfg);
        CHECK(label.label == ClassTag::Class3);
        CHECK(label.justification == Rule::Fallback);
        CHECK(label.recommended_engine == Engine::None);
    }
}

TEST_CASE("adding T gates never promotes to observation 2") {
    ClassifierConfig cfg;
    Rng rng(17);
    for (int trial = 0; trial < 20; trial++) {
        auto c = random_doped_clifford(4, 6, 40, rng);
        auto before = classify(c, cfg);
        c.layers[1].gates.push_back(Gate::fixed(GateTag::T, 0));
        auto after = classify(c, cfg);
        if (before.justification != Rule::Observation2) {
            CHECK(after.justification != Rule::Observation2);
        }
        CHECK(profile(c).t_count_trainable >= 7);
    }
}

TEST_CASE("circuit json round trip is byte stable") {
    Rng rng(2);
    for (int trial = 0; trial < 10; trial++) {
        CircuitIR c = (trial % 2) ? random_flipped(3, 2, 1, rng) : random_matchgate(3, 4, 3, true, rng);
        std::string text = circuit_to_json(c);
        CircuitIR back = circuit_from_json(text);
        CHECK(circuit_to_json(back) == text);
        CHECK(back.layers == c.layers);
    }
    CHECK_THROWS_AS(circuit_from_json("{\"n\": 1}"), Error);
}

TEST_CASE("random generators respect their contracts") {
    Rng rng(8);
    ClassifierConfig cfg;
    for (std::uint32_t n : {4u, 6u, 8u}) {
        auto c = random_brickwork(n, n, cfg.depth_budget(n), rng);
        CHECK(validate(c).ok());
        CHECK(profile(c).total_depth() <= cfg.depth_budget(n));
        CHECK(classify(c, cfg).justification == Rule::Observation1);
    }
    for (std::uint32_t t = 0; t <= 6; t++) {
        auto c = random_doped_clifford(5, t, 30, rng);
        CHECK(profile(c).total_t_count() == t);
    }
    auto m = random_matchgate(4, 6, 3, false, rng);
    CHECK(profile(m).is_matchgate);
    CHECK(profile(m).observable_majorana_degree == 2);
}
