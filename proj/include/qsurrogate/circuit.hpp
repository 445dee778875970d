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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsurrogate/pauli.hpp"

namespace qsurrogate {

/// Gate vocabulary. Angle conventions:
///   RZ(a) = exp(-i a Z / 2), RX(a) = exp(-i a X / 2),
///   Givens(a) on (p, q) = exp(-i a (X_p Y_q - Y_p X_q) / 4),
///   EncRZ(x_j) = exp(i pi x_j Z / 2),   EncGivens(x_j) = Givens(pi x_j).
enum class GateTag { H, S, X, Y, Z, T, CNOT, CZ, SWAP, RZ, RX, Givens, EncRZ, EncGivens };

std::string_view gate_tag_name(GateTag tag);
GateTag parse_gate_tag(std::string_view name);
std::uint32_t gate_arity(GateTag tag);
bool is_clifford_tag(GateTag tag);
bool is_encoding_tag(GateTag tag);
bool is_rotation_tag(GateTag tag);

struct Gate {
    GateTag tag = GateTag::H;
    std::array<std::uint32_t, 2> qubits{0, 0};
    /// x index for encoding gates, theta index for trainable rotations, -1 otherwise.
    int slot = -1;
    /// Fixed angle for rotations that are not bound to a slot.
    std::optional<double> angle;

    std::uint32_t arity() const {
        return gate_arity(tag);
    }

    static Gate fixed(GateTag tag, std::uint32_t q0, std::uint32_t q1 = 0);
    static Gate rotation(GateTag tag, int theta_slot, std::uint32_t q0, std::uint32_t q1 = 0);
    static Gate rotation_const(GateTag tag, double angle, std::uint32_t q0, std::uint32_t q1 = 0);
    static Gate encoding(GateTag tag, int x_slot, std::uint32_t q0, std::uint32_t q1 = 0);

    bool operator==(const Gate &other) const = default;
};

/// Resolves the rotation angle of a gate given bound inputs and parameters.
double gate_angle(const Gate &g, std::span<const double> x, std::span<const double> theta);

/// A Pauli rotation exp(-i angle G / 2).
struct PauliRotation {
    PauliString generator;
    double angle = 0.0;
};

/// Every supported gate is either a Clifford or a product of commuting Pauli
/// rotations (up to global phase). Exactly one of the two is returned.
struct GateAction {
    std::optional<CliffordGate> clifford;
    std::vector<PauliRotation> rotations;
};
GateAction gate_action(const Gate &g, std::uint32_t n, std::span<const double> x, std::span<const double> theta);

enum class BlockKind { Encoding, Trainable };
std::string_view block_kind_name(BlockKind k);

struct Block {
    BlockKind kind = BlockKind::Trainable;
    std::vector<Gate> gates;

    bool operator==(const Block &other) const = default;
};

enum class Architecture { Alternating, EncodingFirst, Flipped };
std::string_view architecture_name(Architecture a);
Architecture parse_architecture(std::string_view name);

enum class InputDomain { Binary, Continuous };
std::string_view input_domain_name(InputDomain d);
InputDomain parse_input_domain(std::string_view name);

struct CircuitIR {
    std::uint32_t n = 0;
    Architecture architecture = Architecture::Alternating;
    std::vector<Block> layers;
    WeightedPauliSum observable;
    /// Empty means |0...0>; otherwise a normalized dense vector of length 2^n.
    std::vector<complex> initial_amplitudes;

    bool zero_initial_state() const {
        return initial_amplitudes.empty();
    }
    std::size_t num_theta() const;
    std::size_t num_inputs() const;
    std::size_t num_gates() const;
    /// Index of the single encoding/trainable block of a flipped circuit.
    const Block &flipped_trainable() const;
    const Block &flipped_encoding() const;
};

/// Structural problems found by validate(). Empty means well-formed.
struct Diagnostics {
    std::vector<std::string> violations;
    bool ok() const {
        return violations.empty();
    }
};
Diagnostics validate(const CircuitIR &c);
/// Throws a validation error listing every violation.
void require_valid(const CircuitIR &c);

/// Rewrites non-adjacent two-qubit gates into SWAP chains on a 1-D line.
CircuitIR route_nearest_neighbor(const CircuitIR &c);

/// Depth of a gate list under greedy layering on a 1-D nearest-neighbour line
/// (non-adjacent gates are SWAP-routed first).
std::uint32_t routed_depth(std::uint32_t n, const std::vector<Gate> &gates);

struct ResourceProfile {
    std::uint32_t n = 0;
    std::uint32_t t_count_trainable = 0;
    std::uint32_t t_count_encoding = 0;
    std::uint32_t depth_encoding = 0;
    std::uint32_t depth_trainable = 0;
    std::uint32_t encoding_rz_count = 0;
    std::uint32_t encoding_givens_count = 0;
    bool is_matchgate = false;
    bool encoding_is_matchgate = false;
    /// Largest Majorana degree over observable terms.
    std::uint32_t observable_majorana_degree = 0;
    bool zero_initial_state = true;
    Architecture architecture = Architecture::Alternating;

    std::uint32_t total_depth() const {
        return depth_encoding + depth_trainable;
    }
    std::uint32_t total_t_count() const {
        return t_count_trainable + t_count_encoding;
    }
};

/// Non-Clifford rotation count charged to a gate: T, RZ, RX count 1, Givens 2.
std::uint32_t non_clifford_weight(const Gate &g);
bool is_matchgate(const Gate &g);

ResourceProfile profile(const CircuitIR &c);

struct ClassifierConfig {
    double c_depth = 2.0;
    double c_t = 2.0;
    InputDomain input_domain = InputDomain::Binary;

    std::uint32_t depth_budget(std::uint32_t n) const;
    std::uint32_t t_budget(std::uint32_t n) const;
};

enum class ClassTag { Class1, Class2, Class3 };
enum class Rule { Observation1, Observation2, Observation3, Observation4a, Observation4b, Fallback };
enum class Engine { Mps, PauliBackprop, FreeFermion, None };

std::string_view class_tag_name(ClassTag c);
std::string_view rule_name(Rule r);
std::string_view engine_name(Engine e);
Engine parse_engine(std::string_view name);

struct ClassLabel {
    ClassTag label = ClassTag::Class3;
    Rule justification = Rule::Fallback;
    Engine recommended_engine = Engine::None;
    std::string detail;
};

/// Fixed rule order: Observation 1, 2, 4a, 3, 4b, fallback. First match wins.
ClassLabel classify(const ResourceProfile &p, const ClassifierConfig &cfg);
ClassLabel classify(const CircuitIR &c, const ClassifierConfig &cfg);

/// Whether a given engine can process the circuit at all (used for overrides).
bool engine_admits(Engine e, const ResourceProfile &p, const ClassifierConfig &cfg, std::string *why = nullptr);

}  // namespace qsurrogate
