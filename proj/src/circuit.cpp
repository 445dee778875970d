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

#include "qsurrogate/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "qsurrogate/error.hpp"
#include "qsurrogate/majorana.hpp"

namespace qsurrogate {

namespace {

struct TagInfo {
    GateTag tag;
    std::string_view name;
    std::uint32_t arity;
    bool clifford;
};

constexpr TagInfo kTags[] = {
    {GateTag::H, "H", 1, true},           {GateTag::S, "S", 1, true},
    {GateTag::X, "X", 1, true},           {GateTag::Y, "Y", 1, true},
    {GateTag::Z, "Z", 1, true},           {GateTag::T, "T", 1, false},
    {GateTag::CNOT, "CNOT", 2, true},     {GateTag::CZ, "CZ", 2, true},
    {GateTag::SWAP, "SWAP", 2, true},     {GateTag::RZ, "RZ", 1, false},
    {GateTag::RX, "RX", 1, false},        {GateTag::Givens, "GIVENS", 2, false},
    {GateTag::EncRZ, "ENC_RZ", 1, false}, {GateTag::EncGivens, "ENC_GIVENS", 2, false},
};

const TagInfo &info(GateTag tag) {
    for (const auto &t : kTags) {
        if (t.tag == tag) {
            return t;
        }
    }
    fail(ErrorKind::GateSet, "unknown gate tag");
}

std::string gate_label(const Gate &g) {
    std::ostringstream os;
    os << gate_tag_name(g.tag) << "(" << g.qubits[0];
    if (g.arity() == 2) {
        os << "," << g.qubits[1];
    }
    os << ")";
    return os.str();
}

double bound_value(std::span<const double> values, int slot, const char *what) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= values.size()) {
        fail(ErrorKind::Binding, std::string("unbound ") + what + " slot " + std::to_string(slot));
    }
    return values[static_cast<std::size_t>(slot)];
}

}  // namespace

std::string_view gate_tag_name(GateTag tag) {
    return info(tag).name;
}

GateTag parse_gate_tag(std::string_view name) {
    for (const auto &t : kTags) {
        if (t.name == name) {
            return t.tag;
        }
    }
    fail(ErrorKind::GateSet, "unsupported gate tag '" + std::string(name) + "'");
}

std::uint32_t gate_arity(GateTag tag) {
    return info(tag).arity;
}

bool is_clifford_tag(GateTag tag) {
    return info(tag).clifford;
}

bool is_encoding_tag(GateTag tag) {
    return tag == GateTag::EncRZ || tag == GateTag::EncGivens;
}

bool is_rotation_tag(GateTag tag) {
    return tag == GateTag::RZ || tag == GateTag::RX || tag == GateTag::Givens;
}

Gate Gate::fixed(GateTag tag, std::uint32_t q0, std::uint32_t q1) {
    Gate g;
    g.tag = tag;
    g.qubits = {q0, q1};
    return g;
}

Gate Gate::rotation(GateTag tag, int theta_slot, std::uint32_t q0, std::uint32_t q1) {
    Gate g = fixed(tag, q0, q1);
    g.slot = theta_slot;
    return g;
}

Gate Gate::rotation_const(GateTag tag, double angle, std::uint32_t q0, std::uint32_t q1) {
    Gate g = fixed(tag, q0, q1);
    g.angle = angle;
    return g;
}

Gate Gate::encoding(GateTag tag, int x_slot, std::uint32_t q0, std::uint32_t q1) {
    Gate g = fixed(tag, q0, q1);
    g.slot = x_slot;
    return g;
}

double gate_angle(const Gate &g, std::span<const double> x, std::span<const double> theta) {
    switch (g.tag) {
        case GateTag::T:
            return std::numbers::pi / 4;
        case GateTag::EncRZ:
            return -std::numbers::pi * bound_value(x, g.slot, "input");
        case GateTag::EncGivens:
            return std::numbers::pi * bound_value(x, g.slot, "input");
        case GateTag::RZ:
        case GateTag::RX:
        case GateTag::Givens:
            if (g.angle) {
                return *g.angle;
            }
            return bound_value(theta, g.slot, "parameter");
        default:
            return 0.0;
    }
}

GateAction gate_action(const Gate &g, std::uint32_t n, std::span<const double> x, std::span<const double> theta) {
    GateAction act;
    auto q0 = g.qubits[0];
    auto q1 = g.qubits[1];
    auto cliff = [&](CliffordKind k) {
        act.clifford = CliffordGate{k, q0, q1};
        return act;
    };
    switch (g.tag) {
        case GateTag::H:
            return cliff(CliffordKind::H);
        case GateTag::S:
            return cliff(CliffordKind::S);
        case GateTag::X:
            return cliff(CliffordKind::X);
        case GateTag::Y:
            return cliff(CliffordKind::Y);
        case GateTag::Z:
            return cliff(CliffordKind::Z);
        case GateTag::CNOT:
            return cliff(CliffordKind::CNOT);
        case GateTag::CZ:
            return cliff(CliffordKind::CZ);
        case GateTag::SWAP:
            return cliff(CliffordKind::SWAP);
        case GateTag::T:
        case GateTag::RZ:
        case GateTag::EncRZ:
            act.rotations.push_back({PauliString::single(n, q0, 'Z'), gate_angle(g, x, theta)});
            return act;
        case GateTag::RX:
            act.rotations.push_back({PauliString::single(n, q0, 'X'), gate_angle(g, x, theta)});
            return act;
        case GateTag::Givens:
        case GateTag::EncGivens: {
            double a = gate_angle(g, x, theta);
            PauliString xy = pauli_mul(PauliString::single(n, q0, 'X'), PauliString::single(n, q1, 'Y'));
            PauliString yx = pauli_mul(PauliString::single(n, q0, 'Y'), PauliString::single(n, q1, 'X'));
            act.rotations.push_back({xy, a / 2});
            act.rotations.push_back({yx, -a / 2});
            return act;
        }
    }
    fail(ErrorKind::GateSet, "unsupported gate");
}

std::string_view block_kind_name(BlockKind k) {
    return k == BlockKind::Encoding ? "encoding" : "trainable";
}

std::string_view architecture_name(Architecture a) {
    switch (a) {
        case Architecture::Alternating:
            return "alternating";
        case Architecture::EncodingFirst:
            return "encoding-first";
        case Architecture::Flipped:
            return "flipped";
    }
    return "alternating";
}

Architecture parse_architecture(std::string_view name) {
    if (name == "alternating") {
        return Architecture::Alternating;
    }
    if (name == "encoding-first") {
        return Architecture::EncodingFirst;
    }
    if (name == "flipped") {
        return Architecture::Flipped;
    }
    fail(ErrorKind::Validation, "unknown architecture '" + std::string(name) + "'");
}

std::string_view input_domain_name(InputDomain d) {
    return d == InputDomain::Binary ? "binary" : "continuous";
}

InputDomain parse_input_domain(std::string_view name) {
    if (name == "binary") {
        return InputDomain::Binary;
    }
    if (name == "continuous") {
        return InputDomain::Continuous;
    }
    fail(ErrorKind::Validation, "unknown input domain '" + std::string(name) + "'");
}

std::size_t CircuitIR::num_theta() const {
    std::size_t count = 0;
    for (const auto &b : layers) {
        for (const auto &g : b.gates) {
            if (is_rotation_tag(g.tag) && !g.angle && g.slot >= 0) {
                count = std::max(count, static_cast<std::size_t>(g.slot) + 1);
            }
        }
    }
    return count;
}

std::size_t CircuitIR::num_inputs() const {
    std::size_t count = 0;
    for (const auto &b : layers) {
        for (const auto &g : b.gates) {
            if (is_encoding_tag(g.tag) && g.slot >= 0) {
                count = std::max(count, static_cast<std::size_t>(g.slot) + 1);
            }
        }
    }
    return count;
}

std::size_t CircuitIR::num_gates() const {
    std::size_t count = 0;
    for (const auto &b : layers) {
        count += b.gates.size();
    }
    return count;
}

const Block &CircuitIR::flipped_trainable() const {
    if (architecture != Architecture::Flipped || layers.size() != 2) {
        fail(ErrorKind::Classification, "circuit is not a flipped architecture");
    }
    return layers[0];
}

const Block &CircuitIR::flipped_encoding() const {
    if (architecture != Architecture::Flipped || layers.size() != 2) {
        fail(ErrorKind::Classification, "circuit is not a flipped architecture");
    }
    return layers[1];
}

Diagnostics validate(const CircuitIR &c) {
    Diagnostics d;
    auto add = [&d](std::string msg) { d.violations.push_back(std::move(msg)); };
    if (c.n == 0 || c.n > PauliString::kMaxQubits) {
        add("qubit count " + std::to_string(c.n) + " outside [1, 64]");
    }
    if (c.layers.empty()) {
        add("architecture violation: circuit has no blocks");
    }
    switch (c.architecture) {
        case Architecture::Flipped:
            if (c.layers.size() != 2 || c.layers[0].kind != BlockKind::Trainable ||
                c.layers[1].kind != BlockKind::Encoding) {
                add("architecture violation: flipped requires one trainable block followed by one encoding block");
            }
            break;
        case Architecture::EncodingFirst:
            if (c.layers.size() != 2 || c.layers[0].kind != BlockKind::Encoding ||
                c.layers[1].kind != BlockKind::Trainable) {
                add("architecture violation: encoding-first requires one encoding block followed by one trainable "
                    "block");
            }
            break;
        case Architecture::Alternating:
            for (std::size_t i = 1; i < c.layers.size(); i++) {
                if (c.layers[i].kind == c.layers[i - 1].kind) {
                    add("architecture violation: blocks " + std::to_string(i - 1) + " and " + std::to_string(i) +
                        " are both " + std::string(block_kind_name(c.layers[i].kind)));
                }
            }
            break;
    }
    std::set<int> theta_slots;
    for (std::size_t bi = 0; bi < c.layers.size(); bi++) {
        const Block &b = c.layers[bi];
        for (std::size_t gi = 0; gi < b.gates.size(); gi++) {
            const Gate &g = b.gates[gi];
            std::string where = "block " + std::to_string(bi) + " gate " + std::to_string(gi) + " " + gate_label(g);
            for (std::uint32_t k = 0; k < g.arity(); k++) {
                if (g.qubits[k] >= c.n) {
                    add("range violation: " + where + " touches qubit " + std::to_string(g.qubits[k]));
                }
            }
            if (g.arity() == 2 && g.qubits[0] == g.qubits[1]) {
                add("range violation: " + where + " repeats a qubit");
            }
            if (is_encoding_tag(g.tag)) {
                if (b.kind != BlockKind::Encoding) {
                    add("block violation: " + where + " is data-dependent inside a trainable block");
                }
                if (g.slot < 0) {
                    add("slot violation: " + where + " has no input slot");
                }
            } else if (is_rotation_tag(g.tag)) {
                if (g.angle && g.slot >= 0) {
                    add("slot violation: " + where + " has both a fixed angle and a slot");
                } else if (!g.angle) {
                    if (g.slot < 0) {
                        add("slot violation: " + where + " has neither a fixed angle nor a slot");
                    } else if (b.kind != BlockKind::Trainable) {
                        add("block violation: " + where + " is trainable inside an encoding block");
                    } else if (!theta_slots.insert(g.slot).second) {
                        add("slot violation: duplicate parameter slot " + std::to_string(g.slot));
                    }
                }
            } else if (g.slot >= 0 || g.angle) {
                add("slot violation: " + where + " is a fixed gate but carries a slot or angle");
            }
        }
    }
    if (c.observable.empty()) {
        add("observable violation: observable has no terms");
    } else if (c.observable.num_qubits() != c.n) {
        add("observable violation: observable acts on " + std::to_string(c.observable.num_qubits()) + " qubits");
    } else if (!c.observable.is_hermitian(1e-12)) {
        add("observable violation: observable is not Hermitian");
    }
    if (!c.initial_amplitudes.empty()) {
        if (c.n > 30 || c.initial_amplitudes.size() != (std::size_t{1} << c.n)) {
            add("initial state violation: dense vector length does not match 2^n");
        } else {
            double norm = 0;
            for (const auto &a : c.initial_amplitudes) {
                norm += std::norm(a);
            }
            if (std::abs(norm - 1) > 1e-10) {
                add("initial state violation: dense vector is not normalized");
            }
        }
    }
    return d;
}

void require_valid(const CircuitIR &c) {
    Diagnostics d = validate(c);
    if (!d.ok()) {
        std::string msg = "malformed circuit:";
        for (const auto &v : d.violations) {
            msg += "\n  " + v;
        }
        fail(ErrorKind::Validation, msg);
    }
}

namespace {

std::vector<Gate> route_gates(const std::vector<Gate> &gates) {
    std::vector<Gate> out;
    for (const Gate &g : gates) {
        if (g.arity() != 2) {
            out.push_back(g);
            continue;
        }
        std::uint32_t lo = std::min(g.qubits[0], g.qubits[1]);
        std::uint32_t hi = std::max(g.qubits[0], g.qubits[1]);
        if (hi - lo <= 1) {
            out.push_back(g);
            continue;
        }
        for (std::uint32_t k = lo; k + 1 < hi; k++) {
            out.push_back(Gate::fixed(GateTag::SWAP, k, k + 1));
        }
        Gate moved = g;
        if (g.qubits[0] == lo) {
            moved.qubits = {hi - 1, hi};
        } else {
            moved.qubits = {hi, hi - 1};
        }
        out.push_back(moved);
        for (std::uint32_t k = hi - 1; k-- > lo;) {
            out.push_back(Gate::fixed(GateTag::SWAP, k, k + 1));
        }
    }
    return out;
}

}  // namespace

CircuitIR route_nearest_neighbor(const CircuitIR &c) {
    CircuitIR out = c;
    for (auto &b : out.layers) {
        b.gates = route_gates(b.gates);
    }
    return out;
}

std::uint32_t routed_depth(std::uint32_t n, const std::vector<Gate> &gates) {
    std::vector<std::uint32_t> level(n, 0);
    std::uint32_t depth = 0;
    for (const Gate &g : route_gates(gates)) {
        std::uint32_t l = level[g.qubits[0]];
        if (g.arity() == 2) {
            l = std::max(l, level[g.qubits[1]]);
        }
        l++;
        level[g.qubits[0]] = l;
        if (g.arity() == 2) {
            level[g.qubits[1]] = l;
        }
        depth = std::max(depth, l);
    }
    return depth;
}

std::uint32_t non_clifford_weight(const Gate &g) {
    switch (g.tag) {
        case GateTag::T:
        case GateTag::RZ:
        case GateTag::RX:
            return 1;
        case GateTag::Givens:
            return 2;
        default:
            return 0;
    }
}

bool is_matchgate(const Gate &g) {
    switch (g.tag) {
        case GateTag::X:
        case GateTag::Y:
        case GateTag::Z:
        case GateTag::S:
        case GateTag::T:
        case GateTag::RZ:
        case GateTag::EncRZ:
            return true;
        case GateTag::Givens:
        case GateTag::EncGivens: {
            auto a = g.qubits[0];
            auto b = g.qubits[1];
            return (a > b ? a - b : b - a) == 1;
        }
        default:
            return false;
    }
}

ResourceProfile profile(const CircuitIR &c) {
    require_valid(c);
    ResourceProfile p;
    p.n = c.n;
    p.architecture = c.architecture;
    p.zero_initial_state = c.zero_initial_state();
    p.is_matchgate = true;
    p.encoding_is_matchgate = true;
    for (const Block &b : c.layers) {
        std::uint32_t depth = routed_depth(c.n, b.gates);
        std::uint32_t t = 0;
        bool matchgate = true;
        for (const Gate &g : b.gates) {
            t += non_clifford_weight(g);
            matchgate = matchgate && is_matchgate(g);
            if (g.tag == GateTag::EncRZ) {
                p.encoding_rz_count++;
            }
            if (g.tag == GateTag::EncGivens) {
                p.encoding_givens_count++;
            }
        }
        p.is_matchgate = p.is_matchgate && matchgate;
        if (b.kind == BlockKind::Encoding) {
            p.depth_encoding += depth;
            p.t_count_encoding += t;
            p.encoding_is_matchgate = p.encoding_is_matchgate && matchgate;
        } else {
            p.depth_trainable += depth;
            p.t_count_trainable += t;
        }
    }
    for (const auto &term : c.observable.terms()) {
        auto deg = static_cast<std::uint32_t>(majorana_decompose(term.pauli).degree());
        p.observable_majorana_degree = std::max(p.observable_majorana_degree, deg);
    }
    return p;
}

std::uint32_t ClassifierConfig::depth_budget(std::uint32_t n) const {
    return static_cast<std::uint32_t>(std::ceil(c_depth * std::log2(std::max<double>(n, 2.0)) - 1e-12));
}

std::uint32_t ClassifierConfig::t_budget(std::uint32_t n) const {
    return static_cast<std::uint32_t>(std::ceil(c_t * std::log2(std::max<double>(n, 2.0)) - 1e-12));
}

std::string_view class_tag_name(ClassTag c) {
    switch (c) {
        case ClassTag::Class1:
            return "Class1";
        case ClassTag::Class2:
            return "Class2";
        case ClassTag::Class3:
            return "Class3";
    }
    return "Class3";
}

std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::Observation1:
            return "Observation 1";
        case Rule::Observation2:
            return "Observation 2";
        case Rule::Observation3:
            return "Observation 3";
        case Rule::Observation4a:
            return "Observation 4a";
        case Rule::Observation4b:
            return "Observation 4b";
        case Rule::Fallback:
            return "fallback";
    }
    return "fallback";
}

std::string_view engine_name(Engine e) {
    switch (e) {
        case Engine::Mps:
            return "mps";
        case Engine::PauliBackprop:
            return "pauli_backprop";
        case Engine::FreeFermion:
            return "free_fermion";
        case Engine::None:
            return "none";
    }
    return "none";
}

Engine parse_engine(std::string_view name) {
    for (Engine e : {Engine::Mps, Engine::PauliBackprop, Engine::FreeFermion, Engine::None}) {
        if (engine_name(e) == name) {
            return e;
        }
    }
    fail(ErrorKind::Configuration, "unknown engine '" + std::string(name) + "'");
}

namespace {

// Encoding t-count as seen by Pauli back-propagation: continuous encoding
// rotations branch like any other non-Clifford rotation.
std::uint32_t effective_encoding_t(const ResourceProfile &p, const ClassifierConfig &cfg) {
    std::uint32_t t = p.t_count_encoding;
    if (cfg.input_domain == InputDomain::Continuous) {
        t += p.encoding_rz_count;
    }
    return t;
}

bool obs1(const ResourceProfile &p, const ClassifierConfig &cfg, std::string &why) {
    std::uint32_t budget = cfg.depth_budget(p.n);
    if (p.total_depth() > budget) {
        why = "total depth " + std::to_string(p.total_depth()) + " exceeds depth budget " + std::to_string(budget);
        return false;
    }
    if (p.encoding_givens_count > 0) {
        why = "encoding gates are not all diagonal S(x) rotations";
        return false;
    }
    if (!p.zero_initial_state) {
        why = "initial state is not the computational zero state";
        return false;
    }
    why = "total depth " + std::to_string(p.total_depth()) + " <= depth budget " + std::to_string(budget);
    return true;
}

bool obs2(const ResourceProfile &p, const ClassifierConfig &cfg, std::string &why) {
    std::uint32_t budget = cfg.t_budget(p.n);
    if (cfg.input_domain != InputDomain::Binary) {
        why = "continuous inputs make encoding rotations non-Clifford";
        return false;
    }
    if (p.encoding_givens_count > 0) {
        why = "encoding Givens rotations are outside the back-propagation gate set";
        return false;
    }
    if (p.total_t_count() > budget) {
        why = "t-count " + std::to_string(p.total_t_count()) + " exceeds t budget " + std::to_string(budget);
        return false;
    }
    why = "t-count " + std::to_string(p.total_t_count()) + " <= t budget " + std::to_string(budget) +
          " with binary inputs";
    return true;
}

bool obs4a(const ResourceProfile &p, std::string &why) {
    if (!p.is_matchgate) {
        why = "not every gate is a matchgate";
        return false;
    }
    if (p.observable_majorana_degree > 2 || p.observable_majorana_degree % 2 == 1) {
        why = "observable is not quadratic in Majorana operators";
        return false;
    }
    if (!p.zero_initial_state) {
        why = "initial state is not the fermionic vacuum";
        return false;
    }
    why = "all gates are matchgates and the observable has Majorana degree " +
          std::to_string(p.observable_majorana_degree);
    return true;
}

bool obs3(const ResourceProfile &p, const ClassifierConfig &cfg, std::string &why) {
    std::uint32_t budget = cfg.t_budget(p.n);
    if (p.architecture != Architecture::Flipped) {
        why = "architecture is not flipped";
        return false;
    }
    if (p.encoding_givens_count > 0) {
        why = "encoding Givens rotations are outside the back-propagation gate set";
        return false;
    }
    std::uint32_t t = effective_encoding_t(p, cfg);
    if (t > budget) {
        why = "encoding t-count " + std::to_string(t) + " exceeds t budget " + std::to_string(budget);
        return false;
    }
    why = "flipped with encoding t-count " + std::to_string(t) + " <= t budget " + std::to_string(budget);
    return true;
}

bool obs4b(const ResourceProfile &p, std::string &why) {
    if (p.architecture != Architecture::Flipped) {
        why = "architecture is not flipped";
        return false;
    }
    if (!p.encoding_is_matchgate) {
        why = "encoding block is not free-fermionic";
        return false;
    }
    if (p.observable_majorana_degree > 2 || p.observable_majorana_degree % 2 == 1) {
        why = "observable is not quadratic in Majorana operators";
        return false;
    }
    why = "flipped with a free-fermionic encoding block and quadratic observable";
    return true;
}

}  // namespace

ClassLabel classify(const ResourceProfile &p, const ClassifierConfig &cfg) {
    std::string why;
    if (obs1(p, cfg, why)) {
        return {ClassTag::Class1, Rule::Observation1, Engine::Mps, why};
    }
    if (obs2(p, cfg, why)) {
        return {ClassTag::Class1, Rule::Observation2, Engine::PauliBackprop, why};
    }
    if (obs4a(p, why)) {
        return {ClassTag::Class1, Rule::Observation4a, Engine::FreeFermion, why};
    }
    if (obs3(p, cfg, why)) {
        return {ClassTag::Class2, Rule::Observation3, Engine::PauliBackprop, why};
    }
    if (obs4b(p, why)) {
        return {ClassTag::Class2, Rule::Observation4b, Engine::FreeFermion, why};
    }
    return {ClassTag::Class3, Rule::Fallback, Engine::None, "no simulability rule applies"};
}

ClassLabel classify(const CircuitIR &c, const ClassifierConfig &cfg) {
    return classify(profile(c), cfg);
}

bool engine_admits(Engine e, const ResourceProfile &p, const ClassifierConfig &cfg, std::string *why) {
    std::string a;
    std::string b;
    bool ok = false;
    switch (e) {
        case Engine::Mps:
            ok = obs1(p, cfg, a);
            break;
        case Engine::PauliBackprop:
            ok = obs2(p, cfg, a) || obs3(p, cfg, b);
            a += "; " + b;
            break;
        case Engine::FreeFermion:
            ok = obs4a(p, a) || obs4b(p, b);
            a += "; " + b;
            break;
        case Engine::None:
            ok = true;
            break;
    }
    if (why) {
        *why = a;
    }
    return ok;
}

}  // namespace qsurrogate
