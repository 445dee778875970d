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

#include "qsurrogate/circuit_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/io_util.hpp"

namespace qsurrogate {

using ojson = nlohmann::ordered_json;

std::string circuit_to_json(const CircuitIR &c) {
    ojson j;
    j["n"] = c.n;
    j["architecture"] = architecture_name(c.architecture);
    ojson layers = ojson::array();
    for (const Block &b : c.layers) {
        ojson jb;
        jb["kind"] = block_kind_name(b.kind);
        ojson gates = ojson::array();
        for (const Gate &g : b.gates) {
            ojson jg;
            jg["tag"] = gate_tag_name(g.tag);
            ojson qs = ojson::array();
            for (std::uint32_t k = 0; k < g.arity(); k++) {
                qs.push_back(g.qubits[k]);
            }
            jg["qubits"] = qs;
            if (g.slot >= 0) {
                jg["slot"] = g.slot;
            }
            if (g.angle) {
                jg["angle"] = *g.angle;
            }
            gates.push_back(jg);
        }
        jb["gates"] = gates;
        layers.push_back(jb);
    }
    j["layers"] = layers;
    ojson obs = ojson::array();
    for (const auto &t : c.observable.terms()) {
        ojson jt;
        jt["coeff"] = t.coefficient.real();
        jt["pauli"] = t.pauli.letters();
        obs.push_back(jt);
    }
    j["observable"] = obs;
    if (c.zero_initial_state()) {
        j["initial_state"] = "zero";
    } else {
        ojson amps = ojson::array();
        for (const auto &a : c.initial_amplitudes) {
            amps.push_back(ojson::array({a.real(), a.imag()}));
        }
        j["initial_state"] = ojson{{"amplitudes", amps}};
    }
    return j.dump(2) + "\n";
}

CircuitIR circuit_from_json(const std::string &text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception &e) {
        fail(ErrorKind::Validation, std::string("circuit json: ") + e.what());
    }
    try {
        CircuitIR c;
        c.n = j.at("n").get<std::uint32_t>();
        c.architecture = parse_architecture(j.value("architecture", std::string("alternating")));
        for (const auto &jb : j.at("layers")) {
            Block b;
            std::string kind = jb.at("kind").get<std::string>();
            if (kind == "encoding") {
                b.kind = BlockKind::Encoding;
            } else if (kind == "trainable") {
                b.kind = BlockKind::Trainable;
            } else {
                fail(ErrorKind::Validation, "unknown block kind '" + kind + "'");
            }
            for (const auto &jg : jb.at("gates")) {
                Gate g;
                g.tag = parse_gate_tag(jg.at("tag").get<std::string>());
                const auto &qs = jg.at("qubits");
                if (qs.size() != g.arity()) {
                    fail(ErrorKind::Validation, "gate " + std::string(gate_tag_name(g.tag)) + " expects " +
                                                    std::to_string(g.arity()) + " qubits");
                }
                for (std::size_t k = 0; k < qs.size(); k++) {
                    g.qubits[k] = qs[k].get<std::uint32_t>();
                }
                if (jg.contains("slot")) {
                    g.slot = jg.at("slot").get<int>();
                }
                if (jg.contains("angle")) {
                    g.angle = jg.at("angle").get<double>();
                }
                b.gates.push_back(g);
            }
            c.layers.push_back(std::move(b));
        }
        c.observable = WeightedPauliSum(c.n);
        for (const auto &jt : j.at("observable")) {
            PauliString p = PauliString::parse(jt.at("pauli").get<std::string>());
            if (p.n != c.n) {
                fail(ErrorKind::Validation, "observable term width does not match n");
            }
            c.observable.add(jt.value("coeff", 1.0), p);
        }
        const auto &init = j.value("initial_state", ojson("zero"));
        if (init.is_object()) {
            for (const auto &a : init.at("amplitudes")) {
                c.initial_amplitudes.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
            }
        } else if (init.get<std::string>() != "zero") {
            fail(ErrorKind::Validation, "unknown initial_state");
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Validation, std::string("circuit json: ") + e.what());
    }
}

CircuitIR load_circuit(const std::filesystem::path &path) {
    return circuit_from_json(read_text_file(path));
}

void save_circuit(const CircuitIR &c, const std::filesystem::path &path) {
    write_file_atomic(path, circuit_to_json(c));
}

}  // namespace qsurrogate
