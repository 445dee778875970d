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

#include <filesystem>
#include <string>

#include "qsurrogate/circuit.hpp"

namespace qsurrogate {

/// JSON layout:
///   {"n", "architecture", "layers": [{"kind", "gates": [{"tag", "qubits", "slot"|"angle"}]}],
///    "observable": [{"coeff", "pauli"}], "initial_state": "zero" | {"amplitudes": [[re, im], ...]}}
/// Serialization is canonical: parsing then re-serializing is byte-identical.
std::string circuit_to_json(const CircuitIR &c);
CircuitIR circuit_from_json(const std::string &text);

CircuitIR load_circuit(const std::filesystem::path &path);
void save_circuit(const CircuitIR &c, const std::filesystem::path &path);

}  // namespace qsurrogate
