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

#include "qsurrogate/error.hpp"

namespace qsurrogate {

const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Dimension:
            return "dimension";
        case ErrorKind::GateSet:
            return "gate-set";
        case ErrorKind::Validation:
            return "validation";
        case ErrorKind::Binding:
            return "binding";
        case ErrorKind::Capacity:
            return "capacity";
        case ErrorKind::Domain:
            return "domain";
        case ErrorKind::Resource:
            return "resource";
        case ErrorKind::Classification:
            return "classification";
        case ErrorKind::Basis:
            return "basis";
        case ErrorKind::Routing:
            return "routing";
        case ErrorKind::Numeric:
            return "numeric";
        case ErrorKind::Configuration:
            return "configuration";
        case ErrorKind::Io:
            return "io";
        case ErrorKind::UnsupportedDegree:
            return "unsupported-degree";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(error_kind_name(kind)) + " error: " + message), kind_(kind) {
}

void fail(ErrorKind kind, const std::string &message) {
    throw Error(kind, message);
}

}  // namespace qsurrogate
