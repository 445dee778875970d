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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace qsurrogate {

std::string read_text_file(const std::filesystem::path &path);

/// Writes to a sibling temporary file then renames it over the target.
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

/// FNV-1a 64-bit, rendered as 16 hex digits.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Shortest decimal that round-trips a double.
std::string format_double(double v);

}  // namespace qsurrogate
