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
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qsurrogate {

/// A value from the key-value config: number, string, boolean or list of numbers.
using ConfigValue = std::variant<double, std::string, bool, std::vector<double>>;

/// Flat view of a TOML-like file: "[section]" headers and "key = value" lines,
/// '#' comments. Keys are stored as "section.key".
class ConfigTable {
   public:
    static ConfigTable parse(const std::string &text, const std::string &origin = "<config>");
    static ConfigTable load(const std::filesystem::path &path);

    bool has(const std::string &key) const {
        return values_.count(key) != 0;
    }
    double number(const std::string &key, double fallback) const;
    std::int64_t integer(const std::string &key, std::int64_t fallback) const;
    std::string string(const std::string &key, const std::string &fallback) const;
    bool boolean(const std::string &key, bool fallback) const;
    std::vector<double> numbers(const std::string &key) const;

    void set(const std::string &key, ConfigValue v) {
        values_[key] = std::move(v);
    }
    /// Keys sorted, one "key = value" per line, numbers in round-trip form.
    std::string canonical_text() const;
    /// Throws a configuration error for keys outside the allowed set.
    void require_known(const std::vector<std::string> &allowed) const;

    const std::map<std::string, ConfigValue> &values() const {
        return values_;
    }
    const std::filesystem::path &base_dir() const {
        return base_dir_;
    }

   private:
    std::map<std::string, ConfigValue> values_;
    std::string origin_;
    std::filesystem::path base_dir_;
};

}  // namespace qsurrogate
