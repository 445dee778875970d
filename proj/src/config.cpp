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

#include "qsurrogate/config.hpp"

#include <cmath>
#include <sstream>

#include "qsurrogate/error.hpp"
#include "qsurrogate/io_util.hpp"

namespace qsurrogate {
namespace {

std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

/// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string &line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

double to_number(const std::string &text, const std::string &where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        fail(ErrorKind::Configuration, where + ": cannot parse '" + text + "' as a value");
    }
    return v;
}

ConfigValue parse_value(const std::string &raw, const std::string &where) {
    const std::string v = trim(raw);
    if (v.empty()) {
        fail(ErrorKind::Configuration, where + ": missing value");
    }
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') {
            fail(ErrorKind::Configuration, where + ": unterminated string");
        }
        return v.substr(1, v.size() - 2);
    }
    if (v == "true" || v == "false") {
        return v == "true";
    }
    if (v.front() == '[') {
        if (v.back() != ']') {
            fail(ErrorKind::Configuration, where + ": unterminated list");
        }
        std::vector<double> out;
        std::stringstream ss(v.substr(1, v.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) {
                out.push_back(to_number(item, where));
            }
        }
        return out;
    }
    return to_number(v, where);
}

std::string render(const ConfigValue &v) {
    struct Visitor {
        std::string operator()(double d) const {
            return format_double(d);
        }
        std::string operator()(const std::string &s) const {
            return "\"" + s + "\"";
        }
        std::string operator()(bool b) const {
            return b ? "true" : "false";
        }
        std::string operator()(const std::vector<double> &xs) const {
            std::string out = "[";
            for (std::size_t i = 0; i < xs.size(); ++i) {
                out += (i ? ", " : "") + format_double(xs[i]);
            }
            return out + "]";
        }
    };
    return std::visit(Visitor{}, v);
}

}  // namespace

ConfigTable ConfigTable::parse(const std::string &text, const std::string &origin) {
    ConfigTable t;
    t.origin_ = origin;
    std::stringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        line = trim(strip_comment(line));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                fail(ErrorKind::Configuration, where + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::Configuration, where + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            fail(ErrorKind::Configuration, where + ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (t.values_.count(full)) {
            fail(ErrorKind::Configuration, where + ": duplicate key '" + full + "'");
        }
        t.values_[full] = parse_value(line.substr(eq + 1), where);
    }
    return t;
}

ConfigTable ConfigTable::load(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) {
        fail(ErrorKind::Configuration, "config file not found: " + path.string());
    }
    ConfigTable t = parse(read_text_file(path), path.string());
    t.base_dir_ = path.parent_path();
    return t;
}

double ConfigTable::number(const std::string &key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto *d = std::get_if<double>(&it->second)) {
        return *d;
    }
    fail(ErrorKind::Configuration, origin_ + ": '" + key + "' must be a number");
}

std::int64_t ConfigTable::integer(const std::string &key, std::int64_t fallback) const {
    if (!has(key)) {
        return fallback;
    }
    const double d = number(key, 0.0);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) {
        fail(ErrorKind::Configuration, origin_ + ": '" + key + "' must be an integer");
    }
    return static_cast<std::int64_t>(d);
}

std::string ConfigTable::string(const std::string &key, const std::string &fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto *s = std::get_if<std::string>(&it->second)) {
        return *s;
    }
    fail(ErrorKind::Configuration, origin_ + ": '" + key + "' must be a string");
}

bool ConfigTable::boolean(const std::string &key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto *b = std::get_if<bool>(&it->second)) {
        return *b;
    }
    fail(ErrorKind::Configuration, origin_ + ": '" + key + "' must be true or false");
}

std::vector<double> ConfigTable::numbers(const std::string &key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        return {};
    }
    if (const auto *v = std::get_if<std::vector<double>>(&it->second)) {
        return *v;
    }
    fail(ErrorKind::Configuration, origin_ + ": '" + key + "' must be a list of numbers");
}

std::string ConfigTable::canonical_text() const {
    std::string out;
    for (const auto &[k, v] : values_) {
        out += k + " = " + render(v) + "\n";
    }
    return out;
}

void ConfigTable::require_known(const std::vector<std::string> &allowed) const {
    for (const auto &[k, v] : values_) {
        bool ok = false;
        for (const auto &a : allowed) {
            ok = ok || a == k;
        }
        if (!ok) {
            fail(ErrorKind::Configuration, origin_ + ": unknown key '" + k + "'");
        }
    }
}

}  // namespace qsurrogate
