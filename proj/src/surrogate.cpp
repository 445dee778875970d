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

#include "qsurrogate/surrogate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "qsurrogate/error.hpp"
#include "qsurrogate/free_fermion.hpp"
#include "qsurrogate/io_util.hpp"

namespace qsurrogate {

using ojson = nlohmann::ordered_json;

std::string_view basis_name(BasisKind b) {
    switch (b) {
        case BasisKind::Trig3:
            return "trig3";
        case BasisKind::FourierBinary:
            return "fourier-binary";
        case BasisKind::MajoranaQuadratic:
            return "majorana-quadratic";
    }
    return "trig3";
}

BasisKind parse_basis(std::string_view name) {
    for (auto b : {BasisKind::Trig3, BasisKind::FourierBinary, BasisKind::MajoranaQuadratic}) {
        if (basis_name(b) == name) {
            return b;
        }
    }
    fail(ErrorKind::Basis, "unknown basis '" + std::string(name) + "'");
}

std::uint32_t trig_digit(const SpectralIndex &alpha, std::uint32_t leg) {
    return static_cast<std::uint32_t>((alpha[leg / 32] >> (2 * (leg % 32))) & 3u);
}

void set_trig_digit(SpectralIndex &alpha, std::uint32_t leg, std::uint32_t digit) {
    if (leg >= kMaxTrigLegs || digit > 2) {
        fail(ErrorKind::Capacity, "trig leg " + std::to_string(leg) + " digit " + std::to_string(digit));
    }
    auto &word = alpha[leg / 32];
    const unsigned shift = 2 * (leg % 32);
    word = (word & ~(std::uint64_t{3} << shift)) | (std::uint64_t{digit} << shift);
}

std::string spectral_hex(const SpectralIndex &alpha) {
    char buf[40];
    if (alpha[1] == 0) {
        std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(alpha[0]));
    } else {
        std::snprintf(buf, sizeof buf, "%llx%016llx", static_cast<unsigned long long>(alpha[1]),
                      static_cast<unsigned long long>(alpha[0]));
    }
    return buf;
}

namespace {

SpectralIndex parse_spectral_hex(const std::string &text) {
    if (text.empty() || text.size() > 32) {
        fail(ErrorKind::Validation, "bad spectral index '" + text + "'");
    }
    SpectralIndex a{0, 0};
    std::size_t split = text.size() > 16 ? text.size() - 16 : 0;
    try {
        a[0] = std::stoull(text.substr(split), nullptr, 16);
        if (split > 0) {
            a[1] = std::stoull(text.substr(0, split), nullptr, 16);
        }
    } catch (const std::exception &) {
        fail(ErrorKind::Validation, "bad spectral index '" + text + "'");
    }
    return a;
}

double leg_value(std::uint32_t digit, double x) {
    switch (digit) {
        case 0:
            return 1.0;
        case 1:
            return std::cos(std::numbers::pi * x);
        default:
            return std::sin(std::numbers::pi * x);
    }
}

double pair_function(const MajoranaQuadratic &m, const Eigen::MatrixXd &r, std::uint32_t p, std::uint32_t q) {
    double h = 0;
    for (const auto &t : m.observable) {
        h += t.weight * (r(t.a, p) * r(t.b, q) - r(t.a, q) * r(t.b, p));
    }
    return h;
}

}  // namespace

double basis_value(BasisKind basis, const SpectralIndex &alpha, std::span<const double> x,
                   std::span<const int> leg_inputs) {
    if (basis == BasisKind::FourierBinary) {
        int parity = 0;
        for (std::size_t k = 0; k < x.size(); k++) {
            if (x[k] != 0.0 && ((alpha[k / 64] >> (k % 64)) & 1u)) {
                parity ^= 1;
            }
        }
        return parity ? -1.0 : 1.0;
    }
    if (basis != BasisKind::Trig3) {
        fail(ErrorKind::Basis, "basis_value applies to sparse bases only");
    }
    double v = 1.0;
    for (std::uint32_t leg = 0; leg < leg_inputs.size(); leg++) {
        std::uint32_t d = trig_digit(alpha, leg);
        if (d != 0) {
            v *= leg_value(d, x[leg_inputs[leg]]);
        }
    }
    return v;
}

std::vector<std::size_t> TensorTrain::bond_dims() const {
    std::vector<std::size_t> dims;
    for (std::size_t k = 0; k + 1 < cores.size(); k++) {
        dims.push_back(cores[k].right);
    }
    return dims;
}

std::size_t TensorTrain::max_bond() const {
    std::size_t m = 1;
    for (auto d : bond_dims()) {
        m = std::max(m, d);
    }
    return m;
}

FunctionSurrogate::FunctionSurrogate(BasisKind basis, std::uint32_t n_inputs, Representation rep)
    : basis_(basis), n_inputs_(n_inputs), rep_(std::move(rep)) {
    auto check_legs = [&](const std::vector<int> &legs) {
        for (int l : legs) {
            if (l < 0 || static_cast<std::uint32_t>(l) >= n_inputs_) {
                fail(ErrorKind::Validation, "leg bound to input " + std::to_string(l) + " outside the input range");
            }
        }
    };
    if (const auto *s = std::get_if<SparseRepresentation>(&rep_)) {
        if (basis_ == BasisKind::MajoranaQuadratic) {
            fail(ErrorKind::Basis, "sparse terms need a trig3 or fourier-binary basis");
        }
        check_legs(s->leg_inputs);
        for (const auto &t : s->terms) {
            if (t.group >= s->groups.size()) {
                fail(ErrorKind::Validation, "sparse term references a missing coefficient group");
            }
        }
    } else if (const auto *t = std::get_if<TensorTrain>(&rep_)) {
        if (basis_ != BasisKind::Trig3) {
            fail(ErrorKind::Basis, "tensor trains use the trig3 basis");
        }
        check_legs(t->leg_inputs);
        if (t->leg_inputs.size() != t->cores.size()) {
            fail(ErrorKind::Validation, "tensor train needs one input binding per core");
        }
        for (std::size_t k = 0; k < t->cores.size(); k++) {
            const auto &c = t->cores[k];
            std::size_t expect_left = k == 0 ? 1 : t->cores[k - 1].right;
            if (c.left != expect_left || c.data.size() != c.left * 3 * c.right ||
                (k + 1 == t->cores.size() && c.right != 1)) {
                fail(ErrorKind::Validation, "tensor train core " + std::to_string(k) + " has inconsistent shape");
            }
        }
    } else if (basis_ != BasisKind::MajoranaQuadratic) {
        fail(ErrorKind::Basis, "majorana-quadratic representation needs the matching basis");
    }
}

std::string_view FunctionSurrogate::representation_name() const {
    switch (rep_.index()) {
        case 0:
            return "sparse-terms";
        case 1:
            return "tensor-train";
        default:
            return "majorana-quadratic";
    }
}

void FunctionSurrogate::check_input(std::span<const double> x) const {
    if (x.size() != n_inputs_) {
        fail(ErrorKind::Dimension,
             "surrogate expects " + std::to_string(n_inputs_) + " inputs, got " + std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            fail(ErrorKind::Domain, "non-finite input");
        }
        if (basis_ == BasisKind::FourierBinary && v != 0.0 && v != 1.0) {
            fail(ErrorKind::Domain, "fourier-binary surrogate evaluated at non-binary input");
        }
    }
}

double FunctionSurrogate::evaluate(std::span<const double> x) const {
    check_input(x);
    if (const auto *s = std::get_if<SparseRepresentation>(&rep_)) {
        double acc = 0;
        for (const auto &t : s->terms) {
            acc += s->groups[t.group].value * t.weight * basis_value(basis_, t.alpha, x, s->leg_inputs);
        }
        return acc;
    }
    if (const auto *t = std::get_if<TensorTrain>(&rep_)) {
        std::vector<double> v{1.0};
        for (std::size_t k = 0; k < t->cores.size(); k++) {
            const auto &c = t->cores[k];
            double xv = x[t->leg_inputs[k]];
            const double b[3] = {1.0, std::cos(std::numbers::pi * xv), std::sin(std::numbers::pi * xv)};
            std::vector<double> next(c.right, 0.0);
            for (std::size_t l = 0; l < c.left; l++) {
                for (std::size_t p = 0; p < 3; p++) {
                    const double w = v[l] * b[p];
                    if (w == 0.0) {
                        continue;
                    }
                    const double *row = &c.data[(l * 3 + p) * c.right];
                    for (std::size_t r = 0; r < c.right; r++) {
                        next[r] += w * row[r];
                    }
                }
            }
            v = std::move(next);
        }
        return t->scale * v[0];
    }
    const auto &m = std::get<MajoranaQuadratic>(rep_);
    Eigen::MatrixXd r = compile_rotation(m.n_modes, m.encoding, x, {});
    double acc = m.constant;
    for (const auto &pr : m.pairs) {
        acc += pr.value * pair_function(m, r, pr.p, pr.q);
    }
    return acc;
}

double FunctionSurrogate::error_bound(std::span<const double> x, double coverage) const {
    check_input(x);
    if (const auto *s = std::get_if<SparseRepresentation>(&rep_)) {
        std::vector<double> group_sum(s->groups.size(), 0.0);
        for (const auto &t : s->terms) {
            group_sum[t.group] += t.weight * basis_value(basis_, t.alpha, x, s->leg_inputs);
        }
        double acc = 0;
        for (std::size_t g = 0; g < s->groups.size(); g++) {
            acc += std::abs(group_sum[g]) * s->groups[g].std_error;
        }
        return coverage * acc;
    }
    if (const auto *t = std::get_if<TensorTrain>(&rep_)) {
        return t->evaluation_bound;
    }
    const auto &m = std::get<MajoranaQuadratic>(rep_);
    Eigen::MatrixXd r = compile_rotation(m.n_modes, m.encoding, x, {});
    double acc = 0;
    for (const auto &pr : m.pairs) {
        acc += std::abs(pair_function(m, r, pr.p, pr.q)) * pr.std_error;
    }
    return coverage * acc;
}

std::size_t FunctionSurrogate::term_count() const {
    if (const auto *s = std::get_if<SparseRepresentation>(&rep_)) {
        return s->terms.size();
    }
    if (const auto *t = std::get_if<TensorTrain>(&rep_)) {
        std::size_t total = 0;
        for (const auto &c : t->cores) {
            total += c.data.size();
        }
        return total;
    }
    return std::get<MajoranaQuadratic>(rep_).pairs.size();
}

std::vector<std::size_t> FunctionSurrogate::bond_dims() const {
    if (const auto *t = std::get_if<TensorTrain>(&rep_)) {
        return t->bond_dims();
    }
    return {};
}

void normalize_sparse(SparseRepresentation &rep) {
    auto key = [](const SparseTerm &t) { return std::tuple(t.group, t.alpha[1], t.alpha[0]); };
    std::stable_sort(rep.terms.begin(), rep.terms.end(),
                     [&](const SparseTerm &a, const SparseTerm &b) { return key(a) < key(b); });
    std::vector<SparseTerm> merged;
    for (const auto &t : rep.terms) {
        if (!merged.empty() && key(merged.back()) == key(t)) {
            merged.back().weight += t.weight;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const SparseTerm &t) { return t.weight == 0.0; });
    rep.terms = std::move(merged);
}

namespace {

ojson gate_json(const Gate &g) {
    ojson j;
    j["tag"] = gate_tag_name(g.tag);
    ojson qs = ojson::array();
    for (std::uint32_t k = 0; k < g.arity(); k++) {
        qs.push_back(g.qubits[k]);
    }
    j["qubits"] = qs;
    if (g.slot >= 0) {
        j["slot"] = g.slot;
    }
    if (g.angle) {
        j["angle"] = *g.angle;
    }
    return j;
}

Gate gate_from_json(const ojson &j) {
    Gate g;
    g.tag = parse_gate_tag(j.at("tag").get<std::string>());
    const auto &qs = j.at("qubits");
    if (qs.size() != g.arity()) {
        fail(ErrorKind::Validation, "gate arity mismatch in surrogate file");
    }
    for (std::size_t k = 0; k < qs.size(); k++) {
        g.qubits[k] = qs[k].get<std::uint32_t>();
    }
    g.slot = j.value("slot", -1);
    if (j.contains("angle")) {
        g.angle = j.at("angle").get<double>();
    }
    return g;
}

ojson header(const FunctionSurrogate &s, const std::string &payload_name) {
    ojson j;
    j["format"] = "qsurrogate-surrogate";
    j["version"] = 1;
    j["basis"] = basis_name(s.basis());
    j["n_inputs"] = s.n_inputs();
    j["representation"] = s.representation_name();
    j["bond_dims"] = s.bond_dims();
    if (const auto *sp = std::get_if<SparseRepresentation>(&s.representation())) {
        j["leg_inputs"] = sp->leg_inputs;
        ojson groups = ojson::array();
        for (const auto &g : sp->groups) {
            groups.push_back({{"label", g.label}, {"value", g.value}, {"std_error", g.std_error}});
        }
        j["groups"] = groups;
        ojson terms = ojson::array();
        for (const auto &t : sp->terms) {
            terms.push_back({{"alpha", spectral_hex(t.alpha)}, {"weight", t.weight}, {"group", t.group}});
        }
        j["terms"] = terms;
    } else if (const auto *tt = std::get_if<TensorTrain>(&s.representation())) {
        j["leg_inputs"] = tt->leg_inputs;
        j["scale"] = tt->scale;
        j["evaluation_bound"] = tt->evaluation_bound;
        ojson shapes = ojson::array();
        for (const auto &c : tt->cores) {
            shapes.push_back({c.left, 3, c.right});
        }
        j["core_shapes"] = shapes;
        j["payload"] = payload_name;
    } else {
        const auto &m = std::get<MajoranaQuadratic>(s.representation());
        j["n_modes"] = m.n_modes;
        ojson gates = ojson::array();
        for (const auto &g : m.encoding) {
            gates.push_back(gate_json(g));
        }
        j["encoding"] = gates;
        ojson obs = ojson::array();
        for (const auto &t : m.observable) {
            obs.push_back({{"a", t.a}, {"b", t.b}, {"weight", t.weight}});
        }
        j["observable"] = obs;
        j["constant"] = m.constant;
        ojson pairs = ojson::array();
        for (const auto &p : m.pairs) {
            pairs.push_back({{"p", p.p}, {"q", p.q}, {"value", p.value}, {"std_error", p.std_error}});
        }
        j["pairs"] = pairs;
    }
    return j;
}

}  // namespace

std::string surrogate_header_json(const FunctionSurrogate &s) {
    return header(s, "").dump(2) + "\n";
}

void save_surrogate(const FunctionSurrogate &s, const std::filesystem::path &json_path) {
    std::filesystem::path bin = json_path;
    bin.replace_extension(".bin");
    const auto *tt = std::get_if<TensorTrain>(&s.representation());
    if (tt) {
        std::string payload;
        for (const auto &c : tt->cores) {
            for (double v : c.data) {
                auto bits = std::bit_cast<std::uint64_t>(v);
                for (int k = 0; k < 8; k++) {
                    payload.push_back(static_cast<char>((bits >> (8 * k)) & 0xff));
                }
            }
        }
        write_file_atomic(bin, payload);
    }
    write_file_atomic(json_path, header(s, tt ? bin.filename().string() : "").dump(2) + "\n");
}

FunctionSurrogate load_surrogate(const std::filesystem::path &json_path) {
    ojson j;
    try {
        j = ojson::parse(read_text_file(json_path));
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Validation, std::string("surrogate json: ") + e.what());
    }
    try {
        if (j.at("format") != "qsurrogate-surrogate" || j.at("version") != 1) {
            fail(ErrorKind::Validation, "unsupported surrogate file format");
        }
        BasisKind basis = parse_basis(j.at("basis").get<std::string>());
        auto n_inputs = j.at("n_inputs").get<std::uint32_t>();
        std::string kind = j.at("representation").get<std::string>();
        if (kind == "sparse-terms") {
            SparseRepresentation sp;
            sp.leg_inputs = j.at("leg_inputs").get<std::vector<int>>();
            for (const auto &g : j.at("groups")) {
                sp.groups.push_back(
                    {g.at("label").get<std::string>(), g.at("value").get<double>(), g.at("std_error").get<double>()});
            }
            for (const auto &t : j.at("terms")) {
                sp.terms.push_back({parse_spectral_hex(t.at("alpha").get<std::string>()), t.at("weight").get<double>(),
                                    t.at("group").get<std::uint32_t>()});
            }
            return FunctionSurrogate(basis, n_inputs, std::move(sp));
        }
        if (kind == "tensor-train") {
            TensorTrain tt;
            tt.leg_inputs = j.at("leg_inputs").get<std::vector<int>>();
            tt.scale = j.at("scale").get<double>();
            tt.evaluation_bound = j.at("evaluation_bound").get<double>();
            std::filesystem::path bin = json_path.parent_path() / j.at("payload").get<std::string>();
            std::string payload = read_text_file(bin);
            std::size_t offset = 0;
            for (const auto &shape : j.at("core_shapes")) {
                TrainCore c;
                c.left = shape.at(0).get<std::size_t>();
                c.right = shape.at(2).get<std::size_t>();
                c.data.resize(c.left * 3 * c.right);
                if (offset + 8 * c.data.size() > payload.size()) {
                    fail(ErrorKind::Io, "surrogate payload is truncated");
                }
                for (auto &v : c.data) {
                    std::uint64_t bits = 0;
                    for (int k = 7; k >= 0; k--) {
                        bits = (bits << 8) | static_cast<unsigned char>(payload[offset + k]);
                    }
                    v = std::bit_cast<double>(bits);
                    offset += 8;
                }
                tt.cores.push_back(std::move(c));
            }
            if (offset != payload.size()) {
                fail(ErrorKind::Io, "surrogate payload has trailing bytes");
            }
            return FunctionSurrogate(basis, n_inputs, std::move(tt));
        }
        if (kind == "majorana-quadratic") {
            MajoranaQuadratic m;
            m.n_modes = j.at("n_modes").get<std::uint32_t>();
            for (const auto &g : j.at("encoding")) {
                m.encoding.push_back(gate_from_json(g));
            }
            for (const auto &t : j.at("observable")) {
                m.observable.push_back(
                    {t.at("a").get<std::uint32_t>(), t.at("b").get<std::uint32_t>(), t.at("weight").get<double>()});
            }
            m.constant = j.at("constant").get<double>();
            for (const auto &p : j.at("pairs")) {
                m.pairs.push_back({p.at("p").get<std::uint32_t>(), p.at("q").get<std::uint32_t>(),
                                   p.at("value").get<double>(), p.at("std_error").get<double>()});
            }
            return FunctionSurrogate(basis, n_inputs, std::move(m));
        }
        fail(ErrorKind::Validation, "unknown surrogate representation '" + kind + "'");
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Validation, std::string("surrogate json: ") + e.what());
    }
}

}  // namespace qsurrogate
