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

#include "qsurrogate/backprop.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "qsurrogate/error.hpp"
#include "qsurrogate/io_util.hpp"

namespace qsurrogate {

namespace {

auto term_key(const ExpansionTerm &t) {
    return std::tuple(t.alpha[1], t.alpha[0], t.pauli.z, t.pauli.x);
}

double sign_of(const PauliString &p) {
    complex ph = p.phase_value();
    if (ph.imag() != 0.0) {
        fail(ErrorKind::Numeric, "Hermitian conjugation produced an imaginary phase");
    }
    return ph.real();
}

void merge_terms(std::vector<ExpansionTerm> &terms, double drop_below) {
    std::sort(terms.begin(), terms.end(),
              [](const ExpansionTerm &a, const ExpansionTerm &b) { return term_key(a) < term_key(b); });
    std::vector<ExpansionTerm> out;
    out.reserve(terms.size());
    for (auto &t : terms) {
        if (!out.empty() && term_key(out.back()) == term_key(t)) {
            out.back().coefficient += t.coefficient;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [&](const ExpansionTerm &t) {
        return t.coefficient == 0.0 || std::abs(t.coefficient) <= drop_below;
    });
    terms = std::move(out);
}

void add_signed(std::vector<ExpansionTerm> &out, const SpectralIndex &alpha, const PauliString &p, double coefficient) {
    out.push_back({alpha, p.unsigned_string(), coefficient * sign_of(p)});
}

}  // namespace

ObservableExpansion backpropagate(const CircuitIR &c, const WeightedPauliSum &observable, std::size_t first_block,
                                  std::size_t last_block, std::span<const double> theta, const BackpropOptions &opts) {
    require_valid(c);
    if (observable.num_qubits() != c.n) {
        fail(ErrorKind::Dimension, "observable width does not match the circuit");
    }
    if (!observable.is_hermitian(1e-12)) {
        fail(ErrorKind::Validation, "observable is not Hermitian");
    }
    last_block = std::min(last_block, c.layers.size());

    ObservableExpansion e;
    e.n = c.n;
    e.n_inputs = static_cast<std::uint32_t>(c.num_inputs());
    e.domain = opts.domain;

    // Forward-order leg numbering of the encoding gates in range.
    std::vector<std::vector<int>> leg_of(c.layers.size());
    for (std::size_t b = first_block; b < last_block; b++) {
        for (const Gate &g : c.layers[b].gates) {
            int leg = -1;
            if (g.tag == GateTag::EncGivens) {
                fail(ErrorKind::Basis, "back-propagation supports only diagonal encoding gates");
            }
            if (g.tag == GateTag::EncRZ && opts.domain == InputDomain::Continuous) {
                leg = static_cast<int>(e.leg_inputs.size());
                if (e.leg_inputs.size() >= kMaxTrigLegs) {
                    fail(ErrorKind::Capacity, "more than 64 encoding gates for the trig3 basis");
                }
                e.leg_inputs.push_back(g.slot);
            }
            leg_of[b].push_back(leg);
        }
    }

    std::vector<ExpansionTerm> terms;
    for (const auto &t : observable.terms()) {
        add_signed(terms, {0, 0}, t.pauli, t.coefficient.real());
    }
    merge_terms(terms, opts.drop_below);

    for (std::size_t b = last_block; b-- > first_block;) {
        const auto &gates = c.layers[b].gates;
        for (std::size_t gi = gates.size(); gi-- > 0;) {
            const Gate &g = gates[gi];
            std::vector<ExpansionTerm> next;
            next.reserve(terms.size() * 2);
            if (g.tag == GateTag::EncRZ) {
                const std::uint32_t q = g.qubits[0];
                for (const auto &t : terms) {
                    auto split = conjugate_encoding(q, t.pauli);
                    if (!split.odd) {
                        next.push_back(t);
                    } else if (opts.domain == InputDomain::Binary) {
                        // cos(pi x) = (-1)^x and sin(pi x) = 0 on binary inputs.
                        ExpansionTerm u = t;
                        u.alpha[g.slot / 64] ^= std::uint64_t{1} << (g.slot % 64);
                        next.push_back(u);
                    } else {
                        const auto leg = static_cast<std::uint32_t>(leg_of[b][gi]);
                        SpectralIndex even = t.alpha;
                        SpectralIndex odd = t.alpha;
                        set_trig_digit(even, leg, 1);
                        set_trig_digit(odd, leg, 2);
                        add_signed(next, even, split.even, t.coefficient);
                        add_signed(next, odd, *split.odd, t.coefficient);
                    }
                }
                if (opts.domain == InputDomain::Continuous) {
                    e.branching_count++;
                }
            } else {
                GateAction act = gate_action(g, c.n, {}, theta);
                if (act.clifford) {
                    for (const auto &t : terms) {
                        add_signed(next, t.alpha, conjugate_clifford(*act.clifford, t.pauli), t.coefficient);
                    }
                } else {
                    next = terms;
                    for (const auto &rot : act.rotations) {
                        std::vector<ExpansionTerm> stage;
                        stage.reserve(next.size() * 2);
                        for (const auto &t : next) {
                            const WeightedPauliSum image = conjugate_rotation(rot.generator, rot.angle, t.pauli);
                            for (const auto &r : image.terms()) {
                                if (std::abs(r.coefficient.imag()) > 1e-12 * std::abs(r.coefficient)) {
                                    fail(ErrorKind::Numeric, "rotation produced a complex coefficient");
                                }
                                stage.push_back({t.alpha, r.pauli, t.coefficient * r.coefficient.real()});
                            }
                        }
                        next = std::move(stage);
                        e.branching_count++;
                    }
                }
            }
            merge_terms(next, opts.drop_below);
            if (next.size() > opts.explosion_cap) {
                fail(ErrorKind::Resource, "expansion exceeded " + std::to_string(opts.explosion_cap) +
                                              " terms; the circuit is likely misclassified");
            }
            terms = std::move(next);
        }
    }
    e.terms = std::move(terms);
    return e;
}

ObservableExpansion backpropagate(const CircuitIR &c, std::span<const double> theta, const BackpropOptions &opts) {
    return backpropagate(c, c.observable, 0, c.layers.size(), theta, opts);
}

double evaluate_expansion(const ObservableExpansion &e, std::span<const double> x, const DenseState *initial_state) {
    if (x.size() != e.n_inputs) {
        fail(ErrorKind::Dimension, "expansion expects " + std::to_string(e.n_inputs) + " inputs");
    }
    double acc = 0;
    for (const auto &t : e.terms) {
        double state_value;
        if (initial_state) {
            state_value = initial_state->expectation(t.pauli).real();
        } else {
            state_value = t.pauli.x == 0 ? 1.0 : 0.0;
        }
        if (state_value != 0.0) {
            acc += t.coefficient * state_value * basis_value(e.basis(), t.alpha, x, e.leg_inputs);
        }
    }
    return acc;
}

FunctionSurrogate expansion_surrogate(const ObservableExpansion &e, const CircuitIR &c) {
    std::optional<DenseState> init;
    if (!c.zero_initial_state()) {
        init = DenseState::from_amplitudes(c.n, c.initial_amplitudes);
    }
    SparseRepresentation rep;
    rep.groups.push_back({"initial-state", 1.0, 0.0});
    rep.leg_inputs = e.leg_inputs;
    for (const auto &t : e.terms) {
        double v = init ? init->expectation(t.pauli).real() : (t.pauli.x == 0 ? 1.0 : 0.0);
        if (v != 0.0) {
            rep.terms.push_back({t.alpha, t.coefficient * v, 0});
        }
    }
    normalize_sparse(rep);
    return FunctionSurrogate(e.basis(), e.n_inputs, std::move(rep));
}

namespace {

ObservableExpansion flipped_expansion(const CircuitIR &c, const BackpropOptions &opts) {
    require_valid(c);
    if (c.architecture != Architecture::Flipped) {
        fail(ErrorKind::Classification, "flipped surrogate requires the flipped architecture");
    }
    return backpropagate(c, c.observable, 1, 2, {}, opts);
}

std::vector<PauliString> distinct_paulis(const ObservableExpansion &e) {
    std::vector<PauliString> out;
    for (const auto &t : e.terms) {
        out.push_back(t.pauli);
    }
    std::sort(out.begin(), out.end(), [](const PauliString &a, const PauliString &b) { return a.key() < b.key(); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<PauliString> required_paulis(const CircuitIR &c, const BackpropOptions &opts) {
    return distinct_paulis(flipped_expansion(c, opts));
}

FunctionSurrogate flipped_surrogate(const CircuitIR &c, std::span<const double> theta, const BackpropOptions &opts,
                                    const std::vector<CoefficientEstimate> *estimates) {
    ObservableExpansion e = flipped_expansion(c, opts);
    std::vector<PauliString> paulis = distinct_paulis(e);

    SparseRepresentation rep;
    rep.leg_inputs = e.leg_inputs;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> group_of;
    std::optional<DenseState> rho;
    if (!estimates) {
        rho = run_blocks(c, 0, 1, {}, theta);
    }
    for (const auto &p : paulis) {
        CoefficientGroup g;
        g.label = p.letters();
        if (estimates) {
            auto it = std::find_if(estimates->begin(), estimates->end(),
                                   [&](const CoefficientEstimate &est) { return est.pauli == g.label; });
            if (it == estimates->end()) {
                fail(ErrorKind::Binding, "missing coefficient estimate for " + g.label);
            }
            g.value = it->value;
            g.std_error = it->std_error;
        } else {
            g.value = rho->expectation(p).real();
        }
        group_of[p.key()] = static_cast<std::uint32_t>(rep.groups.size());
        rep.groups.push_back(std::move(g));
    }
    for (const auto &t : e.terms) {
        rep.terms.push_back({t.alpha, t.coefficient, group_of.at(t.pauli.key())});
    }
    normalize_sparse(rep);
    return FunctionSurrogate(e.basis(), e.n_inputs, std::move(rep));
}

TermCensus term_census(const ObservableExpansion &e) {
    TermCensus census;
    // Census of the normalized expansion, so unmerged input gives the same answer.
    std::vector<ExpansionTerm> terms = e.terms;
    merge_terms(terms, 0.0);
    census.term_count = terms.size();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> paulis;
    for (const auto &t : terms) {
        census.max_abs_coefficient = std::max(census.max_abs_coefficient, std::abs(t.coefficient));
        census.fourier_support.push_back(t.alpha);
        paulis.push_back(t.pauli.key());
    }
    auto alpha_less = [](const SpectralIndex &a, const SpectralIndex &b) {
        return std::tie(a[1], a[0]) < std::tie(b[1], b[0]);
    };
    std::sort(census.fourier_support.begin(), census.fourier_support.end(), alpha_less);
    census.fourier_support.erase(std::unique(census.fourier_support.begin(), census.fourier_support.end()),
                                 census.fourier_support.end());
    std::sort(paulis.begin(), paulis.end());
    census.distinct_paulis = static_cast<std::size_t>(std::unique(paulis.begin(), paulis.end()) - paulis.begin());
    return census;
}

std::string dump_expansion(const ObservableExpansion &e) {
    std::string out;
    for (const auto &t : e.terms) {
        out += format_double(t.coefficient);
        out += '\t';
        out += spectral_hex(t.alpha);
        out += '\t';
        out += t.pauli.str();
        out += '\n';
    }
    return out;
}

}  // namespace qsurrogate
