// Copyright 2026 The molunfold authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mu/encoding.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace mu {

using std::numbers::pi;

double AngleGrid::phi(int k) const {
    if (k < 0 || k >= d) throw std::out_of_range("grid index out of range");
    return 2.0 * pi * k / d;
}

std::vector<double> AngleGrid::values() const {
    std::vector<double> v(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) v[static_cast<size_t>(k)] = phi(k);
    return v;
}

std::complex<double> PhaseCode::evaluate(uint32_t assignment_mask) const {
    std::complex<double> acc = 0.0;
    for (const auto& [bits, c] : terms) {
        bool odd = std::popcount(bits & assignment_mask) & 1u;
        acc += odd ? -c : c;
    }
    return acc;
}

namespace {

// Assignment -> grid index with the antipodal property k(-s) = k(s) + d/2
// (mod d): the top bit selects the half circle and the low bits, xor-folded
// with it, stay invariant under a global spin flip. This makes the Fourier
// expansion of e^{i phi_k(s)} odd, so exactly the 2^{n-1} odd-cardinality
// coefficients survive.
int general_k_of_mask(uint32_t mask, int n) {
    uint32_t top = (mask >> (n - 1)) & 1u;
    uint32_t k = top << (n - 1);
    for (int j = 0; j + 1 < n; ++j) k |= (((mask >> j) & 1u) ^ top) << j;
    return static_cast<int>(k);
}

PhaseCode from_values(int n, std::vector<std::complex<double>> values,
                      PhaseTable table) {
    const int d = 1 << n;
    PhaseCode code;
    code.n = n;
    code.d = d;
    code.table = table;

    // Walsh-Hadamard transform of the value table gives the coefficients.
    std::vector<std::complex<double>> wht = values;
    for (int bit = 0; bit < n; ++bit) {
        int step = 1 << bit;
        for (int i = 0; i < d; i += 2 * step)
            for (int j = i; j < i + step; ++j) {
                auto a = wht[static_cast<size_t>(j)];
                auto b = wht[static_cast<size_t>(j + step)];
                wht[static_cast<size_t>(j)] = a + b;
                wht[static_cast<size_t>(j + step)] = a - b;
            }
    }
    for (int t = 0; t < d; ++t) {
        std::complex<double> c = wht[static_cast<size_t>(t)] / static_cast<double>(d);
        if (std::abs(c) > 1e-12) code.terms.emplace_back(static_cast<uint32_t>(t), c);
    }

    // Correspondence chart: match each assignment's value to its root of
    // unity.
    code.k_of_assignment.assign(static_cast<size_t>(d), -1);
    code.assignment_of_k.assign(static_cast<size_t>(d), 0);
    std::vector<bool> used(static_cast<size_t>(d), false);
    for (int mask = 0; mask < d; ++mask) {
        std::complex<double> v = values[static_cast<size_t>(mask)];
        double ang = std::arg(v);
        if (ang < 0) ang += 2.0 * pi;
        int k = static_cast<int>(std::llround(ang * d / (2.0 * pi))) % d;
        if (std::abs(v - std::polar(1.0, 2.0 * pi * k / d)) > 1e-9 ||
            used[static_cast<size_t>(k)])
            throw std::runtime_error("phase table is not a bijection onto the grid");
        used[static_cast<size_t>(k)] = true;
        code.k_of_assignment[static_cast<size_t>(mask)] = k;
        code.assignment_of_k[static_cast<size_t>(k)] = static_cast<uint32_t>(mask);
    }
    return code;
}

}  // namespace

PhaseCode build_phase_code(int n, PhaseTable table) {
    if (n < 1 || n > 16) throw std::invalid_argument("phase code needs 1 <= n <= 16");
    const int d = 1 << n;

    if (table == PhaseTable::Paper) {
        // Published explicit tables exist for n = 2, 3 only.
        if (n == 2) {
            std::vector<std::complex<double>> vals(4);
            std::vector<std::pair<uint32_t, std::complex<double>>> terms = {
                {0b01u, {0.5, -0.5}},  // s_0
                {0b10u, {0.5, 0.5}},   // s_1
            };
            for (uint32_t mask = 0; mask < 4; ++mask) {
                std::complex<double> acc = 0.0;
                for (auto& [bits, c] : terms)
                    acc += (std::popcount(bits & mask) & 1u) ? -c : c;
                vals[mask] = acc;
            }
            PhaseCode code = from_values(2, vals, PhaseTable::Paper);
            code.terms = terms;
            return code;
        }
        if (n == 3) {
            const double r2 = std::sqrt(2.0);
            std::vector<std::pair<uint32_t, std::complex<double>>> terms = {
                {0b001u, {0.25, 0.25 * (r2 - 1.0)}},   // s_0
                {0b010u, {0.25, -0.25 * (r2 + 1.0)}},  // s_1
                {0b100u, {0.25 * (1.0 + r2), 0.25}},   // s_2
                {0b111u, {0.25 * (1.0 - r2), 0.25}},   // s_0 s_1 s_2
            };
            std::vector<std::complex<double>> vals(8);
            for (uint32_t mask = 0; mask < 8; ++mask) {
                std::complex<double> acc = 0.0;
                for (auto& [bits, c] : terms)
                    acc += (std::popcount(bits & mask) & 1u) ? -c : c;
                vals[mask] = acc;
            }
            PhaseCode code = from_values(3, vals, PhaseTable::Paper);
            code.terms = terms;
            return code;
        }
        throw std::invalid_argument("paper tables are available for n = 2, 3 only");
    }

    std::vector<std::complex<double>> vals(static_cast<size_t>(d));
    for (int mask = 0; mask < d; ++mask) {
        int k = general_k_of_mask(static_cast<uint32_t>(mask), n);
        vals[static_cast<size_t>(mask)] = std::polar(1.0, 2.0 * pi * k / d);
    }
    return from_values(n, std::move(vals), PhaseTable::General);
}

TrigPolynomial trig_polys_phase(const PhaseCode& code) {
    TrigPolynomial tp(Domain::Spin);
    for (const auto& [bits, c] : code.terms) {
        Monomial m;
        for (int j = 0; j < code.n; ++j)
            if (bits & (1u << j)) m.push_back(static_cast<uint32_t>(j));
        tp.cos_poly.add(m, c.real());
        tp.sin_poly.add(m, c.imag());
    }
    return tp;
}

TrigPolynomial trig_polys_onehot(int d) {
    if (d < 2) throw std::invalid_argument("grid size must be >= 2");
    TrigPolynomial tp(Domain::Boolean);
    AngleGrid grid(d);
    for (int k = 0; k < d; ++k) {
        tp.sin_poly.add({static_cast<uint32_t>(k)}, std::sin(grid.phi(k)));
        tp.cos_poly.add({static_cast<uint32_t>(k)}, std::cos(grid.phi(k)));
    }
    return tp;
}

Polynomial penalty_polynomial(const VariableRegistry& reg, double a_const) {
    if (reg.kind != EncodingKind::OneHot)
        throw std::invalid_argument("penalty applies to the one-hot encoding");
    if (a_const <= 0) throw std::invalid_argument("penalty weight must be positive");
    Polynomial p(Domain::Boolean);
    for (int i = 0; i < reg.num_torsions; ++i) {
        p.add({}, a_const);
        for (int k = 0; k < reg.d; ++k) {
            p.add({reg.var(i, k)}, -a_const);  // b^2 = b merges the squares
            for (int k2 = k + 1; k2 < reg.d; ++k2)
                p.add({reg.var(i, k), reg.var(i, k2)}, 2.0 * a_const);
        }
    }
    return p;
}

std::vector<int> grid_indices_phase(const PhaseCode& code, const VariableRegistry& reg,
                                    std::span<const int8_t> assignment) {
    if (reg.kind != EncodingKind::Phase)
        throw std::invalid_argument("registry is not phase-encoded");
    if (assignment.size() != static_cast<size_t>(reg.num_vars()))
        throw std::invalid_argument("assignment size mismatch");
    std::vector<int> ks(static_cast<size_t>(reg.num_torsions));
    for (int i = 0; i < reg.num_torsions; ++i) {
        uint32_t mask = 0;
        for (int j = 0; j < reg.bits_per_torsion; ++j) {
            int8_t s = assignment[reg.var(i, j)];
            if (s != 1 && s != -1) throw std::invalid_argument("spin value must be +-1");
            if (s == -1) mask |= 1u << j;
        }
        ks[static_cast<size_t>(i)] = code.k_of_assignment.at(mask);
    }
    return ks;
}

std::vector<int> grid_indices_onehot(const VariableRegistry& reg,
                                     std::span<const int8_t> assignment) {
    if (reg.kind != EncodingKind::OneHot)
        throw std::invalid_argument("registry is not one-hot encoded");
    if (assignment.size() != static_cast<size_t>(reg.num_vars()))
        throw std::invalid_argument("assignment size mismatch");
    std::vector<int> ks(static_cast<size_t>(reg.num_torsions));
    for (int i = 0; i < reg.num_torsions; ++i) {
        int hot = -1;
        for (int k = 0; k < reg.d; ++k) {
            int8_t b = assignment[reg.var(i, k)];
            if (b != 0 && b != 1) throw std::invalid_argument("boolean value must be 0/1");
            if (b == 1) {
                if (hot >= 0)
                    throw std::invalid_argument("one-hot constraint violated: torsion " +
                                                std::to_string(i));
                hot = k;
            }
        }
        if (hot < 0)
            throw std::invalid_argument("one-hot constraint violated: torsion " +
                                        std::to_string(i));
        ks[static_cast<size_t>(i)] = hot;
    }
    return ks;
}

std::vector<double> decode_phase(const PhaseCode& code, const VariableRegistry& reg,
                                 std::span<const int8_t> assignment) {
    AngleGrid grid(reg.d);
    std::vector<double> theta;
    for (int k : grid_indices_phase(code, reg, assignment)) theta.push_back(grid.phi(k));
    return theta;
}

std::vector<double> decode_onehot(const VariableRegistry& reg,
                                  std::span<const int8_t> assignment) {
    AngleGrid grid(reg.d);
    std::vector<double> theta;
    for (int k : grid_indices_onehot(reg, assignment)) theta.push_back(grid.phi(k));
    return theta;
}

std::vector<int8_t> encode_phase(const PhaseCode& code, const VariableRegistry& reg,
                                 std::span<const int> grid_indices) {
    if (grid_indices.size() != static_cast<size_t>(reg.num_torsions))
        throw std::invalid_argument("need one grid index per torsion");
    std::vector<int8_t> out(static_cast<size_t>(reg.num_vars()), 1);
    for (int i = 0; i < reg.num_torsions; ++i) {
        uint32_t mask = code.assignment_of_k.at(
            static_cast<size_t>(grid_indices[static_cast<size_t>(i)]));
        for (int j = 0; j < reg.bits_per_torsion; ++j)
            out[reg.var(i, j)] = (mask & (1u << j)) ? -1 : 1;
    }
    return out;
}

std::vector<int8_t> encode_onehot(const VariableRegistry& reg,
                                  std::span<const int> grid_indices) {
    if (grid_indices.size() != static_cast<size_t>(reg.num_torsions))
        throw std::invalid_argument("need one grid index per torsion");
    std::vector<int8_t> out(static_cast<size_t>(reg.num_vars()), 0);
    for (int i = 0; i < reg.num_torsions; ++i) {
        int k = grid_indices[static_cast<size_t>(i)];
        if (k < 0 || k >= reg.d) throw std::out_of_range("grid index out of range");
        out[reg.var(i, k)] = 1;
    }
    return out;
}

std::string phase_code_to_json(const PhaseCode& code) {
    nlohmann::ordered_json j;
    j["n"] = code.n;
    j["d"] = code.d;
    j["table"] = code.table == PhaseTable::General ? "general" : "paper";
    auto& terms = j["terms"] = nlohmann::ordered_json::array();
    for (const auto& [bits, c] : code.terms) {
        std::vector<int> idx;
        for (int b = 0; b < code.n; ++b)
            if (bits & (1u << b)) idx.push_back(b);
        terms.push_back({{"bits", idx}, {"re", c.real()}, {"im", c.imag()}});
    }
    j["correspondence"] = code.k_of_assignment;
    return j.dump(2) + "\n";
}

}  // namespace mu
