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

#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "mu/polynomial.hpp"

namespace mu {

/// Uniform angle grid phi_k = 2 pi k / d.
struct AngleGrid {
    int d;
    explicit AngleGrid(int d_) : d(d_) {
        if (d < 2) throw std::invalid_argument("grid size must be >= 2");
    }
    double phi(int k) const;
    std::vector<double> values() const;
};

/// Coefficient source for the phase polynomial. General works for any n
/// and is the pipeline default; Paper pins the published n=2,3 tables
/// (their bit-to-phase chart differs from the general one for n=3).
enum class PhaseTable { General, Paper };

/// Complex polynomial p_n over n spin variables whose value set is the
/// 2^n-th roots of unity: 2^{n-1} odd-cardinality terms, |p_n(s)| = 1, and
/// a bijection between assignments and grid indices.
///
/// Assignments are packed as bitmasks with bit j = 1 <=> s_j = -1.
struct PhaseCode {
    int n = 0;
    int d = 0;
    PhaseTable table = PhaseTable::General;
    std::vector<std::pair<uint32_t, std::complex<double>>> terms;  // bitmask -> c
    std::vector<int> k_of_assignment;       // size 2^n
    std::vector<uint32_t> assignment_of_k;  // size 2^n

    std::complex<double> evaluate(uint32_t assignment_mask) const;
};

/// Builds the phase code for n in [1, 16].
PhaseCode build_phase_code(int n, PhaseTable table = PhaseTable::General);

/// sin/cos of one torsion's angle as real polynomials over that torsion's
/// binary variables (local indices 0..bits-1).
struct TrigPolynomial {
    Polynomial sin_poly;
    Polynomial cos_poly;
    TrigPolynomial(Domain dom) : sin_poly(dom), cos_poly(dom) {}
};

TrigPolynomial trig_polys_phase(const PhaseCode& code);
TrigPolynomial trig_polys_onehot(int d);

struct OneHotCode {
    int d = 0;
    double penalty_weight = 0.0;
};

/// A_const * sum_i (sum_k b_ik - 1)^2, expanded multilinearly.
Polynomial penalty_polynomial(const VariableRegistry& reg, double a_const);

/// Grid indices, one per torsion, from a full assignment.
std::vector<int> grid_indices_phase(const PhaseCode& code, const VariableRegistry& reg,
                                    std::span<const int8_t> assignment);
/// Throws unless exactly one bit per torsion is hot.
std::vector<int> grid_indices_onehot(const VariableRegistry& reg,
                                     std::span<const int8_t> assignment);

std::vector<double> decode_phase(const PhaseCode& code, const VariableRegistry& reg,
                                 std::span<const int8_t> assignment);
std::vector<double> decode_onehot(const VariableRegistry& reg,
                                  std::span<const int8_t> assignment);

std::vector<int8_t> encode_phase(const PhaseCode& code, const VariableRegistry& reg,
                                 std::span<const int> grid_indices);
std::vector<int8_t> encode_onehot(const VariableRegistry& reg,
                                  std::span<const int> grid_indices);

/// JSON dump: n, term list (bit indices, re, im), correspondence table.
std::string phase_code_to_json(const PhaseCode& code);

}  // namespace mu
