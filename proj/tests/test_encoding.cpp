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

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "doctest.h"
#include "mu/encoding.hpp"

using namespace mu;
using std::numbers::pi;

namespace {

// Evaluates a local trig polynomial at a packed spin assignment.
double eval_local(const Polynomial& p, uint32_t mask, int n) {
    std::vector<int8_t> vals(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) vals[static_cast<size_t>(j)] = (mask >> j) & 1 ? -1 : 1;
    return p.evaluate(vals);
}

void check_lemma_properties(const PhaseCode& code) {
    const int d = code.d;
    CHECK(static_cast<int>(code.terms.size()) == d / 2);
    std::set<int> seen;
    for (uint32_t mask = 0; mask < static_cast<uint32_t>(d); ++mask) {
        std::complex<double> v = code.evaluate(mask);
        CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
        int k = code.k_of_assignment[mask];
        CHECK(std::abs(v - std::polar(1.0, 2.0 * pi * k / d)) < 1e-12);
        seen.insert(k);
        CHECK(code.assignment_of_k[static_cast<size_t>(k)] == mask);
    }
    CHECK(static_cast<int>(seen.size()) == d);
    // All surviving monomials have odd cardinality.
    for (const auto& [bits, c] : code.terms) CHECK(std::popcount(bits) % 2 == 1);
}

}  // namespace

TEST_CASE("phase code value sets are the roots of unity (n = 1..6)") {
    for (int n = 1; n <= 6; ++n) {
        PhaseCode code = build_phase_code(n);
        check_lemma_properties(code);
    }
    CHECK_THROWS_AS(build_phase_code(0), std::invalid_argument);
    CHECK_THROWS_AS(build_phase_code(17), std::invalid_argument);
}

TEST_CASE("published n=2 coefficients are reproduced exactly") {
    PhaseCode code = build_phase_code(2, PhaseTable::Paper);
    REQUIRE(code.terms.size() == 2);
    // c_0 = (1 - i)/2 on s_0 and c_1 = (1 + i)/2 on s_1.
    for (const auto& [bits, c] : code.terms) {
        if (bits == 0b01u) {
            CHECK(c.real() == doctest::Approx(0.5));
            CHECK(c.imag() == doctest::Approx(-0.5));
        } else {
            CHECK(bits == 0b10u);
            CHECK(c.real() == doctest::Approx(0.5));
            CHECK(c.imag() == doctest::Approx(0.5));
        }
    }
    check_lemma_properties(code);
    // The general construction coincides with the published table at n=2.
    PhaseCode gen = build_phase_code(2, PhaseTable::General);
    for (uint32_t mask = 0; mask < 4; ++mask)
        CHECK(gen.k_of_assignment[mask] == code.k_of_assignment[mask]);
}

TEST_CASE("published n=3 coefficients are reproduced exactly") {
    PhaseCode code = build_phase_code(3, PhaseTable::Paper);
    REQUIRE(code.terms.size() == 4);
    const double r2 = std::sqrt(2.0);
    for (const auto& [bits, c] : code.terms) {
        switch (bits) {
            case 0b001u:
                CHECK(c.real() == doctest::Approx(0.25));
                CHECK(c.imag() == doctest::Approx((r2 - 1) / 4));
                break;
            case 0b010u:
                CHECK(c.real() == doctest::Approx(0.25));
                CHECK(c.imag() == doctest::Approx(-(r2 + 1) / 4));
                break;
            case 0b100u:
                CHECK(c.real() == doctest::Approx((1 + r2) / 4));
                CHECK(c.imag() == doctest::Approx(0.25));
                break;
            case 0b111u:
                CHECK(c.real() == doctest::Approx((1 - r2) / 4));
                CHECK(c.imag() == doctest::Approx(0.25));
                break;
            default:
                FAIL("unexpected monomial in the published n=3 table");
        }
    }
    check_lemma_properties(code);
    CHECK_THROWS_AS(build_phase_code(4, PhaseTable::Paper), std::invalid_argument);
}

TEST_CASE("paper chart: psi_1 = pi/2 at s_0 = -1, s_1 = +1") {
    PhaseCode code = build_phase_code(2, PhaseTable::Paper);
    // mask bit j set <=> s_j = -1, so (s_0, s_1) = (-1, +1) is mask 0b01.
    CHECK(code.k_of_assignment[0b01] == 1);
    VariableRegistry reg = make_registry(EncodingKind::Phase, 1, 4);
    std::vector<int8_t> assignment{-1, 1};
    auto theta = decode_phase(code, reg, assignment);
    CHECK(theta[0] == doctest::Approx(pi / 2));
}

TEST_CASE("all-plus spins decode to the zero angle") {
    for (int n = 1; n <= 4; ++n) {
        PhaseCode code = build_phase_code(n);
        CHECK(code.k_of_assignment[0] == 0);
    }
}

TEST_CASE("trig polynomials from the phase code") {
    SUBCASE("n=1: cos = s_0 and sin = 0") {
        TrigPolynomial tp = trig_polys_phase(build_phase_code(1));
        CHECK(tp.cos_poly.coefficient({0}) == doctest::Approx(1.0));
        CHECK(tp.cos_poly.term_count() == 1);
        CHECK(tp.sin_poly.term_count() == 0);
    }
    SUBCASE("n=2 split matches the published table on every assignment") {
        PhaseCode code = build_phase_code(2, PhaseTable::Paper);
        TrigPolynomial tp = trig_polys_phase(code);
        // sin = (-s_0 + s_1)/2, cos = (s_0 + s_1)/2.
        CHECK(tp.sin_poly.coefficient({0}) == doctest::Approx(-0.5));
        CHECK(tp.sin_poly.coefficient({1}) == doctest::Approx(0.5));
        CHECK(tp.cos_poly.coefficient({0}) == doctest::Approx(0.5));
        CHECK(tp.cos_poly.coefficient({1}) == doctest::Approx(0.5));
        for (uint32_t mask = 0; mask < 4; ++mask) {
            double phi = 2.0 * pi * code.k_of_assignment[mask] / 4.0;
            CHECK(eval_local(tp.sin_poly, mask, 2) == doctest::Approx(std::sin(phi)));
            CHECK(eval_local(tp.cos_poly, mask, 2) == doctest::Approx(std::cos(phi)));
        }
    }
    SUBCASE("sin^2 + cos^2 = 1 on every assignment, n = 1..6") {
        for (int n = 1; n <= 6; ++n) {
            PhaseCode code = build_phase_code(n);
            TrigPolynomial tp = trig_polys_phase(code);
            CHECK(tp.sin_poly.term_count() <= static_cast<size_t>(1 << (n - 1)));
            CHECK(tp.cos_poly.term_count() <= static_cast<size_t>(1 << (n - 1)));
            for (uint32_t mask = 0; mask < static_cast<uint32_t>(1 << n); ++mask) {
                double s = eval_local(tp.sin_poly, mask, n);
                double c = eval_local(tp.cos_poly, mask, n);
                CHECK(std::abs(s * s + c * c - 1.0) < 1e-12);
                double phi = 2.0 * pi * code.k_of_assignment[mask] / code.d;
                CHECK(std::abs(s - std::sin(phi)) < 1e-12);
                CHECK(std::abs(c - std::cos(phi)) < 1e-12);
            }
        }
    }
}

TEST_CASE("one-hot trig polynomials") {
    SUBCASE("d=4 cosine keeps only the two nonzero grid values") {
        TrigPolynomial tp = trig_polys_onehot(4);
        CHECK(tp.cos_poly.coefficient({0}) == doctest::Approx(1.0));
        CHECK(tp.cos_poly.coefficient({2}) == doctest::Approx(-1.0));
        CHECK(tp.cos_poly.term_count() == 2);
        CHECK(tp.sin_poly.coefficient({1}) == doctest::Approx(1.0));
        CHECK(tp.sin_poly.coefficient({3}) == doctest::Approx(-1.0));
    }
    SUBCASE("a one-hot assignment lands on the grid trig values") {
        const int d = 16;
        TrigPolynomial tp = trig_polys_onehot(d);
        std::vector<int8_t> vals(d, 0);
        vals[3] = 1;
        CHECK(tp.sin_poly.evaluate(vals) == doctest::Approx(std::sin(3 * pi / 8)));
        CHECK(tp.cos_poly.evaluate(vals) == doctest::Approx(std::cos(3 * pi / 8)));
    }
    SUBCASE("the all-zero assignment gives (0, 0)") {
        TrigPolynomial tp = trig_polys_onehot(8);
        std::vector<int8_t> vals(8, 0);
        CHECK(tp.sin_poly.evaluate(vals) == 0.0);
        CHECK(tp.cos_poly.evaluate(vals) == 0.0);
        VariableRegistry reg = make_registry(EncodingKind::OneHot, 1, 8);
        CHECK_THROWS_AS(grid_indices_onehot(reg, vals), std::invalid_argument);
    }
}

TEST_CASE("penalty polynomial values") {
    VariableRegistry reg = make_registry(EncodingKind::OneHot, 3, 4);
    const double a = 2.5;
    Polynomial pen = penalty_polynomial(reg, a);
    SUBCASE("valid one-hot assignments cost nothing") {
        std::vector<int> ks{0, 2, 3};
        auto assignment = encode_onehot(reg, ks);
        CHECK(pen.evaluate(assignment) == doctest::Approx(0.0));
    }
    SUBCASE("two hot bits on one torsion cost A") {
        auto assignment = encode_onehot(reg, std::vector<int>{0, 2, 3});
        assignment[reg.var(1, 0)] = 1;  // second hot bit on torsion 1
        CHECK(pen.evaluate(assignment) == doctest::Approx(a));
    }
    SUBCASE("all-zero costs M * A") {
        std::vector<int8_t> zero(static_cast<size_t>(reg.num_vars()), 0);
        CHECK(pen.evaluate(zero) == doctest::Approx(3 * a));
    }
    CHECK_THROWS_AS(penalty_polynomial(reg, 0.0), std::invalid_argument);
}

TEST_CASE("decode / encode round-trips on grid indices") {
    SUBCASE("phase") {
        for (int n = 1; n <= 4; ++n) {
            PhaseCode code = build_phase_code(n);
            VariableRegistry reg = make_registry(EncodingKind::Phase, 3, 1 << n);
            for (int k = 0; k < (1 << n); ++k) {
                std::vector<int> ks{k, (k + 1) % (1 << n), (k * 3 + 1) % (1 << n)};
                auto assignment = encode_phase(code, reg, ks);
                auto back = grid_indices_phase(code, reg, assignment);
                CHECK(back == ks);
            }
        }
    }
    SUBCASE("one-hot") {
        VariableRegistry reg = make_registry(EncodingKind::OneHot, 2, 16);
        std::vector<int> ks{5, 11};
        auto assignment = encode_onehot(reg, ks);
        CHECK(grid_indices_onehot(reg, assignment) == ks);
        CHECK(decode_onehot(reg, assignment)[0] == doctest::Approx(2 * pi * 5 / 16));
    }
    SUBCASE("one-hot k=0 decodes to angle zero") {
        VariableRegistry reg = make_registry(EncodingKind::OneHot, 1, 16);
        auto assignment = encode_onehot(reg, std::vector<int>{0});
        CHECK(decode_onehot(reg, assignment)[0] == 0.0);
    }
}

TEST_CASE("variable counts: phase is exponentially smaller") {
    for (int m = 2; m <= 5; ++m) {
        VariableRegistry phase = make_registry(EncodingKind::Phase, m, 16);
        VariableRegistry oneh = make_registry(EncodingKind::OneHot, m, 16);
        CHECK(phase.num_vars() == 4 * m);
        CHECK(oneh.num_vars() == 16 * m);
    }
}

TEST_CASE("phase code JSON dump") {
    PhaseCode code = build_phase_code(3);
    std::string json = phase_code_to_json(code);
    CHECK(json.find("\"n\": 3") != std::string::npos);
    CHECK(json.find("correspondence") != std::string::npos);
}
