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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mu {

enum class Domain { Spin, Boolean };

/// Product of distinct binary variables; strictly increasing indices,
/// empty = constant term.
using Monomial = std::vector<uint32_t>;

struct MonomialHash {
    size_t operator()(const Monomial& m) const {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t v : m) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

/// Sparse multilinear real polynomial over spin (+-1) or boolean (0/1)
/// variables. Multiplication reduces s^2 = 1 resp. b^2 = b; coefficients
/// below 1e-15 in magnitude are discarded as they arise.
class Polynomial {
public:
    static constexpr double kCoeffEps = 1e-15;

    explicit Polynomial(Domain domain) : domain_(domain) {}
    static Polynomial constant(Domain domain, double value);
    static Polynomial variable(Domain domain, uint32_t index);

    Domain domain() const { return domain_; }
    const std::unordered_map<Monomial, double, MonomialHash>& terms() const {
        return terms_;
    }

    /// Accumulates coeff onto the (sorted, repeat-free) monomial.
    void add(const Monomial& m, double coeff);
    double coefficient(const Monomial& m) const;
    double constant_term() const { return coefficient({}); }

    size_t term_count() const { return terms_.size(); }
    size_t nonconstant_term_count() const;
    int max_degree() const;
    /// Largest variable index used; -1 when constant-only.
    int64_t max_variable() const;

    /// Terms ordered by degree then lexicographic indices.
    std::vector<std::pair<Monomial, double>> canonical_terms() const;

    /// values[i] is variable i's assignment: +-1 (spin) or 0/1 (boolean).
    /// Throws on a missing variable or out-of-domain value.
    double evaluate(std::span<const int8_t> values) const;

    /// Formal derivative of the multilinear form (spin domain only).
    Polynomial partial_derivative(uint32_t var) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(double s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
    Domain domain_;
    std::unordered_map<Monomial, double, MonomialHash> terms_;
};

/// Merge of two sorted monomials under the domain's reduction rule
/// (spin: symmetric difference; boolean: union).
Monomial merge_monomials(Domain domain, const Monomial& a, const Monomial& b);

/// Drops nonconstant terms with |coefficient| < tau; the constant stays.
Polynomial prune_threshold(const Polynomial& p, double tau);

struct TermStats {
    size_t num_terms = 0;  // nonconstant terms
    int max_degree = 0;
    std::map<int, size_t> degree_counts;
    // |coefficient| decade histogram: key = floor(log10 |c|), nonconstant terms.
    std::map<int, size_t> magnitude_decades;
};
TermStats term_stats(const Polynomial& p);
std::string term_stats_csv(const TermStats& stats);

enum class EncodingKind { Phase, OneHot };

/// Bijective map (torsion, bit) <-> flat variable index.
struct VariableRegistry {
    EncodingKind kind = EncodingKind::Phase;
    int num_torsions = 0;
    int bits_per_torsion = 0;  // log2(d) for phase, d for one-hot
    int d = 0;                 // angle grid size

    int num_vars() const { return num_torsions * bits_per_torsion; }
    uint32_t var(int torsion, int bit) const {
        return static_cast<uint32_t>(torsion * bits_per_torsion + bit);
    }
    std::pair<int, int> torsion_bit(uint32_t v) const {
        return {static_cast<int>(v) / bits_per_torsion,
                static_cast<int>(v) % bits_per_torsion};
    }
    Domain domain() const {
        return kind == EncodingKind::Phase ? Domain::Spin : Domain::Boolean;
    }
};

VariableRegistry make_registry(EncodingKind kind, int num_torsions, int d);

struct LoadedHubo {
    Polynomial poly{Domain::Spin};
    VariableRegistry registry;
};

/// HUBO JSON: {domain, num_vars, registry{...}, terms:[{vars, coeff}]};
/// canonical term order, round-trip stable.
std::string hubo_to_json(const Polynomial& p, const VariableRegistry& reg);
LoadedHubo hubo_from_json(const std::string& text);

}  // namespace mu
