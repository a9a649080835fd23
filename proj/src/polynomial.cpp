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

#include "mu/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mu {

Polynomial Polynomial::constant(Domain domain, double value) {
    Polynomial p(domain);
    p.add({}, value);
    return p;
}

Polynomial Polynomial::variable(Domain domain, uint32_t index) {
    Polynomial p(domain);
    p.add({index}, 1.0);
    return p;
}

void Polynomial::add(const Monomial& m, double coeff) {
    for (size_t i = 1; i < m.size(); ++i)
        if (m[i - 1] >= m[i])
            throw std::invalid_argument("monomial indices must strictly increase");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (std::abs(coeff) >= kCoeffEps) terms_.emplace(m, coeff);
        return;
    }
    it->second += coeff;
    if (std::abs(it->second) < kCoeffEps) terms_.erase(it);
}

double Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

size_t Polynomial::nonconstant_term_count() const {
    size_t n = terms_.size();
    if (terms_.count({})) --n;
    return n;
}

int Polynomial::max_degree() const {
    size_t deg = 0;
    for (const auto& [m, c] : terms_) deg = std::max(deg, m.size());
    return static_cast<int>(deg);
}

int64_t Polynomial::max_variable() const {
    int64_t mx = -1;
    for (const auto& [m, c] : terms_)
        if (!m.empty()) mx = std::max(mx, static_cast<int64_t>(m.back()));
    return mx;
}

std::vector<std::pair<Monomial, double>> Polynomial::canonical_terms() const {
    std::vector<std::pair<Monomial, double>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    });
    return out;
}

double Polynomial::evaluate(std::span<const int8_t> values) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double prod = c;
        for (uint32_t v : m) {
            if (v >= values.size())
                throw std::out_of_range("assignment missing variable " +
                                        std::to_string(v));
            int8_t val = values[v];
            if (domain_ == Domain::Spin) {
                if (val != 1 && val != -1)
                    throw std::invalid_argument("spin value must be +-1");
            } else if (val != 0 && val != 1) {
                throw std::invalid_argument("boolean value must be 0/1");
            }
            prod *= static_cast<double>(val);
        }
        acc += prod;
    }
    return acc;
}

Polynomial Polynomial::partial_derivative(uint32_t var) const {
    if (domain_ != Domain::Spin)
        throw std::domain_error("partial_derivative requires the spin domain");
    Polynomial out(domain_);
    for (const auto& [m, c] : terms_) {
        auto it = std::lower_bound(m.begin(), m.end(), var);
        if (it == m.end() || *it != var) continue;
        Monomial rest;
        rest.reserve(m.size() - 1);
        rest.insert(rest.end(), m.begin(), it);
        rest.insert(rest.end(), it + 1, m.end());
        out.add(rest, c);
    }
    return out;
}

Monomial merge_monomials(Domain domain, const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else if (a[i] > b[j]) {
            out.push_back(b[j++]);
        } else {
            if (domain == Domain::Boolean) out.push_back(a[i]);  // b^2 = b
            ++i;                                                 // spin: s^2 = 1
            ++j;
        }
    }
    out.insert(out.end(), a.begin() + static_cast<long>(i), a.end());
    out.insert(out.end(), b.begin() + static_cast<long>(j), b.end());
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (domain_ != o.domain_) throw std::invalid_argument("domain mismatch");
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (domain_ != o.domain_) throw std::invalid_argument("domain mismatch");
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.domain_ != b.domain_) throw std::invalid_argument("domain mismatch");
    Polynomial out(a.domain_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            out.add(merge_monomials(a.domain_, ma, mb), ca * cb);
    return out;
}

Polynomial prune_threshold(const Polynomial& p, double tau) {
    if (tau < 0) throw std::invalid_argument("threshold must be nonnegative");
    Polynomial out(p.domain());
    for (const auto& [m, c] : p.terms())
        if (m.empty() || std::abs(c) >= tau) out.add(m, c);
    return out;
}

TermStats term_stats(const Polynomial& p) {
    TermStats st;
    for (const auto& [m, c] : p.terms()) {
        if (m.empty()) continue;
        ++st.num_terms;
        st.max_degree = std::max(st.max_degree, static_cast<int>(m.size()));
        ++st.degree_counts[static_cast<int>(m.size())];
        ++st.magnitude_decades[static_cast<int>(std::floor(std::log10(std::abs(c))))];
    }
    return st;
}

std::string term_stats_csv(const TermStats& stats) {
    std::ostringstream os;
    os << "stat,key,value\n";
    os << "num_terms,," << stats.num_terms << "\n";
    os << "max_degree,," << stats.max_degree << "\n";
    for (const auto& [deg, cnt] : stats.degree_counts)
        os << "degree_count," << deg << "," << cnt << "\n";
    for (const auto& [dec, cnt] : stats.magnitude_decades)
        os << "magnitude_decade," << dec << "," << cnt << "\n";
    return os.str();
}

VariableRegistry make_registry(EncodingKind kind, int num_torsions, int d) {
    if (num_torsions < 1) throw std::invalid_argument("need at least one torsion");
    if (d < 2) throw std::invalid_argument("grid size must be >= 2");
    VariableRegistry reg;
    reg.kind = kind;
    reg.num_torsions = num_torsions;
    reg.d = d;
    if (kind == EncodingKind::Phase) {
        if ((d & (d - 1)) != 0)
            throw std::invalid_argument("phase encoding requires d to be a power of 2");
        int n = 0;
        while ((1 << n) < d) ++n;
        reg.bits_per_torsion = n;
    } else {
        reg.bits_per_torsion = d;
    }
    return reg;
}

std::string hubo_to_json(const Polynomial& p, const VariableRegistry& reg) {
    nlohmann::ordered_json j;
    j["domain"] = (p.domain() == Domain::Spin) ? "spin" : "boolean";
    j["num_vars"] = reg.num_vars();
    j["registry"] = {{"encoding", reg.kind == EncodingKind::Phase ? "phase" : "onehot"},
                     {"num_torsions", reg.num_torsions},
                     {"bits_per_torsion", reg.bits_per_torsion},
                     {"d", reg.d}};
    auto& terms = j["terms"] = nlohmann::ordered_json::array();
    for (const auto& [m, c] : p.canonical_terms())
        terms.push_back({{"vars", m}, {"coeff", c}});
    return j.dump(2) + "\n";
}

LoadedHubo hubo_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    LoadedHubo out;
    const auto& r = j.at("registry");
    out.registry = make_registry(
        r.at("encoding").get<std::string>() == "phase" ? EncodingKind::Phase
                                                       : EncodingKind::OneHot,
        r.at("num_torsions").get<int>(), r.at("d").get<int>());
    Domain dom = j.at("domain").get<std::string>() == "spin" ? Domain::Spin
                                                             : Domain::Boolean;
    if (dom != out.registry.domain())
        throw std::invalid_argument("domain does not match the registry encoding");
    if (j.at("num_vars").get<int>() != out.registry.num_vars())
        throw std::invalid_argument("num_vars does not match the registry");
    out.poly = Polynomial(dom);
    for (const auto& t : j.at("terms")) {
        Monomial m = t.at("vars").get<Monomial>();
        for (uint32_t v : m)
            if (v >= static_cast<uint32_t>(out.registry.num_vars()))
                throw std::out_of_range("term variable outside registry");
        out.poly.add(m, t.at("coeff").get<double>());
    }
    return out;
}

}  // namespace mu
