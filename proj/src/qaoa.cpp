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

#include "mu/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mu/kernels.hpp"

namespace mu {

using std::numbers::pi;

double DiagonalHamiltonian::min_energy() const {
    return energies[static_cast<size_t>(argmin())];
}

uint64_t DiagonalHamiltonian::argmin() const {
    if (energies.empty()) throw std::logic_error("empty Hamiltonian");
    size_t best = 0;
    for (size_t z = 1; z < energies.size(); ++z)
        if (energies[z] < energies[best]) best = z;
    return best;
}

DiagonalHamiltonian build_diagonal(const Polynomial& p, int n_qubits) {
    if (p.domain() != Domain::Spin)
        throw std::invalid_argument("diagonal Hamiltonian needs a spin polynomial");
    if (n_qubits < 1 || n_qubits > 24)
        throw std::invalid_argument("qubit count must lie in [1, 24]");
    if (p.max_variable() >= n_qubits)
        throw std::out_of_range("polynomial uses a variable beyond the qubit count");

    DiagonalHamiltonian h;
    h.n_qubits = n_qubits;
    h.energies.assign(size_t(1) << n_qubits, p.constant_term());

    double sq_sum = 0.0;
    size_t n_nonconst = 0;
    for (const auto& [m, c] : p.terms()) {
        if (m.empty()) continue;
        uint64_t mask = 0;
        for (uint32_t v : m) mask |= uint64_t(1) << v;
        // Bit 0 -> spin +1, so even parity adds +c.
        kernels::add_parity_term(h.energies.data(), h.energies.size(), mask, c);
        sq_sum += c * c;
        ++n_nonconst;
    }
    h.coeff_rms = n_nonconst ? std::sqrt(sq_sum / static_cast<double>(n_nonconst)) : 1.0;
    return h;
}

Polynomial rescale(const Polynomial& p) {
    double sq_sum = 0.0;
    size_t n = 0;
    for (const auto& [m, c] : p.terms()) {
        if (m.empty()) continue;
        sq_sum += c * c;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("cannot rescale a constant polynomial");
    double rms = std::sqrt(sq_sum / static_cast<double>(n));
    Polynomial out(p.domain());
    for (const auto& [m, c] : p.terms()) out.add(m, c / rms);
    return out;
}

DiagonalHamiltonian rescale(const DiagonalHamiltonian& h) {
    if (h.coeff_rms <= 0)
        throw std::invalid_argument("cannot rescale a constant Hamiltonian");
    DiagonalHamiltonian out = h;
    for (double& e : out.energies) e /= h.coeff_rms;
    out.coeff_rms = 1.0;
    return out;
}

double Statevector::norm() const {
    double acc = 0.0;
    for (const auto& a : amps) acc += std::norm(a);
    return std::sqrt(acc);
}

Statevector uniform_state(int n_qubits) {
    Statevector sv;
    sv.n_qubits = n_qubits;
    size_t dim = size_t(1) << n_qubits;
    sv.amps.assign(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    return sv;
}

Statevector run_qaoa(const DiagonalHamiltonian& h, const QaoaParams& params) {
    if (params.layers != 1)
        throw std::invalid_argument("only the single-layer ansatz is supported");
    Statevector sv = uniform_state(h.n_qubits);
    for (size_t z = 0; z < sv.amps.size(); ++z)
        sv.amps[z] *= std::polar(1.0, -params.gamma * h.energies[z]);
    double c = std::cos(params.beta), s = std::sin(params.beta);
    for (int q = 0; q < h.n_qubits; ++q)
        kernels::rx_layer(sv.amps.data(), sv.amps.size(), size_t(1) << q, c, s);
    return sv;
}

double expectation(const DiagonalHamiltonian& h, const Statevector& sv) {
    if (sv.amps.size() != h.energies.size())
        throw std::invalid_argument("statevector and Hamiltonian dimensions differ");
    return kernels::expectation_diag(sv.amps.data(), h.energies.data(), sv.amps.size());
}

Landscape landscape(const DiagonalHamiltonian& h, int resolution) {
    if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    Landscape l;
    l.resolution = resolution;
    for (int i = 0; i < resolution; ++i) {
        double v = 2.0 * pi * i / (resolution - 1);
        l.gammas.push_back(v);
        l.betas.push_back(v);
    }
    l.values.reserve(static_cast<size_t>(resolution) * static_cast<size_t>(resolution));
    for (int gi = 0; gi < resolution; ++gi)
        for (int bi = 0; bi < resolution; ++bi) {
            Statevector sv = run_qaoa(h, {l.gammas[static_cast<size_t>(gi)],
                                          l.betas[static_cast<size_t>(bi)], 1});
            l.values.push_back(expectation(h, sv));
        }
    return l;
}

std::string landscape_csv(const Landscape& l) {
    std::ostringstream os;
    os.precision(12);
    os << "gamma,beta,expectation\n";
    for (int gi = 0; gi < l.resolution; ++gi)
        for (int bi = 0; bi < l.resolution; ++bi)
            os << l.gammas[static_cast<size_t>(gi)] << ","
               << l.betas[static_cast<size_t>(bi)] << "," << l.at(gi, bi) << "\n";
    return os.str();
}

QaoaParams best_grid_point(const Landscape& l) {
    int bg = 0, bb = 0;
    double best = l.at(0, 0);
    for (int gi = 0; gi < l.resolution; ++gi)
        for (int bi = 0; bi < l.resolution; ++bi)
            if (l.at(gi, bi) < best) {
                best = l.at(gi, bi);
                bg = gi;
                bb = bi;
            }
    return {l.gammas[static_cast<size_t>(bg)], l.betas[static_cast<size_t>(bb)], 1};
}

OptimizeResult optimize(const DiagonalHamiltonian& h, QaoaParams start,
                        double initial_step) {
    auto wrap = [](double a) {
        a = std::fmod(a, 2.0 * pi);
        return a < 0 ? a + 2.0 * pi : a;
    };
    auto value = [&](double g, double b) {
        Statevector sv = run_qaoa(h, {g, b, 1});
        return expectation(h, sv);
    };

    OptimizeResult out;
    double g = wrap(start.gamma), b = wrap(start.beta);
    double cur = value(g, b);
    out.trace.push_back(cur);
    double step = initial_step;
    int guard = 0;
    while (step >= 1e-4 && guard++ < 1000) {
        double cand_g = g, cand_b = b, cand = cur;
        const double moves[4][2] = {{step, 0}, {-step, 0}, {0, step}, {0, -step}};
        for (const auto& mv : moves) {
            double vg = wrap(g + mv[0]), vb = wrap(b + mv[1]);
            double v = value(vg, vb);
            if (v < cand) {
                cand = v;
                cand_g = vg;
                cand_b = vb;
            }
        }
        if (cand < cur - 1e-12 * (1.0 + std::abs(cur))) {
            g = cand_g;
            b = cand_b;
            cur = cand;
        } else {
            step *= 0.5;
        }
        out.trace.push_back(cur);
    }
    out.params = {g, b, 1};
    return out;
}

std::map<uint64_t, uint64_t> sample(const Statevector& sv, uint64_t shots,
                                    uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("need at least one shot");
    std::vector<double> cdf(sv.amps.size());
    double acc = 0.0;
    for (size_t z = 0; z < sv.amps.size(); ++z) {
        acc += std::norm(sv.amps[z]);
        cdf[z] = acc;
    }
    double total = acc;
    std::mt19937_64 rng(seed ^ 0xC0FFEEull);
    std::map<uint64_t, uint64_t> counts;
    for (uint64_t s = 0; s < shots; ++s) {
        double u = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * total;
        size_t z = static_cast<size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (z >= cdf.size()) z = cdf.size() - 1;
        ++counts[z];
    }
    return counts;
}

std::string bitstring(uint64_t z, int n_qubits) {
    std::string s(static_cast<size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
        if (z & (uint64_t(1) << q)) s[static_cast<size_t>(q)] = '1';
    return s;
}

std::string histogram_csv(const Statevector& sv, const std::map<uint64_t, uint64_t>& counts,
                          uint64_t shots) {
    std::ostringstream os;
    os.precision(12);
    os << "bitstring,probability,counts\n";
    std::vector<std::pair<uint64_t, uint64_t>> rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [z, c] : rows)
        os << bitstring(z, sv.n_qubits) << "," << std::norm(sv.amps[z]) << "," << c
           << "\n";
    (void)shots;
    return os.str();
}

uint64_t mode_outcome(const std::map<uint64_t, uint64_t>& counts) {
    if (counts.empty()) throw std::invalid_argument("empty histogram");
    uint64_t best_z = counts.begin()->first;
    uint64_t best_c = counts.begin()->second;
    for (const auto& [z, c] : counts)
        if (c > best_c) {
            best_c = c;
            best_z = z;
        }
    return best_z;
}

GateList decompose_term(const Monomial& term, double gamma) {
    GateList out;
    if (term.empty()) {
        out.global_phase = gamma;
        return out;
    }
    for (size_t i = 1; i < term.size(); ++i)
        out.gates.push_back({GateType::CNOT, static_cast<int>(term[i - 1]),
                             static_cast<int>(term[i]), 0.0});
    out.gates.push_back({GateType::RZ, static_cast<int>(term.back()), -1, -2.0 * gamma});
    for (size_t i = term.size(); i-- > 1;)
        out.gates.push_back({GateType::CNOT, static_cast<int>(term[i - 1]),
                             static_cast<int>(term[i]), 0.0});
    return out;
}

GateList cost_layer_gates(const Polynomial& p, double gamma) {
    if (p.domain() != Domain::Spin)
        throw std::invalid_argument("cost layer needs a spin polynomial");
    GateList out;
    for (const auto& [m, c] : p.canonical_terms()) {
        // e^{-i gamma c parity} = decompose_term(m, -gamma c).
        GateList part = decompose_term(m, -gamma * c);
        out.global_phase += part.global_phase;
        out.gates.insert(out.gates.end(), part.gates.begin(), part.gates.end());
    }
    return out;
}

void apply_gate(Statevector& sv, const Gate& g) {
    const size_t dim = sv.amps.size();
    auto bit = [&](int q) { return size_t(1) << q; };
    switch (g.type) {
        case GateType::H: {
            const double inv = 1.0 / std::sqrt(2.0);
            size_t stride = bit(g.q);
            for (size_t base = 0; base < dim; base += 2 * stride)
                for (size_t j = 0; j < stride; ++j) {
                    auto a = sv.amps[base + j];
                    auto b = sv.amps[base + stride + j];
                    sv.amps[base + j] = (a + b) * inv;
                    sv.amps[base + stride + j] = (a - b) * inv;
                }
            break;
        }
        case GateType::RX: {
            double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
            kernels::rx_layer(sv.amps.data(), dim, bit(g.q), c, s);
            break;
        }
        case GateType::RZ: {
            auto lo = std::polar(1.0, -g.angle / 2);
            auto hi = std::polar(1.0, g.angle / 2);
            size_t mask = bit(g.q);
            for (size_t z = 0; z < dim; ++z) sv.amps[z] *= (z & mask) ? hi : lo;
            break;
        }
        case GateType::CNOT: {
            size_t cmask = bit(g.q), tmask = bit(g.q2);
            for (size_t z = 0; z < dim; ++z)
                if ((z & cmask) && !(z & tmask))
                    std::swap(sv.amps[z], sv.amps[z | tmask]);
            break;
        }
    }
}

void apply_gates(Statevector& sv, const GateList& gl) {
    for (const Gate& g : gl.gates) apply_gate(sv, g);
    if (gl.global_phase != 0.0) {
        auto ph = std::polar(1.0, gl.global_phase);
        for (auto& a : sv.amps) a *= ph;
    }
}

std::string gates_to_text(const GateList& gl) {
    std::ostringstream os;
    os.precision(17);
    for (const Gate& g : gl.gates) {
        switch (g.type) {
            case GateType::H:
                os << "H " << g.q << "\n";
                break;
            case GateType::RX:
                os << "RX " << g.q << " " << g.angle << "\n";
                break;
            case GateType::RZ:
                os << "RZ " << g.q << " " << g.angle << "\n";
                break;
            case GateType::CNOT:
                os << "CNOT " << g.q << " " << g.q2 << "\n";
                break;
        }
    }
    return os.str();
}

}  // namespace mu
