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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mu/polynomial.hpp"

namespace mu {

/// Energies of a spin HUBO over all basis states; qubit bit 0 maps to
/// spin +1 (so the all-zero bitstring is the all-plus spin state).
struct DiagonalHamiltonian {
    int n_qubits = 0;
    std::vector<double> energies;  // length 2^n
    double coeff_rms = 1.0;        // RMS of nonconstant |coefficients| at build

    size_t dim() const { return energies.size(); }
    double min_energy() const;
    uint64_t argmin() const;
};

/// Caps at 24 qubits; every variable of p must be below n_qubits.
DiagonalHamiltonian build_diagonal(const Polynomial& p, int n_qubits);

/// Uniform scaling by 1 / RMS(nonconstant |coefficients|); the argmin basis
/// state is untouched. Errors on a polynomial without nonconstant terms.
Polynomial rescale(const Polynomial& p);
DiagonalHamiltonian rescale(const DiagonalHamiltonian& h);

struct QaoaParams {
    double gamma = 0.0;  // phase (cost) layer angle
    double beta = 0.0;   // mixer layer angle
    int layers = 1;      // single-layer ansatz
};

struct Statevector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amps;
    double norm() const;
};

Statevector uniform_state(int n_qubits);

/// H^n |0>, then elementwise phase e^{-i gamma E(z)}, then RX(2 beta) on
/// every qubit.
Statevector run_qaoa(const DiagonalHamiltonian& h, const QaoaParams& params);

double expectation(const DiagonalHamiltonian& h, const Statevector& sv);

struct Landscape {
    int resolution = 0;
    std::vector<double> gammas, betas;
    std::vector<double> values;  // row-major [gamma][beta]
    double at(int gi, int bi) const {
        return values[static_cast<size_t>(gi) * gammas.size() + static_cast<size_t>(bi)];
    }
};

/// Expectation on the inclusive [0, 2pi]^2 grid (resolution >= 2 points per
/// axis).
Landscape landscape(const DiagonalHamiltonian& h, int resolution);
std::string landscape_csv(const Landscape& l);

/// Best grid point of a landscape as starting parameters.
QaoaParams best_grid_point(const Landscape& l);

struct OptimizeResult {
    QaoaParams params;
    std::vector<double> trace;  // best expectation so far, nonincreasing
};

/// Derivative-free coordinate search with step halving (down to 1e-4).
OptimizeResult optimize(const DiagonalHamiltonian& h, QaoaParams start,
                        double initial_step = 0.19634954084936207);  // 2pi/32

/// Multinomial sample of |amp|^2; deterministic for a fixed seed.
std::map<uint64_t, uint64_t> sample(const Statevector& sv, uint64_t shots,
                                    uint64_t seed);
std::string histogram_csv(const Statevector& sv, const std::map<uint64_t, uint64_t>& counts,
                          uint64_t shots);
/// Outcome with the most counts (ties to the lower bitstring).
uint64_t mode_outcome(const std::map<uint64_t, uint64_t>& counts);

std::string bitstring(uint64_t z, int n_qubits);  // qubit 0 leftmost

enum class GateType { H, RX, RZ, CNOT };

struct Gate {
    GateType type;
    int q = 0;       // target (control for CNOT is q, target q2)
    int q2 = -1;
    double angle = 0.0;
};

struct GateList {
    std::vector<Gate> gates;
    double global_phase = 0.0;
};

/// e^{i gamma Z...Z} on the term's qubits: a CNOT ladder onto the last
/// qubit, RZ(-2 gamma) there, and the mirrored ladder. Degree k uses
/// 2(k-1) CNOTs and one RZ. The empty term is a recorded global phase.
GateList decompose_term(const Monomial& term, double gamma);

/// Gate realization of the full cost layer e^{-i gamma E(z)}.
GateList cost_layer_gates(const Polynomial& p, double gamma);

void apply_gate(Statevector& sv, const Gate& g);
void apply_gates(Statevector& sv, const GateList& gates);

std::string gates_to_text(const GateList& gates);

}  // namespace mu
