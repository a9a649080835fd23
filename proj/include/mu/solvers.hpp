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
#include <string>
#include <vector>

#include "mu/encoding.hpp"
#include "mu/geometry.hpp"
#include "mu/polynomial.hpp"

namespace mu {

/// Ballistic simulated bifurcation parameters. a(t) ramps linearly from 0
/// to a0 across the run; c0 <= 0 self-calibrates so gradient and harmonic
/// forces are comparable at ramp end.
struct BsbConfig {
    double a0 = 1.0;
    double c0 = 0.0;  // <= 0 -> auto
    double dt = 0.5;
    int steps = 100;
};

struct SaConfig {
    double initial_acceptance = 0.8;
    double cooling_factor = 0.95;
    int steps = 100;         // sweeps
    int moves_per_step = 0;  // 0 -> one proposal per torsion
};

struct SolveResult {
    std::string solver;
    std::vector<int8_t> best_assignment;  // binary solvers
    std::vector<double> best_theta;       // grid-angle solvers (brute, greedy)
    double best_volume = 0.0;
    std::vector<double> trace;  // best-so-far volume per step
    double wall_seconds = 0.0;  // inner loop only
    uint64_t seed = 0;
};

std::string solve_result_to_json(const SolveResult& r);

/// bSB over a spin HUBO: semi-implicit symplectic integration of
///   dx/dt = a0 y,   dy/dt = -[a0 - a(t)] x - c0 dE/dx,
/// inelastic walls at |x| = 1, sign readout tracked best-so-far per step.
SolveResult solve_bsb(const Polynomial& objective, int num_vars, const BsbConfig& cfg,
                      uint64_t seed);

/// Metropolis annealing over one-hot states; moves reassign one torsion's
/// hot index so the constraint always holds. T0 is calibrated from sampled
/// uphill moves to the configured initial acceptance; cooling is geometric
/// per sweep.
SolveResult solve_sa(const Polynomial& objective, const VariableRegistry& registry,
                     const SaConfig& cfg, uint64_t seed);

/// Exact grid maximizer of the molecular volume; ties break to the lowest
/// mixed-radix index (first torsion most significant).
SolveResult brute_force(const Molecule& mol, const FragmentDecomposition& fd,
                        const AngleGrid& grid, size_t cap = size_t(1) << 20,
                        bool include_hydrogens = true);

/// Coordinate-ascent sweeps in descending bridge-betweenness order.
SolveResult greedy_geodock(const Molecule& mol, const FragmentDecomposition& fd,
                           const AngleGrid& grid, int rounds = 5,
                           bool include_hydrogens = true);

}  // namespace mu
