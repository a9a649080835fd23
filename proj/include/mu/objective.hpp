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

#include "mu/encoding.hpp"
#include "mu/geometry.hpp"
#include "mu/molgraph.hpp"
#include "mu/polynomial.hpp"

namespace mu {

struct ObjectiveConfig {
    EncodingKind encoding = EncodingKind::Phase;
    int d = 16;
    PhaseTable table = PhaseTable::General;
    bool include_hydrogens = true;
    /// One-hot penalty weight; <= 0 selects twice the largest absolute
    /// coefficient of the unpenalized objective.
    double a_const = 0.0;
};

struct BuiltObjective {
    Polynomial poly{Domain::Spin};
    VariableRegistry registry;
    PhaseCode code;          // populated for phase encoding
    double a_const = 0.0;    // penalty weight applied (one-hot)
    double build_seconds = 0.0;
};

/// The minimization objective O({b}) = -D(Theta): squared distances are
/// expanded symbolically through the rotation chains (each coordinate a
/// per-torsion trig polynomial) and the per-torsion sin/cos are then
/// substituted with the encoding's binary polynomials. For one-hot the
/// quadratic constraint penalty is added on top.
///
/// Throws std::invalid_argument when there are no rotatable bonds.
BuiltObjective build_objective(const Molecule& mol, const FragmentDecomposition& fd,
                               const ObjectiveConfig& cfg);

/// Decodes a solver assignment into grid torsion angles for the objective's
/// encoding.
std::vector<double> decode_assignment(const BuiltObjective& obj,
                                      std::span<const int8_t> assignment);

}  // namespace mu
