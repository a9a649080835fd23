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

#include <span>
#include <vector>

#include "mu/molgraph.hpp"
#include "mu/vec3.hpp"

namespace mu {

/// Axis-angle rotation about the line through `pivot` with unit direction
/// `axis`.
struct RotationSpec {
    Vec3 axis;
    Vec3 pivot;
    double angle = 0.0;
};

/// One torsion angle per rotatable bond, radians in [0, 2pi).
using TorsionAssignment = std::vector<double>;

struct Conformation {
    std::vector<Vec3> positions;
    int num_atoms() const { return static_cast<int>(positions.size()); }
};

/// R = I + sin(t) K + (1 - cos(t)) K^2 for the skew matrix K of the axis.
/// Throws if the axis is not unit length (1e-12).
Mat3 rodrigues_matrix(const RotationSpec& spec);

Vec3 apply_rotation(const Vec3& p, const RotationSpec& spec);

/// Applies the specs in order: first element acts first.
Vec3 compose_chain(const Vec3& p, std::span<const RotationSpec> specs);

/// Rotation about torsion t by `angle`, oriented static->mobile; a negative
/// axis_sign flips the axis (rotating the other side of the cut).
RotationSpec torsion_rotation(const Molecule& mol, const FragmentDecomposition& fd,
                              int torsion, double angle, int axis_sign = +1);

/// Squared distance between alpha and beta after rotating beta along its
/// torsion path, Ångström². Throws for a same-fragment pair.
double pair_sq_dist(const Molecule& mol, const FragmentDecomposition& fd, int alpha,
                    int beta, const TorsionAssignment& theta);

/// Sum of pair_sq_dist over unordered cross-fragment pairs.
double molecular_volume(const Molecule& mol, const FragmentDecomposition& fd,
                        const TorsionAssignment& theta, bool include_hydrogens = true);

/// Places every atom by rotating fragment subtrees; intra-fragment
/// geometry is preserved.
Conformation realize_conformation(const Molecule& mol, const FragmentDecomposition& fd,
                                  const TorsionAssignment& theta);

/// Same volume as molecular_volume but summed over realized positions
/// (independent code path, kernel-accelerated).
double volume_of_conformation(const Molecule& mol, const FragmentDecomposition& fd,
                              const Conformation& conf, bool include_hydrogens = true);

/// sqrt(mean squared deviation) over atoms, no superposition.
double rmsd(const Conformation& a, const Conformation& b);

/// RMSD after optimal rigid superposition (quaternion method); opt-in.
double rmsd_aligned(const Conformation& a, const Conformation& b);

}  // namespace mu
