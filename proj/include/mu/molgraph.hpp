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

#include <utility>
#include <vector>

#include "mu/molecule.hpp"

namespace mu {

/// A bond whose removal splits the molecule in two. The mobile end leads
/// into the fragment subtree that rotates; the static end stays put and
/// carries the rotation pivot.
struct RotatableBond {
    int bond_index = -1;
    int static_end = -1;
    int mobile_end = -1;
    int torsion_index = -1;
};

/// Partition of atoms into rigid fragments plus the rooted tree whose
/// edges are the rotatable bonds. Fragment ids are ordered by smallest
/// contained atom index; the root is the largest fragment (ties by id).
struct FragmentDecomposition {
    std::vector<int> fragment_of;                 // atom -> fragment id
    int fragment_count = 0;
    int root_fragment = 0;
    std::vector<std::vector<int>> fragment_atoms; // fragment -> sorted atoms
    std::vector<int> parent_fragment;             // -1 at root
    std::vector<int> parent_torsion;              // torsion to parent, -1 at root
    std::vector<int> depth;                       // root depth 0
    // Rotatable bonds re-oriented so static_end sits on the root side.
    std::vector<RotatableBond> torsions;
    // Per torsion: the fragment on its mobile side.
    std::vector<int> mobile_fragment;

    int num_torsions() const { return static_cast<int>(torsions.size()); }
};

/// Rotatable bonds along the fragment-tree path between two atoms,
/// ordered nearest-to-beta first. axis_sign is +1 where beta sits on the
/// bond's mobile side and -1 where it sits on the static side (the
/// rotation axis flips there when only beta's side is rotated).
struct TorsionPath {
    int alpha = -1;
    int beta = -1;
    std::vector<int> torsions;
    std::vector<int> axis_sign;

    int length() const { return static_cast<int>(torsions.size()); }
};

/// Detection rule: order-1 bridge bonds with at least two non-hydrogen
/// atoms on each side. Explicit ROTATABLE overrides in the input replace
/// the rule. torsion_index follows bond order; static_end is put on the
/// larger side (ties to the side with the lower atom index).
std::vector<RotatableBond> detect_rotatable_bonds(const Molecule& mol);

FragmentDecomposition decompose_fragments(const Molecule& mol,
                                          std::vector<RotatableBond> bonds);

TorsionPath torsion_path(const FragmentDecomposition& fd, int alpha, int beta);

/// Every unordered atom pair with endpoints in different fragments, once.
std::vector<std::pair<int, int>> cross_fragment_pairs(const FragmentDecomposition& fd);
std::vector<std::pair<int, int>> cross_fragment_pairs(const FragmentDecomposition& fd,
                                                      const Molecule& mol,
                                                      bool include_hydrogens);

/// Edge betweenness centrality of a rotatable bond: for a bridge this is
/// the product of the two component sizes.
double bridge_betweenness(const Molecule& mol, const RotatableBond& rb);

}  // namespace mu
