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

#include "mu/molecule.hpp"

namespace mufix {

/// Alkane-like zig-zag chain of `carbons` backbone atoms with hydrogens
/// filled in; coordinates jittered deterministically by `seed`. An ethyl
/// branch attached at backbone index `ethyl_at` (if >= 1) adds one
/// rotatable bond.
mu::Molecule make_chain(int carbons, uint64_t seed = 0, int ethyl_at = -1);

/// Chain picked to have exactly `m` rotatable bonds under the detection
/// rule; `variant` switches between the plain chain and a branched form.
mu::Molecule molecule_with_m(int m, uint64_t seed, bool branched = false);

mu::Molecule ethane();
mu::Molecule butane();
mu::Molecule benzene();

std::string benzene_molfile();
std::string two_atom_xyzb();

/// Deterministic set cycling m through [m_min, m_max].
struct FixtureMol {
    std::string name;
    mu::Molecule mol;
    int m = 0;
};
std::vector<FixtureMol> fixture_set(int count, int m_min, int m_max,
                                    uint64_t seed = 7);

/// Writes a fixture set as .xyzb files; returns the paths.
std::vector<std::string> write_fixture_dir(const std::string& dir,
                                           const std::vector<FixtureMol>& set);

}  // namespace mufix
