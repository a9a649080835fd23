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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mu/vec3.hpp"

namespace mu {

/// Input error carrying a 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                      : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct Atom {
    std::string element;
    Vec3 position;

    bool is_hydrogen() const { return element == "H"; }
};

struct Bond {
    int a = 0;
    int b = 0;
    int order = 1;
    bool in_ring = false;
};

/// Atom/bond graph with 3D coordinates. Connected by construction:
/// finalize() rejects disconnected inputs and annotates ring membership
/// (a bond is in a ring iff it is not a bridge).
class Molecule {
public:
    int add_atom(std::string element, Vec3 position);
    void add_bond(int a, int b, int order = 1);
    /// Marks an explicit rotatable-bond override (sidecar ROTATABLE lines).
    void add_rotatable_override(int a, int b);

    /// Builds adjacency, checks connectivity, flags ring bonds.
    void finalize();

    int num_atoms() const { return static_cast<int>(atoms_.size()); }
    int num_bonds() const { return static_cast<int>(bonds_.size()); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    const Atom& atom(int i) const { return atoms_[static_cast<size_t>(i)]; }
    const Bond& bond(int i) const { return bonds_[static_cast<size_t>(i)]; }
    const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }
    const std::vector<std::pair<int, int>>& rotatable_overrides() const {
        return rotatable_overrides_;
    }
    int heavy_atom_count() const;

    /// Index of the bond joining a and b, or -1.
    int find_bond(int a, int b) const;

private:
    std::vector<Atom> atoms_;
    std::vector<Bond> bonds_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::pair<int, int>> rotatable_overrides_;
    bool finalized_ = false;
};

/// XYZ+bonds format: atom count line, comment line, N "symbol x y z" lines,
/// a blank line, then "a b order" bond lines (0-based) and optional
/// "ROTATABLE a b" override lines.
Molecule parse_xyz_bonds(const std::string& text);
std::string write_xyz_bonds(const Molecule& mol, const std::string& comment = "");
std::string write_xyz_bonds(const Molecule& mol, const std::vector<Vec3>& positions,
                            const std::string& comment);

/// MDL MOL V2000 connection-table subset: counts line, atom block, bond block.
Molecule parse_mol_v2000(const std::string& text);

/// Dispatches on file extension (.mol/.sdf -> V2000, otherwise XYZ+bonds).
Molecule load_molecule_file(const std::string& path);

}  // namespace mu
