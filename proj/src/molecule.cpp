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

#include "mu/molecule.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mu {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

bool parse_double(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& s, int& out) {
    try {
        size_t pos = 0;
        out = std::stoi(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> read_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream iss(text);
    while (std::getline(iss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

// Bridge detection: iterative DFS with lowlink. A bond is in a ring iff it
// is not a bridge.
std::vector<bool> find_bridges(int n, const std::vector<Bond>& bonds,
                               const std::vector<std::vector<int>>& adj_bonds) {
    std::vector<bool> is_bridge(bonds.size(), false);
    std::vector<int> disc(static_cast<size_t>(n), -1);
    std::vector<int> low(static_cast<size_t>(n), 0);
    int timer = 0;

    struct Frame {
        int v;
        int parent_bond;
        size_t next;
    };
    std::vector<Frame> stack;
    for (int start = 0; start < n; ++start) {
        if (disc[static_cast<size_t>(start)] >= 0) continue;
        stack.push_back({start, -1, 0});
        disc[static_cast<size_t>(start)] = low[static_cast<size_t>(start)] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& edges = adj_bonds[static_cast<size_t>(f.v)];
            if (f.next < edges.size()) {
                int bi = edges[f.next++];
                if (bi == f.parent_bond) continue;
                const Bond& b = bonds[static_cast<size_t>(bi)];
                int w = (b.a == f.v) ? b.b : b.a;
                if (disc[static_cast<size_t>(w)] < 0) {
                    disc[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = timer++;
                    stack.push_back({w, bi, 0});
                } else {
                    low[static_cast<size_t>(f.v)] =
                        std::min(low[static_cast<size_t>(f.v)], disc[static_cast<size_t>(w)]);
                }
            } else {
                int v = f.v;
                int pb = f.parent_bond;
                stack.pop_back();
                if (!stack.empty()) {
                    int p = stack.back().v;
                    low[static_cast<size_t>(p)] =
                        std::min(low[static_cast<size_t>(p)], low[static_cast<size_t>(v)]);
                    if (low[static_cast<size_t>(v)] > disc[static_cast<size_t>(p)])
                        is_bridge[static_cast<size_t>(pb)] = true;
                }
            }
        }
    }
    return is_bridge;
}

}  // namespace

int Molecule::add_atom(std::string element, Vec3 position) {
    if (!position.finite()) throw std::invalid_argument("atom position not finite");
    atoms_.push_back({std::move(element), position});
    finalized_ = false;
    return static_cast<int>(atoms_.size()) - 1;
}

void Molecule::add_bond(int a, int b, int order) {
    if (a == b) throw std::invalid_argument("bond endpoints must differ");
    if (a < 0 || b < 0 || a >= num_atoms() || b >= num_atoms())
        throw std::out_of_range("bond index out of range");
    if (order < 1) throw std::invalid_argument("bond order must be >= 1");
    if (find_bond(a, b) >= 0) throw std::invalid_argument("duplicate bond");
    bonds_.push_back({a, b, order, false});
    finalized_ = false;
}

void Molecule::add_rotatable_override(int a, int b) {
    rotatable_overrides_.emplace_back(a, b);
}

int Molecule::find_bond(int a, int b) const {
    for (size_t i = 0; i < bonds_.size(); ++i) {
        const Bond& bd = bonds_[i];
        if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
            return static_cast<int>(i);
    }
    return -1;
}

int Molecule::heavy_atom_count() const {
    int n = 0;
    for (const Atom& a : atoms_)
        if (!a.is_hydrogen()) ++n;
    return n;
}

void Molecule::finalize() {
    if (atoms_.empty()) throw ParseError("molecule has no atoms");
    adjacency_.assign(atoms_.size(), {});
    std::vector<std::vector<int>> adj_bonds(atoms_.size());
    for (size_t i = 0; i < bonds_.size(); ++i) {
        const Bond& b = bonds_[i];
        adjacency_[static_cast<size_t>(b.a)].push_back(b.b);
        adjacency_[static_cast<size_t>(b.b)].push_back(b.a);
        adj_bonds[static_cast<size_t>(b.a)].push_back(static_cast<int>(i));
        adj_bonds[static_cast<size_t>(b.b)].push_back(static_cast<int>(i));
    }

    // Connectivity.
    std::vector<bool> seen(atoms_.size(), false);
    std::vector<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int w : adjacency_[static_cast<size_t>(v)])
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = true;
                queue.push_back(w);
            }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }))
        throw ParseError("molecule graph is disconnected");

    std::vector<bool> bridge = find_bridges(num_atoms(), bonds_, adj_bonds);
    for (size_t i = 0; i < bonds_.size(); ++i) bonds_[i].in_ring = !bridge[i];

    for (auto& [a, b] : rotatable_overrides_) {
        if (find_bond(a, b) < 0)
            throw ParseError("ROTATABLE override names a missing bond " +
                             std::to_string(a) + "-" + std::to_string(b));
    }
    finalized_ = true;
}

Molecule parse_xyz_bonds(const std::string& text) {
    auto lines = read_lines(text);
    if (lines.empty()) throw ParseError("empty input", 1);

    int n = 0;
    if (!parse_int(trim(lines[0]), n) || n <= 0)
        throw ParseError("malformed atom count header", 1);
    if (lines.size() < static_cast<size_t>(n) + 2)
        throw ParseError("truncated atom block", static_cast<int>(lines.size()));

    Molecule mol;
    for (int i = 0; i < n; ++i) {
        int ln = i + 3;
        auto toks = split_ws(lines[static_cast<size_t>(i) + 2]);
        if (toks.size() != 4) throw ParseError("expected 'symbol x y z'", ln);
        Vec3 p;
        if (!parse_double(toks[1], p.x) || !parse_double(toks[2], p.y) ||
            !parse_double(toks[3], p.z))
            throw ParseError("non-numeric coordinate", ln);
        if (!p.finite()) throw ParseError("non-finite coordinate", ln);
        mol.add_atom(toks[0], p);
    }

    for (size_t li = static_cast<size_t>(n) + 2; li < lines.size(); ++li) {
        int ln = static_cast<int>(li) + 1;
        auto toks = split_ws(lines[li]);
        if (toks.empty()) continue;
        if (toks[0] == "ROTATABLE") {
            int a, b;
            if (toks.size() != 3 || !parse_int(toks[1], a) || !parse_int(toks[2], b))
                throw ParseError("expected 'ROTATABLE a b'", ln);
            mol.add_rotatable_override(a, b);
            continue;
        }
        int a, b, order;
        if (toks.size() != 3 || !parse_int(toks[0], a) || !parse_int(toks[1], b) ||
            !parse_int(toks[2], order))
            throw ParseError("expected bond line 'a b order'", ln);
        try {
            mol.add_bond(a, b, order);
        } catch (const std::exception& e) {
            throw ParseError(e.what(), ln);
        }
    }

    mol.finalize();
    return mol;
}

std::string write_xyz_bonds(const Molecule& mol, const std::vector<Vec3>& positions,
                            const std::string& comment) {
    if (positions.size() != static_cast<size_t>(mol.num_atoms()))
        throw std::invalid_argument("position count mismatch");
    std::ostringstream os;
    os << mol.num_atoms() << "\n" << comment << "\n";
    char buf[96];
    for (int i = 0; i < mol.num_atoms(); ++i) {
        const Vec3& p = positions[static_cast<size_t>(i)];
        std::snprintf(buf, sizeof(buf), " %.17g %.17g %.17g", p.x, p.y, p.z);
        os << mol.atom(i).element << buf << "\n";
    }
    os << "\n";
    for (const Bond& b : mol.bonds()) os << b.a << " " << b.b << " " << b.order << "\n";
    for (const auto& [a, b] : mol.rotatable_overrides())
        os << "ROTATABLE " << a << " " << b << "\n";
    return os.str();
}

std::string write_xyz_bonds(const Molecule& mol, const std::string& comment) {
    std::vector<Vec3> pos;
    pos.reserve(static_cast<size_t>(mol.num_atoms()));
    for (const Atom& a : mol.atoms()) pos.push_back(a.position);
    return write_xyz_bonds(mol, pos, comment);
}

Molecule parse_mol_v2000(const std::string& text) {
    auto lines = read_lines(text);
    if (lines.size() < 4) throw ParseError("molfile shorter than header + counts", 1);
    const std::string& counts = lines[3];
    if (counts.find("V3000") != std::string::npos)
        throw ParseError("V3000 connection tables are not supported", 4);
    if (counts.size() < 6) throw ParseError("malformed counts line", 4);

    int natoms = 0, nbonds = 0;
    if (!parse_int(trim(counts.substr(0, 3)), natoms) ||
        !parse_int(trim(counts.substr(3, 3)), nbonds))
        throw ParseError("malformed counts line", 4);
    if (natoms <= 0) throw ParseError("counts line declares no atoms", 4);
    if (nbonds < 0) throw ParseError("negative bond count", 4);
    if (lines.size() < 4 + static_cast<size_t>(natoms) + static_cast<size_t>(nbonds))
        throw ParseError("atom/bond block shorter than counts line declares",
                         static_cast<int>(lines.size()));

    Molecule mol;
    for (int i = 0; i < natoms; ++i) {
        int ln = 5 + i;
        const std::string& l = lines[static_cast<size_t>(ln) - 1];
        if (l.size() < 32) throw ParseError("atom line too short", ln);
        Vec3 p;
        if (!parse_double(trim(l.substr(0, 10)), p.x) ||
            !parse_double(trim(l.substr(10, 10)), p.y) ||
            !parse_double(trim(l.substr(20, 10)), p.z))
            throw ParseError("non-numeric coordinate", ln);
        std::string sym = trim(l.substr(31, std::min<size_t>(3, l.size() - 31)));
        if (sym.empty()) throw ParseError("missing element symbol", ln);
        mol.add_atom(sym, p);
    }
    for (int i = 0; i < nbonds; ++i) {
        int ln = 5 + natoms + i;
        const std::string& l = lines[static_cast<size_t>(ln) - 1];
        if (l.size() < 9) throw ParseError("bond line too short", ln);
        int a, b, order;
        if (!parse_int(trim(l.substr(0, 3)), a) || !parse_int(trim(l.substr(3, 3)), b) ||
            !parse_int(trim(l.substr(6, 3)), order))
            throw ParseError("malformed bond line", ln);
        try {
            mol.add_bond(a - 1, b - 1, order);  // V2000 is 1-based
        } catch (const std::exception& e) {
            throw ParseError(e.what(), ln);
        }
    }

    mol.finalize();
    return mol;
}

Molecule load_molecule_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string lower = path;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower.ends_with(".mol") || lower.ends_with(".sdf"))
        return parse_mol_v2000(ss.str());
    return parse_xyz_bonds(ss.str());
}

}  // namespace mu
