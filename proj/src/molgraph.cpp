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

#include "mu/molgraph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mu {

namespace {

// Atoms reachable from `start` when bond `skip` is removed.
std::vector<int> side_of_cut(const Molecule& mol, int start, int skip_bond) {
    std::vector<bool> seen(static_cast<size_t>(mol.num_atoms()), false);
    std::vector<int> stack{start}, out;
    seen[static_cast<size_t>(start)] = true;
    const Bond& sb = mol.bond(skip_bond);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (int w : mol.adjacency()[static_cast<size_t>(v)]) {
            if ((v == sb.a && w == sb.b) || (v == sb.b && w == sb.a)) continue;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = true;
                stack.push_back(w);
            }
        }
    }
    return out;
}

int heavy_count(const Molecule& mol, const std::vector<int>& atoms) {
    int n = 0;
    for (int a : atoms)
        if (!mol.atom(a).is_hydrogen()) ++n;
    return n;
}

}  // namespace

std::vector<RotatableBond> detect_rotatable_bonds(const Molecule& mol) {
    std::vector<RotatableBond> out;
    const auto& overrides = mol.rotatable_overrides();
    if (!overrides.empty()) {
        for (const auto& [a, b] : overrides) {
            int bi = mol.find_bond(a, b);
            if (bi < 0) throw std::invalid_argument("override bond not present");
            if (mol.bond(bi).in_ring)
                throw std::invalid_argument(
                    "override bond lies on a cycle; its removal does not split the "
                    "molecule");
            auto side_a = side_of_cut(mol, a, bi);
            RotatableBond rb;
            rb.bond_index = bi;
            int other = static_cast<int>(side_a.size());
            bool a_static = other * 2 > mol.num_atoms() ||
                            (other * 2 == mol.num_atoms() && a < b);
            rb.static_end = a_static ? a : b;
            rb.mobile_end = a_static ? b : a;
            rb.torsion_index = static_cast<int>(out.size());
            out.push_back(rb);
        }
        return out;
    }

    for (int bi = 0; bi < mol.num_bonds(); ++bi) {
        const Bond& b = mol.bond(bi);
        if (b.order != 1 || b.in_ring) continue;
        auto side_a = side_of_cut(mol, b.a, bi);
        auto side_b = side_of_cut(mol, b.b, bi);
        if (heavy_count(mol, side_a) < 2 || heavy_count(mol, side_b) < 2) continue;
        RotatableBond rb;
        rb.bond_index = bi;
        bool a_static = side_a.size() > side_b.size() ||
                        (side_a.size() == side_b.size() && b.a < b.b);
        rb.static_end = a_static ? b.a : b.b;
        rb.mobile_end = a_static ? b.b : b.a;
        rb.torsion_index = static_cast<int>(out.size());
        out.push_back(rb);
    }
    return out;
}

FragmentDecomposition decompose_fragments(const Molecule& mol,
                                          std::vector<RotatableBond> bonds) {
    const int n = mol.num_atoms();
    std::vector<bool> cut(static_cast<size_t>(mol.num_bonds()), false);
    for (const RotatableBond& rb : bonds) {
        if (rb.bond_index < 0 || rb.bond_index >= mol.num_bonds())
            throw std::out_of_range("rotatable bond index out of range");
        if (mol.bond(rb.bond_index).in_ring)
            throw std::invalid_argument("listed bond does not disconnect the molecule");
        cut[static_cast<size_t>(rb.bond_index)] = true;
    }

    FragmentDecomposition fd;
    fd.fragment_of.assign(static_cast<size_t>(n), -1);

    // Components of G minus cut bonds, ids ordered by smallest atom index.
    int next_id = 0;
    for (int start = 0; start < n; ++start) {
        if (fd.fragment_of[static_cast<size_t>(start)] >= 0) continue;
        int id = next_id++;
        std::vector<int> stack{start};
        fd.fragment_of[static_cast<size_t>(start)] = id;
        fd.fragment_atoms.emplace_back();
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            fd.fragment_atoms[static_cast<size_t>(id)].push_back(v);
            for (int w : mol.adjacency()[static_cast<size_t>(v)]) {
                int bi = mol.find_bond(v, w);
                if (cut[static_cast<size_t>(bi)]) continue;
                if (fd.fragment_of[static_cast<size_t>(w)] < 0) {
                    fd.fragment_of[static_cast<size_t>(w)] = id;
                    stack.push_back(w);
                }
            }
        }
        std::sort(fd.fragment_atoms[static_cast<size_t>(id)].begin(),
                  fd.fragment_atoms[static_cast<size_t>(id)].end());
    }
    fd.fragment_count = next_id;
    if (fd.fragment_count != static_cast<int>(bonds.size()) + 1)
        throw std::invalid_argument("rotatable bonds do not form a tree over fragments");

    // Sanity: every listed bond joins two distinct fragments.
    for (const RotatableBond& rb : bonds) {
        const Bond& b = mol.bond(rb.bond_index);
        if (fd.fragment_of[static_cast<size_t>(b.a)] ==
            fd.fragment_of[static_cast<size_t>(b.b)])
            throw std::invalid_argument("listed bond does not disconnect the molecule");
    }

    // Root at the largest fragment, ties by lowest id.
    fd.root_fragment = 0;
    for (int f = 1; f < fd.fragment_count; ++f)
        if (fd.fragment_atoms[static_cast<size_t>(f)].size() >
            fd.fragment_atoms[static_cast<size_t>(fd.root_fragment)].size())
            fd.root_fragment = f;

    // BFS over the fragment tree; orient each bond static-side-to-root.
    fd.parent_fragment.assign(static_cast<size_t>(fd.fragment_count), -1);
    fd.parent_torsion.assign(static_cast<size_t>(fd.fragment_count), -1);
    fd.depth.assign(static_cast<size_t>(fd.fragment_count), 0);
    fd.torsions = std::move(bonds);
    fd.mobile_fragment.assign(fd.torsions.size(), -1);

    std::vector<std::vector<std::pair<int, int>>> frag_adj(
        static_cast<size_t>(fd.fragment_count));  // (neighbor fragment, torsion)
    for (const RotatableBond& rb : fd.torsions) {
        const Bond& b = mol.bond(rb.bond_index);
        int fa = fd.fragment_of[static_cast<size_t>(b.a)];
        int fb = fd.fragment_of[static_cast<size_t>(b.b)];
        frag_adj[static_cast<size_t>(fa)].emplace_back(fb, rb.torsion_index);
        frag_adj[static_cast<size_t>(fb)].emplace_back(fa, rb.torsion_index);
    }

    std::vector<int> order{fd.root_fragment};
    std::vector<bool> seen(static_cast<size_t>(fd.fragment_count), false);
    seen[static_cast<size_t>(fd.root_fragment)] = true;
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int f = order[qi];
        for (auto [g, t] : frag_adj[static_cast<size_t>(f)]) {
            if (seen[static_cast<size_t>(g)]) continue;
            seen[static_cast<size_t>(g)] = true;
            fd.parent_fragment[static_cast<size_t>(g)] = f;
            fd.parent_torsion[static_cast<size_t>(g)] = t;
            fd.depth[static_cast<size_t>(g)] = fd.depth[static_cast<size_t>(f)] + 1;
            RotatableBond& rb = fd.torsions[static_cast<size_t>(t)];
            const Bond& b = mol.bond(rb.bond_index);
            int parent_end =
                (fd.fragment_of[static_cast<size_t>(b.a)] == f) ? b.a : b.b;
            rb.static_end = parent_end;
            rb.mobile_end = (parent_end == b.a) ? b.b : b.a;
            fd.mobile_fragment[static_cast<size_t>(t)] = g;
            order.push_back(g);
        }
    }
    return fd;
}

TorsionPath torsion_path(const FragmentDecomposition& fd, int alpha, int beta) {
    int fa = fd.fragment_of.at(static_cast<size_t>(alpha));
    int fb = fd.fragment_of.at(static_cast<size_t>(beta));
    if (fa == fb)
        throw std::invalid_argument("atoms lie in the same rigid fragment");

    TorsionPath path;
    path.alpha = alpha;
    path.beta = beta;

    // Climb both sides to the LCA fragment.
    std::vector<int> up_beta, up_alpha;
    int x = fb, y = fa;
    while (fd.depth[static_cast<size_t>(x)] > fd.depth[static_cast<size_t>(y)]) {
        up_beta.push_back(fd.parent_torsion[static_cast<size_t>(x)]);
        x = fd.parent_fragment[static_cast<size_t>(x)];
    }
    while (fd.depth[static_cast<size_t>(y)] > fd.depth[static_cast<size_t>(x)]) {
        up_alpha.push_back(fd.parent_torsion[static_cast<size_t>(y)]);
        y = fd.parent_fragment[static_cast<size_t>(y)];
    }
    while (x != y) {
        up_beta.push_back(fd.parent_torsion[static_cast<size_t>(x)]);
        x = fd.parent_fragment[static_cast<size_t>(x)];
        up_alpha.push_back(fd.parent_torsion[static_cast<size_t>(y)]);
        y = fd.parent_fragment[static_cast<size_t>(y)];
    }

    for (int t : up_beta) {
        path.torsions.push_back(t);
        path.axis_sign.push_back(+1);
    }
    for (auto it = up_alpha.rbegin(); it != up_alpha.rend(); ++it) {
        path.torsions.push_back(*it);
        path.axis_sign.push_back(-1);
    }
    return path;
}

std::vector<std::pair<int, int>> cross_fragment_pairs(const FragmentDecomposition& fd) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(fd.fragment_of.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (fd.fragment_of[static_cast<size_t>(a)] !=
                fd.fragment_of[static_cast<size_t>(b)])
                out.emplace_back(a, b);
    return out;
}

std::vector<std::pair<int, int>> cross_fragment_pairs(const FragmentDecomposition& fd,
                                                      const Molecule& mol,
                                                      bool include_hydrogens) {
    if (include_hydrogens) return cross_fragment_pairs(fd);
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(fd.fragment_of.size());
    for (int a = 0; a < n; ++a) {
        if (mol.atom(a).is_hydrogen()) continue;
        for (int b = a + 1; b < n; ++b) {
            if (mol.atom(b).is_hydrogen()) continue;
            if (fd.fragment_of[static_cast<size_t>(a)] !=
                fd.fragment_of[static_cast<size_t>(b)])
                out.emplace_back(a, b);
        }
    }
    return out;
}

double bridge_betweenness(const Molecule& mol, const RotatableBond& rb) {
    auto side = side_of_cut(mol, rb.static_end, rb.bond_index);
    double s = static_cast<double>(side.size());
    return s * (static_cast<double>(mol.num_atoms()) - s);
}

}  // namespace mu
