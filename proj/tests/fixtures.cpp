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

#include "fixtures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace mufix {

namespace {

// Small deterministic jitter stream.
struct Jitter {
    uint64_t state;
    explicit Jitter(uint64_t seed) : state(seed * 0x9E3779B97f4A7C15ull + 1) {}
    double next(double amp) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        double u = static_cast<double>(state >> 11) * 0x1.0p-53;
        return amp * (2.0 * u - 1.0);
    }
    mu::Vec3 vec(double amp) { return {next(amp), next(amp), next(amp)}; }
};

constexpr double kCC = 1.54;
constexpr double kCH = 1.09;

}  // namespace

mu::Molecule make_chain(int carbons, uint64_t seed, int ethyl_at) {
    if (carbons < 2) throw std::invalid_argument("need at least two carbons");
    Jitter jit(seed);
    mu::Molecule mol;

    // Planar zig-zag backbone, tetrahedral-ish angle.
    const double dx = kCC * 0.8165;
    const double dy = kCC * 0.5774;
    std::vector<int> c_idx;
    mu::Vec3 pos{0, 0, 0};
    for (int i = 0; i < carbons; ++i) {
        c_idx.push_back(mol.add_atom("C", pos + jit.vec(0.04)));
        pos = pos + mu::Vec3{dx, (i % 2 == 0) ? dy : -dy, 0};
    }
    for (int i = 0; i + 1 < carbons; ++i) mol.add_bond(c_idx[i], c_idx[i + 1], 1);

    auto add_h = [&](int carbon, const mu::Vec3& offset) {
        mu::Vec3 u = offset * (kCH / offset.norm());
        int h = mol.add_atom("H", mol.atom(carbon).position + u + jit.vec(0.03));
        mol.add_bond(carbon, h, 1);
    };

    // Terminal carbons take three hydrogens, middles two (out of plane).
    add_h(c_idx.front(), {-0.9, 0.4, 0.4});
    add_h(c_idx.front(), {-0.4, -0.6, 0.7});
    add_h(c_idx.front(), {-0.4, 0.2, -0.9});
    add_h(c_idx.back(), {0.9, 0.4, 0.4});
    add_h(c_idx.back(), {0.4, -0.6, -0.7});
    add_h(c_idx.back(), {0.4, 0.5, 0.7});
    for (int i = 1; i + 1 < carbons; ++i) {
        add_h(c_idx[i], {0, (i % 2 == 0) ? -0.35 : 0.35, 1.0});
        add_h(c_idx[i], {0, (i % 2 == 0) ? -0.35 : 0.35, -1.0});
    }

    if (ethyl_at >= 1) {
        if (ethyl_at >= carbons - 1)
            throw std::invalid_argument("branch must attach to a middle carbon");
        mu::Vec3 base = mol.atom(c_idx[static_cast<size_t>(ethyl_at)]).position;
        int b1 = mol.add_atom("C", base + mu::Vec3{0.2, 1.1, 1.0} + jit.vec(0.04));
        int b2 = mol.add_atom(
            "C", mol.atom(b1).position + mu::Vec3{1.1, 0.6, 0.8} + jit.vec(0.04));
        mol.add_bond(c_idx[static_cast<size_t>(ethyl_at)], b1, 1);
        mol.add_bond(b1, b2, 1);
        add_h(b1, {-0.8, 0.5, 0.5});
        add_h(b1, {0.3, -0.4, 1.0});
        add_h(b2, {0.9, 0.0, 0.5});
        add_h(b2, {0.3, 1.0, 0.2});
        add_h(b2, {0.5, -0.3, -0.9});
    }

    mol.finalize();
    return mol;
}

mu::Molecule molecule_with_m(int m, uint64_t seed, bool branched) {
    if (m < 1) throw std::invalid_argument("need m >= 1");
    if (branched && m >= 2)
        return make_chain(m + 2, seed, (m + 2) / 2);  // branch adds one torsion
    return make_chain(m + 3, seed);
}

mu::Molecule ethane() { return make_chain(2, 0); }
mu::Molecule butane() { return make_chain(4, 0); }

mu::Molecule benzene() {
    mu::Molecule mol;
    const double r = 1.39;
    std::vector<int> ring;
    for (int k = 0; k < 6; ++k) {
        double a = k * std::numbers::pi / 3.0;
        ring.push_back(mol.add_atom("C", {r * std::cos(a), r * std::sin(a), 0}));
    }
    for (int k = 0; k < 6; ++k) mol.add_bond(ring[k], ring[(k + 1) % 6], 1 + k % 2);
    for (int k = 0; k < 6; ++k) {
        double a = k * std::numbers::pi / 3.0;
        int h = mol.add_atom(
            "H", {(r + 1.08) * std::cos(a), (r + 1.08) * std::sin(a), 0});
        mol.add_bond(ring[k], h, 1);
    }
    mol.finalize();
    return mol;
}

std::string benzene_molfile() {
    // Minimal V2000 table for the same benzene ring.
    std::string s;
    s += "benzene\n  fixture\n\n";
    s += " 12 12  0  0  0  0  0  0  0  0999 V2000\n";
    char buf[128];
    const double r = 1.39;
    for (int k = 0; k < 6; ++k) {
        double a = k * 3.14159265358979323846 / 3.0;
        std::snprintf(buf, sizeof(buf), "%10.4f%10.4f%10.4f C   0  0\n",
                      r * std::cos(a), r * std::sin(a), 0.0);
        s += buf;
    }
    for (int k = 0; k < 6; ++k) {
        double a = k * 3.14159265358979323846 / 3.0;
        std::snprintf(buf, sizeof(buf), "%10.4f%10.4f%10.4f H   0  0\n",
                      (r + 1.08) * std::cos(a), (r + 1.08) * std::sin(a), 0.0);
        s += buf;
    }
    for (int k = 0; k < 6; ++k) {
        std::snprintf(buf, sizeof(buf), "%3d%3d%3d\n", k + 1, (k + 1) % 6 + 1,
                      1 + k % 2);
        s += buf;
    }
    for (int k = 0; k < 6; ++k) {
        std::snprintf(buf, sizeof(buf), "%3d%3d%3d\n", k + 1, k + 7, 1);
        s += buf;
    }
    s += "M  END\n";
    return s;
}

std::string two_atom_xyzb() {
    return "2\nminimal pair\nC 0 0 0\nC 1.5 0 0\n\n0 1 1\n";
}

std::vector<FixtureMol> fixture_set(int count, int m_min, int m_max, uint64_t seed) {
    if (m_min < 1 || m_max < m_min) throw std::invalid_argument("bad m range");
    std::vector<FixtureMol> out;
    for (int i = 0; i < count; ++i) {
        int m = m_min + i % (m_max - m_min + 1);
        bool branched = (m >= 2) && (i % 3 == 2);
        FixtureMol f;
        f.m = m;
        f.name = "fix_" + std::to_string(i) + "_m" + std::to_string(m) +
                 (branched ? "b" : "c");
        f.mol = molecule_with_m(m, seed + static_cast<uint64_t>(i) * 131, branched);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<std::string> write_fixture_dir(const std::string& dir,
                                           const std::vector<FixtureMol>& set) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> paths;
    for (const FixtureMol& f : set) {
        fs::path p = fs::path(dir) / (f.name + ".xyzb");
        std::ofstream out(p, std::ios::binary);
        out << mu::write_xyz_bonds(f.mol, f.name);
        paths.push_back(p.string());
    }
    return paths;
}

}  // namespace mufix
