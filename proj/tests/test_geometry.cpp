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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mu/geometry.hpp"

using namespace mu;
using std::numbers::pi;

namespace {

std::mt19937_64 rng(12345);

double urand(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Vec3 random_unit() {
    while (true) {
        Vec3 v{urand(-1, 1), urand(-1, 1), urand(-1, 1)};
        double n = v.norm();
        if (n > 0.1) return v * (1.0 / n);
    }
}

TorsionAssignment random_theta(int m) {
    TorsionAssignment t(static_cast<size_t>(m));
    for (double& v : t) v = urand(0, 2 * pi);
    return t;
}

}  // namespace

TEST_CASE("rodrigues matrix basics") {
    SUBCASE("zero angle is the identity") {
        Mat3 r = rodrigues_matrix({{0, 0, 1}, {0, 0, 0}, 0.0});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(r.m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
    SUBCASE("quarter turn about z") {
        Mat3 r = rodrigues_matrix({{0, 0, 1}, {0, 0, 0}, pi / 2});
        Vec3 v = r * Vec3{1, 0, 0};
        CHECK(v.x == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v.y == doctest::Approx(1.0));
        CHECK(std::abs(v.z) < 1e-12);
    }
    SUBCASE("non-unit axis is rejected") {
        CHECK_THROWS_AS(rodrigues_matrix({{0, 0, 2}, {0, 0, 0}, 1.0}),
                        std::invalid_argument);
    }
    SUBCASE("orthogonal with unit determinant on random input") {
        for (int trial = 0; trial < 1000; ++trial) {
            Mat3 r = rodrigues_matrix({random_unit(), {0, 0, 0}, urand(-10, 10)});
            Mat3 rtr = r.transpose() * r;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(std::abs(rtr.m[i][j] - (i == j ? 1.0 : 0.0)) < 1e-12);
            CHECK(std::abs(r.det() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("apply_rotation fixed points and inverses") {
    RotationSpec spec{random_unit(), {1, 2, 3}, 1.2345};
    SUBCASE("pivot is fixed") {
        Vec3 p = apply_rotation(spec.pivot, spec);
        CHECK(sq_dist(p, spec.pivot) < 1e-24);
    }
    SUBCASE("points on the axis are fixed") {
        Vec3 on_axis = spec.pivot + spec.axis * 2.7;
        Vec3 p = apply_rotation(on_axis, spec);
        CHECK(sq_dist(p, on_axis) < 1e-24);
    }
    SUBCASE("theta then -theta returns the original") {
        for (int trial = 0; trial < 100; ++trial) {
            RotationSpec s{random_unit(), {urand(-2, 2), urand(-2, 2), urand(-2, 2)},
                           urand(-6, 6)};
            RotationSpec inv = s;
            inv.angle = -s.angle;
            Vec3 p{urand(-5, 5), urand(-5, 5), urand(-5, 5)};
            Vec3 back = apply_rotation(apply_rotation(p, s), inv);
            CHECK(sq_dist(back, p) < 1e-24);
        }
    }
}

TEST_CASE("compose_chain") {
    SUBCASE("empty chain is the identity") {
        Vec3 p{1, 2, 3};
        Vec3 q = compose_chain(p, {});
        CHECK(sq_dist(p, q) == 0.0);
    }
    SUBCASE("one spec matches apply_rotation") {
        RotationSpec s{random_unit(), {0.5, -1, 2}, 0.9};
        Vec3 p{2, 0, -1};
        std::vector<RotationSpec> specs{s};
        CHECK(sq_dist(compose_chain(p, specs), apply_rotation(p, s)) < 1e-28);
    }
    SUBCASE("same-axis rotations add angles") {
        Vec3 axis = random_unit();
        Vec3 pivot{0.3, 0.1, -0.7};
        double a = 0.8, b = -1.7;
        std::vector<RotationSpec> two{{axis, pivot, a}, {axis, pivot, b}};
        RotationSpec sum{axis, pivot, a + b};
        for (int trial = 0; trial < 20; ++trial) {
            Vec3 p{urand(-3, 3), urand(-3, 3), urand(-3, 3)};
            CHECK(sq_dist(compose_chain(p, two), apply_rotation(p, sum)) < 1e-24);
        }
    }
}

TEST_CASE("pair_sq_dist reduces to the initial distance at zero") {
    Molecule mol = mufix::make_chain(5, 21);
    auto fd = decompose_fragments(mol, detect_rotatable_bonds(mol));
    TorsionAssignment zero(static_cast<size_t>(fd.num_torsions()), 0.0);
    for (auto [a, b] : cross_fragment_pairs(fd)) {
        double d = pair_sq_dist(mol, fd, a, b, zero);
        CHECK(d == doctest::Approx(sq_dist(mol.atom(a).position, mol.atom(b).position))
                       .epsilon(1e-12));
        CHECK(d >= 0.0);
    }
    CHECK_THROWS_AS(pair_sq_dist(mol, fd, 0, 0, zero), std::invalid_argument);
}

TEST_CASE("single-torsion pi rotation matches a direct Rodrigues computation") {
    // Four heavy atoms, one rotatable bond; beta is the last carbon.
    Molecule mol = mufix::butane();
    auto rbs = detect_rotatable_bonds(mol);
    REQUIRE(rbs.size() == 1);
    auto fd = decompose_fragments(mol, rbs);
    TorsionAssignment theta{pi};

    const RotatableBond& rb = fd.torsions[0];
    Vec3 s = mol.atom(rb.static_end).position;
    Vec3 m = mol.atom(rb.mobile_end).position;
    Vec3 axis = (m - s) * (1.0 / (m - s).norm());

    int alpha = 0, beta = 3;  // backbone ends
    REQUIRE(fd.fragment_of[0] != fd.fragment_of[3]);
    // Hand computation: rotate whichever end lies on the mobile side.
    bool beta_mobile =
        fd.fragment_of[static_cast<size_t>(beta)] == fd.mobile_fragment[0];
    Vec3 rotated = apply_rotation(mol.atom(beta_mobile ? beta : alpha).position,
                                  {axis, s, pi});
    Vec3 fixed = mol.atom(beta_mobile ? alpha : beta).position;
    double expected = sq_dist(fixed, rotated);
    CHECK(pair_sq_dist(mol, fd, alpha, beta, theta) == doctest::Approx(expected));
}

TEST_CASE("realize_conformation") {
    Molecule mol = mufix::make_chain(6, 33);
    auto fd = decompose_fragments(mol, detect_rotatable_bonds(mol));

    SUBCASE("zero torsions reproduce the input") {
        TorsionAssignment zero(static_cast<size_t>(fd.num_torsions()), 0.0);
        Conformation c = realize_conformation(mol, fd, zero);
        for (int i = 0; i < mol.num_atoms(); ++i)
            CHECK(sq_dist(c.positions[static_cast<size_t>(i)], mol.atom(i).position) <
                  1e-24);
    }
    SUBCASE("bond lengths survive any torsion assignment") {
        for (int trial = 0; trial < 25; ++trial) {
            TorsionAssignment theta = random_theta(fd.num_torsions());
            Conformation c = realize_conformation(mol, fd, theta);
            for (const Bond& b : mol.bonds()) {
                double before =
                    sq_dist(mol.atom(b.a).position, mol.atom(b.b).position);
                double after = sq_dist(c.positions[static_cast<size_t>(b.a)],
                                       c.positions[static_cast<size_t>(b.b)]);
                CHECK(after == doctest::Approx(before).epsilon(1e-9));
            }
        }
    }
    SUBCASE("intra-fragment distances are rigid") {
        for (int trial = 0; trial < 10; ++trial) {
            TorsionAssignment theta = random_theta(fd.num_torsions());
            Conformation c = realize_conformation(mol, fd, theta);
            for (int a = 0; a < mol.num_atoms(); ++a)
                for (int b = a + 1; b < mol.num_atoms(); ++b) {
                    if (fd.fragment_of[static_cast<size_t>(a)] !=
                        fd.fragment_of[static_cast<size_t>(b)])
                        continue;
                    double before = sq_dist(mol.atom(a).position, mol.atom(b).position);
                    double after = sq_dist(c.positions[static_cast<size_t>(a)],
                                           c.positions[static_cast<size_t>(b)]);
                    CHECK(std::abs(std::sqrt(after) - std::sqrt(before)) < 1e-9);
                }
        }
    }
    SUBCASE("pair distances match the rotation-chain path") {
        for (int trial = 0; trial < 10; ++trial) {
            TorsionAssignment theta = random_theta(fd.num_torsions());
            Conformation c = realize_conformation(mol, fd, theta);
            for (auto [a, b] : cross_fragment_pairs(fd)) {
                double chain = pair_sq_dist(mol, fd, a, b, theta);
                double realized = sq_dist(c.positions[static_cast<size_t>(a)],
                                          c.positions[static_cast<size_t>(b)]);
                CHECK(chain == doctest::Approx(realized).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("volume: chain path and realized path agree") {
    for (const auto& f : mufix::fixture_set(6, 1, 4)) {
        auto fd = decompose_fragments(f.mol, detect_rotatable_bonds(f.mol));
        for (int trial = 0; trial < 5; ++trial) {
            TorsionAssignment theta = random_theta(fd.num_torsions());
            double via_chain = molecular_volume(f.mol, fd, theta);
            Conformation c = realize_conformation(f.mol, fd, theta);
            double via_realized = volume_of_conformation(f.mol, fd, c);
            CHECK(via_chain ==
                  doctest::Approx(via_realized).epsilon(1e-9).scale(via_chain));
        }
    }
}

TEST_CASE("volume of a rigid molecule is zero") {
    Molecule mol = mufix::ethane();
    auto fd = decompose_fragments(mol, {});
    CHECK(molecular_volume(mol, fd, {}) == 0.0);
}

TEST_CASE("two single-atom fragments at distance 2 give volume 4") {
    // Four collinear-ish atoms; override picks the middle bond, and both
    // middle atoms live in two-atom fragments. Use a hand molecule instead:
    Molecule mol;
    mol.add_atom("C", {0, 0, 0});
    mol.add_atom("C", {2, 0, 0});
    mol.add_bond(0, 1, 1);
    mol.add_rotatable_override(0, 1);
    mol.finalize();
    auto rbs = detect_rotatable_bonds(mol);
    REQUIRE(rbs.size() == 1);
    auto fd = decompose_fragments(mol, rbs);
    CHECK(molecular_volume(mol, fd, {0.0}) == doctest::Approx(4.0));
}

TEST_CASE("volume is invariant under a global rigid motion") {
    Molecule mol = mufix::make_chain(5, 8);
    auto fd = decompose_fragments(mol, detect_rotatable_bonds(mol));
    TorsionAssignment theta = random_theta(fd.num_torsions());
    double v0 = molecular_volume(mol, fd, theta);

    RotationSpec rigid{random_unit(), {0.7, -0.4, 1.1}, 0.777};
    Vec3 shift{1.5, -2.5, 0.5};
    Molecule moved;
    for (const Atom& a : mol.atoms())
        moved.add_atom(a.element, apply_rotation(a.position, rigid) + shift);
    for (const Bond& b : mol.bonds()) moved.add_bond(b.a, b.b, b.order);
    moved.finalize();
    auto fd2 = decompose_fragments(moved, detect_rotatable_bonds(moved));
    CHECK(molecular_volume(moved, fd2, theta) ==
          doctest::Approx(v0).epsilon(1e-9).scale(v0));
}

TEST_CASE("rmsd formula") {
    Conformation a{{{0, 0, 0}, {1, 0, 0}}};
    SUBCASE("identical conformations give zero") { CHECK(rmsd(a, a) == 0.0); }
    SUBCASE("uniform unit translation gives one") {
        Conformation b{{{1, 0, 0}, {2, 0, 0}}};
        CHECK(rmsd(a, b) == doctest::Approx(1.0));
    }
    SUBCASE("1 and 2 Angstrom displacements give sqrt(2.5)") {
        Conformation b{{{1, 0, 0}, {3, 0, 0}}};
        CHECK(rmsd(a, b) == doctest::Approx(std::sqrt(2.5)));
    }
    SUBCASE("length mismatch throws") {
        Conformation b{{{0, 0, 0}}};
        CHECK_THROWS_AS(rmsd(a, b), std::invalid_argument);
    }
}

TEST_CASE("rmsd is symmetric and satisfies the triangle inequality") {
    for (int trial = 0; trial < 50; ++trial) {
        Conformation a, b, c;
        for (int i = 0; i < 6; ++i) {
            a.positions.push_back({urand(-3, 3), urand(-3, 3), urand(-3, 3)});
            b.positions.push_back({urand(-3, 3), urand(-3, 3), urand(-3, 3)});
            c.positions.push_back({urand(-3, 3), urand(-3, 3), urand(-3, 3)});
        }
        double ab = rmsd(a, b), ba = rmsd(b, a), ac = rmsd(a, c), cb = rmsd(c, b);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("aligned rmsd removes a rigid motion") {
    Molecule mol = mufix::make_chain(5, 13);
    Conformation a;
    for (const Atom& at : mol.atoms()) a.positions.push_back(at.position);
    RotationSpec rigid{random_unit(), {0, 0, 0}, 1.3};
    Conformation b;
    for (const Atom& at : mol.atoms())
        b.positions.push_back(apply_rotation(at.position, rigid) + Vec3{3, -1, 2});
    CHECK(rmsd(a, b) > 0.5);
    CHECK(rmsd_aligned(a, b) < 1e-9);
}
