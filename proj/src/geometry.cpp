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

#include "mu/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mu/kernels.hpp"

namespace mu {

namespace {

Mat3 skew(const Vec3& k) {
    Mat3 m = Mat3::zero();
    m.m[0][1] = -k.z;
    m.m[0][2] = k.y;
    m.m[1][0] = k.z;
    m.m[1][2] = -k.x;
    m.m[2][0] = -k.y;
    m.m[2][1] = k.x;
    return m;
}

}  // namespace

Mat3 rodrigues_matrix(const RotationSpec& spec) {
    double n = spec.axis.norm();
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument("rotation axis must be unit length");
    Mat3 k = skew(spec.axis);
    return Mat3::identity() + k * std::sin(spec.angle) +
           (k * k) * (1.0 - std::cos(spec.angle));
}

Vec3 apply_rotation(const Vec3& p, const RotationSpec& spec) {
    return rodrigues_matrix(spec) * (p - spec.pivot) + spec.pivot;
}

Vec3 compose_chain(const Vec3& p, std::span<const RotationSpec> specs) {
    Vec3 q = p;
    for (const RotationSpec& s : specs) q = apply_rotation(q, s);
    return q;
}

RotationSpec torsion_rotation(const Molecule& mol, const FragmentDecomposition& fd,
                              int torsion, double angle, int axis_sign) {
    const RotatableBond& rb = fd.torsions.at(static_cast<size_t>(torsion));
    Vec3 s = mol.atom(rb.static_end).position;
    Vec3 m = mol.atom(rb.mobile_end).position;
    Vec3 axis = m - s;
    double n = axis.norm();
    if (n < 1e-12) throw std::invalid_argument("degenerate rotatable bond axis");
    axis = axis * (1.0 / n);
    if (axis_sign < 0) axis = -axis;
    return RotationSpec{axis, s, angle};
}

double pair_sq_dist(const Molecule& mol, const FragmentDecomposition& fd, int alpha,
                    int beta, const TorsionAssignment& theta) {
    TorsionPath path = torsion_path(fd, alpha, beta);
    std::vector<RotationSpec> chain;
    chain.reserve(path.torsions.size());
    for (size_t i = 0; i < path.torsions.size(); ++i) {
        int t = path.torsions[i];
        chain.push_back(
            torsion_rotation(mol, fd, t, theta.at(static_cast<size_t>(t)),
                             path.axis_sign[i]));
    }
    Vec3 moved = compose_chain(mol.atom(beta).position, chain);
    return sq_dist(mol.atom(alpha).position, moved);
}

double molecular_volume(const Molecule& mol, const FragmentDecomposition& fd,
                        const TorsionAssignment& theta, bool include_hydrogens) {
    double total = 0.0;
    for (auto [a, b] : cross_fragment_pairs(fd, mol, include_hydrogens))
        total += pair_sq_dist(mol, fd, a, b, theta);
    return total;
}

Conformation realize_conformation(const Molecule& mol, const FragmentDecomposition& fd,
                                  const TorsionAssignment& theta) {
    if (theta.size() != fd.torsions.size())
        throw std::invalid_argument("torsion count mismatch");

    // Affine transform per fragment, composed root-outward. A fragment's
    // transform is its parent's followed by the parent-edge rotation about
    // the bond's original line, applied innermost-first on points.
    struct Affine {
        Mat3 r;
        Vec3 t;
        Vec3 apply(const Vec3& p) const { return r * p + t; }
    };
    std::vector<Affine> tf(static_cast<size_t>(fd.fragment_count),
                           Affine{Mat3::identity(), {0, 0, 0}});
    // Fragments in BFS order: parents precede children by construction of
    // depth; process by increasing depth.
    std::vector<int> order(static_cast<size_t>(fd.fragment_count));
    for (int f = 0; f < fd.fragment_count; ++f) order[static_cast<size_t>(f)] = f;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return fd.depth[static_cast<size_t>(a)] < fd.depth[static_cast<size_t>(b)];
    });
    for (int f : order) {
        if (f == fd.root_fragment) continue;
        int t = fd.parent_torsion[static_cast<size_t>(f)];
        RotationSpec spec =
            torsion_rotation(mol, fd, t, theta[static_cast<size_t>(t)], +1);
        Mat3 r = rodrigues_matrix(spec);
        Affine edge{r, spec.pivot - r * spec.pivot};
        const Affine& parent = tf[static_cast<size_t>(fd.parent_fragment[static_cast<size_t>(f)])];
        tf[static_cast<size_t>(f)] = Affine{parent.r * edge.r,
                                            parent.r * edge.t + parent.t};
    }

    Conformation conf;
    conf.positions.resize(static_cast<size_t>(mol.num_atoms()));
    for (int a = 0; a < mol.num_atoms(); ++a)
        conf.positions[static_cast<size_t>(a)] =
            tf[static_cast<size_t>(fd.fragment_of[static_cast<size_t>(a)])].apply(
                mol.atom(a).position);
    return conf;
}

double volume_of_conformation(const Molecule& mol, const FragmentDecomposition& fd,
                              const Conformation& conf, bool include_hydrogens) {
    if (conf.num_atoms() != mol.num_atoms())
        throw std::invalid_argument("conformation size mismatch");
    auto pairs = cross_fragment_pairs(fd, mol, include_hydrogens);
    std::vector<uint32_t> ia, ib;
    ia.reserve(pairs.size());
    ib.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        ia.push_back(static_cast<uint32_t>(a));
        ib.push_back(static_cast<uint32_t>(b));
    }
    static_assert(sizeof(Vec3) == 3 * sizeof(double));
    const double* xyz = &conf.positions[0].x;
    return kernels::sum_sq_pair_dist(xyz, ia.data(), ib.data(), ia.size());
}

double rmsd(const Conformation& a, const Conformation& b) {
    if (a.num_atoms() != b.num_atoms())
        throw std::invalid_argument("conformations have different atom counts");
    if (a.num_atoms() == 0) throw std::invalid_argument("empty conformation");
    double acc = 0.0;
    for (size_t i = 0; i < a.positions.size(); ++i)
        acc += sq_dist(a.positions[i], b.positions[i]);
    return std::sqrt(acc / static_cast<double>(a.num_atoms()));
}

namespace {

// Jacobi eigensolver for a symmetric 4x4; returns the eigenvector of the
// largest eigenvalue.
void jacobi4(double m[4][4], double vec[4]) {
    double v[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += m[p][q] * m[p][q];
        if (off < 1e-24) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(m[p][q]) < 1e-18) continue;
                double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < 4; ++k) {
                    double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < 4; ++k) {
                    double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (int k = 0; k < 4; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (m[i][i] > m[best][best]) best = i;
    for (int k = 0; k < 4; ++k) vec[k] = v[k][best];
}

}  // namespace

double rmsd_aligned(const Conformation& a, const Conformation& b) {
    if (a.num_atoms() != b.num_atoms())
        throw std::invalid_argument("conformations have different atom counts");
    const size_t n = a.positions.size();
    if (n == 0) throw std::invalid_argument("empty conformation");

    Vec3 ca{0, 0, 0}, cb{0, 0, 0};
    for (size_t i = 0; i < n; ++i) {
        ca += a.positions[i];
        cb += b.positions[i];
    }
    ca = ca * (1.0 / static_cast<double>(n));
    cb = cb * (1.0 / static_cast<double>(n));

    // Horn's quaternion method: largest eigenvector of the 4x4 built from
    // the cross-covariance of centered coordinates.
    double sxx = 0, sxy = 0, sxz = 0, syx = 0, syy = 0, syz = 0, szx = 0, szy = 0,
           szz = 0;
    for (size_t i = 0; i < n; ++i) {
        Vec3 p = a.positions[i] - ca;
        Vec3 q = b.positions[i] - cb;
        sxx += p.x * q.x;
        sxy += p.x * q.y;
        sxz += p.x * q.z;
        syx += p.y * q.x;
        syy += p.y * q.y;
        syz += p.y * q.z;
        szx += p.z * q.x;
        szy += p.z * q.y;
        szz += p.z * q.z;
    }
    double k[4][4] = {
        {sxx + syy + szz, syz - szy, szx - sxz, sxy - syx},
        {syz - szy, sxx - syy - szz, sxy + syx, szx + sxz},
        {szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy},
        {sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz}};
    double quat[4];
    jacobi4(k, quat);
    double w = quat[0], x = quat[1], y = quat[2], z = quat[3];
    Mat3 r;
    r.m[0][0] = 1 - 2 * (y * y + z * z);
    r.m[0][1] = 2 * (x * y - w * z);
    r.m[0][2] = 2 * (x * z + w * y);
    r.m[1][0] = 2 * (x * y + w * z);
    r.m[1][1] = 1 - 2 * (x * x + z * z);
    r.m[1][2] = 2 * (y * z - w * x);
    r.m[2][0] = 2 * (x * z - w * y);
    r.m[2][1] = 2 * (y * z + w * x);
    r.m[2][2] = 1 - 2 * (x * x + y * y);

    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        Vec3 p = r * (a.positions[i] - ca);
        Vec3 q = b.positions[i] - cb;
        acc += sq_dist(p, q);
    }
    return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace mu
