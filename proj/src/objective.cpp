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

#include "mu/objective.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace mu {

namespace {

// ---------------------------------------------------------------------------
// Per-torsion trigonometric basis. Rotation chains keep each coordinate
// affine in {1, sin_t, cos_t} per torsion; the one squared-distance product
// at the end raises the per-torsion degree to at most {sin*cos, cos^2}
// (sin^2 is rewritten as 1 - cos^2).
// ---------------------------------------------------------------------------

enum class TrigCode : uint8_t { Sin = 0, Cos = 1, SinCos = 2, Cos2 = 3 };

using TrigKey = std::vector<std::pair<int, TrigCode>>;  // sorted by torsion

double trig_basis_value(TrigCode c, double s, double co) {
    switch (c) {
        case TrigCode::Sin:
            return s;
        case TrigCode::Cos:
            return co;
        case TrigCode::SinCos:
            return s * co;
        case TrigCode::Cos2:
            return co * co;
    }
    return 0.0;
}

class TrigTensor {
public:
    std::map<TrigKey, double> terms;

    static TrigTensor constant(double v) {
        TrigTensor t;
        if (v != 0.0) t.terms[{}] = v;
        return t;
    }

    void add(const TrigKey& key, double coeff) {
        if (coeff == 0.0) return;
        double& slot = terms[key];
        slot += coeff;
        if (std::abs(slot) < 1e-300) terms.erase(key);
    }

    TrigTensor& operator+=(const TrigTensor& o) {
        for (const auto& [k, c] : o.terms) add(k, c);
        return *this;
    }
    TrigTensor& operator-=(const TrigTensor& o) {
        for (const auto& [k, c] : o.terms) add(k, -c);
        return *this;
    }
    TrigTensor scaled(double s) const {
        TrigTensor out;
        for (const auto& [k, c] : terms)
            if (c * s != 0.0) out.terms[k] = c * s;
        return out;
    }
};

void multiply_term_into(TrigTensor& out, const TrigKey& a, const TrigKey& b,
                        double coeff) {
    std::vector<std::pair<TrigKey, double>> partial{{TrigKey{}, coeff}};
    auto append_all = [&](int t, TrigCode c) {
        for (auto& p : partial) p.first.emplace_back(t, c);
    };
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
            append_all(a[i].first, a[i].second);
            ++i;
        } else if (i >= a.size() || b[j].first < a[i].first) {
            append_all(b[j].first, b[j].second);
            ++j;
        } else {
            int t = a[i].first;
            TrigCode x = a[i].second;
            TrigCode y = b[j].second;
            ++i;
            ++j;
            if (x == TrigCode::Sin && y == TrigCode::Sin) {
                // sin^2 = 1 - cos^2 splits every partial product in two.
                std::vector<std::pair<TrigKey, double>> next;
                next.reserve(partial.size() * 2);
                for (auto& p : partial) {
                    next.push_back(p);
                    auto q = p;
                    q.first.emplace_back(t, TrigCode::Cos2);
                    q.second = -q.second;
                    next.push_back(std::move(q));
                }
                partial = std::move(next);
            } else if (x == TrigCode::Cos && y == TrigCode::Cos) {
                append_all(t, TrigCode::Cos2);
            } else if ((x == TrigCode::Sin && y == TrigCode::Cos) ||
                       (x == TrigCode::Cos && y == TrigCode::Sin)) {
                append_all(t, TrigCode::SinCos);
            } else {
                throw std::logic_error("trig basis degree overflow");
            }
        }
    }
    for (auto& [k, c] : partial) out.add(k, c);
}

TrigTensor operator*(const TrigTensor& a, const TrigTensor& b) {
    TrigTensor out;
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) multiply_term_into(out, ka, kb, ca * cb);
    return out;
}

struct TrigVec3 {
    std::array<TrigTensor, 3> c;

    static TrigVec3 constant(const Vec3& v) {
        return {TrigTensor::constant(v.x), TrigTensor::constant(v.y),
                TrigTensor::constant(v.z)};
    }
};

// R(theta_t) = I + sin K + (1 - cos) K^2 applied about pivot:
// out = R * (v - pivot) + pivot.
TrigVec3 apply_symbolic_rotation(const TrigVec3& v, int torsion, const Vec3& axis,
                                 const Vec3& pivot) {
    Mat3 k = Mat3::zero();
    k.m[0][1] = -axis.z;
    k.m[0][2] = axis.y;
    k.m[1][0] = axis.z;
    k.m[1][2] = -axis.x;
    k.m[2][0] = -axis.y;
    k.m[2][1] = axis.x;
    Mat3 k2 = k * k;

    TrigVec3 shifted = v;
    shifted.c[0].add({}, -pivot.x);
    shifted.c[1].add({}, -pivot.y);
    shifted.c[2].add({}, -pivot.z);

    TrigVec3 out;
    double piv[3] = {pivot.x, pivot.y, pivot.z};
    for (int row = 0; row < 3; ++row) {
        TrigTensor acc = TrigTensor::constant(piv[row]);
        for (int col = 0; col < 3; ++col) {
            // Entry = (I + K2)[row][col] + K[row][col] sin - K2[row][col] cos.
            TrigTensor entry;
            double const_part = (row == col ? 1.0 : 0.0) + k2.m[row][col];
            if (const_part != 0.0) entry.add({}, const_part);
            if (k.m[row][col] != 0.0)
                entry.add({{torsion, TrigCode::Sin}}, k.m[row][col]);
            if (k2.m[row][col] != 0.0)
                entry.add({{torsion, TrigCode::Cos}}, -k2.m[row][col]);
            acc += entry * shifted.c[col];
        }
        out.c[row] = std::move(acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Substitution of the binary encodings into the trig basis.
// ---------------------------------------------------------------------------

// Spin-monomial pattern list over one torsion's local bits.
using PatternList = std::vector<std::pair<uint32_t, double>>;

PatternList spin_product(const PatternList& a, const PatternList& b) {
    std::map<uint32_t, double> acc;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) acc[ma ^ mb] += ca * cb;  // s^2 = 1
    PatternList out;
    for (const auto& [m, c] : acc)
        if (std::abs(c) >= Polynomial::kCoeffEps) out.emplace_back(m, c);
    return out;
}

struct PhaseBlocks {
    std::array<PatternList, 4> block;  // indexed by TrigCode
};

PhaseBlocks make_phase_blocks(const PhaseCode& code) {
    PatternList sinp, cosp;
    for (const auto& [bits, c] : code.terms) {
        if (std::abs(c.imag()) >= Polynomial::kCoeffEps) sinp.emplace_back(bits, c.imag());
        if (std::abs(c.real()) >= Polynomial::kCoeffEps) cosp.emplace_back(bits, c.real());
    }
    PhaseBlocks b;
    b.block[static_cast<int>(TrigCode::Sin)] = sinp;
    b.block[static_cast<int>(TrigCode::Cos)] = cosp;
    b.block[static_cast<int>(TrigCode::SinCos)] = spin_product(sinp, cosp);
    b.block[static_cast<int>(TrigCode::Cos2)] = spin_product(cosp, cosp);
    return b;
}

void expand_phase_tensor(const TrigTensor& tensor, const PhaseBlocks& blocks,
                         const VariableRegistry& reg, double scale, Polynomial& out) {
    struct Partial {
        Monomial vars;
        double coeff;
    };
    for (const auto& [key, kc] : tensor.terms) {
        std::vector<Partial> partial{{Monomial{}, kc * scale}};
        for (const auto& [torsion, codeval] : key) {
            const PatternList& blk = blocks.block[static_cast<int>(codeval)];
            std::vector<Partial> next;
            next.reserve(partial.size() * blk.size());
            for (const Partial& p : partial)
                for (const auto& [mask, c] : blk) {
                    Partial q;
                    q.vars = p.vars;
                    for (int bit = 0; bit < reg.bits_per_torsion; ++bit)
                        if (mask & (1u << bit)) q.vars.push_back(reg.var(torsion, bit));
                    q.coeff = p.coeff * c;
                    next.push_back(std::move(q));
                }
            partial = std::move(next);
        }
        for (Partial& p : partial) out.add(p.vars, p.coeff);
    }
}

// One-hot route: evaluate the tensor on the full angle grid of its torsions
// and emit one degree-m monomial per grid combination (exact interpolation
// for assignments satisfying the one-hot constraint).
void expand_onehot_tensor(const TrigTensor& tensor, const VariableRegistry& reg,
                          const AngleGrid& grid, double scale, Polynomial& out) {
    std::vector<int> axes;  // torsions appearing in the tensor
    for (const auto& [key, c] : tensor.terms)
        for (const auto& [t, code] : key)
            if (axes.empty() || std::find(axes.begin(), axes.end(), t) == axes.end())
                axes.push_back(t);
    std::sort(axes.begin(), axes.end());
    const size_t m = axes.size();

    if (m == 0) {
        auto it = tensor.terms.find({});
        if (it != tensor.terms.end()) out.add({}, it->second * scale);
        return;
    }

    double total = std::pow(static_cast<double>(grid.d), static_cast<double>(m));
    if (total > static_cast<double>(1 << 24))
        throw std::invalid_argument(
            "one-hot objective too large for this torsion path; use phase encoding");

    // Dense tensor over mixed radix (axes transformed so far have radix d,
    // the rest radix 5: 0 = absent, 1 + TrigCode otherwise).
    std::vector<size_t> dims(m, 5);
    std::vector<double> cur(static_cast<size_t>(std::pow(5.0, static_cast<double>(m))),
                            0.0);
    auto index_of = [&](const TrigKey& key) {
        size_t idx = 0;
        size_t ai = 0;
        for (size_t a = 0; a < m; ++a) {
            size_t digit = 0;
            if (ai < key.size() && key[ai].first == axes[a]) {
                digit = 1 + static_cast<size_t>(key[ai].second);
                ++ai;
            }
            idx = idx * 5 + digit;
        }
        return idx;
    };
    for (const auto& [key, c] : tensor.terms) cur[index_of(key)] += c;

    std::vector<double> sinv(static_cast<size_t>(grid.d)), cosv(static_cast<size_t>(grid.d));
    for (int k = 0; k < grid.d; ++k) {
        sinv[static_cast<size_t>(k)] = std::sin(grid.phi(k));
        cosv[static_cast<size_t>(k)] = std::cos(grid.phi(k));
    }

    for (size_t a = 0; a < m; ++a) {
        size_t outer = 1, inner = 1;
        for (size_t q = 0; q < a; ++q) outer *= dims[q];
        for (size_t q = a + 1; q < m; ++q) inner *= dims[q];
        std::vector<double> next(outer * static_cast<size_t>(grid.d) * inner, 0.0);
        for (size_t o = 0; o < outer; ++o)
            for (size_t s = 0; s < inner; ++s) {
                double vals[5];
                for (size_t c = 0; c < 5; ++c)
                    vals[c] = cur[(o * 5 + c) * inner + s];
                for (int k = 0; k < grid.d; ++k) {
                    double v = vals[0];
                    if (vals[1] != 0.0) v += vals[1] * sinv[static_cast<size_t>(k)];
                    if (vals[2] != 0.0) v += vals[2] * cosv[static_cast<size_t>(k)];
                    if (vals[3] != 0.0)
                        v += vals[3] * sinv[static_cast<size_t>(k)] * cosv[static_cast<size_t>(k)];
                    if (vals[4] != 0.0)
                        v += vals[4] * cosv[static_cast<size_t>(k)] * cosv[static_cast<size_t>(k)];
                    next[(o * static_cast<size_t>(grid.d) + static_cast<size_t>(k)) * inner + s] = v;
                }
            }
        cur = std::move(next);
        dims[a] = static_cast<size_t>(grid.d);
    }

    // Emit one monomial per grid combination.
    std::vector<int> combo(m, 0);
    for (size_t idx = 0; idx < cur.size(); ++idx) {
        double v = cur[idx];
        if (std::abs(v) >= Polynomial::kCoeffEps) {
            size_t rem = idx;
            Monomial mon(m);
            for (size_t a = m; a-- > 0;) {
                combo[a] = static_cast<int>(rem % static_cast<size_t>(grid.d));
                rem /= static_cast<size_t>(grid.d);
            }
            for (size_t a = 0; a < m; ++a)
                mon[a] = reg.var(axes[a], combo[a]);
            out.add(mon, v * scale);
        }
    }
}

}  // namespace

BuiltObjective build_objective(const Molecule& mol, const FragmentDecomposition& fd,
                               const ObjectiveConfig& cfg) {
    const int m_torsions = fd.num_torsions();
    if (m_torsions == 0)
        throw std::invalid_argument("molecule has no rotatable bonds to optimize");
    auto t0 = std::chrono::steady_clock::now();

    BuiltObjective built;
    built.registry = make_registry(cfg.encoding, m_torsions, cfg.d);
    AngleGrid grid(cfg.d);

    // Accumulate the squared-distance tensors grouped by fragment pair
    // (every atom pair in the group shares the torsion path).
    std::map<std::pair<int, int>, TrigTensor> by_fragment_pair;
    for (auto [alpha, beta] : cross_fragment_pairs(fd, mol, cfg.include_hydrogens)) {
        TorsionPath path = torsion_path(fd, alpha, beta);
        TrigVec3 pos = TrigVec3::constant(mol.atom(beta).position);
        for (size_t i = 0; i < path.torsions.size(); ++i) {
            int t = path.torsions[i];
            RotationSpec spec = torsion_rotation(mol, fd, t, 0.0, path.axis_sign[i]);
            pos = apply_symbolic_rotation(pos, t, spec.axis, spec.pivot);
        }
        Vec3 ra = mol.atom(alpha).position;
        TrigVec3 diff = pos;
        diff.c[0].add({}, -ra.x);
        diff.c[1].add({}, -ra.y);
        diff.c[2].add({}, -ra.z);

        int fa = fd.fragment_of[static_cast<size_t>(alpha)];
        int fb = fd.fragment_of[static_cast<size_t>(beta)];
        TrigTensor& acc = by_fragment_pair[{std::min(fa, fb), std::max(fa, fb)}];
        for (int c = 0; c < 3; ++c) acc += diff.c[c] * diff.c[c];
    }

    if (cfg.encoding == EncodingKind::Phase) {
        built.code = build_phase_code(built.registry.bits_per_torsion, cfg.table);
        PhaseBlocks blocks = make_phase_blocks(built.code);
        Polynomial obj(Domain::Spin);
        for (const auto& [frag_pair, tensor] : by_fragment_pair)
            expand_phase_tensor(tensor, blocks, built.registry, -1.0, obj);
        built.poly = std::move(obj);
    } else {
        Polynomial obj(Domain::Boolean);
        for (const auto& [frag_pair, tensor] : by_fragment_pair)
            expand_onehot_tensor(tensor, built.registry, grid, -1.0, obj);
        double a_const = cfg.a_const;
        if (a_const <= 0.0) {
            double max_abs = 0.0;
            for (const auto& [m, c] : obj.terms())
                max_abs = std::max(max_abs, std::abs(c));
            a_const = 2.0 * max_abs;
            if (a_const <= 0.0) a_const = 1.0;
        }
        built.a_const = a_const;
        obj += penalty_polynomial(built.registry, a_const);
        built.poly = std::move(obj);
    }

    built.build_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return built;
}

std::vector<double> decode_assignment(const BuiltObjective& obj,
                                      std::span<const int8_t> assignment) {
    if (obj.registry.kind == EncodingKind::Phase)
        return decode_phase(obj.code, obj.registry, assignment);
    return decode_onehot(obj.registry, assignment);
}

}  // namespace mu
