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

#include "mu/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "mu/kernels.hpp"

namespace mu {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Flat term arrays for the hot loops. For up to 64 variables each term also
// carries a bitmask so the sign readout reduces to popcount parity.
struct PackedPoly {
    double constant = 0.0;
    std::vector<double> coeffs;
    std::vector<uint32_t> vars;
    std::vector<uint32_t> offsets;  // coeffs.size() + 1 entries
    std::vector<uint64_t> masks;    // per term, valid when num_vars <= 64
    int num_vars = 0;
    int max_degree = 0;

    static PackedPoly pack(const Polynomial& p, int num_vars) {
        PackedPoly out;
        out.num_vars = num_vars;
        out.offsets.push_back(0);
        for (const auto& [m, c] : p.canonical_terms()) {
            if (m.empty()) {
                out.constant = c;
                continue;
            }
            if (m.back() >= static_cast<uint32_t>(num_vars))
                throw std::out_of_range("objective variable outside registry");
            out.coeffs.push_back(c);
            out.vars.insert(out.vars.end(), m.begin(), m.end());
            out.offsets.push_back(static_cast<uint32_t>(out.vars.size()));
            out.max_degree = std::max(out.max_degree, static_cast<int>(m.size()));
            if (num_vars <= 64) {
                uint64_t mask = 0;
                for (uint32_t v : m) mask |= uint64_t(1) << v;
                out.masks.push_back(mask);
            }
        }
        return out;
    }

    size_t num_terms() const { return coeffs.size(); }

    double eval_signs(const int8_t* s) const {
        double acc = constant;
        for (size_t t = 0; t < coeffs.size(); ++t) {
            int neg = 0;
            for (uint32_t i = offsets[t]; i < offsets[t + 1]; ++i)
                neg ^= (s[vars[i]] < 0);
            acc += neg ? -coeffs[t] : coeffs[t];
        }
        return acc;
    }

    // negmask bit i set <=> s_i = -1.
    double eval_negmask(uint64_t negmask) const {
        double acc = constant;
        for (size_t t = 0; t < coeffs.size(); ++t) {
            uint64_t sign = uint64_t(std::popcount(negmask & masks[t]) & 1) << 63;
            double c = coeffs[t];
            uint64_t bits;
            std::memcpy(&bits, &c, 8);
            bits ^= sign;
            std::memcpy(&c, &bits, 8);
            acc += c;
        }
        return acc;
    }

    void gradient(const double* x, double* g, std::vector<double>& scratch) const {
        std::fill(g, g + num_vars, 0.0);
        scratch.resize(2 * static_cast<size_t>(max_degree) + 2);
        double* pre = scratch.data();
        double* suf = scratch.data() + max_degree + 1;
        for (size_t t = 0; t < coeffs.size(); ++t) {
            const uint32_t lo = offsets[t];
            const uint32_t k = offsets[t + 1] - lo;
            const double c = coeffs[t];
            const uint32_t* tv = vars.data() + lo;
            switch (k) {
                case 1:
                    g[tv[0]] += c;
                    break;
                case 2: {
                    g[tv[0]] += c * x[tv[1]];
                    g[tv[1]] += c * x[tv[0]];
                    break;
                }
                case 3: {
                    double x0 = x[tv[0]], x1 = x[tv[1]], x2 = x[tv[2]];
                    g[tv[0]] += c * x1 * x2;
                    g[tv[1]] += c * x0 * x2;
                    g[tv[2]] += c * x0 * x1;
                    break;
                }
                default: {
                    pre[0] = 1.0;
                    for (uint32_t i = 0; i < k; ++i) pre[i + 1] = pre[i] * x[tv[i]];
                    suf[k] = 1.0;
                    for (uint32_t i = k; i-- > 0;) suf[i] = suf[i + 1] * x[tv[i]];
                    for (uint32_t i = 0; i < k; ++i) g[tv[i]] += c * pre[i] * suf[i + 1];
                }
            }
        }
    }
};

uint64_t mix_seed(uint64_t x) {
    x += 0x9E3779B97f4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::string solve_result_to_json(const SolveResult& r) {
    nlohmann::ordered_json j;
    j["solver"] = r.solver;
    j["seed"] = r.seed;
    j["best_volume"] = r.best_volume;
    j["best_assignment"] = r.best_assignment;
    j["best_theta"] = r.best_theta;
    j["trace"] = r.trace;
    j["wall_seconds"] = r.wall_seconds;
    return j.dump(2) + "\n";
}

SolveResult solve_bsb(const Polynomial& objective, int num_vars, const BsbConfig& cfg,
                      uint64_t seed) {
    if (objective.domain() != Domain::Spin)
        throw std::invalid_argument("bSB requires a spin-domain objective");
    if (cfg.dt <= 0 || cfg.steps < 1 || cfg.a0 <= 0)
        throw std::invalid_argument("invalid bSB configuration");
    const size_t n = static_cast<size_t>(num_vars);
    PackedPoly packed = PackedPoly::pack(objective, num_vars);

    std::mt19937_64 rng(mix_seed(seed));
    std::vector<double> scratch;

    double c0 = cfg.c0;
    if (c0 <= 0) {
        // RMS over random box points of the gradient's max-norm.
        std::vector<double> xs(n), g(n);
        double acc = 0.0;
        for (int s = 0; s < 64; ++s) {
            for (double& v : xs) v = 2.0 * uniform01(rng) - 1.0;
            packed.gradient(xs.data(), g.data(), scratch);
            double mx = 0.0;
            for (double v : g) mx = std::max(mx, std::abs(v));
            acc += mx * mx;
        }
        double rms = std::sqrt(acc / 64.0);
        c0 = (rms > 1e-12) ? cfg.a0 / rms : cfg.a0;
    }

    std::vector<double> x(n), y(n), grad(n);
    for (double& v : x) v = 0.2 * uniform01(rng) - 0.1;
    for (double& v : y) v = 0.2 * uniform01(rng) - 0.1;

    SolveResult res;
    res.solver = "bsb";
    res.seed = seed;
    res.trace.reserve(static_cast<size_t>(cfg.steps));
    std::vector<int8_t> readout(n);
    double best_e = std::numeric_limits<double>::infinity();
    const bool use_masks = num_vars <= 64;
    uint64_t last_negmask = ~uint64_t(0);
    double last_e = std::numeric_limits<double>::quiet_NaN();
    uint64_t best_negmask = 0;

    auto t0 = std::chrono::steady_clock::now();
    for (int step = 0; step < cfg.steps; ++step) {
        double at = (cfg.steps > 1)
                        ? cfg.a0 * static_cast<double>(step) / (cfg.steps - 1)
                        : cfg.a0;
        packed.gradient(x.data(), grad.data(), scratch);
        kernels::bsb_step(x.data(), y.data(), grad.data(), n, cfg.dt, cfg.a0,
                          cfg.a0 - at, c0);
        double e;
        if (use_masks) {
            uint64_t negmask = 0;
            for (size_t i = 0; i < n; ++i)
                negmask |= uint64_t(x[i] < 0.0) << i;  // ties read as +1
            // The readout only changes when a sign flips.
            if (negmask == last_negmask) {
                e = last_e;
            } else {
                e = packed.eval_negmask(negmask);
                last_negmask = negmask;
                last_e = e;
            }
            if (e < best_e) {
                best_e = e;
                best_negmask = negmask;
            }
        } else {
            for (size_t i = 0; i < n; ++i) readout[i] = (x[i] >= 0.0) ? 1 : -1;
            e = packed.eval_signs(readout.data());
            if (e < best_e) {
                best_e = e;
                res.best_assignment = readout;
            }
        }
        if (!std::isfinite(e))
            throw std::runtime_error(
                "bSB diverged to non-finite energy (a0=" + std::to_string(cfg.a0) +
                ", c0=" + std::to_string(c0) + ", dt=" + std::to_string(cfg.dt) + ")");
        res.trace.push_back(-best_e);
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (use_masks) {
        res.best_assignment.resize(n);
        for (size_t i = 0; i < n; ++i)
            res.best_assignment[i] = (best_negmask >> i) & 1 ? -1 : 1;
    }
    res.best_volume = -best_e;
    return res;
}

SolveResult solve_sa(const Polynomial& objective, const VariableRegistry& registry,
                     const SaConfig& cfg, uint64_t seed) {
    if (registry.kind != EncodingKind::OneHot)
        throw std::invalid_argument("SA requires the one-hot registry");
    if (objective.domain() != Domain::Boolean)
        throw std::invalid_argument("SA requires a boolean-domain objective");
    if (cfg.cooling_factor <= 0 || cfg.cooling_factor >= 1)
        throw std::invalid_argument("cooling factor must lie in (0, 1)");
    if (cfg.steps < 1) throw std::invalid_argument("need at least one sweep");

    const int m = registry.num_torsions;
    const int d = registry.d;
    const int num_vars = registry.num_vars();
    PackedPoly packed = PackedPoly::pack(objective, num_vars);

    // Incidence lists and per-term zero-variable counters.
    std::vector<std::vector<uint32_t>> incidence(static_cast<size_t>(num_vars));
    for (size_t t = 0; t < packed.num_terms(); ++t)
        for (uint32_t i = packed.offsets[t]; i < packed.offsets[t + 1]; ++i)
            incidence[packed.vars[i]].push_back(static_cast<uint32_t>(t));
    auto term_contains = [&](uint32_t t, uint32_t v) {
        const uint32_t* lo = packed.vars.data() + packed.offsets[t];
        const uint32_t* hi = packed.vars.data() + packed.offsets[t + 1];
        return std::binary_search(lo, hi, v);
    };

    std::mt19937_64 rng(mix_seed(seed ^ 0x5Au));
    std::vector<int> hot(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) hot[static_cast<size_t>(i)] = static_cast<int>(rng() % d);

    std::vector<int8_t> state(static_cast<size_t>(num_vars), 0);
    for (int i = 0; i < m; ++i) state[registry.var(i, hot[static_cast<size_t>(i)])] = 1;

    std::vector<uint32_t> num_zero(packed.num_terms(), 0);
    double energy = packed.constant;
    for (size_t t = 0; t < packed.num_terms(); ++t) {
        uint32_t z = 0;
        for (uint32_t i = packed.offsets[t]; i < packed.offsets[t + 1]; ++i)
            z += (state[packed.vars[i]] == 0);
        num_zero[t] = z;
        if (z == 0) energy += packed.coeffs[t];
    }

    // Move u -> 0, v -> 1 on one torsion. Terms holding both stay inactive.
    auto move_delta = [&](uint32_t u, uint32_t v) {
        double delta = 0.0;
        for (uint32_t t : incidence[u])
            if (num_zero[t] == 0) delta -= packed.coeffs[t];
        for (uint32_t t : incidence[v])
            if (num_zero[t] == 1 && !term_contains(t, u)) delta += packed.coeffs[t];
        return delta;
    };
    auto commit_move = [&](int torsion, int new_k) {
        uint32_t u = registry.var(torsion, hot[static_cast<size_t>(torsion)]);
        uint32_t v = registry.var(torsion, new_k);
        for (uint32_t t : incidence[u]) ++num_zero[t];
        for (uint32_t t : incidence[v]) --num_zero[t];
        state[u] = 0;
        state[v] = 1;
        hot[static_cast<size_t>(torsion)] = new_k;
    };
    auto propose = [&]() {
        int torsion = static_cast<int>(rng() % static_cast<uint64_t>(m));
        int k = static_cast<int>(rng() % static_cast<uint64_t>(d - 1));
        if (k >= hot[static_cast<size_t>(torsion)]) ++k;
        return std::pair<int, int>{torsion, k};
    };

    // Initial temperature from sampled uphill moves.
    double t0_temp;
    {
        double up_sum = 0.0;
        int up_count = 0, tries = 0;
        while (up_count < 100 && tries < 1000) {
            ++tries;
            auto [torsion, k] = propose();
            double delta = move_delta(registry.var(torsion, hot[static_cast<size_t>(torsion)]),
                                      registry.var(torsion, k));
            if (delta > 0) {
                up_sum += delta;
                ++up_count;
            }
        }
        t0_temp = (up_count > 0)
                      ? (up_sum / up_count) / std::log(1.0 / cfg.initial_acceptance)
                      : 1e-9;
    }

    SolveResult res;
    res.solver = "sa";
    res.seed = seed;
    res.trace.reserve(static_cast<size_t>(cfg.steps));

    // Exact evaluation for best-so-far bookkeeping (the incremental energy
    // is only used for move decisions).
    auto exact_energy = [&]() {
        double acc = packed.constant;
        for (size_t t = 0; t < packed.num_terms(); ++t)
            if (num_zero[t] == 0) acc += packed.coeffs[t];
        return acc;
    };

    double best_e = exact_energy();
    res.best_assignment = state;

    const int moves_per_sweep = (cfg.moves_per_step > 0) ? cfg.moves_per_step : m;
    double temp = t0_temp;

    auto wall0 = std::chrono::steady_clock::now();
    for (int sweep = 0; sweep < cfg.steps; ++sweep) {
        for (int mv = 0; mv < moves_per_sweep; ++mv) {
            auto [torsion, k] = propose();
            uint32_t u = registry.var(torsion, hot[static_cast<size_t>(torsion)]);
            uint32_t v = registry.var(torsion, k);
            double delta = move_delta(u, v);
            bool accept = delta <= 0.0;
            if (!accept && temp > 0.0)
                accept = uniform01(rng) < std::exp(-delta / temp);
            if (accept) {
                commit_move(torsion, k);
                energy += delta;
                if (energy < best_e) {
                    double exact = exact_energy();
                    if (exact < best_e) {
                        best_e = exact;
                        res.best_assignment = state;
                    }
                }
            }
        }
        temp *= cfg.cooling_factor;
        res.trace.push_back(-best_e);
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    res.best_volume = -best_e;
    return res;
}

SolveResult brute_force(const Molecule& mol, const FragmentDecomposition& fd,
                        const AngleGrid& grid, size_t cap, bool include_hydrogens) {
    const int m = fd.num_torsions();
    SolveResult res;
    res.solver = "brute";
    res.seed = 0;

    if (m == 0) {
        res.best_theta = {};
        res.best_volume = 0.0;
        res.trace = {0.0};
        return res;
    }
    double combos = std::pow(static_cast<double>(grid.d), static_cast<double>(m));
    if (combos > static_cast<double>(cap))
        throw std::invalid_argument("brute-force grid exceeds the configured cap");

    auto t0 = std::chrono::steady_clock::now();
    std::vector<int> combo(static_cast<size_t>(m), 0);
    TorsionAssignment theta(static_cast<size_t>(m), 0.0);
    double best = -1.0;
    std::vector<int> best_combo(static_cast<size_t>(m), 0);

    const size_t total = static_cast<size_t>(combos);
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        // First torsion most significant: lowest mixed-radix index wins ties.
        for (int i = m; i-- > 0;) {
            combo[static_cast<size_t>(i)] = static_cast<int>(rem % static_cast<size_t>(grid.d));
            rem /= static_cast<size_t>(grid.d);
        }
        for (int i = 0; i < m; ++i)
            theta[static_cast<size_t>(i)] = grid.phi(combo[static_cast<size_t>(i)]);
        Conformation conf = realize_conformation(mol, fd, theta);
        double vol = volume_of_conformation(mol, fd, conf, include_hydrogens);
        if (vol > best) {
            best = vol;
            best_combo = combo;
        }
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.best_theta.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        res.best_theta[static_cast<size_t>(i)] = grid.phi(best_combo[static_cast<size_t>(i)]);
    res.best_volume = best;
    res.trace = {best};
    return res;
}

SolveResult greedy_geodock(const Molecule& mol, const FragmentDecomposition& fd,
                           const AngleGrid& grid, int rounds, bool include_hydrogens) {
    const int m = fd.num_torsions();
    if (m < 1) throw std::invalid_argument("greedy search needs a rotatable bond");
    if (rounds < 1) throw std::invalid_argument("need at least one round");

    // Descending betweenness, ties by torsion index.
    std::vector<int> order(static_cast<size_t>(m));
    std::vector<double> centrality(static_cast<size_t>(m));
    for (int t = 0; t < m; ++t) {
        order[static_cast<size_t>(t)] = t;
        centrality[static_cast<size_t>(t)] =
            bridge_betweenness(mol, fd.torsions[static_cast<size_t>(t)]);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return centrality[static_cast<size_t>(a)] > centrality[static_cast<size_t>(b)];
    });

    SolveResult res;
    res.solver = "greedy";
    res.seed = 0;

    auto t0 = std::chrono::steady_clock::now();
    TorsionAssignment theta(static_cast<size_t>(m), 0.0);
    auto volume_at = [&](const TorsionAssignment& th) {
        Conformation conf = realize_conformation(mol, fd, th);
        return volume_of_conformation(mol, fd, conf, include_hydrogens);
    };
    double best = volume_at(theta);
    for (int round = 0; round < rounds; ++round) {
        for (int t : order) {
            double best_val = -1.0;
            int best_k = 0;
            for (int k = 0; k < grid.d; ++k) {
                theta[static_cast<size_t>(t)] = grid.phi(k);
                double v = volume_at(theta);
                if (v > best_val) {
                    best_val = v;
                    best_k = k;
                }
            }
            theta[static_cast<size_t>(t)] = grid.phi(best_k);
            best = best_val;
            res.trace.push_back(best);
        }
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.best_theta = theta;
    res.best_volume = best;
    return res;
}

}  // namespace mu
