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

#include "mu/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mu/kernels.hpp"
#include "mu/objective.hpp"

namespace mu {

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97f4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    uint64_t s = mix64(master);
    s = mix64(s ^ a);
    s = mix64(s ^ b);
    s = mix64(s ^ c);
    s = mix64(s ^ d);
    return s;
}

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

double volume_ratio(double achieved, double reference) {
    if (reference <= 0) throw std::invalid_argument("reference volume must be positive");
    return achieved / reference;
}

std::optional<double> ttt(double total_seconds, int samples, double p) {
    if (p < 0 || p > 1) throw std::invalid_argument("probability must lie in [0, 1]");
    if (total_seconds <= 0 || samples < 1)
        throw std::invalid_argument("need positive time and at least one sample");
    double per = total_seconds / samples;
    if (p == 1.0) return per;
    if (p == 0.0) return std::nullopt;
    return per * std::log(1.0 - 0.99) / std::log(1.0 - p);
}

std::optional<double> tts(double total_seconds, int samples, double p_opt) {
    return ttt(total_seconds, samples, p_opt);
}

double success_probability(std::span<const SolveResult> results, double target) {
    if (results.empty()) throw std::invalid_argument("no results");
    size_t hits = 0;
    double slack = 1e-9 * std::abs(target);
    for (const SolveResult& r : results)
        if (r.best_volume >= target - slack) ++hits;
    return static_cast<double>(hits) / static_cast<double>(results.size());
}

BoxplotStats boxplot(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("no values");
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(values.size() - 1);
        size_t lo = static_cast<size_t>(pos);
        size_t hi = std::min(lo + 1, values.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75),
            values.back()};
}

double median(std::vector<double> values) { return boxplot(std::move(values)).median; }

std::map<std::string, BoxplotStats> rmsd_report(
    const std::vector<std::tuple<std::string, Conformation, Conformation>>& pairs) {
    std::map<std::string, std::vector<double>> grouped;
    for (const auto& [group, a, b] : pairs) grouped[group].push_back(rmsd(a, b));
    std::map<std::string, BoxplotStats> out;
    for (auto& [group, vals] : grouped) out[group] = boxplot(std::move(vals));
    return out;
}

namespace {

struct MoleculeEntry {
    std::string path;
    std::string hash;
    Molecule mol;
    FragmentDecomposition fd;
    int m = 0;
    SolveResult brute;
    double target = 0.0;
    BuiltObjective phase_obj;
    BuiltObjective onehot_obj;
    bool needs_phase = false;
    bool needs_onehot = false;
};

}  // namespace

BenchReport run_benchmark(const BenchConfig& cfg) {
    if (cfg.molecule_paths.empty())
        throw std::invalid_argument("benchmark dataset is empty");
    if (cfg.samples < 1) throw std::invalid_argument("need at least one sample");
    if (cfg.windows.empty()) throw std::invalid_argument("need at least one window");
    for (const std::string& s : cfg.solvers)
        if (s != "bsb" && s != "sa" && s != "brute")
            throw std::invalid_argument("unknown solver in benchmark: " + s);

    BenchReport report;
    AngleGrid grid(cfg.d);
    const int max_window = *std::max_element(cfg.windows.begin(), cfg.windows.end());

    bool want_bsb = std::count(cfg.solvers.begin(), cfg.solvers.end(), "bsb") > 0;
    bool want_sa = std::count(cfg.solvers.begin(), cfg.solvers.end(), "sa") > 0;

    std::vector<MoleculeEntry> mols;
    for (const std::string& path : cfg.molecule_paths) {
        MoleculeEntry e;
        e.path = path;
        {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            e.hash = fnv1a_hex(ss.str());
        }
        e.mol = load_molecule_file(path);
        auto rbs = detect_rotatable_bonds(e.mol);
        if (rbs.empty()) {
            report.warnings.push_back(path + ": no rotatable bonds, skipped");
            continue;
        }
        e.fd = decompose_fragments(e.mol, rbs);
        e.m = e.fd.num_torsions();
        try {
            e.brute = brute_force(e.mol, e.fd, grid, cfg.brute_cap,
                                  cfg.include_hydrogens);
        } catch (const std::exception& ex) {
            report.warnings.push_back(path + ": " + ex.what() + ", skipped");
            continue;
        }
        e.target = cfg.target_fraction * e.brute.best_volume;
        ObjectiveConfig ocfg;
        ocfg.d = cfg.d;
        ocfg.include_hydrogens = cfg.include_hydrogens;
        if (want_bsb) {
            ocfg.encoding = EncodingKind::Phase;
            e.phase_obj = build_objective(e.mol, e.fd, ocfg);
            e.needs_phase = true;
        }
        if (want_sa) {
            ocfg.encoding = EncodingKind::OneHot;
            e.onehot_obj = build_objective(e.mol, e.fd, ocfg);
            e.needs_onehot = true;
        }
        mols.push_back(std::move(e));
    }
    if (mols.empty())
        throw std::invalid_argument("no benchmarkable molecule in the dataset");

    struct Job {
        size_t mol;
        size_t solver;
        size_t window;
        int sample;
    };
    std::vector<Job> jobs;
    for (size_t mi = 0; mi < mols.size(); ++mi)
        for (size_t si = 0; si < cfg.solvers.size(); ++si)
            for (size_t wi = 0; wi < cfg.windows.size(); ++wi)
                for (int k = 0; k < cfg.samples; ++k) jobs.push_back({mi, si, wi, k});

    std::vector<SolveResult> results(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job& job = jobs[j];
            const MoleculeEntry& e = mols[job.mol];
            const std::string& solver = cfg.solvers[job.solver];
            int window = cfg.windows[job.window];
            uint64_t seed = derive_seed(cfg.master_seed, job.mol, job.solver,
                                        static_cast<uint64_t>(window),
                                        static_cast<uint64_t>(job.sample));
            if (solver == "bsb") {
                BsbConfig bc = cfg.bsb;
                bc.steps = window;
                results[j] = solve_bsb(e.phase_obj.poly, e.phase_obj.registry.num_vars(),
                                       bc, seed);
            } else if (solver == "sa") {
                SaConfig sc = cfg.sa;
                sc.steps = window;
                results[j] = solve_sa(e.onehot_obj.poly, e.onehot_obj.registry, sc, seed);
            } else {
                results[j] = brute_force(e.mol, e.fd, grid, cfg.brute_cap,
                                         cfg.include_hydrogens);
                results[j].seed = seed;
            }
        }
    };
    int nthreads = std::max(1, cfg.jobs);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    auto trace_at = [](const SolveResult& r, int step) {
        if (r.trace.empty()) return r.best_volume;
        size_t idx = std::min(static_cast<size_t>(step), r.trace.size() - 1);
        return r.trace[idx];
    };

    // Mean volume-ratio trace at the longest window.
    size_t max_wi = static_cast<size_t>(
        std::max_element(cfg.windows.begin(), cfg.windows.end()) - cfg.windows.begin());
    std::ostringstream ratio_csv;
    ratio_csv << "solver,step,mean_ratio\n";
    for (size_t si = 0; si < cfg.solvers.size(); ++si) {
        for (int step = 0; step < max_window; ++step) {
            double acc = 0.0;
            size_t count = 0;
            for (size_t j = 0; j < jobs.size(); ++j) {
                if (jobs[j].solver != si || jobs[j].window != max_wi) continue;
                acc += volume_ratio(trace_at(results[j], step),
                                    mols[jobs[j].mol].brute.best_volume);
                ++count;
            }
            ratio_csv << cfg.solvers[si] << "," << (step + 1) << ","
                      << fmt(acc / static_cast<double>(count)) << "\n";
        }
    }
    report.ratio_trace_csv = ratio_csv.str();

    // Median TTT per solver and window.
    std::ostringstream ttt_csv;
    ttt_csv << "solver,window,median_ttt_s,p_median\n";
    for (size_t si = 0; si < cfg.solvers.size(); ++si)
        for (size_t wi = 0; wi < cfg.windows.size(); ++wi) {
            std::vector<double> ttts, ps;
            int undefined = 0;
            for (size_t mi = 0; mi < mols.size(); ++mi) {
                std::vector<SolveResult> sub;
                double total_time = 0.0;
                for (size_t j = 0; j < jobs.size(); ++j) {
                    if (jobs[j].solver != si || jobs[j].window != wi ||
                        jobs[j].mol != mi)
                        continue;
                    sub.push_back(results[j]);
                    total_time += results[j].wall_seconds;
                }
                double p = success_probability(sub, mols[mi].target);
                ps.push_back(p);
                // Degenerate zero timings can occur for sub-resolution runs.
                if (total_time <= 0.0) total_time = 1e-9;
                auto t = ttt(total_time, static_cast<int>(sub.size()), p);
                if (t)
                    ttts.push_back(*t);
                else
                    ++undefined;
            }
            TttRow row;
            row.solver = cfg.solvers[si];
            row.window = cfg.windows[wi];
            row.p_median = median(ps);
            row.undefined_count = undefined;
            if (!ttts.empty()) row.median_ttt_s = median(ttts);
            report.ttt_rows.push_back(row);
            ttt_csv << row.solver << "," << row.window << ","
                    << (row.median_ttt_s ? fmt(*row.median_ttt_s) : "undefined") << ","
                    << fmt(row.p_median) << "\n";
        }
    report.ttt_csv = ttt_csv.str();

    // RMSD of the brute-force unfolding against the input conformation,
    // grouped by rotatable-bond count.
    std::vector<std::tuple<std::string, Conformation, Conformation>> rmsd_pairs;
    for (const MoleculeEntry& e : mols) {
        Conformation input;
        for (const Atom& a : e.mol.atoms()) input.positions.push_back(a.position);
        Conformation unfolded = realize_conformation(e.mol, e.fd, e.brute.best_theta);
        rmsd_pairs.emplace_back("M=" + std::to_string(e.m), input, unfolded);
    }
    std::ostringstream rmsd_csv;
    rmsd_csv << "group,min,q1,median,q3,max\n";
    for (const auto& [group, st] : rmsd_report(rmsd_pairs))
        rmsd_csv << group << "," << fmt(st.min) << "," << fmt(st.q1) << ","
                 << fmt(st.median) << "," << fmt(st.q3) << "," << fmt(st.max) << "\n";
    report.rmsd_csv = rmsd_csv.str();

    nlohmann::ordered_json manifest;
    manifest["master_seed"] = cfg.master_seed;
    manifest["d"] = cfg.d;
    manifest["samples"] = cfg.samples;
    manifest["windows"] = cfg.windows;
    manifest["solvers"] = cfg.solvers;
    manifest["target_fraction"] = cfg.target_fraction;
    manifest["include_hydrogens"] = cfg.include_hydrogens;
    manifest["jobs"] = cfg.jobs;
    manifest["kernel_backend"] = kernels::backend_name();
    manifest["bsb"] = {{"a0", cfg.bsb.a0}, {"c0", cfg.bsb.c0}, {"dt", cfg.bsb.dt}};
    manifest["sa"] = {{"initial_acceptance", cfg.sa.initial_acceptance},
                      {"cooling_factor", cfg.sa.cooling_factor}};
    auto& jm = manifest["molecules"] = nlohmann::ordered_json::array();
    for (const MoleculeEntry& e : mols) {
        nlohmann::ordered_json one;
        one["path"] = e.path;
        one["fnv1a"] = e.hash;
        one["rotatable_bonds"] = e.m;
        one["o_max"] = e.brute.best_volume;
        one["target"] = e.target;
        one["brute_seconds"] = e.brute.wall_seconds;
        if (e.needs_phase) {
            one["phase_terms"] = e.phase_obj.poly.nonconstant_term_count();
            one["phase_build_seconds"] = e.phase_obj.build_seconds;
        }
        if (e.needs_onehot) {
            one["onehot_terms"] = e.onehot_obj.poly.nonconstant_term_count();
            one["onehot_build_seconds"] = e.onehot_obj.build_seconds;
        }
        jm.push_back(one);
    }
    auto& undef = manifest["ttt_undefined_counts"] = nlohmann::ordered_json::array();
    for (const TttRow& row : report.ttt_rows)
        undef.push_back({{"solver", row.solver},
                         {"window", row.window},
                         {"count", row.undefined_count}});
    manifest["warnings"] = report.warnings;
    report.manifest_json = manifest.dump(2) + "\n";
    return report;
}

void write_bench_report(const BenchReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + name + " in " + out_dir);
        out << content;
    };
    write("ratio_trace.csv", report.ratio_trace_csv);
    write("ttt.csv", report.ttt_csv);
    write("rmsd.csv", report.rmsd_csv);
    write("manifest.json", report.manifest_json);
}

}  // namespace mu
