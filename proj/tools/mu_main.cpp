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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "mu/bench.hpp"
#include "mu/kernels.hpp"
#include "mu/objective.hpp"
#include "mu/qaoa.hpp"
#include "mu/solvers.hpp"

namespace fs = std::filesystem;

namespace {

uint64_t synthesize_seed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct PendingOutputs {
    std::vector<std::pair<fs::path, std::string>> files;
    void add(fs::path p, std::string content) {
        files.emplace_back(std::move(p), std::move(content));
    }
    // All-or-nothing: nothing is written until the command succeeded.
    void commit() const {
        for (const auto& [p, c] : files) write_file(p, c);
    }
};

int cmd_inspect(const std::string& path) {
    mu::Molecule mol = mu::load_molecule_file(path);
    auto rbs = mu::detect_rotatable_bonds(mol);
    std::cout << "file: " << path << "\n";
    std::cout << "atoms: " << mol.num_atoms() << " (" << mol.heavy_atom_count()
              << " heavy)\n";
    std::cout << "bonds: " << mol.num_bonds() << "\n";
    std::cout << "rotatable bonds: " << rbs.size() << "\n";
    for (const auto& rb : rbs) {
        const mu::Bond& b = mol.bond(rb.bond_index);
        std::cout << "  torsion " << rb.torsion_index << ": bond " << b.a << "-" << b.b
                  << "\n";
    }
    if (!rbs.empty()) {
        auto fd = mu::decompose_fragments(mol, rbs);
        std::cout << "fragments: " << fd.fragment_count << " (sizes";
        for (const auto& atoms : fd.fragment_atoms) std::cout << " " << atoms.size();
        std::cout << ", root " << fd.root_fragment << ")\n";
    } else {
        std::cout << "fragments: 1 (rigid molecule)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"molunfold: torsion-grid molecular unfolding via binary optimization"};
    app.set_config("--config");
    app.require_subcommand(1);

    std::string in_path, out_path = "mu_out";
    std::string encoding = "phase", solver = "bsb";
    int d = 16, steps = 100, grid_res = 32, rounds = 5, jobs = 1, samples = 20;
    double dt = 0.5, a0 = 1.0, c0 = 0.0, prune_tau = -1.0;
    bool include_h = true, do_rescale = false, emit_gates = false, paper_table = false;
    uint64_t seed = 0;
    bool seed_set = false;
    uint64_t shots = 10000;
    std::string windows_str = "10,25,50,100", solvers_str = "bsb,sa";

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--include-h,!--exclude-h", include_h,
                      "include hydrogens in volume sums (default on)");
    };

    CLI::App* inspect = app.add_subcommand("inspect", "parse a molecule and summarize");
    inspect->add_option("file", in_path, "molecule file")->required();

    CLI::App* hubo = app.add_subcommand("hubo", "build the HUBO objective as JSON");
    hubo->add_option("file", in_path, "molecule file")->required();
    hubo->add_option("--encoding", encoding, "phase|onehot")
        ->check(CLI::IsMember({"phase", "onehot"}));
    hubo->add_option("--d", d, "torsion grid size (default 16)");
    hubo->add_flag("--paper-table", paper_table,
                   "use the published n=2,3 phase tables");
    hubo->add_option("--out", out_path, "output JSON path")->required();
    add_common(hubo);

    CLI::App* solve = app.add_subcommand("solve", "unfold one molecule");
    solve->add_option("file", in_path, "molecule file")->required();
    solve->add_option("--solver", solver, "bsb|sa|brute|greedy")
        ->check(CLI::IsMember({"bsb", "sa", "brute", "greedy"}));
    solve->add_option("--encoding", encoding, "phase|onehot")
        ->check(CLI::IsMember({"phase", "onehot"}));
    solve->add_option("--d", d, "torsion grid size");
    solve->add_option("--steps", steps, "iteration steps");
    solve->add_option("--dt", dt, "bSB time step");
    solve->add_option("--a0", a0, "bSB ramp target");
    solve->add_option("--c0", c0, "bSB coupling (<=0: auto)");
    solve->add_option("--rounds", rounds, "greedy rounds");
    solve->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
        seed_set = true;
    });
    solve->add_option("--out", out_path, "output directory");
    add_common(solve);

    CLI::App* bench = app.add_subcommand("bench", "benchmark solvers over a dataset");
    bench->add_option("dir", in_path, "dataset directory")->required();
    bench->add_option("--d", d, "torsion grid size");
    bench->add_option("--samples", samples, "samples per molecule");
    bench->add_option("--windows", windows_str, "comma-separated step windows");
    bench->add_option("--solvers", solvers_str, "comma-separated solvers");
    bench->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_set = true;
    });
    bench->add_option("--jobs", jobs, "worker threads");
    bench->add_option("--out", out_path, "report directory");
    add_common(bench);

    CLI::App* qaoa = app.add_subcommand("qaoa", "simulate single-layer QAOA on a HUBO");
    qaoa->add_option("hubo", in_path, "HUBO JSON file")->required();
    qaoa->add_option("--prune", prune_tau, "coefficient threshold");
    qaoa->add_flag("--rescale", do_rescale, "divide coefficients by their RMS");
    qaoa->add_option("--grid", grid_res, "landscape grid resolution");
    qaoa->add_option("--shots", shots, "measurement shots");
    qaoa->add_option("--seed", seed, "sampling seed")->each([&](const std::string&) {
        seed_set = true;
    });
    qaoa->add_flag("--emit-gates", emit_gates, "write the cost-layer gate list");
    qaoa->add_option("--out", out_path, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!seed_set) seed = synthesize_seed();

        if (inspect->parsed()) return cmd_inspect(in_path);

        if (hubo->parsed()) {
            mu::Molecule mol = mu::load_molecule_file(in_path);
            auto rbs = mu::detect_rotatable_bonds(mol);
            auto fd = mu::decompose_fragments(mol, rbs);
            mu::ObjectiveConfig cfg;
            cfg.encoding = encoding == "phase" ? mu::EncodingKind::Phase
                                               : mu::EncodingKind::OneHot;
            cfg.d = d;
            cfg.include_hydrogens = include_h;
            cfg.table = paper_table ? mu::PhaseTable::Paper : mu::PhaseTable::General;
            mu::BuiltObjective obj = mu::build_objective(mol, fd, cfg);
            PendingOutputs out;
            out.add(out_path, mu::hubo_to_json(obj.poly, obj.registry));
            fs::path stats = fs::path(out_path);
            stats.replace_extension(".stats.csv");
            out.add(stats, mu::term_stats_csv(mu::term_stats(obj.poly)));
            out.commit();
            auto st = mu::term_stats(obj.poly);
            std::cout << "variables: " << obj.registry.num_vars() << "\n";
            std::cout << "terms: " << st.num_terms << " (max degree " << st.max_degree
                      << ")\n";
            std::cout << "wrote " << out_path << " and " << stats.string() << "\n";
            return 0;
        }

        if (solve->parsed()) {
            mu::Molecule mol = mu::load_molecule_file(in_path);
            auto rbs = mu::detect_rotatable_bonds(mol);
            auto fd = mu::decompose_fragments(mol, rbs);
            mu::AngleGrid grid(d);

            mu::SolveResult result;
            if (solver == "brute") {
                result = mu::brute_force(mol, fd, grid, size_t(1) << 20, include_h);
            } else if (solver == "greedy") {
                result = mu::greedy_geodock(mol, fd, grid, rounds, include_h);
            } else {
                mu::ObjectiveConfig cfg;
                cfg.d = d;
                cfg.include_hydrogens = include_h;
                if (solver == "bsb") {
                    if (encoding != "phase")
                        throw CLI::ValidationError(
                            "--solver bsb requires --encoding phase");
                    cfg.encoding = mu::EncodingKind::Phase;
                    mu::BuiltObjective obj = mu::build_objective(mol, fd, cfg);
                    mu::BsbConfig bc{a0, c0, dt, steps};
                    result = mu::solve_bsb(obj.poly, obj.registry.num_vars(), bc, seed);
                    result.best_theta = mu::decode_assignment(obj, result.best_assignment);
                } else {  // sa
                    if (encoding != "onehot")
                        throw CLI::ValidationError(
                            "--solver sa requires --encoding onehot");
                    cfg.encoding = mu::EncodingKind::OneHot;
                    mu::BuiltObjective obj = mu::build_objective(mol, fd, cfg);
                    mu::SaConfig sc;
                    sc.steps = steps;
                    result = mu::solve_sa(obj.poly, obj.registry, sc, seed);
                    result.best_theta = mu::decode_assignment(obj, result.best_assignment);
                }
            }

            mu::Conformation conf = mu::realize_conformation(mol, fd, result.best_theta);
            PendingOutputs out;
            out.add(fs::path(out_path) / "result.json", mu::solve_result_to_json(result));
            out.add(fs::path(out_path) / "unfolded.xyzb",
                    mu::write_xyz_bonds(mol, conf.positions,
                                        "unfolded by " + result.solver));
            out.commit();
            std::cout << "solver: " << result.solver << "\n";
            std::cout << "seed: " << result.seed << "\n";
            std::cout << "best volume: " << result.best_volume << "\n";
            std::cout << "wrote " << (fs::path(out_path) / "result.json").string()
                      << "\n";
            return 0;
        }

        if (bench->parsed()) {
            mu::BenchConfig cfg;
            for (const auto& entry : fs::directory_iterator(in_path)) {
                if (!entry.is_regular_file()) continue;
                auto ext = entry.path().extension().string();
                if (ext == ".xyzb" || ext == ".xyz" || ext == ".mol" || ext == ".sdf")
                    cfg.molecule_paths.push_back(entry.path().string());
            }
            std::sort(cfg.molecule_paths.begin(), cfg.molecule_paths.end());
            if (cfg.molecule_paths.empty())
                throw CLI::ValidationError("no molecule files in " + in_path);
            cfg.d = d;
            cfg.samples = samples;
            cfg.master_seed = seed;
            cfg.jobs = jobs;
            cfg.include_hydrogens = include_h;
            cfg.windows.clear();
            std::stringstream ws(windows_str);
            for (std::string tok; std::getline(ws, tok, ',');)
                cfg.windows.push_back(std::stoi(tok));
            cfg.solvers.clear();
            std::stringstream ss(solvers_str);
            for (std::string tok; std::getline(ss, tok, ',');)
                cfg.solvers.push_back(tok);
            mu::BenchReport report = mu::run_benchmark(cfg);
            mu::write_bench_report(report, out_path);
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << "master seed: " << seed << "\n";
            std::cout << "wrote report to " << out_path << "\n";
            return 0;
        }

        if (qaoa->parsed()) {
            std::ifstream in(in_path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open " + in_path);
            std::ostringstream ss;
            ss << in.rdbuf();
            mu::LoadedHubo loaded = mu::hubo_from_json(ss.str());
            if (loaded.poly.domain() != mu::Domain::Spin)
                throw CLI::ValidationError(
                    "qaoa needs a spin-domain (phase-encoded) HUBO");
            mu::Polynomial poly = loaded.poly;
            size_t before = poly.nonconstant_term_count();
            if (prune_tau >= 0) poly = mu::prune_threshold(poly, prune_tau);
            size_t after = poly.nonconstant_term_count();
            if (do_rescale) poly = mu::rescale(poly);
            int n_qubits = loaded.registry.num_vars();
            mu::DiagonalHamiltonian h = mu::build_diagonal(poly, n_qubits);

            mu::Landscape land = mu::landscape(h, grid_res);
            mu::OptimizeResult opt = mu::optimize(
                h, mu::best_grid_point(land), 2.0 * 3.14159265358979323846 / grid_res);
            mu::Statevector sv = mu::run_qaoa(h, opt.params);
            auto counts = mu::sample(sv, shots, seed);
            uint64_t mode = mu::mode_outcome(counts);
            uint64_t ground = h.argmin();

            PendingOutputs out;
            out.add(fs::path(out_path) / "landscape.csv", mu::landscape_csv(land));
            out.add(fs::path(out_path) / "histogram.csv",
                    mu::histogram_csv(sv, counts, shots));
            if (emit_gates)
                out.add(fs::path(out_path) / "gates.txt",
                        mu::gates_to_text(mu::cost_layer_gates(poly, opt.params.gamma)));
            out.commit();

            std::cout << "qubits: " << n_qubits << "\n";
            if (prune_tau >= 0)
                std::cout << "terms: " << before << " -> " << after << " (prune "
                          << prune_tau << ")\n";
            std::cout << "ground state: " << mu::bitstring(ground, n_qubits)
                      << " energy " << h.min_energy() << "\n";
            std::cout << "optimized (gamma, beta): (" << opt.params.gamma << ", "
                      << opt.params.beta << ") expectation " << opt.trace.back()
                      << "\n";
            std::cout << "seed: " << seed << "\n";
            std::cout << "mode outcome: " << mu::bitstring(mode, n_qubits)
                      << (mode == ground ? " (= ground state)" : "") << "\n";
            std::cout << "wrote report to " << out_path << "\n";
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
