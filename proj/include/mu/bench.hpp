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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mu/geometry.hpp"
#include "mu/solvers.hpp"

namespace mu {

/// alpha = achieved / reference; the reference must be positive.
double volume_ratio(double achieved, double reference);

/// Time-to-target: (T/N) log(0.01) / log(1-p) for p in [0,1), T/N at p = 1.
/// p = 0 has no finite value and yields an empty optional.
std::optional<double> ttt(double total_seconds, int samples, double p);

/// Same formula with p = probability of hitting the exact optimum.
std::optional<double> tts(double total_seconds, int samples, double p_opt);

/// Fraction of results whose best volume reaches the target (1e-9 relative
/// slack).
double success_probability(std::span<const SolveResult> results, double target);

struct BoxplotStats {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Quartiles by linear interpolation between order statistics (inclusive).
BoxplotStats boxplot(std::vector<double> values);

double median(std::vector<double> values);

/// RMSD boxplots per group label from (group, reference, candidate) rows.
std::map<std::string, BoxplotStats> rmsd_report(
    const std::vector<std::tuple<std::string, Conformation, Conformation>>& pairs);

struct BenchConfig {
    std::vector<std::string> molecule_paths;
    std::vector<std::string> solvers = {"bsb", "sa"};
    int d = 16;
    int samples = 20;
    std::vector<int> windows = {10, 25, 50, 100};
    uint64_t master_seed = 1;
    int jobs = 1;
    bool include_hydrogens = true;
    double target_fraction = 0.997;
    size_t brute_cap = size_t(1) << 20;
    BsbConfig bsb;
    SaConfig sa;
};

struct TttRow {
    std::string solver;
    int window = 0;
    std::optional<double> median_ttt_s;
    double p_median = 0.0;
    int undefined_count = 0;
};

struct BenchReport {
    std::string ratio_trace_csv;
    std::string ttt_csv;
    std::string rmsd_csv;
    std::string manifest_json;
    std::vector<TttRow> ttt_rows;
    std::vector<std::string> warnings;
};

/// Runs (molecule x solver x window x sample) jobs on a small worker pool;
/// every job's seed derives from the master seed and job coordinates, so
/// outputs are reproducible for a fixed master seed (wall-clock timing
/// fields aside).
BenchReport run_benchmark(const BenchConfig& cfg);

/// Writes ratio_trace.csv, ttt.csv, rmsd.csv and manifest.json.
void write_bench_report(const BenchReport& report, const std::string& out_dir);

}  // namespace mu
