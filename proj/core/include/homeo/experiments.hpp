#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "homeo/embedding.hpp"
#include "homeo/hypergraph.hpp"

namespace homeo {

/// Shared knobs for the desk-scale harness. The grid field is read per
/// mode: threshold scans treat each entry as a Turán exponent alpha (cell
/// edge count ceil(n^(r-alpha)), zero past alpha > r), plant-and-recover
/// treats it as an ambient edge density in (0, 1].
struct ExperimentConfig {
  std::string mode;  // threshold-scan | plant-recover | pipeline | exponents
  int r = 2;
  int d = 1;
  int k = 1;
  std::vector<std::size_t> n_values;
  std::vector<double> grid;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out_path;  // empty = standard output
};

/// 95% Wilson score interval for `hits` successes out of `trials`.
struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};
WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials);

/// Random r-partite host on classes {0..n-1}, {n..2n-1}, ...: every rainbow
/// r-set is an edge independently with probability p.
PartitionedHypergraph random_partite(int r, std::size_t n, double p,
                                     std::uint64_t seed);

/// Random r-partite host with exactly min(m, n^r) distinct rainbow edges,
/// uniform without replacement.
PartitionedHypergraph random_partite_edges(int r, std::size_t n,
                                           std::uint64_t m, std::uint64_t seed);

/// Overlay a random class-respecting injective copy of the pattern onto the
/// host (classes must be at least as large as the pattern's); returns the
/// host with the copy's edges added.
PartitionedHypergraph plant_copy(const PartitionedHypergraph& host,
                                 const PartitionedHypergraph& pattern,
                                 std::uint64_t seed);

/// One threshold-scan cell: `trials` random hosts with exactly `edges`
/// edges, containment of the pattern decided by the exact oracle. A cell
/// whose instance trips an oracle guard is reported once with na = true.
struct ScanRow {
  std::size_t n = 0;
  double alpha = 0.0;
  std::uint64_t edges = 0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  bool na = false;
};
std::vector<ScanRow> threshold_scan(const PartitionedHypergraph& pattern,
                                    const ExperimentConfig& cfg);
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

/// One plant-and-recover trial: a copy of the pattern planted into ambient
/// noise, the pipeline run against it, and the final map re-checked
/// edge-by-edge. pipeline_success is recorded only when that audit passes;
/// oracle_success is 1 by construction (the planted copy certifies
/// containment). stage names the failing stage on pipeline failure.
struct PlantRow {
  std::size_t n = 0;
  double density = 0.0;
  std::uint64_t noise_edges = 0;
  int pipeline_success = 0;
  int oracle_success = 1;
  std::string stage;
};
std::vector<PlantRow> plant_recover(const PartitionedHypergraph& pattern, int d,
                                    const ExperimentConfig& cfg,
                                    const PipelineBudgets& budgets = {});
void write_plant_csv(std::ostream& os, const std::vector<PlantRow>& rows);

/// Exact exponent tables rendered as TSV: one block of alpha rows
/// (r, d, alpha as fraction and decimal, the (5rd)^(1-r) floor, bound_holds)
/// and one block of lambda rows (k, lambda, the k^(-2k^2) floor,
/// bound_holds).
std::string exponents_table(int r_max, int d_max, int k_max);

}  // namespace homeo
