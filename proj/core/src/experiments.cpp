#include "homeo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "homeo/exponents.hpp"
#include "homeo/oracle.hpp"

namespace homeo {

namespace {

std::vector<std::vector<Vertex>> grid_classes(int r, std::size_t n) {
  std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(r));
  for (int c = 0; c < r; ++c)
    for (std::size_t k = 0; k < n; ++k)
      classes[static_cast<std::size_t>(c)].push_back(
          static_cast<Vertex>(static_cast<std::size_t>(c) * n + k));
  return classes;
}

PartitionedHypergraph assemble_partite(int r, std::size_t n, SetFamily edges) {
  auto classes = grid_classes(r, n);
  std::vector<Vertex> verts;
  for (const auto& c : classes) verts.insert(verts.end(), c.begin(), c.end());
  return PartitionedHypergraph(Hypergraph::with_vertices(r, std::move(verts), std::move(edges)),
                               std::move(classes));
}

Edge decode_rainbow(std::uint64_t index, int r, std::size_t n) {
  Edge e(static_cast<std::size_t>(r));
  for (int c = r - 1; c >= 0; --c) {
    e[static_cast<std::size_t>(c)] =
        static_cast<Vertex>(static_cast<std::size_t>(c) * n + index % n);
    index /= n;
  }
  return e;
}

std::uint64_t rainbow_total(int r, std::size_t n) {
  std::uint64_t total = 1;
  for (int c = 0; c < r; ++c) {
    if (total > ~0ULL / n) throw ResourceError("rainbow edge space overflows 64 bits");
    total *= n;
  }
  return total;
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 95%
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = p + z2 / (2.0 * nt);
  const double spread = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  return {std::max(0.0, (centre - spread) / denom), std::min(1.0, (centre + spread) / denom)};
}

PartitionedHypergraph random_partite(int r, std::size_t n, double p, std::uint64_t seed) {
  if (r < 1 || n < 1) throw DomainError("random host needs r >= 1 and n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability must lie in [0, 1]");
  const std::uint64_t total = rainbow_total(r, n);
  if (total > 50000000ULL) throw ResourceError("rainbow edge space too large to sample");
  Rng rng(seed);
  std::bernoulli_distribution coin(p);
  SetFamily edges;
  for (std::uint64_t idx = 0; idx < total; ++idx)
    if (coin(rng)) edges.push_back(decode_rainbow(idx, r, n));
  return assemble_partite(r, n, std::move(edges));
}

PartitionedHypergraph random_partite_edges(int r, std::size_t n, std::uint64_t m,
                                           std::uint64_t seed) {
  if (r < 1 || n < 1) throw DomainError("random host needs r >= 1 and n >= 1");
  const std::uint64_t total = rainbow_total(r, n);
  m = std::min(m, total);
  if (m > 50000000ULL) throw ResourceError("requested edge count too large to sample");
  // Floyd's sampling: uniform m-subset of {0, ..., total-1} without
  // materializing the whole range.
  Rng rng(seed);
  std::set<std::uint64_t> picked;
  for (std::uint64_t j = total - m; j < total; ++j) {
    std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    if (!picked.insert(t).second) picked.insert(j);
  }
  SetFamily edges;
  for (std::uint64_t idx : picked) edges.push_back(decode_rainbow(idx, r, n));
  return assemble_partite(r, n, std::move(edges));
}

PartitionedHypergraph plant_copy(const PartitionedHypergraph& host,
                                 const PartitionedHypergraph& pattern,
                                 std::uint64_t seed) {
  const int r = host.uniformity();
  if (pattern.uniformity() != r) throw DomainError("pattern and host uniformity differ");
  Rng rng(seed);
  std::map<Vertex, Vertex> where;
  for (int c = 0; c < r; ++c) {
    const auto& pc = pattern.classes()[static_cast<std::size_t>(c)];
    std::vector<Vertex> hc = host.classes()[static_cast<std::size_t>(c)];
    if (pc.size() > hc.size())
      throw DomainError("pattern class larger than the matching host class");
    std::shuffle(hc.begin(), hc.end(), rng);
    for (std::size_t k = 0; k < pc.size(); ++k) where[pc[k]] = hc[k];
  }
  std::set<Edge> edges(host.edges().begin(), host.edges().end());
  for (const auto& e : pattern.edges()) {
    Edge me;
    for (Vertex v : e) me.push_back(where.at(v));
    std::sort(me.begin(), me.end());
    edges.insert(me);
  }
  SetFamily all(edges.begin(), edges.end());
  std::vector<Vertex> verts;
  for (const auto& c : host.classes()) verts.insert(verts.end(), c.begin(), c.end());
  return PartitionedHypergraph(
      Hypergraph::with_vertices(r, std::move(verts), std::move(all)), host.classes());
}

std::vector<ScanRow> threshold_scan(const PartitionedHypergraph& pattern,
                                    const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("scan needs at least one trial per cell");
  const int r = pattern.uniformity();
  std::vector<ScanRow> rows;
  std::uint64_t cell = 0;
  for (std::size_t n : cfg.n_values) {
    for (double alpha : cfg.grid) {
      ScanRow row;
      row.n = n;
      row.alpha = alpha;
      row.trials = cfg.trials;
      const double exponent = static_cast<double>(r) - alpha;
      row.edges = exponent <= 0.0
                      ? 0
                      : static_cast<std::uint64_t>(
                            std::ceil(std::pow(static_cast<double>(n), exponent)));
      row.edges = std::min(row.edges, rainbow_total(r, n));
      try {
        for (std::uint64_t t = 0; t < cfg.trials; ++t) {
          PartitionedHypergraph host =
              random_partite_edges(r, n, row.edges, derive_seed(cfg.seed, cell, t));
          if (find_embedding(pattern, host)) ++row.hits;
        }
      } catch (const ResourceError&) {
        row.na = true;
        row.hits = 0;
      }
      rows.push_back(row);
      ++cell;
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "# schema: threshold-scan v1\n";
  os << "n,alpha,edges,trials,hits,frequency,wilson_lo,wilson_hi\n";
  os << std::setprecision(6) << std::fixed;
  for (const auto& row : rows) {
    os << row.n << ',' << row.alpha << ',';
    if (row.na) {
      os << "NA,NA,NA,NA,NA,NA\n";
      continue;
    }
    auto w = wilson_interval(row.hits, row.trials);
    os << row.edges << ',' << row.trials << ',' << row.hits << ','
       << static_cast<double>(row.hits) / static_cast<double>(row.trials) << ',' << w.lo << ','
       << w.hi << '\n';
  }
}

std::vector<PlantRow> plant_recover(const PartitionedHypergraph& pattern, int d,
                                    const ExperimentConfig& cfg,
                                    const PipelineBudgets& budgets) {
  if (cfg.trials < 1) throw DomainError("plant-and-recover needs at least one trial per cell");
  if (auto w = trace_bound_violation(pattern, static_cast<std::size_t>(d)))
    throw DomainError("pattern is not trace-bounded at the configured d (level " +
                      std::to_string(w->level) + ", vertex " + std::to_string(w->vertex) + ")");
  const int r = pattern.uniformity();
  std::vector<PlantRow> rows;
  std::uint64_t cell = 0;
  for (std::size_t n : cfg.n_values) {
    for (double density : cfg.grid) {
      if (!(density >= 0.0 && density <= 1.0))
        throw DomainError("plant-and-recover densities must lie in [0, 1]");
      for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(cfg.seed, cell, t);
        PartitionedHypergraph noise = random_partite(r, n, density, derive_seed(trial_seed, 1));
        PlantRow row;
        row.n = n;
        row.density = density;
        row.noise_edges = noise.edges().size();
        PartitionedHypergraph host = plant_copy(noise, pattern, derive_seed(trial_seed, 2));
        auto out = run_pipeline(host.base(), pattern, d, derive_seed(trial_seed, 3), budgets);
        if (std::holds_alternative<EmbeddingMap>(out)) {
          // Audit against the raw host: injective, every pattern edge lands
          // on a host edge. The pipeline chooses its own balanced partition,
          // so class alignment with the planted one is not required.
          const auto& m = std::get<EmbeddingMap>(out);
          std::map<Vertex, Vertex> mm;
          bool ok = true;
          std::set<Vertex> images;
          for (const auto& [from, to] : m.flat()) {
            mm[from] = to;
            if (!images.insert(to).second) ok = false;
          }
          for (const auto& e : pattern.edges()) {
            if (!ok) break;
            Edge me;
            for (Vertex v : e) {
              auto it = mm.find(v);
              if (it == mm.end()) {
                ok = false;
                break;
              }
              me.push_back(it->second);
            }
            if (!ok) break;
            std::sort(me.begin(), me.end());
            if (!host.base().has_edge(me)) ok = false;
          }
          row.pipeline_success = ok ? 1 : 0;
          if (!ok) row.stage = "audit";
        } else {
          row.pipeline_success = 0;
          row.stage = std::get<FailureReport>(out).stage;
        }
        rows.push_back(std::move(row));
      }
      ++cell;
    }
  }
  return rows;
}

void write_plant_csv(std::ostream& os, const std::vector<PlantRow>& rows) {
  os << "# schema: plant-recover v1\n";
  os << "n,density,noise_edges,pipeline_success,oracle_success,stage\n";
  os << std::setprecision(6) << std::fixed;
  for (const auto& row : rows)
    os << row.n << ',' << row.density << ',' << row.noise_edges << ','
       << row.pipeline_success << ',' << row.oracle_success << ',' << row.stage << '\n';
}

std::string exponents_table(int r_max, int d_max, int k_max) {
  std::ostringstream os;
  os << "# schema: exponent-table v1\n";
  os << "block\tr\td\tvalue\tvalue_decimal\tfloor\tfloor_decimal\tbound_holds\n";
  for (int r = 2; r <= r_max; ++r)
    for (int d = 1; d <= d_max; ++d) {
      Rational a = turan_exponent(r, d);
      Rational lb = turan_exponent_lower_bound(r, d);
      os << "alpha\t" << r << '\t' << d << '\t' << a << '\t' << rational_decimal(a) << '\t'
         << lb << '\t' << rational_decimal(lb) << '\t' << (a >= lb ? "true" : "false") << '\n';
    }
  for (const auto& row : lambda_table(k_max))
    os << "lambda\t" << row.k << '\t' << (row.prior_work ? "classical" : "reduction") << '\t'
       << row.lambda << '\t' << rational_decimal(row.lambda) << '\t' << row.headline << '\t'
       << rational_decimal(row.headline) << '\t'
       << (row.lambda >= row.headline ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace homeo
