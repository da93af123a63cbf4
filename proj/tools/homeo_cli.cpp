// Command line surface for the homeomorph toolkit: subdivision, bounded
// pattern families, exact containment, the randomized embedding pipeline,
// exponent tables, and the Monte Carlo harnesses. One binary, one verb per
// run; results go to --out (default stdout), progress and diagnostics to
// stderr. Exit codes: 0 success, 1 negative decision (no copy found /
// pipeline gave up), 2 domain error, 3 resource error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "homeo/embedding.hpp"
#include "homeo/experiments.hpp"
#include "homeo/family.hpp"
#include "homeo/io.hpp"
#include "homeo/oracle.hpp"
#include "homeo/subdivision.hpp"

namespace {

using nlohmann::json;
using namespace homeo;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw DomainError("cannot open output file " + out_path);
  os << content;
  std::cerr << "wrote " << out_path << "\n";
}

// "0,1,2;0,2,3" -> facet list.
SetFamily parse_facets(const std::string& text) {
  SetFamily facets;
  std::stringstream chunks(text);
  std::string chunk;
  while (std::getline(chunks, chunk, ';')) {
    Edge facet;
    std::stringstream items(chunk);
    std::string item;
    while (std::getline(items, item, ',')) facet.push_back(std::stoull(item));
    if (!facet.empty()) facets.push_back(std::move(facet));
  }
  if (facets.empty()) throw DomainError("no facets given");
  return facets;
}

struct PatternSource {
  std::string pattern_path;
  std::string facets;
  int dim = 0;

  void attach(CLI::App* cmd, bool required) {
    auto* p = cmd->add_option("--pattern", pattern_path,
                              "pattern file (partitioned graph, text or JSON)");
    auto* f = cmd->add_option("--facets", facets,
                              "complex facets \"0,1,2;0,2,3\"; the pattern becomes its "
                              "subdivision target");
    cmd->add_option("--dim", dim, "complex dimension k (with --facets)");
    p->excludes(f);
    if (required) {
      // one of the two must be present
      cmd->callback([this]() {
        if (pattern_path.empty() && facets.empty())
          throw CLI::ValidationError("pattern", "need --pattern or --facets");
      });
    }
  }

  // Returns the pattern; when built from a complex, reports the canonical
  // trace bound (k+1)! through `default_d` if the caller left it unset.
  PartitionedHypergraph load(int* default_d = nullptr) const {
    if (!pattern_path.empty()) return load_graph(pattern_path).as_partitioned();
    SimplicialComplex s = SimplicialComplex::from_facets(dim, parse_facets(facets));
    if (default_d && *default_d == 0) {
      int bound = 1;
      for (int t = 2; t <= dim + 1; ++t) bound *= t;
      *default_d = bound;
    }
    return homeomorph_target(s);
  }
};

json map_to_json(const std::vector<std::pair<Vertex, Vertex>>& flat) {
  json arr = json::array();
  for (const auto& [from, to] : flat) arr.push_back({from, to});
  return arr;
}

json report_to_json(const FailureReport& rep) {
  json j;
  j["status"] = "failed";
  j["stage"] = rep.stage;
  j["condition"] = rep.condition;
  j["observed"] = rep.observed;
  j["required"] = rep.required;
  j["counters"] = rep.counters;
  j["annotations"] = rep.annotations;
  return j;
}

// --config JSON: fills any of n, grid, trials, seed not given as flags.
void apply_config(const std::string& path, CLI::App* cmd, ExperimentConfig& cfg) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open config file " + path);
  json j = json::parse(is);
  auto unset = [&](const std::string& flag) {
    auto* opt = cmd->get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  if (j.contains("n") && unset("--n")) cfg.n_values = j["n"].get<std::vector<std::size_t>>();
  if (j.contains("grid") && unset("--alpha") && unset("--density"))
    cfg.grid = j["grid"].get<std::vector<double>>();
  if (j.contains("trials") && unset("--trials")) cfg.trials = j["trials"].get<std::size_t>();
  if (j.contains("seed") && unset("--seed")) cfg.seed = j["seed"].get<std::uint64_t>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simplicial homeomorph containment toolkit"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "output file (default: stdout)")->configurable(false);

  int exit_code = 0;

  // ---- subdivide ----------------------------------------------------------
  auto* sub = app.add_subcommand("subdivide", "canonical subdivision of a complex");
  std::string sub_in, sub_facets;
  int sub_dim = 1;
  bool sub_text = false;
  std::size_t sub_certify = 0;
  sub->add_option("--in", sub_in, "facet graph file ((k+1)-uniform)");
  sub->add_option("--facets", sub_facets, "inline facets \"0,1,2;0,2,3\"");
  sub->add_option("--dim", sub_dim, "complex dimension k");
  sub->add_flag("--text", sub_text, "write the text format instead of JSON");
  sub->add_option("--certify", sub_certify, "check all subdivision invariants at this d");
  sub->callback([&]() {
    SimplicialComplex s = !sub_in.empty()
                              ? SimplicialComplex::from_hypergraph(load_graph(sub_in).graph)
                              : SimplicialComplex::from_facets(sub_dim, parse_facets(sub_facets));
    auto result = canonical_subdivide(s);
    std::cerr << "subdivision: " << result.partition.base().vertex_count() << " vertices, "
              << result.partition.edges().size() << " facets, "
              << result.partition.uniformity() << " classes\n";
    if (sub_certify > 0) {
      bool ok = certify_subdivision(result, sub_certify);
      std::cerr << "certify(d=" << sub_certify << "): " << (ok ? "ok" : "FAILED") << "\n";
      if (!ok) exit_code = 1;
    }
    GraphDoc doc(result.partition);
    emit(out_path, sub_text ? to_text(doc) : to_json_string(doc));
  });

  // ---- family -------------------------------------------------------------
  auto* fam = app.add_subcommand("family", "bounded pattern family H(r, d)");
  int fam_r = 2, fam_d = 1;
  bool fam_list = false;
  fam->add_option("--r", fam_r, "uniformity")->required();
  fam->add_option("--d", fam_d, "edge bound")->required();
  fam->add_flag("--list", fam_list, "list codes instead of the count");
  fam->callback([&]() {
    const auto& classes = family_of(fam_r, fam_d);
    std::ostringstream os;
    if (fam_list) {
      os << "code\tvertices\tedges\tautomorphisms\n";
      for (const auto& cls : classes)
        os << cls.code << '\t' << cls.vertex_count << '\t' << cls.edge_count << '\t'
           << cls.automorphisms << '\n';
    } else {
      os << classes.size() << '\n';
    }
    emit(out_path, os.str());
  });

  // ---- contains / count ---------------------------------------------------
  auto* con = app.add_subcommand("contains", "exact class-respecting containment");
  auto* cnt = app.add_subcommand("count", "count all copies exactly");
  PatternSource con_pat, cnt_pat;
  std::string con_host, cnt_host;
  std::uint64_t con_budget = 0;
  bool cnt_witnesses = false;
  con_pat.attach(con, true);
  con->add_option("--host", con_host, "host file (partitioned)")->required();
  con->add_option("--budget", con_budget, "search node budget override");
  cnt_pat.attach(cnt, true);
  cnt->add_option("--host", cnt_host, "host file (partitioned)")->required();
  cnt->add_flag("--witnesses", cnt_witnesses, "include one witness map per copy");
  con->callback([&]() {
    auto pattern = con_pat.load();
    auto host = load_graph(con_host).as_partitioned();
    SearchOptions opts;
    if (con_budget > 0) opts.node_budget = con_budget;
    auto found = find_embedding(pattern, host, opts);
    json j;
    j["found"] = found.has_value();
    if (found) j["witness"] = map_to_json(*found);
    emit(out_path, j.dump(2));
    if (!found) exit_code = 1;
  });
  cnt->callback([&]() {
    auto pattern = cnt_pat.load();
    auto host = load_graph(cnt_host).as_partitioned();
    auto copies = count_copies(pattern, host);
    json j;
    j["copies"] = copies.size();
    if (cnt_witnesses) {
      json arr = json::array();
      for (const auto& rec : copies) arr.push_back(map_to_json(rec.witness_map));
      j["witnesses"] = arr;
    }
    emit(out_path, j.dump(2));
    if (copies.empty()) exit_code = 1;
  });

  // ---- embed --------------------------------------------------------------
  auto* emb = app.add_subcommand("embed", "randomized trace-descent embedding pipeline");
  PatternSource emb_pat;
  std::string emb_host;
  int emb_d = 0;
  std::uint64_t emb_seed = 0;
  emb_pat.attach(emb, true);
  emb->add_option("--host", emb_host, "host file (raw or partitioned; classes are ignored)")
      ->required();
  emb->add_option("--d", emb_d, "trace bound (default (k+1)! when built from --facets)");
  emb->add_option("--seed", emb_seed, "master seed");
  emb->callback([&]() {
    int d = emb_d;
    auto pattern = emb_pat.load(&d);
    if (d <= 0) throw DomainError("embed needs --d (or --facets to imply it)");
    Hypergraph host = load_graph(emb_host).graph;
    auto result = run_pipeline(host, pattern, d, emb_seed);
    if (std::holds_alternative<EmbeddingMap>(result)) {
      const auto& m = std::get<EmbeddingMap>(result);
      json j;
      j["status"] = "embedded";
      j["map"] = map_to_json(m.flat());
      j["annotations"] = m.annotations;
      emit(out_path, j.dump(2));
    } else {
      const auto& rep = std::get<FailureReport>(result);
      std::cerr << "pipeline gave up at " << rep.stage << ": " << rep.condition << "\n";
      emit(out_path, report_to_json(rep).dump(2));
      exit_code = 1;
    }
  });

  // ---- exponents ----------------------------------------------------------
  auto* expo = app.add_subcommand("exponents", "exact exponent tables (TSV)");
  int expo_r = 6, expo_d = 6, expo_k = 5;
  expo->add_option("--r-max", expo_r, "largest uniformity");
  expo->add_option("--d-max", expo_d, "largest trace bound");
  expo->add_option("--k-max", expo_k, "largest complex dimension");
  expo->callback([&]() { emit(out_path, exponents_table(expo_r, expo_d, expo_k)); });

  // ---- scan / plant -------------------------------------------------------
  auto* scan = app.add_subcommand("scan", "containment frequency vs edge count (CSV)");
  auto* plant = app.add_subcommand("plant", "plant-and-recover pipeline harness (CSV)");
  PatternSource scan_pat, plant_pat;
  ExperimentConfig scan_cfg, plant_cfg;
  std::string scan_config, plant_config;
  int plant_d = 0;
  scan_pat.attach(scan, true);
  scan->add_option("--n", scan_cfg.n_values, "class sizes to scan");
  scan->add_option("--alpha", scan_cfg.grid, "exponents to probe (edges = ceil(n^(r-alpha)))");
  scan->add_option("--trials", scan_cfg.trials, "trials per cell");
  scan->add_option("--seed", scan_cfg.seed, "master seed");
  scan->add_option("--config", scan_config, "JSON config (n, grid, trials, seed)");
  plant_pat.attach(plant, true);
  plant->add_option("--n", plant_cfg.n_values, "class sizes");
  plant->add_option("--density", plant_cfg.grid, "ambient densities in [0, 1]");
  plant->add_option("--trials", plant_cfg.trials, "trials per cell");
  plant->add_option("--seed", plant_cfg.seed, "master seed");
  plant->add_option("--d", plant_d, "trace bound (default (k+1)! when built from --facets)");
  plant->add_option("--config", plant_config, "JSON config (n, grid, trials, seed)");
  scan->callback([&]() {
    apply_config(scan_config, scan, scan_cfg);
    scan_cfg.mode = "threshold-scan";
    if (scan_cfg.n_values.empty() || scan_cfg.grid.empty())
      throw DomainError("scan needs --n and --alpha (or a config supplying them)");
    auto pattern = scan_pat.load();
    auto rows = threshold_scan(pattern, scan_cfg);
    std::ostringstream os;
    write_scan_csv(os, rows);
    emit(out_path, os.str());
  });
  plant->callback([&]() {
    apply_config(plant_config, plant, plant_cfg);
    plant_cfg.mode = "plant-recover";
    if (plant_cfg.n_values.empty() || plant_cfg.grid.empty())
      throw DomainError("plant needs --n and --density (or a config supplying them)");
    int d = plant_d;
    auto pattern = plant_pat.load(&d);
    if (d <= 0) throw DomainError("plant needs --d (or --facets to imply it)");
    auto rows = plant_recover(pattern, d, plant_cfg);
    std::ostringstream os;
    write_plant_csv(os, rows);
    emit(out_path, os.str());
    std::uint64_t successes = 0;
    for (const auto& row : rows) successes += row.pipeline_success;
    std::cerr << "pipeline recovered " << successes << " of " << rows.size() << " trials\n";
  });

  // Let the global --out appear after the verb as well.
  for (CLI::App* s : app.get_subcommands([](CLI::App*) { return true; })) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
