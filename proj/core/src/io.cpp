#include "homeo/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace homeo {

PartitionedHypergraph GraphDoc::as_partitioned() const {
  if (!classes) throw DomainError("graph file carries no classes");
  return PartitionedHypergraph(graph, *classes);
}

std::string to_text(const GraphDoc& doc) {
  std::ostringstream os;
  const Hypergraph& g = doc.graph;
  os << g.uniformity() << ' ' << g.vertex_count() << ' ' << g.edge_count()
     << '\n';
  for (const auto& e : g.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i)
      os << (i ? " " : "") << e[i];
    os << '\n';
  }
  if (doc.classes) {
    os << "classes\n";
    for (const auto& c : *doc.classes) {
      for (std::size_t i = 0; i < c.size(); ++i)
        os << (i ? " " : "") << c[i];
      os << '\n';
    }
  } else {
    // isolated vertices are not recoverable from the edge list alone
    std::vector<Vertex> isolated;
    for (Vertex v : g.vertices())
      if (degree(g, v) == 0) isolated.push_back(v);
    if (!isolated.empty()) {
      os << "isolated\n";
      for (std::size_t i = 0; i < isolated.size(); ++i)
        os << (i ? " " : "") << isolated[i];
      os << '\n';
    }
  }
  return os.str();
}

GraphDoc parse_text(const std::string& content) {
  std::istringstream is(content);
  long long r = 0, n = 0, m = 0;
  if (!(is >> r >> n >> m)) throw DomainError("bad header, expected 'r n m'");
  if (r < 1 || n < 0 || m < 0) throw DomainError("bad header values");
  std::vector<Edge> edges(static_cast<std::size_t>(m));
  for (auto& e : edges) {
    e.resize(static_cast<std::size_t>(r));
    for (auto& v : e)
      if (!(is >> v)) throw DomainError("truncated edge list");
  }
  std::string word;
  std::optional<std::vector<std::vector<Vertex>>> classes;
  std::vector<Vertex> isolated;
  if (is >> word) {
    if (word == "isolated") {
      Vertex v;
      while (is >> v) isolated.push_back(v);
    } else if (word != "classes") {
      throw DomainError("unexpected token '" + word + "' after edges");
    }
  }
  if (word == "classes") {
    std::string line;
    std::getline(is, line);  // finish the "classes" line
    std::vector<std::vector<Vertex>> cls;
    while (std::getline(is, line)) {
      if (static_cast<long long>(cls.size()) == r) {
        std::istringstream extra(line);
        std::string tok;
        if (extra >> tok) throw DomainError("trailing content after classes");
        continue;
      }
      std::istringstream ls(line);
      std::vector<Vertex> c;
      Vertex v;
      while (ls >> v) c.push_back(v);
      cls.push_back(std::move(c));
    }
    if (static_cast<long long>(cls.size()) != r)
      throw DomainError("expected one class line per uniformity level");
    classes = std::move(cls);
  }
  GraphDoc doc;
  if (classes) {
    std::vector<Vertex> verts;
    for (const auto& c : *classes) verts.insert(verts.end(), c.begin(), c.end());
    doc.graph = Hypergraph::with_vertices(static_cast<int>(r), std::move(verts),
                                          std::move(edges));
    doc.classes = std::move(classes);
    doc.as_partitioned();  // validate
  } else if (!isolated.empty()) {
    std::vector<Vertex> verts = Hypergraph::from_edges(static_cast<int>(r), edges).vertices();
    verts.insert(verts.end(), isolated.begin(), isolated.end());
    doc.graph = Hypergraph::with_vertices(static_cast<int>(r), std::move(verts),
                                          std::move(edges));
  } else {
    doc.graph = Hypergraph::from_edges(static_cast<int>(r), std::move(edges));
  }
  if (doc.graph.vertex_count() != static_cast<std::size_t>(n))
    throw DomainError("header vertex count " + std::to_string(n) +
                      " does not match " +
                      std::to_string(doc.graph.vertex_count()));
  return doc;
}

std::string to_json_string(const GraphDoc& doc) {
  nlohmann::json j;
  j["uniformity"] = doc.graph.uniformity();
  j["vertices"] = doc.graph.vertices();
  j["edges"] = doc.graph.edges();
  if (doc.classes) j["classes"] = *doc.classes;
  return j.dump();
}

GraphDoc parse_json(const std::string& content) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad json: ") + e.what());
  }
  try {
    int r = j.at("uniformity").get<int>();
    auto edges = j.at("edges").get<std::vector<Edge>>();
    GraphDoc doc;
    if (j.contains("classes")) {
      auto classes = j.at("classes").get<std::vector<std::vector<Vertex>>>();
      std::vector<Vertex> verts;
      for (const auto& c : classes) verts.insert(verts.end(), c.begin(), c.end());
      doc.graph = Hypergraph::with_vertices(r, std::move(verts), std::move(edges));
      doc.classes = std::move(classes);
      doc.as_partitioned();  // validate
    } else if (j.contains("vertices")) {
      doc.graph = Hypergraph::with_vertices(
          r, j.at("vertices").get<std::vector<Vertex>>(), std::move(edges));
    } else {
      doc.graph = Hypergraph::from_edges(r, std::move(edges));
    }
    if (j.contains("vertices")) {
      auto vs = j.at("vertices").get<std::vector<Vertex>>();
      std::sort(vs.begin(), vs.end());
      if (vs != doc.graph.vertices())
        throw DomainError("vertex list disagrees with classes/edges");
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad graph json: ") + e.what());
  }
}

GraphDoc parse_graph(const std::string& content) {
  for (char ch : content) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
    return ch == '{' ? parse_json(content) : parse_text(content);
  }
  throw DomainError("empty graph file");
}

GraphDoc load_graph(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_graph(ss.str());
}

void save_graph(const GraphDoc& doc, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path);
  bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  f << (json ? to_json_string(doc) : to_text(doc));
}

}  // namespace homeo
