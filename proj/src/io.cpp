#include "arorder/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "arorder/error.hpp"

namespace arorder {

using nlohmann::json;

namespace {

Error parse_error(const std::string& message) { return Error("parse", message); }

// Strips a trailing '#' comment.
std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::size_t parse_index(const std::string& token, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (token.empty() || token[0] == '-' || token[0] == '+') throw std::invalid_argument("");
    v = std::stoull(token, &pos);
  } catch (const std::exception&) {
    throw parse_error("bad " + what + " '" + token + "'");
  }
  if (pos != token.size()) throw parse_error("bad " + what + " '" + token + "'");
  return static_cast<std::size_t>(v);
}

Spin parse_spin(const std::string& token) {
  if (token == "1" || token == "+1") return 1;
  if (token == "-1") return -1;
  throw parse_error("bad spin '" + token + "' (expected +1, 1 or -1)");
}

template <typename T>
T parse_json(std::istream& in, const std::string& what) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw parse_error(what + ": " + e.what());
  }
  try {
    return T::from(doc);
  } catch (const json::exception& e) {
    throw parse_error(what + ": " + e.what());
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  return in;
}

struct ModelDoc {
  IsingModel model;
  static ModelDoc from(const json& doc) {
    const auto n = doc.at("n").get<std::size_t>();
    auto fields = doc.at("fields").get<std::vector<double>>();
    std::vector<Edge> edges;
    std::vector<double> thetas;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw parse_error("each edge must be an [i, j, theta] triple");
      }
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
      thetas.push_back(e[2].get<double>());
    }
    Graph g(n, edges);
    // Graph sorts its edges; realign couplings with the canonical order.
    std::vector<double> couplings(g.num_edges());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      couplings[g.edge_index(edges[k].first, edges[k].second)] = thetas[k];
    }
    return {IsingModel(std::move(g), std::move(fields), std::move(couplings))};
  }
};

struct ARDoc {
  ARModel model;
  static ARDoc from(const json& doc) {
    const auto order = doc.at("ordering").get<std::vector<NodeId>>();
    const auto max_order = doc.at("max_order").get<std::size_t>();
    const auto& nodes = doc.at("conditionals");
    if (nodes.size() != order.size()) {
      throw parse_error("expected one conditional per node");
    }
    std::vector<std::vector<NodeId>> parents(order.size());
    std::vector<ConditionalModel> conds;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      const auto& c = nodes[v];
      if (c.at("node").get<NodeId>() != v) throw parse_error("conditionals must be listed by node id");
      parents[v] = c.at("parents").get<std::vector<NodeId>>();
      auto basis = build_basis(v, parents[v], max_order);
      conds.push_back({std::move(basis), c.at("coefficients").get<std::vector<double>>()});
    }
    Ordering sigma(order);
    return {ARModel(ParentSets(std::move(sigma), std::move(parents)), std::move(conds))};
  }
};

}  // namespace

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(strip_comment(line));
    std::string tag;
    if (!(tokens >> tag)) continue;
    std::string a, b, extra;
    if (tag == "n") {
      if (have_n) throw parse_error("line " + std::to_string(line_no) + ": repeated 'n'");
      if (!(tokens >> a) || (tokens >> extra)) {
        throw parse_error("line " + std::to_string(line_no) + ": expected 'n <N>'");
      }
      n = parse_index(a, "node count");
      have_n = true;
    } else if (tag == "e") {
      if (!have_n) throw parse_error("line " + std::to_string(line_no) + ": edge before 'n'");
      if (!(tokens >> a >> b) || (tokens >> extra)) {
        throw parse_error("line " + std::to_string(line_no) + ": expected 'e <i> <j>'");
      }
      edges.emplace_back(parse_index(a, "node id"), parse_index(b, "node id"));
    } else {
      throw parse_error("line " + std::to_string(line_no) + ": unknown record '" + tag + "'");
    }
  }
  if (!have_n) throw parse_error("graph file has no 'n' line");
  return Graph(n, edges);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "n " << g.num_nodes() << '\n';
  for (auto [a, b] : g.edges()) out << "e " << a << ' ' << b << '\n';
}

IsingModel read_model(std::istream& in) {
  return parse_json<ModelDoc>(in, "model file").model;
}

void write_model(std::ostream& out, const IsingModel& m) {
  json doc;
  doc["n"] = m.num_nodes();
  doc["fields"] = m.fields();
  json edges = json::array();
  const auto& e = m.graph().edges();
  for (std::size_t k = 0; k < e.size(); ++k) {
    edges.push_back({e[k].first, e[k].second, m.couplings()[k]});
  }
  doc["edges"] = std::move(edges);
  out << doc.dump(1) << '\n';
}

Ordering read_ordering(std::istream& in, std::size_t n) {
  std::vector<NodeId> ids;
  std::string line, token;
  while (std::getline(in, line)) {
    std::istringstream tokens(strip_comment(line));
    while (tokens >> token) ids.push_back(parse_index(token, "node id"));
  }
  if (ids.size() != n) {
    throw parse_error("ordering file has " + std::to_string(ids.size()) +
                      " ids, expected " + std::to_string(n));
  }
  return Ordering(std::move(ids));
}

void write_ordering(std::ostream& out, const Ordering& sigma) {
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    out << sigma[k] << (k + 1 == sigma.size() ? '\n' : ' ');
  }
}

SampleSet read_samples(std::istream& in, SampleFormat format, std::size_t n) {
  SampleSet out(n);
  bool sized = n > 0;
  std::string line, token;
  std::size_t line_no = 0;
  Configuration x;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(strip_comment(line));
    std::vector<std::string> fields;
    while (tokens >> token) fields.push_back(token);
    if (fields.empty()) continue;
    double weight = 1.0;
    std::size_t first = 0;
    if (format == SampleFormat::counted) {
      const std::size_t count = parse_index(fields[0], "count");
      if (count == 0) throw parse_error("line " + std::to_string(line_no) + ": count must be positive");
      weight = static_cast<double>(count);
      first = 1;
    }
    const std::size_t width = fields.size() - first;
    if (!sized) {
      if (width == 0) throw parse_error("line " + std::to_string(line_no) + ": no spins");
      out = SampleSet(width);
      n = width;
      sized = true;
    }
    if (width != n) {
      throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                        " spins, got " + std::to_string(width));
    }
    x.resize(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = parse_spin(fields[first + k]);
    out.add(x, weight);
  }
  return out;
}

void write_samples(std::ostream& out, const SampleSet& s, SampleFormat format) {
  std::string buffer;
  for (std::size_t r = 0; r < s.size(); ++r) {
    buffer.clear();
    if (format == SampleFormat::counted) {
      const double w = s.weight(r);
      if (w != std::floor(w) || w < 1.0) {
        throw invalid_argument("counted output needs positive integral weights");
      }
      buffer += std::to_string(static_cast<unsigned long long>(w));
      buffer += ' ';
    }
    const auto row = s.row(r);
    for (std::size_t k = 0; k < row.size(); ++k) {
      buffer += row[k] > 0 ? "+1" : "-1";
      buffer += k + 1 == row.size() ? '\n' : ' ';
    }
    out << buffer;
  }
}

ARModel read_ar_model(std::istream& in) { return parse_json<ARDoc>(in, "AR model file").model; }

void write_ar_model(std::ostream& out, const ARModel& ar) {
  json doc;
  doc["ordering"] = ar.ordering().sequence();
  std::size_t max_order = 1;
  if (ar.num_nodes() > 0) max_order = ar.conditional(0).basis.max_order;
  doc["max_order"] = max_order;
  json nodes = json::array();
  for (NodeId v = 0; v < ar.num_nodes(); ++v) {
    const auto& c = ar.conditional(v);
    if (c.basis.max_order != max_order) {
      throw invalid_argument("AR model file needs a single conditional order");
    }
    nodes.push_back({{"node", v}, {"parents", c.basis.parents}, {"coefficients", c.coefficients}});
  }
  doc["conditionals"] = std::move(nodes);
  out << doc.dump(1) << '\n';
}

Graph load_graph(const std::string& path) {
  auto in = open_input(path);
  return read_graph(in);
}

IsingModel load_model(const std::string& path) {
  auto in = open_input(path);
  return read_model(in);
}

Ordering load_ordering(const std::string& path, std::size_t n) {
  auto in = open_input(path);
  return read_ordering(in, n);
}

SampleSet load_samples(const std::string& path, SampleFormat format, std::size_t n) {
  auto in = open_input(path);
  return read_samples(in, format, n);
}

ARModel load_ar_model(const std::string& path) {
  auto in = open_input(path);
  return read_ar_model(in);
}

SampleFormat parse_sample_format(const std::string& name) {
  if (name == "raw") return SampleFormat::raw;
  if (name == "counted") return SampleFormat::counted;
  throw invalid_argument("unknown sample format '" + name + "' (expected raw or counted)");
}

}  // namespace arorder
