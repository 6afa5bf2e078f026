#include "covalg/system_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace covalg {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw Error("system format: " + msg); }

int block_index(const Json& v, const char* field, int nblocks) {
  if (!v.is_number_integer()) fail(std::string(field) + " entries must be integers");
  const int one_based = v.get<int>();
  if (one_based < 1 || one_based > nblocks) {
    fail(std::string(field) + " names block " + std::to_string(one_based) + " but the algebra has " +
         std::to_string(nblocks) + " blocks (indices are 1-based)");
  }
  return one_based - 1;
}

std::vector<int> block_list(const Json& v, const char* field, int nblocks) {
  if (!v.is_array()) fail(std::string(field) + " must be an array of block indices");
  std::vector<int> out;
  std::set<int> seen;
  for (const auto& e : v) {
    const int b = block_index(e, field, nblocks);
    if (!seen.insert(b).second) {
      fail(std::string(field) + " lists block " + std::to_string(b + 1) + " twice");
    }
    out.push_back(b);
  }
  return out;
}

Complex complex_entry(const Json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail("complex entries must be [re, im] pairs of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Matrix matrix_entry(const Json& v, int n, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    fail(where + " must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = v[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      fail(where + " must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    for (int c = 0; c < n; ++c) m(r, c) = complex_entry(row[c]);
  }
  return m;
}

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

SystemDescription parse_description(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("system format: ") + e.what());
  }
  if (!doc.is_object()) fail("the top level must be a JSON object");

  static const std::set<std::string> known = {"format",    "name",      "block_sizes", "ideal_i",
                                              "ideal_j",   "block_map", "unitaries",   "weights"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) fail("unknown field '" + key + "'");
  }

  if (!doc.contains("format") || !doc["format"].is_number_integer()) {
    fail("missing integer field 'format'");
  }
  if (doc["format"].get<int>() != 1) {
    fail("unsupported format version " + doc["format"].dump() + " (this tool reads format 1)");
  }
  if (!doc.contains("block_sizes")) fail("missing field 'block_sizes'");

  SystemDescription d;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("'name' must be a string");
    d.name = doc["name"].get<std::string>();
  }

  const auto& bs = doc["block_sizes"];
  if (!bs.is_array() || bs.empty()) fail("'block_sizes' must be a nonempty array");
  for (const auto& e : bs) {
    if (!e.is_number_integer() || e.get<int>() < 1) {
      fail("'block_sizes' entries must be positive integers");
    }
    d.block_sizes.push_back(e.get<int>());
  }
  const int nblocks = static_cast<int>(d.block_sizes.size());

  if (doc.contains("ideal_i")) d.ideal_i = block_list(doc["ideal_i"], "ideal_i", nblocks);
  if (doc.contains("ideal_j")) d.ideal_j = block_list(doc["ideal_j"], "ideal_j", nblocks);

  if (doc.contains("block_map")) {
    const auto& bm = doc["block_map"];
    if (!bm.is_array()) fail("'block_map' must be an array of [source, target] pairs");
    for (const auto& pair : bm) {
      if (!pair.is_array() || pair.size() != 2) {
        fail("'block_map' must be an array of [source, target] pairs");
      }
      const int from = block_index(pair[0], "block_map", nblocks);
      const int to = block_index(pair[1], "block_map", nblocks);
      if (d.block_map.count(from)) {
        fail("block_map maps block " + std::to_string(from + 1) + " twice");
      }
      d.block_map[from] = to;
    }
  }

  if (doc.contains("unitaries")) {
    const auto& us = doc["unitaries"];
    if (!us.is_object()) fail("'unitaries' must be an object keyed by source block");
    for (const auto& [key, val] : us.items()) {
      int one_based = 0;
      try {
        size_t used = 0;
        one_based = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail("unitaries key '" + key + "' is not a block index");
      }
      if (one_based < 1 || one_based > nblocks) {
        fail("unitaries names block " + std::to_string(one_based) + " but the algebra has " +
             std::to_string(nblocks) + " blocks (indices are 1-based)");
      }
      const int b = one_based - 1;
      d.unitaries[b] = matrix_entry(val, d.block_sizes[b], "the unitary for block " + key);
    }
  }

  if (doc.contains("weights")) {
    const auto& ws = doc["weights"];
    if (!ws.is_array() || static_cast<int>(ws.size()) != nblocks) {
      fail("'weights' must list one integer array per block");
    }
    std::vector<std::vector<int>> weights;
    for (int b = 0; b < nblocks; ++b) {
      const auto& row = ws[b];
      if (!row.is_array() || static_cast<int>(row.size()) != d.block_sizes[b]) {
        fail("weights for block " + std::to_string(b + 1) + " must have " +
             std::to_string(d.block_sizes[b]) + " entries");
      }
      std::vector<int> wr;
      for (const auto& e : row) {
        if (!e.is_number_integer()) fail("'weights' entries must be integers");
        wr.push_back(e.get<int>());
      }
      weights.push_back(std::move(wr));
    }
    d.weights = std::move(weights);
  }

  return d;
}

std::string load_description_text(const std::string& source) {
  if (source.rfind("gallery:", 0) == 0) return gallery_text(source.substr(8));
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error("cannot open '" + source + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SystemDescription load_description(const std::string& source) {
  return parse_description(load_description_text(source));
}

System description_to_system(const SystemDescription& d, double tol) {
  FdAlgebra alg(d.block_sizes);
  return make_system(alg, Ideal(alg, d.ideal_i), Ideal(alg, d.ideal_j), d.block_map, d.unitaries,
                     tol);
}

CircleAction description_to_action(const SystemDescription& d) {
  if (!d.weights) throw Error("the description has no weights field, so no circle action");
  return CircleAction(FdAlgebra(d.block_sizes), *d.weights);
}

std::string canonical_text(const SystemDescription& d) {
  Json doc;
  doc["format"] = 1;
  doc["name"] = d.name;
  doc["block_sizes"] = d.block_sizes;
  Json ii = Json::array();
  for (int b : d.ideal_i) ii.push_back(b + 1);
  doc["ideal_i"] = std::move(ii);
  Json jj = Json::array();
  for (int b : d.ideal_j) jj.push_back(b + 1);
  doc["ideal_j"] = std::move(jj);
  Json bm = Json::array();
  for (const auto& [from, to] : d.block_map) bm.push_back(Json::array({from + 1, to + 1}));
  doc["block_map"] = std::move(bm);
  std::map<int, Matrix> unitaries = d.unitaries;
  for (const auto& [from, _] : d.block_map) {
    if (!unitaries.count(from) && from < static_cast<int>(d.block_sizes.size())) {
      int n = d.block_sizes[from];
      unitaries[from] = Matrix::Identity(n, n);
    }
  }
  Json us = Json::object();
  for (const auto& [b, u] : unitaries) {
    Json rows = Json::array();
    for (int r = 0; r < u.rows(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < u.cols(); ++c) row.push_back(complex_json(u(r, c)));
      rows.push_back(std::move(row));
    }
    us[std::to_string(b + 1)] = std::move(rows);
  }
  doc["unitaries"] = std::move(us);
  if (d.weights) doc["weights"] = *d.weights;
  return doc.dump();
}

std::string fingerprint(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

namespace {

std::string shift_entry(int m) {
  Json doc;
  doc["format"] = 1;
  doc["name"] = "shift-c" + std::to_string(m);
  doc["block_sizes"] = std::vector<int>(m, 1);
  std::vector<int> ii, jj;
  Json bm = Json::array();
  for (int b = 1; b < m; ++b) {
    ii.push_back(b);
    jj.push_back(b + 1);
    bm.push_back(Json::array({b, b + 1}));
  }
  doc["ideal_i"] = ii;
  doc["ideal_j"] = jj;
  doc["block_map"] = std::move(bm);
  return doc.dump(2) + "\n";
}

const std::vector<std::pair<std::string, std::string>>& gallery() {
  static const std::vector<std::pair<std::string, std::string>> entries = [] {
    std::vector<std::pair<std::string, std::string>> g;
    for (int m = 2; m <= 6; ++m) g.emplace_back("shift-c" + std::to_string(m), shift_entry(m));

    g.emplace_back("zero-ideal", std::string(R"({
  "format": 1,
  "name": "zero-ideal",
  "block_sizes": [2, 1],
  "ideal_i": [],
  "ideal_j": [],
  "block_map": []
})") + "\n");

    g.emplace_back("m2-weights", std::string(R"({
  "format": 1,
  "name": "m2-weights",
  "block_sizes": [2],
  "weights": [[0, 1]]
})") + "\n");

    g.emplace_back("dual-shift-c3", std::string(R"({
  "format": 1,
  "name": "dual-shift-c3",
  "block_sizes": [3],
  "weights": [[0, 1, 2]]
})") + "\n");

    g.emplace_back("glue-m2", std::string(R"({
  "format": 1,
  "name": "glue-m2",
  "block_sizes": [2, 2, 1],
  "ideal_i": [1],
  "ideal_j": [2],
  "block_map": [[1, 2]],
  "unitaries": {
    "1": [[[0.6, 0.0], [-0.8, 0.0]], [[0.8, 0.0], [0.6, 0.0]]]
  }
})") + "\n");

    g.emplace_back("flip-c2", std::string(R"({
  "format": 1,
  "name": "flip-c2",
  "block_sizes": [1, 1],
  "ideal_i": [1, 2],
  "ideal_j": [1, 2],
  "block_map": [[1, 2], [2, 1]]
})") + "\n");

    g.emplace_back("toeplitz-on-c2", std::string(R"({
  "format": 1,
  "name": "toeplitz-on-c2",
  "block_sizes": [1, 1],
  "ideal_i": [1],
  "ideal_j": [2],
  "block_map": [[1, 2]]
})") + "\n");
    return g;
  }();
  return entries;
}

}  // namespace

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, _] : gallery()) n.push_back(name);
    return n;
  }();
  return names;
}

const std::string& gallery_text(const std::string& name) {
  for (const auto& [n, text] : gallery()) {
    if (n == name) return text;
  }
  throw Error("unknown gallery system '" + name + "' (run the gallery command for the list)");
}

}  // namespace covalg
