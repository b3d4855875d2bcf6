#pragma once

// Built-in structures and the JSON wire format (schema_version "1").
//
//   {
//     "schema_version": "1",
//     "name": "hopf4", "description": "...", "n": 1,
//     "structure_constants": [[i, j, k, "p/q"], ...],   // c^k_{ij}, 0-based, i < j
//     "metric": [["1", "0", ...], ...],                 // dense, row-major
//     "J1": [[...]], "J2": [[...]], "J3": [[...]],      // J(r, c) = r-th component of J e_c
//     "expected": {"hkt": true, ...}                    // optional
//   }

#include "hktlab/obata.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hktlab {

inline constexpr const char* kSchemaVersion = "1";

class IoError : public Error {
 public:
  using Error::Error;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  std::size_t n = 0;
  LieAlgebra lie;
  HyperhermitianStructure structure;
  std::map<std::string, bool> expected;

  std::size_t dim() const { return 4 * n; }
};

/// Checks every catalog contract: Lie algebra axioms, quaternion relations,
/// exact orthonormal frame and a J1-adapted pairing of it.
inline void validate_entry(const CatalogEntry& e) {
  if (e.n == 0 || 4 * e.n > kMaxDim) throw Error("n: must satisfy 1 <= 4n <= 16");
  if (e.lie.dim() != e.dim()) throw Error("structure_constants: dimension mismatch");
  const auto lv = validate_lie_algebra(e.lie);
  if (!lv.ok) throw Error("structure_constants: " + lv.message);
  const Check q = quaternionic_check(e.structure);
  if (!q.ok) throw Error("quaternion relations: " + q.counterexample);
  try {
    (void)adapted_frame(e.structure);
  } catch (const Error& err) {
    throw Error(std::string("non-orthonormal basis: ") + err.what());
  }
}

namespace detail {

inline Matrix int_matrix(std::size_t n, std::initializer_list<int> vals) {
  Matrix m(n, n);
  std::size_t p = 0;
  for (int v : vals) {
    m(p / n, p % n) = v;
    ++p;
  }
  return m;
}

inline Matrix block_diag(const Matrix& b, std::size_t copies) {
  const std::size_t k = b.rows();
  Matrix m(k * copies, k * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(c * k + i, c * k + j) = b(i, j);
  return m;
}

struct Triple {
  std::size_t i, j, k;
  int num;
};

inline CatalogEntry make_entry(std::string name, std::string description, std::size_t n,
                               const std::vector<Triple>& brackets, const std::array<Matrix, 3>& J, std::map<std::string, bool> expected) {
  LieAlgebra L(4 * n);
  for (const auto& t : brackets) L.set_bracket(t.i, t.j, t.k, Rational(t.num));
  CatalogEntry e{std::move(name), std::move(description), n, std::move(L),
                 HyperhermitianStructure{J, Metric::identity(4 * n)}, std::move(expected)};
  validate_entry(e);
  return e;
}

// Quaternion multiplications on H = span(1, i, j, k) in the basis (e0..e3).
inline Matrix left_i() { return int_matrix(4, {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0}); }
inline Matrix left_j() { return int_matrix(4, {0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0}); }
inline Matrix left_k() { return int_matrix(4, {0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0}); }
inline Matrix right_i() { return int_matrix(4, {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0}); }
inline Matrix right_j() { return int_matrix(4, {0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0}); }
inline Matrix right_k() { return int_matrix(4, {0, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, 0}); }

inline std::array<Matrix, 3> flat_triple(std::size_t n) {
  return {block_diag(-left_i(), n), block_diag(-left_j(), n), block_diag(left_k(), n)};
}
inline std::array<Matrix, 3> right_triple(std::size_t n) {
  return {block_diag(-right_i(), n), block_diag(-right_j(), n), block_diag(-right_k(), n)};
}
inline std::array<Matrix, 3> left_triple(std::size_t n) {
  return {block_diag(left_i(), n), block_diag(left_j(), n), block_diag(left_k(), n)};
}

}  // namespace detail

inline std::vector<CatalogEntry> builtin_catalog() {
  using detail::Triple;
  std::vector<CatalogEntry> out;
  const std::vector<Triple> quaternion_brackets{{1, 2, 3, 2}, {1, 3, 2, -2}, {2, 3, 1, 2}};

  out.push_back(detail::make_entry(
      "torus4", "abelian R^4 with the flat hyperkaehler structure", 1, {}, detail::flat_triple(1),
      {{"hkt", true}, {"hyperkahler", true}, {"balanced", true}, {"strong", true}, {"d_theta_zero", true},
       {"obata_flat", true}, {"obstructed", false}}));

  out.push_back(detail::make_entry(
      "torus8", "abelian R^8 with the flat hyperkaehler structure", 2, {}, detail::flat_triple(2),
      {{"hkt", true}, {"hyperkahler", true}, {"balanced", true}, {"strong", true}, {"d_theta_zero", true},
       {"obata_flat", true}, {"obstructed", false}}));

  out.push_back(detail::make_entry(
      "hopf4", "Lie algebra of H* = R + su(2) (e0 central), J_s = right multiplication by -i, -j, -k", 1,
      quaternion_brackets, detail::right_triple(1),
      {{"hkt", true}, {"hyperkahler", false}, {"balanced", false}, {"strong", true}, {"d_theta_zero", true},
       {"obata_flat", true}, {"obstructed", false}}));

  out.push_back(detail::make_entry(
      "nil8", "2-step nilpotent algebra H + H with an abelian hypercomplex structure", 2,
      {{0, 1, 5, -1}, {0, 2, 6, -1}, {0, 3, 7, -1}, {1, 2, 7, -1}, {1, 3, 6, 1}, {2, 3, 5, -1}},
      detail::right_triple(2),
      {{"hkt", true}, {"hyperkahler", false}, {"balanced", true}, {"strong", false}, {"d_theta_zero", true},
       {"obata_flat", true}, {"obstructed", false}}));

  out.push_back(detail::make_entry(
      "hc_only8", "aff(H) = H + H (left multiplication on the ideal), left quaternionic structure; hypercomplex, not HKT",
      2,
      {{0, 4, 4, 1}, {0, 5, 5, 1}, {0, 6, 6, 1}, {0, 7, 7, 1}, {1, 2, 3, 2}, {1, 3, 2, -2}, {1, 4, 5, 1},
       {1, 5, 4, -1}, {1, 6, 7, 1}, {1, 7, 6, -1}, {2, 3, 1, 2}, {2, 4, 6, 1}, {2, 5, 7, -1}, {2, 6, 4, -1},
       {2, 7, 5, 1}, {3, 4, 7, 1}, {3, 5, 6, 1}, {3, 6, 5, -1}, {3, 7, 4, -1}},
      detail::left_triple(2),
      {{"hkt", false}, {"integrable", true}, {"obata_flat", true}, {"obstructed", false}}));
  return out;
}

// ---------------------------------------------------------------------------
// JSON

using Json = nlohmann::ordered_json;

namespace detail {

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Rational rational_from_json(const nlohmann::json& v, const std::string& path) {
  if (v.is_string()) {
    const auto r = try_parse_rational(v.get<std::string>());
    if (!r) throw Error(path + ": malformed rational '" + v.get<std::string>() + "'");
    return *r;
  }
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  if (v.is_number_float()) throw Error(path + ": floating-point value not allowed; use a \"p/q\" string");
  throw Error(path + ": expected a rational string");
}

inline std::size_t index_from_json(const nlohmann::json& v, std::size_t dim, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw Error(path + ": expected a non-negative integer index");
  const auto i = static_cast<std::size_t>(v.get<long long>());
  if (i >= dim) throw Error(path + ": index " + std::to_string(i) + " out of range for dimension " + std::to_string(dim));
  return i;
}

inline Matrix matrix_from_json(const nlohmann::json& v, std::size_t dim, const std::string& path) {
  if (!v.is_array() || v.size() != dim)
    throw Error(path + ": dimension mismatch, expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != dim)
      throw Error(rp + ": dimension mismatch, expected " + std::to_string(dim) + " columns");
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = rational_from_json(v[i][j], rp + "[" + std::to_string(j) + "]");
  }
  return m;
}

inline const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(std::string(key) + ": missing field");
  return doc.at(key);
}

}  // namespace detail

inline Json to_json(const CatalogEntry& e) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = e.name;
  j["description"] = e.description;
  j["n"] = e.n;
  Json sc = Json::array();
  for (std::size_t i = 0; i < e.dim(); ++i)
    for (std::size_t k = i + 1; k < e.dim(); ++k)
      for (std::size_t l = 0; l < e.dim(); ++l)
        if (!e.lie(i, k, l).is_zero()) sc.push_back(Json::array({i, k, l, to_string(e.lie(i, k, l))}));
  j["structure_constants"] = std::move(sc);
  j["metric"] = detail::matrix_to_json(e.structure.g.matrix());
  for (int s = 1; s <= 3; ++s) j["J" + std::to_string(s)] = detail::matrix_to_json(e.structure.j(s));
  if (!e.expected.empty()) {
    Json ex = Json::object();
    for (const auto& [k, v] : e.expected) ex[k] = v;
    j["expected"] = std::move(ex);
  }
  return j;
}

/// Parses and validates one entry. Errors name the offending field path.
/// With `strict`, unknown top-level fields are rejected.
inline CatalogEntry entry_from_json(const nlohmann::json& doc, bool strict = true) {
  if (!doc.is_object()) throw Error("document: expected a JSON object");
  static const std::set<std::string> known{"schema_version", "name", "description", "n", "structure_constants",
                                           "metric", "J1", "J2", "J3", "expected"};
  if (strict)
    for (const auto& [k, v] : doc.items())
      if (!known.count(k)) throw Error(k + ": unknown field (strict mode)");
  const auto& ver = detail::require(doc, "schema_version");
  if (!ver.is_string() || ver.get<std::string>() != kSchemaVersion)
    throw Error("schema_version: unsupported, expected \"1\"");
  const auto& name = detail::require(doc, "name");
  if (!name.is_string() || name.get<std::string>().empty()) throw Error("name: expected a nonempty string");
  std::string description;
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) throw Error("description: expected a string");
    description = doc["description"].get<std::string>();
  }
  const auto& nj = detail::require(doc, "n");
  if (!nj.is_number_integer() || nj.get<long long>() < 1 || nj.get<long long>() > 4)
    throw Error("n: expected an integer between 1 and 4");
  const auto n = static_cast<std::size_t>(nj.get<long long>());
  const std::size_t dim = 4 * n;

  LieAlgebra L(dim);
  const auto& sc = detail::require(doc, "structure_constants");
  if (!sc.is_array()) throw Error("structure_constants: expected an array");
  std::set<std::array<std::size_t, 3>> given;
  for (std::size_t t = 0; t < sc.size(); ++t) {
    const std::string path = "structure_constants[" + std::to_string(t) + "]";
    const auto& e = sc[t];
    if (!e.is_array() || e.size() != 4) throw Error(path + ": expected [i, j, k, \"p/q\"]");
    const std::size_t i = detail::index_from_json(e[0], dim, path + "[0]");
    const std::size_t j = detail::index_from_json(e[1], dim, path + "[1]");
    const std::size_t k = detail::index_from_json(e[2], dim, path + "[2]");
    const Rational v = detail::rational_from_json(e[3], path + "[3]");
    if (!given.insert({i, j, k}).second) throw Error(path + ": duplicate entry " + index_tuple({i, j, k}));
    L.raw(i, j, k) = v;
  }
  for (const auto& [i, j, k] : given)
    if (!given.count({j, i, k})) L.raw(j, i, k) = -L(i, j, k);

  const Matrix g = detail::matrix_from_json(detail::require(doc, "metric"), dim, "metric");
  std::array<Matrix, 3> J;
  for (int s = 1; s <= 3; ++s) {
    const std::string key = "J" + std::to_string(s);
    J[static_cast<std::size_t>(s - 1)] = detail::matrix_from_json(detail::require(doc, key.c_str()), dim, key);
  }
  std::map<std::string, bool> expected;
  if (doc.contains("expected")) {
    if (!doc["expected"].is_object()) throw Error("expected: expected an object of booleans");
    for (const auto& [k, v] : doc["expected"].items()) {
      if (!v.is_boolean()) throw Error("expected." + k + ": expected a boolean");
      expected[k] = v.get<bool>();
    }
  }
  std::optional<Metric> metric;
  try {
    metric.emplace(g);
  } catch (const Error& err) {
    throw Error(std::string("metric: ") + err.what());
  }
  CatalogEntry entry{name.get<std::string>(), description, n, std::move(L),
                     HyperhermitianStructure{J, *metric}, std::move(expected)};
  validate_entry(entry);
  return entry;
}

inline CatalogEntry load_entry(const std::filesystem::path& path, bool strict = true) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path.string() + ": JSON parse error: " + e.what());
  }
  return entry_from_json(doc, strict);
}

inline void save_entry(const CatalogEntry& e, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(e).dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

/// Entries from every *.json file in `dir`, ordered by file name.
inline std::vector<CatalogEntry> load_catalog_dir(const std::filesystem::path& dir, bool strict = true) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("catalog directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(dir))
    if (f.is_regular_file() && f.path().extension() == ".json") files.push_back(f.path());
  std::sort(files.begin(), files.end());
  std::vector<CatalogEntry> out;
  for (const auto& f : files) {
    try {
      out.push_back(load_entry(f, strict));
    } catch (const IoError&) {
      throw;
    } catch (const Error& e) {
      throw Error(f.filename().string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hktlab
