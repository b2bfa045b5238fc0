#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ttg/error.hpp"
#include "ttg/presentation.hpp"

namespace ttg {

using nlohmann::json;

namespace {

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorKind::Schema, where + ": missing key '" + key + "'");
  return obj.at(key);
}

std::string need_string(const json& obj, const char* key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_string()) throw Error(ErrorKind::Schema, where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

int need_int(const json& obj, const char* key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number_integer()) throw Error(ErrorKind::Schema, where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

const json& need_array(const json& obj, const char* key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_array()) throw Error(ErrorKind::Schema, where + ": '" + key + "' must be an array");
  return v;
}

int orbit_id(const Presentation& p, const std::string& name, const std::string& where) {
  auto id = p.find_orbit(name);
  if (!id) throw Error(ErrorKind::Schema, where + ": unknown orbit '" + name + "'");
  return *id;
}

std::size_t basis_id(const Presentation& p, const std::string& name, const std::string& where) {
  auto id = p.find_basis(name);
  if (!id) throw Error(ErrorKind::Schema, where + ": unknown basis element '" + name + "'");
  return *id;
}

Scalar parse_coeff(const Presentation& p, const json& v, const std::string& where) {
  try {
    if (v.is_string()) return p.field().parse(v.get<std::string>());
    if (v.is_number_integer()) return p.field().from_int(v.get<std::int64_t>());
  } catch (const Error& e) {
    throw Error(ErrorKind::Schema, where + ": malformed coefficient (" + e.what() + ")");
  }
  throw Error(ErrorKind::Schema, where + ": coefficient must be a decimal string");
}

SparseVec parse_sparse(const Presentation& p, const json& list, const std::string& where) {
  if (!list.is_array()) throw Error(ErrorKind::Schema, where + ": expected a list of {basis, coeff}");
  SparseVec out;
  for (const auto& t : list)
    out.push_back({basis_id(p, need_string(t, "basis", where), where), parse_coeff(p, need(t, "coeff", where), where)});
  return out;
}

ObjectExpr parse_expr(const Presentation& p, const json& obj, const char* key, const std::string& where) {
  std::string text = need_string(obj, key, where);
  try {
    return p.parse(text);
  } catch (const Error& e) {
    throw Error(ErrorKind::Schema, where + ": bad object expression '" + text + "' (" + e.what() + ")");
  }
}

Morphism parse_matrix(const Presentation& p, const json& m, const SlotList& src, const SlotList& dst,
                      const std::string& where) {
  if (!m.is_array() || m.size() != dst.size())
    throw Error(ErrorKind::Schema, where + ": matrix must have " + std::to_string(dst.size()) + " rows");
  Morphism out(p, src, dst);
  for (std::size_t j = 0; j < dst.size(); ++j) {
    if (!m[j].is_array() || m[j].size() != src.size())
      throw Error(ErrorKind::Schema, where + ": matrix row " + std::to_string(j) + " must have " +
                                         std::to_string(src.size()) + " entries");
    for (std::size_t i = 0; i < src.size(); ++i) {
      HomKey key{src[i].orbit, dst[j].orbit, dst[j].shift - src[i].shift};
      auto blk = out.block(j, i);
      for (const auto& t : parse_sparse(p, m[j][i], where)) {
        const auto& b = p.basis()[t.basis];
        if (b.hom != key)
          throw Error(ErrorKind::Schema, where + ": entry (" + std::to_string(j) + ", " + std::to_string(i) +
                                             ") uses '" + b.name + "' from the wrong hom block");
        blk[b.index] += t.coeff;
      }
    }
  }
  return out;
}

json sparse_json(const Presentation& p, const SparseVec& v) {
  json out = json::array();
  for (const auto& t : v) out.push_back({{"basis", p.basis()[t.basis].name}, {"coeff", t.coeff.to_string()}});
  return out;
}

json matrix_json(const Presentation& p, const Morphism& m) {
  json rows = json::array();
  for (std::size_t j = 0; j < m.dst().size(); ++j) {
    json row = json::array();
    for (std::size_t i = 0; i < m.src().size(); ++i) {
      const auto& ids = p.hom_basis(m.src()[i].orbit, m.dst()[j].orbit, m.dst()[j].shift - m.src()[i].shift);
      auto blk = m.block(j, i);
      SparseVec v;
      for (std::size_t k = 0; k < blk.size(); ++k)
        if (!blk[k].is_zero()) v.push_back({ids[k], blk[k]});
      row.push_back(sparse_json(p, v));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Presentation parse_presentation(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Schema, "presentation document must be a JSON object");
  const json& field = need(doc, "field", "document");
  int ch = need_int(field, "characteristic", "field");
  if (ch < 0) throw Error(ErrorKind::Schema, "field: characteristic must be 0 or a prime");
  Field k = [&] {
    try {
      return Field(static_cast<std::uint32_t>(ch));
    } catch (const Error& e) {
      throw Error(ErrorKind::Schema, std::string("field: ") + e.what());
    }
  }();

  std::vector<std::string> orbits;
  for (const auto& o : need_array(doc, "orbits", "document")) {
    if (!o.is_string()) throw Error(ErrorKind::Schema, "orbits: names must be strings");
    orbits.push_back(o.get<std::string>());
  }
  const json& window = need_array(doc, "hom_window", "document");
  if (window.size() != 2 || !window[0].is_number_integer() || !window[1].is_number_integer())
    throw Error(ErrorKind::Schema, "hom_window must be [int, int]");
  Presentation p(k, orbits, window[0].get<int>(), window[1].get<int>());

  for (const auto& h : need_array(doc, "homs", "document")) {
    const std::string where = "homs";
    int src = orbit_id(p, need_string(h, "src", where), where);
    int dst = orbit_id(p, need_string(h, "dst", where), where);
    int deg = need_int(h, "degree", where);
    std::vector<std::string> names;
    for (const auto& b : need_array(h, "basis", where)) {
      if (!b.is_string()) throw Error(ErrorKind::Schema, "homs: basis names must be strings");
      names.push_back(b.get<std::string>());
    }
    p.add_hom(src, dst, deg, names);
  }

  if (doc.contains("compositions")) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& c : need_array(doc, "compositions", "document")) {
      const std::string where = "compositions";
      std::size_t f = basis_id(p, need_string(c, "f", where), where);
      std::size_t g = basis_id(p, need_string(c, "g", where), where);
      if (!seen.insert({g, f}).second)
        throw Error(ErrorKind::DuplicateName, "composition of '" + p.basis()[g].name + "' o '" + p.basis()[f].name +
                                                  "' given twice");
      p.set_composition(g, f, parse_sparse(p, need(c, "result", where), where));
    }
  }

  if (doc.contains("triangles")) {
    for (const auto& t : need_array(doc, "triangles", "document")) {
      const std::string where = "triangles";
      Triangle tri;
      tri.x = parse_expr(p, t, "x", where);
      tri.y = parse_expr(p, t, "y", where);
      tri.z = parse_expr(p, t, "z", where);
      tri.f = parse_matrix(p, need(t, "f", where), tri.x.slots(), tri.y.slots(), where + ".f");
      tri.g = parse_matrix(p, need(t, "g", where), tri.y.slots(), tri.z.slots(), where + ".g");
      tri.h = parse_matrix(p, need(t, "h", where), tri.z.slots(), shifted(tri.x.slots(), 1), where + ".h");
      p.add_triangle(std::move(tri));
    }
  }

  if (doc.contains("tensor") && !doc.at("tensor").is_null()) {
    const json& t = doc.at("tensor");
    const std::string where = "tensor";
    TensorTable table;
    table.unit = parse_expr(p, t, "unit", where);
    const std::size_t n = p.orbit_count();
    std::vector<std::vector<std::optional<ObjectExpr>>> given(n, std::vector<std::optional<ObjectExpr>>(n));
    for (const auto& e : need_array(t, "products", where)) {
      auto a = static_cast<std::size_t>(orbit_id(p, need_string(e, "a", where), where));
      auto b = static_cast<std::size_t>(orbit_id(p, need_string(e, "b", where), where));
      if (given[a][b])
        throw Error(ErrorKind::DuplicateName, "tensor product " + orbits[a] + " (x) " + orbits[b] + " given twice");
      given[a][b] = parse_expr(p, e, "result", where);
    }
    table.products.assign(n, std::vector<ObjectExpr>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (given[a][b])
          table.products[a][b] = *given[a][b];
        else if (given[b][a])
          table.products[a][b] = *given[b][a];
        else
          throw Error(ErrorKind::Schema, "tensor: product " + orbits[a] + " (x) " + orbits[b] + " is missing");
      }
    p.set_tensor(std::move(table));
  }

  if (doc.contains("metadata")) {
    if (!doc.at("metadata").is_object()) throw Error(ErrorKind::Schema, "metadata must be an object");
    p.metadata = doc.at("metadata");
  }
  p.finalize();
  return p;
}

Presentation parse_presentation_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("invalid JSON: ") + e.what());
  }
  return parse_presentation(doc);
}

Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation_text(ss.str());
}

json serialize_presentation(const Presentation& p) {
  json doc;
  doc["field"] = {{"characteristic", p.field().characteristic()}};
  doc["orbits"] = p.orbits();
  doc["hom_window"] = {p.window_lo(), p.window_hi()};
  json homs = json::array();
  for (const auto& [key, ids] : p.homs()) {
    json names = json::array();
    for (auto id : ids) names.push_back(p.basis()[id].name);
    homs.push_back({{"src", p.orbits()[static_cast<std::size_t>(key.src)]},
                    {"dst", p.orbits()[static_cast<std::size_t>(key.dst)]},
                    {"degree", key.degree},
                    {"basis", names}});
  }
  doc["homs"] = homs;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (const auto& entry : p.compositions()) order.push_back(entry.first);
  auto rank_of = [&](std::size_t b) { return std::make_pair(p.basis()[b].hom, p.basis()[b].index); };
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return std::make_pair(rank_of(a.first), rank_of(a.second)) < std::make_pair(rank_of(b.first), rank_of(b.second));
  });
  json comps = json::array();
  for (const auto& gf : order)
    comps.push_back({{"f", p.basis()[gf.second].name},
                     {"g", p.basis()[gf.first].name},
                     {"result", sparse_json(p, p.composition(gf.first, gf.second))}});
  doc["compositions"] = comps;
  json tris = json::array();
  for (const auto& t : p.triangles())
    tris.push_back({{"x", p.format(t.x)},
                    {"y", p.format(t.y)},
                    {"z", p.format(t.z)},
                    {"f", matrix_json(p, t.f)},
                    {"g", matrix_json(p, t.g)},
                    {"h", matrix_json(p, t.h)}});
  doc["triangles"] = tris;
  if (p.has_tensor()) {
    const auto& table = p.tensor_table();
    json products = json::array();
    for (std::size_t a = 0; a < p.orbit_count(); ++a)
      for (std::size_t b = 0; b < p.orbit_count(); ++b)
        products.push_back({{"a", p.orbits()[a]}, {"b", p.orbits()[b]}, {"result", p.format(table.products[a][b])}});
    doc["tensor"] = {{"unit", p.format(table.unit)}, {"products", products}};
  }
  doc["metadata"] = p.metadata;
  return doc;
}

}  // namespace ttg
