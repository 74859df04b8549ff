#include "haarwalk/finite_groups.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace haarwalk {

namespace {

using Perm = std::vector<std::size_t>;

Perm compose(const Perm& g, const Perm& h) {
  Perm r(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) r[x] = g[h[x]];
  return r;
}

std::string cycle_label(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (seen[s] || p[s] == s) continue;
    out += "(";
    std::size_t x = s;
    while (!seen[x]) {
      seen[x] = true;
      out += std::to_string(x + 1);
      x = p[x];
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

}  // namespace

FiniteTable cyclic_table(std::size_t n) {
  if (n == 0) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::vector<std::size_t>> rows(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rows[a][b] = (a + b) % n;
  return make_finite_table(rows);
}

FiniteTable permutation_table(const std::vector<std::vector<std::size_t>>& generators,
                              std::size_t degree) {
  Perm id(degree);
  std::iota(id.begin(), id.end(), 0);
  for (const auto& g : generators) {
    Perm sorted = g;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != id) throw std::invalid_argument("generator is not a permutation of the right degree");
  }
  std::set<Perm> elements{id};
  std::vector<Perm> frontier{id};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& p : frontier) {
      for (const auto& g : generators) {
        Perm q = compose(p, g);
        if (elements.insert(q).second) next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  const std::vector<Perm> list(elements.begin(), elements.end());
  std::map<Perm, std::size_t> index;
  for (std::size_t i = 0; i < list.size(); ++i) index[list[i]] = i;
  std::vector<std::vector<std::size_t>> rows(list.size(), std::vector<std::size_t>(list.size()));
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < list.size(); ++a) {
    labels.push_back(cycle_label(list[a]));
    for (std::size_t b = 0; b < list.size(); ++b) rows[a][b] = index.at(compose(list[a], list[b]));
  }
  return make_finite_table(rows, std::move(labels));
}

FiniteTable symmetric3_table() { return permutation_table({{1, 0, 2}, {1, 2, 0}}, 3); }

FiniteTable dihedral_table(std::size_t n) {
  if (n < 3) throw std::invalid_argument("dihedral group needs n >= 3");
  Perm rotation(n), reflection(n);
  for (std::size_t i = 0; i < n; ++i) {
    rotation[i] = (i + 1) % n;
    reflection[i] = (n - i) % n;
  }
  return permutation_table({rotation, reflection}, n);
}

FiniteTable quaternion8_table() {
  // Units as (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k.
  const std::vector<std::string> labels{"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  // Unit products on the axes: e.g. i*j = k, j*i = -k, i*i = -1.
  const int axis_sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  const int axis_prod[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  std::vector<std::vector<std::size_t>> rows(8, std::vector<std::size_t>(8));
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      const int sa = (a % 2) ? -1 : 1, sb = (b % 2) ? -1 : 1;
      const std::size_t xa = a / 2, xb = b / 2;
      const int s = sa * sb * axis_sign[xa][xb];
      rows[a][b] = 2 * static_cast<std::size_t>(axis_prod[xa][xb]) + (s < 0 ? 1 : 0);
    }
  }
  return make_finite_table(rows, labels);
}

FiniteTable alternating4_table() { return permutation_table({{1, 2, 0, 3}, {1, 0, 3, 2}}, 4); }

FiniteTable builtin_table(const std::string& name) {
  auto order_suffix = [&](std::size_t prefix) -> std::size_t {
    const std::string digits = name.substr(prefix);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      throw std::invalid_argument("unknown built-in group '" + name + "'");
    }
    return std::stoul(digits);
  };
  if (name == "S3") return symmetric3_table();
  if (name == "Q8") return quaternion8_table();
  if (name == "A4") return alternating4_table();
  if (name.rfind("Z", 0) == 0) return cyclic_table(order_suffix(1));
  if (name.rfind("D", 0) == 0) return dihedral_table(order_suffix(1));
  throw std::invalid_argument("unknown built-in group '" + name + "'");
}

FiniteTable finite_table_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("group table document must be a JSON object");
  if (!doc.contains("table") || !doc["table"].is_array()) {
    throw std::invalid_argument("group table document needs an array field 'table'");
  }
  std::vector<std::vector<std::size_t>> rows;
  for (const auto& row : doc["table"]) {
    if (!row.is_array()) throw std::invalid_argument("each table row must be an array");
    std::vector<std::size_t> r;
    for (const auto& v : row) {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw std::invalid_argument("table entries must be nonnegative integers");
      }
      r.push_back(v.get<std::size_t>());
    }
    rows.push_back(std::move(r));
  }
  if (doc.contains("order")) {
    const auto& order = doc["order"];
    if (!order.is_number_integer() || order.get<long long>() < 0 ||
        order.get<std::size_t>() != rows.size()) {
      throw GroupAxiomError("shape", {}, "group axiom violated: shape: 'order' does not match the " +
                                             std::to_string(rows.size()) + " table rows");
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc["labels"].get<std::vector<std::string>>();
  return make_finite_table(rows, std::move(labels));
}

FiniteTable load_finite_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open group table " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
  }
  return finite_table_from_json(doc);
}

nlohmann::ordered_json finite_table_to_json(const FiniteTable& table) {
  nlohmann::ordered_json doc;
  const std::size_t n = table.order();
  doc["order"] = n;
  doc["labels"] = table.labels();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t a = 0; a < n; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t b = 0; b < n; ++b) row.push_back(table.product(a, b));
    rows.push_back(row);
  }
  doc["table"] = rows;
  return doc;
}

}  // namespace haarwalk
