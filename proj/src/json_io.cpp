#include "urnflow/json_io.hpp"

#include <stdexcept>

namespace urnflow {

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("json: ") + what);
}
}  // namespace

json model_to_json(const PartitionModel& m) {
  switch (m.kind) {
    case ModelKind::crp1:
      return {{"kind", "crp1"}, {"theta", m.theta}};
    case ModelKind::crp2:
      return {{"kind", "crp2"}, {"theta", m.theta}, {"alpha", m.alpha}};
    case ModelKind::generic: {
      json j{{"kind", "generic"}, {"dust", m.nu1.dust}};
      if (m.nu1.is_beta) {
        j["beta"] = {m.nu1.beta_a, m.nu1.beta_b};
      } else {
        json grid = json::array();
        for (auto [p, w] : m.nu1.grid) grid.push_back({p, w});
        j["grid"] = grid;
      }
      return j;
    }
  }
  throw std::logic_error("unreachable");
}

PartitionModel model_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "model needs a kind");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "crp1") return PartitionModel::crp1(j.at("theta").get<double>());
  if (kind == "crp2")
    return PartitionModel::crp2(j.at("theta").get<double>(), j.at("alpha").get<double>());
  require(kind == "generic", "unknown model kind");
  double dust = j.value("dust", 0.0);
  if (j.contains("beta")) {
    auto ab = j.at("beta");
    require(ab.is_array() && ab.size() == 2, "beta needs [a,b]");
    return PartitionModel::generic(
        StructuralDistribution::beta(ab[0].get<double>(), ab[1].get<double>(), dust));
  }
  require(j.contains("grid"), "generic model needs beta or grid");
  std::vector<std::pair<double, double>> nodes;
  for (const auto& node : j.at("grid")) {
    require(node.is_array() && node.size() == 2, "grid node needs [p,w]");
    nodes.emplace_back(node[0].get<double>(), node[1].get<double>());
  }
  return PartitionModel::generic(StructuralDistribution::numeric_grid(nodes, dust));
}

json hazard_to_json(const HazardMeasureSpec& s) {
  json j{{"gamma", s.gamma}};
  if (s.base.kind == BaseDistribution::Kind::uniform) {
    j["base"] = "uniform";
  } else {
    json grid = json::array();
    for (auto [loc, w] : s.base.nodes) grid.push_back({loc, w});
    j["base"] = {{"grid", grid}};
  }
  json atoms = json::array();
  for (const auto& a : s.fixed_atoms) atoms.push_back({a.location, a.mass});
  j["atoms"] = atoms;
  return j;
}

HazardMeasureSpec hazard_from_json(const json& j) {
  HazardMeasureSpec s;
  s.gamma = j.value("gamma", 0.0);
  if (j.contains("base") && j.at("base").is_object()) {
    std::vector<std::pair<double, double>> nodes;
    for (const auto& node : j.at("base").at("grid"))
      nodes.emplace_back(node[0].get<double>(), node[1].get<double>());
    s.base = BaseDistribution::grid(nodes);
  } else if (j.contains("base")) {
    require(j.at("base").get<std::string>() == "uniform", "unknown base");
  }
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms")) {
      require(a.is_array() && a.size() == 2, "fixed atom needs [location,mass]");
      s.fixed_atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
  s.validate();
  return s;
}

namespace {
const char* origin_name(AtomOrigin o) {
  return o == AtomOrigin::fixed ? "fixed" : "ordinary";
}
AtomOrigin origin_from(const std::string& s) {
  if (s == "fixed") return AtomOrigin::fixed;
  require(s == "ordinary", "unknown atom origin");
  return AtomOrigin::ordinary;
}
}  // namespace

json realization_to_json(const BernoulliRealization& x) {
  json j = json::array();
  for (const auto& a : x.atoms) j.push_back({a.id, a.location, origin_name(a.origin)});
  return j;
}

BernoulliRealization realization_from_json(const json& j) {
  require(j.is_array(), "realization must be an array");
  BernoulliRealization x;
  for (const auto& a : j) {
    require(a.is_array() && a.size() == 3, "atom needs [id,location,origin]");
    x.atoms.push_back({a[0].get<std::uint64_t>(), a[1].get<double>(),
                       origin_from(a[2].get<std::string>())});
  }
  return x;
}

json sequence_to_json(const std::vector<BernoulliRealization>& rows) {
  json j = json::array();
  for (const auto& r : rows) j.push_back(realization_to_json(r));
  return j;
}

std::vector<BernoulliRealization> sequence_from_json(const json& j) {
  require(j.is_array(), "sequence must be an array");
  std::vector<BernoulliRealization> rows;
  for (const auto& r : j) rows.push_back(realization_from_json(r));
  return rows;
}

json urn_state_to_json(const UrnState& u) {
  return {{"sizes", u.block_sizes}, {"arrival", u.arrival}};
}

UrnState urn_state_from_json(const json& j) {
  UrnState u;
  u.block_sizes = j.at("sizes").get<std::vector<int>>();
  u.arrival = j.at("arrival").get<std::vector<int>>();
  u.n = int(u.arrival.size());
  // rebuild assignment and first-element table from arrivals
  u.block_first.clear();
  u.assignment.resize(u.n);
  for (int i = 0; i < u.n; ++i) {
    int arr = u.arrival[i];
    require(arr >= 1 && arr <= i + 1, "urn state: arrival out of range");
    int block = -1;
    for (int b = 0; b < int(u.block_first.size()); ++b)
      if (u.block_first[b] == arr) block = b;
    if (block < 0) {
      require(arr == i + 1, "urn state: arrival must reference a block opener");
      block = int(u.block_first.size());
      u.block_first.push_back(arr);
    }
    u.assignment[i] = block;
  }
  require(u.block_first.size() == u.block_sizes.size(), "urn state: block count mismatch");
  std::vector<int> sizes(u.block_sizes.size(), 0);
  for (int b : u.assignment) ++sizes[b];
  require(sizes == u.block_sizes, "urn state: sizes disagree with arrivals");
  return u;
}

namespace {
OriginTag tag_from(const std::string& s) {
  if (s == "fixed") return OriginTag::fixed();
  auto colon = s.find(':');
  require(colon != std::string::npos, "unknown origin tag");
  std::string head = s.substr(0, colon);
  int idx = std::stoi(s.substr(colon + 1));
  if (head == "round") return OriginTag::round(idx);
  require(head == "block", "unknown origin tag");
  return OriginTag::block(idx);
}
}  // namespace

json hazard_realization_to_json(const AtomicHazardRealization& h) {
  json atoms = json::array();
  for (const auto& a : h.atoms) atoms.push_back({a.id, a.location, a.weight, a.tag.str()});
  return {{"dust", h.dust_coefficient}, {"atoms", atoms}};
}

AtomicHazardRealization hazard_realization_from_json(const json& j) {
  AtomicHazardRealization h;
  h.dust_coefficient = j.value("dust", 0.0);
  for (const auto& a : j.at("atoms")) {
    require(a.is_array() && a.size() == 4, "weighted atom needs [id,loc,weight,tag]");
    h.atoms.push_back({a[0].get<std::uint64_t>(), a[1].get<double>(), a[2].get<double>(),
                       tag_from(a[3].get<std::string>())});
  }
  h.validate();
  return h;
}

std::string history_to_string(History h, int n) {
  std::string s(n, '0');
  for (int r = 0; r < n; ++r)
    if (h & (History(1) << r)) s[r] = '1';
  return s;
}

History history_from_string(const std::string& s) {
  require(!s.empty() && s.size() <= 63, "history string must have 1..63 rows");
  History h = 0;
  for (std::size_t r = 0; r < s.size(); ++r) {
    require(s[r] == '0' || s[r] == '1', "history strings are binary");
    if (s[r] == '1') h |= History(1) << r;
  }
  return h;
}

json allocation_to_json(const FeatureAllocation& a) {
  json counts = json::object();
  for (auto [h, m] : a.counts) counts[history_to_string(h, a.n)] = m;
  json j{{"n", a.n}, {"counts", counts}};
  if (a.has_atoms) {
    json atoms = json::array();
    for (const auto& rec : a.atoms)
      atoms.push_back({rec.id, rec.location, history_to_string(rec.history, a.n)});
    j["atoms"] = atoms;
  }
  return j;
}

FeatureAllocation allocation_from_json(const json& j) {
  FeatureAllocation a;
  a.n = j.at("n").get<int>();
  for (auto& [key, value] : j.at("counts").items()) {
    require(int(key.size()) == a.n, "history length must equal n");
    a.counts[history_from_string(key)] = value.get<long>();
  }
  if (j.contains("atoms")) {
    for (const auto& rec : j.at("atoms")) {
      require(rec.is_array() && rec.size() == 3, "atom record needs [id,loc,history]");
      a.atoms.push_back({rec[0].get<std::uint64_t>(), rec[1].get<double>(),
                         history_from_string(rec[2].get<std::string>())});
    }
    a.has_atoms = true;
  }
  a.validate();
  return a;
}

json matrix_to_json(const LabeledMatrix& m) {
  json j = json::array();
  for (History col : m.columns) j.push_back(history_to_string(col, m.n));
  return j;
}

LabeledMatrix matrix_from_json(const json& j) {
  require(j.is_array(), "matrix must be an array of column strings");
  LabeledMatrix m;
  for (const auto& col : j) {
    std::string s = col.get<std::string>();
    if (m.n == 0) m.n = int(s.size());
    require(int(s.size()) == m.n, "matrix columns must share a length");
    m.columns.push_back(history_from_string(s));
  }
  return m;
}

}  // namespace urnflow
