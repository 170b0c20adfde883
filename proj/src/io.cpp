#include "lmv/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace lmv {

using nlohmann::json;

json frame_to_json(const LFrame& f) {
  json j;
  json sig = json::object();
  for (const auto& [name, k] : f.sig.modalities) sig[name] = k;
  j["signature"] = sig;
  j["worlds"] = f.worlds;
  json rels = json::object();
  for (const auto& [name, tuples] : f.relations) {
    json list = json::array();
    for (const auto& t : tuples) {
      json labels = json::array();
      for (int v : t) labels.push_back(f.worlds[v]);
      list.push_back(labels);
    }
    rels[name] = list;
  }
  j["relations"] = rels;
  return j;
}

json frame_to_json(const LnFrame& f) {
  json j = frame_to_json(f.base);
  j["n"] = f.n;
  json r = json::object();
  for (const auto& [m, set] : f.r) {
    json labels = json::array();
    for (int u : set) labels.push_back(f.base.worlds[u]);
    r[std::to_string(m)] = labels;
  }
  j["r"] = r;
  return j;
}

LFrame lframe_from_json(const json& j) {
  LFrame f;
  if (!j.contains("signature") || !j.contains("worlds"))
    throw std::invalid_argument("frame file needs signature and worlds");
  for (const auto& [name, k] : j.at("signature").items())
    f.sig.modalities[name] = k.get<int>();
  f.worlds = j.at("worlds").get<std::vector<std::string>>();
  for (const auto& [name, arity] : f.sig.modalities) {
    (void)arity;
    f.relations[name] = {};
  }
  if (j.contains("relations"))
    for (const auto& [name, list] : j.at("relations").items()) {
      auto& tuples = f.relations[name];
      for (const auto& entry : list) {
        std::vector<int> t;
        for (const auto& label : entry)
          t.push_back(f.world_index(label.get<std::string>()));
        tuples.push_back(std::move(t));
      }
      std::sort(tuples.begin(), tuples.end());
    }
  f.validate();
  return f;
}

bool json_is_ln_frame(const json& j) { return j.contains("r"); }

LnFrame ln_frame_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("r"))
    throw std::invalid_argument("enriched frame file needs n and r");
  LnFrame f{lframe_from_json(j), j.at("n").get<int>(), {}};
  for (const auto& [key, list] : j.at("r").items()) {
    std::vector<int> set;
    for (const auto& label : list)
      set.push_back(f.base.world_index(label.get<std::string>()));
    std::sort(set.begin(), set.end());
    f.r[std::stoi(key)] = std::move(set);
  }
  auto rep = validate_ln(f);
  if (!rep.ok)
    throw std::invalid_argument("invalid enriched frame: " + rep.clause + ": " +
                                rep.detail);
  return f;
}

json model_to_json(const Model& m) {
  json j = frame_to_json(m.frame);
  j["n"] = m.n;
  json val = json::object();
  for (size_t u = 0; u < m.frame.worlds.size(); ++u) {
    json row = json::object();
    for (size_t p = 0; p < m.vars.size(); ++p)
      row[m.vars[p]] = std::to_string(m.value(static_cast<int>(u),
                                              static_cast<int>(p))) +
                       "/" + std::to_string(m.n);
    val[m.frame.worlds[u]] = row;
  }
  j["valuation"] = val;
  return j;
}

namespace {

int parse_value(const json& v, int n, const std::string& where) {
  if (v.is_number_integer()) {
    const int x = v.get<int>();
    if (x == 0) return 0;
    if (x == 1) return n;
    throw std::invalid_argument("integer value must be 0 or 1 at " + where);
  }
  const std::string s = v.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("expected num/den value at " + where);
  const int num = std::stoi(s.substr(0, slash));
  const int den = std::stoi(s.substr(slash + 1));
  if (den < 1 || n % den != 0)
    throw std::invalid_argument("denominator must divide n at " + where);
  if (num < 0 || num > den)
    throw std::invalid_argument("value out of range at " + where);
  return num * (n / den);
}

}  // namespace

Model model_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("valuation"))
    throw std::invalid_argument("model file needs n and a valuation");
  Model m;
  m.frame = lframe_from_json(j);
  m.n = j.at("n").get<int>();

  const json& val = j.at("valuation");
  std::set<std::string> vars;
  for (const auto& [world, row] : val.items()) {
    (void)world;
    for (const auto& [p, v] : row.items()) {
      (void)v;
      vars.insert(p);
    }
  }
  m.vars.assign(vars.begin(), vars.end());
  m.table.assign(m.frame.worlds.size() * m.vars.size(), -1);
  for (const auto& [world, row] : val.items()) {
    const int u = m.frame.world_index(world);
    for (const auto& [p, v] : row.items())
      m.table[u * m.vars.size() + m.var_index(p)] =
          parse_value(v, m.n, world + "." + p);
  }
  for (int v : m.table)
    if (v < 0) throw std::invalid_argument("valuation table must be total");
  m.validate();
  return m;
}

json algebra_to_json(const FiniteMMVAlgebra& a) {
  json j;
  j["n"] = a.n();
  json coords = json::array();
  for (const auto& c : a.coords())
    coords.push_back({{"label", c.label}, {"grain", c.grain}});
  j["coordinates"] = coords;
  j["carrier"] = a.carrier();
  json ops = json::object();
  for (const auto& [name, op] : a.ops())
    ops[name] = {{"arity", op.arity}, {"table", op.table}};
  j["operators"] = ops;
  return j;
}

FiniteMMVAlgebra algebra_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Coordinate> coords;
  for (const auto& c : j.at("coordinates"))
    coords.push_back({c.at("label").get<std::string>(), c.at("grain").get<int>()});
  auto carrier = j.at("carrier").get<std::vector<std::vector<int>>>();
  std::map<std::string, ModalOp> ops;
  if (j.contains("operators"))
    for (const auto& [name, op] : j.at("operators").items())
      ops[name] = {op.at("arity").get<int>(),
                   op.at("table").get<std::vector<int>>()};
  return FiniteMMVAlgebra(n, std::move(coords), std::move(carrier), std::move(ops));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace lmv
