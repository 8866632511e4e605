#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rovib/errors.hpp"
#include "rovib/molmodel.hpp"

namespace rovib {

using nlohmann::json;

namespace {

double required_number(const json& row, const std::string& label, const char* key) {
  if (!row.contains(key)) throw ConfigError("constants '" + label + "': missing field '" + key + "'");
  const auto& v = row.at(key);
  if (!v.is_number()) throw ConfigError("constants '" + label + "': field '" + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& row, const std::string& label, const char* key) {
  if (!row.contains(key) || row.at(key).is_null()) return std::nullopt;
  const auto& v = row.at(key);
  if (!v.is_number()) {
    throw ConfigError("constants '" + label + "': field '" + key + "' must be a number or null");
  }
  return v.get<double>();
}

}  // namespace

ConstantsDatabase ConstantsDatabase::builtin() {
  ConstantsDatabase db;
  db.insert(n2_ground_state());
  db.insert(n2_a_state());
  return db;
}

ConstantsDatabase ConstantsDatabase::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("constants database is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("constants database must be a JSON object keyed by state label");

  ConstantsDatabase db;
  for (const auto& [label, row] : doc.items()) {
    if (!row.is_object()) throw ConfigError("constants '" + label + "': row must be an object");
    SpectroscopicConstants c;
    c.label = label;
    c.te = required_number(row, label, "Te");
    c.omega_e = required_number(row, label, "omega_e");
    c.omega_e_xe = required_number(row, label, "omega_e_xe");
    c.omega_e_ye = required_number(row, label, "omega_e_ye");
    c.b_e = required_number(row, label, "B_e");
    c.alpha_e = required_number(row, label, "alpha_e");
    c.gamma_e = optional_number(row, label, "gamma_e");
    c.d_e = required_number(row, label, "D_e");
    c.beta_e = optional_number(row, label, "beta_e");
    if (!c.is_physical()) {
      throw ConfigError("constants '" + label + "': require omega_e > 0, B_e > 0, D_e >= 0");
    }
    db.insert(std::move(c));
  }
  return db;
}

ConstantsDatabase ConstantsDatabase::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open constants database '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

const SpectroscopicConstants& ConstantsDatabase::at(const std::string& label) const {
  auto it = states_.find(label);
  if (it == states_.end()) {
    std::string known;
    for (const auto& [k, _] : states_) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown electronic state '" + label + "' (known: " + known + ")");
  }
  return it->second;
}

std::vector<std::string> ConstantsDatabase::labels() const {
  std::vector<std::string> out;
  out.reserve(states_.size());
  for (const auto& [k, _] : states_) out.push_back(k);
  return out;
}

void ConstantsDatabase::insert(SpectroscopicConstants c) {
  auto label = c.label;
  states_.insert_or_assign(std::move(label), std::move(c));
}

}  // namespace rovib
