#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "radionet/errors.hpp"
#include "radionet/harness.hpp"

namespace radionet {
namespace {

using Json = nlohmann::ordered_json;

Json parse(std::string_view text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

void reject_unknown(const Json& obj, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("bad value for '") + key + "': " + e.what());
  }
}

void check_header(const Json& doc, std::string_view schema) {
  if (!doc.is_object()) throw ValidationError("document must be a JSON object");
  if (!doc.contains("schema") || doc.at("schema") != schema) {
    throw ValidationError("expected schema '" + std::string(schema) + "'");
  }
  if (!doc.contains("version") || doc.at("version") != kConfigVersion) {
    throw ValidationError("unsupported version; expected " + std::to_string(kConfigVersion));
  }
}

std::string_view rule_name(JRangeRule r) {
  switch (r) {
    case JRangeRule::desk: return "desk";
    case JRangeRule::fractions: return "fractions";
    case JRangeRule::fixed: return "fixed";
  }
  return "desk";
}

JRangeRule parse_rule(const std::string& s) {
  if (s == "desk") return JRangeRule::desk;
  if (s == "fractions") return JRangeRule::fractions;
  if (s == "fixed") return JRangeRule::fixed;
  throw ValidationError("unknown j_rule '" + s + "'");
}

Json compete_to_json(const CompeteConfig& c) {
  Json j;
  j["mode"] = std::string(to_string(c.mode));
  j["coarse_beta_exp"] = c.coarse_beta_exp;
  j["fine_count_exp"] = c.fine_count_exp;
  j["fine_count_min"] = c.fine_count_min;
  j["j_rule"] = std::string(rule_name(c.j_rule));
  j["j_min_frac"] = c.j_min_frac;
  j["j_max_frac"] = c.j_max_frac;
  j["j_min"] = c.j_min;
  j["j_max"] = c.j_max;
  j["seq_len_exp"] = c.seq_len_exp;
  j["background_beta_exp"] = c.background_beta_exp;
  j["background_count_exp"] = c.background_count_exp;
  j["background_count_min"] = c.background_count_min;
  j["c1"] = c.c1;
  j["c_bg"] = c.c_bg;
  j["c_sched"] = c.c_sched;
  j["c_pre"] = c.c_pre;
  j["c_part"] = c.c_part;
  j["faithful_layer_decays"] = c.faithful_layer_decays;
  j["timeout_factor"] = c.timeout_factor;
  j["round_cap"] = c.round_cap;
  return j;
}

void compete_from_json(const Json& j, CompeteConfig& c) {
  reject_unknown(j,
                 {"mode", "coarse_beta_exp", "fine_count_exp", "fine_count_min", "j_rule",
                  "j_min_frac", "j_max_frac", "j_min", "j_max", "seq_len_exp",
                  "background_beta_exp", "background_count_exp", "background_count_min", "c1",
                  "c_bg", "c_sched", "c_pre", "c_part", "faithful_layer_decays",
                  "timeout_factor", "round_cap"},
                 "compete");
  if (j.contains("mode")) {
    const auto m = parse_mode(j.at("mode").get<std::string>());
    if (!m) throw ValidationError("mode must be 'faithful' or 'charged'");
    c.mode = *m;
  }
  if (j.contains("j_rule")) c.j_rule = parse_rule(j.at("j_rule").get<std::string>());
  read(j, "coarse_beta_exp", c.coarse_beta_exp);
  read(j, "fine_count_exp", c.fine_count_exp);
  read(j, "fine_count_min", c.fine_count_min);
  read(j, "j_min_frac", c.j_min_frac);
  read(j, "j_max_frac", c.j_max_frac);
  read(j, "j_min", c.j_min);
  read(j, "j_max", c.j_max);
  read(j, "seq_len_exp", c.seq_len_exp);
  read(j, "background_beta_exp", c.background_beta_exp);
  read(j, "background_count_exp", c.background_count_exp);
  read(j, "background_count_min", c.background_count_min);
  read(j, "c1", c.c1);
  read(j, "c_bg", c.c_bg);
  read(j, "c_sched", c.c_sched);
  read(j, "c_pre", c.c_pre);
  read(j, "c_part", c.c_part);
  read(j, "faithful_layer_decays", c.faithful_layer_decays);
  read(j, "timeout_factor", c.timeout_factor);
  read(j, "round_cap", c.round_cap);
  c.validate();
}

Json constants_body(const FrozenConstants& c) {
  Json j;
  j["c_diam"] = c.c_diam;
  j["c_cut"] = c.c_cut;
  j["p0"] = c.p0;
  j["c_cp"] = c.c_cp;
  j["c_bad"] = c.c_bad;
  j["c_base"] = c.c_base;
  j["margin"] = c.margin;
  j["seed"] = c.seed;
  j["battery"] = c.battery;
  return j;
}

FrozenConstants constants_body_from(const Json& j) {
  reject_unknown(j, {"schema", "version", "c_diam", "c_cut", "p0", "c_cp", "c_bad", "c_base",
                     "margin", "seed", "battery"},
                 "constants");
  FrozenConstants c;
  read(j, "c_diam", c.c_diam);
  read(j, "c_cut", c.c_cut);
  read(j, "p0", c.p0);
  read(j, "c_cp", c.c_cp);
  read(j, "c_bad", c.c_bad);
  read(j, "c_base", c.c_base);
  read(j, "margin", c.margin);
  read(j, "seed", c.seed);
  read(j, "battery", c.battery);
  for (const double v : {c.c_diam, c.c_cut, c.p0, c.c_cp, c.c_bad, c.c_base}) {
    if (!(v > 0.0)) throw ValidationError("calibrated constants must be positive");
  }
  return c;
}

}  // namespace

Profile desk_profile() {
  Profile p;
  p.name = "desk";
  return p;
}

Profile paper_profile() {
  Profile p;
  p.name = "paper";
  p.compete.j_rule = JRangeRule::fractions;
  p.compete.background_count_min = 1;
  p.compete.fine_count_min = 1;
  p.election.c_cand = 4.0;
  return p;
}

Profile named_profile(std::string_view name) {
  if (name == "desk") return desk_profile();
  if (name == "paper") return paper_profile();
  throw ValidationError("unknown profile '" + std::string(name) + "'");
}

Profile profile_from_json(std::string_view text) {
  const Json doc = parse(text, "config");
  check_header(doc, kConfigSchema);
  reject_unknown(doc, {"schema", "version", "profile", "compete", "election", "baseline",
                       "constants"},
                 "config");
  Profile p = named_profile(doc.value("profile", std::string("desk")));
  if (doc.contains("compete")) compete_from_json(doc.at("compete"), p.compete);
  if (doc.contains("election")) {
    const auto& e = doc.at("election");
    reject_unknown(e, {"c_cand", "id_bits"}, "election");
    read(e, "c_cand", p.election.c_cand);
    read(e, "id_bits", p.election.id_bits);
    if (!(p.election.c_cand > 0.0)) throw ValidationError("c_cand must be positive");
    if (p.election.id_bits < 1 || p.election.id_bits > 62) {
      throw ValidationError("id_bits must lie in [1, 62]");
    }
  }
  if (doc.contains("baseline")) {
    const auto& b = doc.at("baseline");
    reject_unknown(b, {"timeout_factor"}, "baseline");
    read(b, "timeout_factor", p.baseline.timeout_factor);
    if (!(p.baseline.timeout_factor > 0.0)) throw ValidationError("timeout_factor must be positive");
  }
  if (doc.contains("constants")) p.constants = constants_body_from(doc.at("constants"));
  return p;
}

std::string profile_to_json(const Profile& p) {
  Json doc;
  doc["schema"] = kConfigSchema;
  doc["version"] = kConfigVersion;
  doc["profile"] = p.name;
  doc["compete"] = compete_to_json(p.compete);
  doc["election"] = Json{{"c_cand", p.election.c_cand}, {"id_bits", p.election.id_bits}};
  doc["baseline"] = Json{{"timeout_factor", p.baseline.timeout_factor}};
  if (p.constants) doc["constants"] = constants_body(*p.constants);
  return doc.dump(2) + "\n";
}

Profile load_profile(const std::filesystem::path& path) {
  return profile_from_json(read_text_file(path));
}

FrozenConstants constants_from_json(std::string_view text) {
  const Json doc = parse(text, "constants");
  check_header(doc, kConstantsSchema);
  return constants_body_from(doc);
}

std::string constants_to_json(const FrozenConstants& c) {
  Json doc;
  doc["schema"] = kConstantsSchema;
  doc["version"] = kConfigVersion;
  const Json body = constants_body(c);
  for (const auto& [key, value] : body.items()) doc[key] = value;
  return doc.dump(2) + "\n";
}

FrozenConstants load_constants(const std::filesystem::path& path) {
  return constants_from_json(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + path.string());
}

}  // namespace radionet
