/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "hess/config.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hess/error.hpp"

namespace hess {

using nlohmann::json;

namespace {

std::string escape_key(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string hhmm(int minute) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

std::optional<int> parse_hhmm(const std::string& s) {
  int h = 0;
  int m = 0;
  char tail = 0;
  if (s.size() != 5 || s[2] != ':' || std::sscanf(s.c_str(), "%2d:%2d%c", &h, &m, &tail) != 2) return std::nullopt;
  if (h < 0 || h > 23 || m < 0 || m > 59) return std::nullopt;
  return h * 60 + m;
}

json battery_json(const BatterySpec& b) {
  return {
      {"energy_capacity_wh", b.energy_capacity_nominal_wh},
      {"p_charge_max_w", b.p_charge_max_w},
      {"p_discharge_max_w", b.p_discharge_max_w},
      {"soc_min", b.soc_min},
      {"soc_max", b.soc_max},
      {"soc_initial", b.soc_initial},
      {"eta_charge", b.eta_charge},
      {"eta_discharge", b.eta_discharge},
      {"standby_power_w", b.standby_power_w},
      {"capacity_fade_rate", b.capacity_fade_rate},
      {"calendar_fade", b.calendar_fade},
      {"taper_band", b.taper_band},
  };
}

json curve_json(const BetaCurve& c) {
  json a = json::array();
  for (const auto& [soc, beta] : c.points) a.push_back({soc, beta});
  return a;
}

json window_json(const SocWindow& w) { return {w.soc_min, w.soc_max}; }

json profile_json(const ProfileSource& p) {
  return {{"path", p.path ? json(p.path->generic_string()) : json(nullptr)}, {"step_s", p.step_s}};
}

json to_json(const RunConfig& c) {
  json scenarios = json::array();
  for (PolicyId id : c.scenarios) scenarios.push_back(std::string(to_string(id)));

  json seasonal = nullptr;
  if (c.policy.seasonal) {
    seasonal = json::object();
    for (Tech t : kTechs) {
      const auto& w = (*c.policy.seasonal)[t];
      seasonal[std::string(to_string(t))] = {{"summer", window_json(w.summer)}, {"winter", window_json(w.winter)}};
    }
  }

  return {
      {"profiles", {{"pv", profile_json(c.pv)}, {"load", profile_json(c.load)}}},
      {"scenarios", scenarios},
      {"years", c.years},
      {"scaling",
       {{"pv_degradation_rate", c.scaling.pv_degradation_rate}, {"load_growth_rate", c.scaling.load_growth_rate}}},
      {"batteries",
       {{"vrfb", battery_json(c.batteries[Tech::kVrfb])}, {"lib", battery_json(c.batteries[Tech::kLib])}}},
      {"aging",
       {{"a", c.aging.a},
        {"b", c.aging.b},
        {"c", c.aging.c},
        {"t_ref_k", c.aging.t_ref_k},
        {"q0", c.aging.q0},
        {"ambient_k", c.aging.ambient_k}}},
      {"policy",
       {{"alpha", c.policy.alpha},
        {"beta", c.policy.beta},
        {"band_w", c.policy.band_w},
        {"beta_charge", curve_json(c.policy.beta_charge)},
        {"beta_discharge", curve_json(c.policy.beta_discharge)},
        {"seasonal", seasonal}}},
      {"kpi", {{"obu_normalization", std::string(to_string(c.kpi.obu))}}},
      {"tariff",
       {{"fixed_daily", c.tariff.fixed_daily},
        {"price_peak", c.tariff.price_peak},
        {"price_offpeak", c.tariff.price_offpeak},
        {"offpeak_start", hhmm(c.tariff.offpeak_start_minute)},
        {"offpeak_end", hhmm(c.tariff.offpeak_end_minute)},
        {"export_price", c.tariff.export_price}}},
      {"costs",
       {{"module_price_per_wp", c.costs.module_price_per_wp},
        {"pv_wp", c.costs.pv_wp},
        {"inverter_pv_a", c.costs.inverter_pv_a},
        {"inverter_pv_b", c.costs.inverter_pv_b},
        {"lib", c.costs.lib},
        {"lib_inverter", c.costs.lib_inverter},
        {"vrfb", c.costs.vrfb},
        {"vrfb_inverter", c.costs.vrfb_inverter},
        {"vrfb_inverter_count", c.costs.vrfb_inverter_count},
        {"cabling_hess", c.costs.cabling_hess},
        {"cabling_single", c.costs.cabling_single},
        {"opex_per_year", c.costs.opex_per_year},
        {"opex_lib_only", c.costs.opex_lib_only}}},
      {"rates",
       {{"discount", c.rates.discount},
        {"inflation", c.rates.inflation},
        {"energy_escalation", c.rates.energy_escalation},
        {"replacement_year", c.rates.replacement_year}}},
      {"sweep",
       {{"use_case", c.sweep.use_cases.size() == 1 ? std::string(to_string(c.sweep.use_cases.front())) : "all"},
        {"secondary", std::string(to_string(c.sweep.secondary))},
        {"tie_tolerance", c.sweep.tie_tolerance},
        {"resume", c.sweep.resume}}},
      {"output_dir", c.output_dir.generic_string()},
      {"workers", c.workers},
      {"trace", c.trace},
  };
}

const json& defaults() {
  static const json d = to_json(RunConfig{});
  return d;
}

const char* type_name(const json& j) {
  if (j.is_object()) return "object";
  if (j.is_array()) return "array";
  if (j.is_boolean()) return "boolean";
  if (j.is_string()) return "string";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  return "null";
}

class Checker {
 public:
  explicit Checker(std::vector<Diagnostic>& out) : out_(out) {}

  void add(std::string path, std::string message) { out_.push_back({std::move(path), std::move(message)}); }

  // Unknown keys and JSON type mismatches against the default document.
  void types(const json& user, const json& def, const std::string& path) {
    if (def.is_null()) return;  // free-form slot, checked where it is read
    if (def.is_object()) {
      if (!user.is_object()) return mismatch(path, "object", user);
      for (const auto& [k, v] : user.items()) {
        const std::string p = path + "/" + escape_key(k);
        if (!def.contains(k)) {
          add(p, "unknown key");
        } else {
          types(v, def.at(k), p);
        }
      }
      return;
    }
    const bool ok = def.is_array()             ? user.is_array()
                    : def.is_boolean()         ? user.is_boolean()
                    : def.is_string()          ? user.is_string()
                    : def.is_number_integer()  ? user.is_number_integer()
                                               : user.is_number();
    if (!ok) mismatch(path, type_name(def), user);
  }

  std::size_t count() const noexcept { return out_.size(); }

 private:
  void mismatch(const std::string& path, const char* want, const json& got) {
    add(path, std::string("expected ") + want + ", got " + type_name(got));
  }

  std::vector<Diagnostic>& out_;
};

// Blank documents mean "all defaults".
json parse_document(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  return json::parse(text.begin(), text.end(), nullptr, true, true);
}

void merge(json& base, const json& patch) {
  if (base.is_object() && patch.is_object()) {
    for (const auto& [k, v] : patch.items()) {
      if (base.contains(k)) merge(base[k], v);
      else base[k] = v;
    }
  } else {
    base = patch;
  }
}

std::optional<double> read_pair(const json& j, std::pair<double, double>& out) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) return std::nullopt;
  out = {j[0].get<double>(), j[1].get<double>()};
  return out.first;
}

// Splits "<tech>.<field>: why" from BatterySpec::validate into a pointer.
// Maps "<prefix>field.sub: why" from a validate() call onto <section>/field/sub.
Diagnostic field_diagnostic(const std::string& section, const std::string& prefix, const std::string& what) {
  const auto colon = what.find(": ");
  if (what.rfind(prefix, 0) != 0 || colon == std::string::npos) return {section, what};
  std::string field = what.substr(prefix.size(), colon - prefix.size());
  field = field.substr(0, field.find('/'));  // "alpha/beta" names the first
  std::replace(field.begin(), field.end(), '.', '/');
  return {section + "/" + field, what.substr(colon + 2)};
}

template <class F>
void guard(Checker& ck, const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    ck.add(path, e.what());
  }
}

void read_profile(Checker& ck, const json& j, const std::string& path, const std::filesystem::path& base,
                  ProfileSource& out) {
  const json& p = j.at("path");
  if (p.is_string()) {
    std::filesystem::path file = p.get<std::string>();
    if (file.is_relative() && !base.empty()) file = base / file;
    out.path = file;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(file, ec)) ck.add(path + "/path", "file not found: " + file.string());
  } else if (!p.is_null()) {
    ck.add(path + "/path", std::string("expected string or null, got ") + type_name(p));
  }
  out.step_s = j.at("step_s").get<int>();
  if (out.step_s <= 0 || (60 % out.step_s != 0 && out.step_s % 60 != 0)) {
    ck.add(path + "/step_s", "must be a positive divisor or multiple of 60");
  }
}

void read_battery(Checker& ck, const json& j, Tech t, BatterySpec& b) {
  const std::string path = "/batteries/" + std::string(to_string(t));
  b.energy_capacity_nominal_wh = j.at("energy_capacity_wh").get<double>();
  b.p_charge_max_w = j.at("p_charge_max_w").get<double>();
  b.p_discharge_max_w = j.at("p_discharge_max_w").get<double>();
  b.soc_min = j.at("soc_min").get<double>();
  b.soc_max = j.at("soc_max").get<double>();
  b.soc_initial = j.at("soc_initial").get<double>();
  b.eta_charge = j.at("eta_charge").get<double>();
  b.eta_discharge = j.at("eta_discharge").get<double>();
  b.standby_power_w = j.at("standby_power_w").get<double>();
  b.capacity_fade_rate = j.at("capacity_fade_rate").get<double>();
  b.calendar_fade = j.at("calendar_fade").get<bool>();
  b.taper_band = j.at("taper_band").get<double>();
  if (!(b.soc_min < b.soc_max)) {
    ck.add(path + "/soc_min", "soc_min (" + j.at("soc_min").dump() + ") must be below soc_max (" +
                                  j.at("soc_max").dump() + ")");
    return;
  }
  try {
    b.validate();
  } catch (const Error& e) {
    const std::string name(to_string(t));
    const Diagnostic d = field_diagnostic("/batteries/" + name, name + ".", e.what());
    ck.add(d.path, d.message);
  }
}

void read_curve(Checker& ck, const json& j, const std::string& path, BetaCurve& out) {
  out.points.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::pair<double, double> p;
    if (!read_pair(j[i], p)) {
      ck.add(path + "/" + std::to_string(i), "expected [soc, beta]");
      continue;
    }
    out.points.push_back(p);
  }
}

void read_seasonal(Checker& ck, const json& j, ScenarioPolicy& policy) {
  const std::string path = "/policy/seasonal";
  if (j.is_null()) {
    policy.seasonal.reset();
    return;
  }
  if (!j.is_object()) {
    ck.add(path, std::string("expected object or null, got ") + type_name(j));
    return;
  }
  for (const auto& [k, v] : j.items()) {
    if (k != "vrfb" && k != "lib") ck.add(path + "/" + escape_key(k), "unknown key");
  }
  PerTech<SeasonalWindows> w;
  for (Tech t : kTechs) {
    const std::string name(to_string(t));
    if (!j.contains(name) || !j[name].is_object()) {
      ck.add(path + "/" + name, "expected object with summer and winter windows");
      continue;
    }
    for (const auto& [k, v] : j[name].items()) {
      if (k != "summer" && k != "winter") ck.add(path + "/" + name + "/" + escape_key(k), "unknown key");
    }
    for (const char* season : {"summer", "winter"}) {
      const std::string p = path + "/" + name + "/" + season;
      std::pair<double, double> mm;
      if (!j[name].contains(season) || !read_pair(j[name][season], mm)) {
        ck.add(p, "expected [soc_min, soc_max]");
        continue;
      }
      if (!(mm.first >= 0.0 && mm.first < mm.second && mm.second <= 1.0)) {
        ck.add(p, "requires 0 <= soc_min < soc_max <= 1");
      }
      (std::string_view(season) == "summer" ? w[t].summer : w[t].winter) = {mm.first, mm.second};
    }
  }
  policy.seasonal = w;
}

RunConfig read_config(Checker& ck, const json& m, const std::filesystem::path& base) {
  RunConfig c;
  read_profile(ck, m.at("profiles").at("pv"), "/profiles/pv", base, c.pv);
  read_profile(ck, m.at("profiles").at("load"), "/profiles/load", base, c.load);

  c.scenarios.clear();
  const json& sc = m.at("scenarios");
  if (sc.empty()) ck.add("/scenarios", "needs at least one scenario");
  for (std::size_t i = 0; i < sc.size(); ++i) {
    const std::string p = "/scenarios/" + std::to_string(i);
    if (!sc[i].is_string()) {
      ck.add(p, std::string("expected string, got ") + type_name(sc[i]));
      continue;
    }
    guard(ck, p, [&] { c.scenarios.push_back(parse_policy_id(sc[i].get<std::string>())); });
  }

  c.years = m.at("years").get<int>();
  if (c.years < 1 || c.years > kHorizonYears) ck.add("/years", "must lie in [1, 15]");

  const json& s = m.at("scaling");
  c.scaling.pv_degradation_rate = s.at("pv_degradation_rate").get<double>();
  c.scaling.load_growth_rate = s.at("load_growth_rate").get<double>();
  guard(ck, "/scaling", [&] { c.scaling.validate(); });

  for (Tech t : kTechs) read_battery(ck, m.at("batteries").at(std::string(to_string(t))), t, c.batteries[t]);

  const json& a = m.at("aging");
  c.aging.a = a.at("a").get<double>();
  c.aging.b = a.at("b").get<double>();
  c.aging.c = a.at("c").get<double>();
  c.aging.t_ref_k = a.at("t_ref_k").get<double>();
  c.aging.q0 = a.at("q0").get<double>();
  c.aging.ambient_k = a.at("ambient_k").get<double>();
  if (!(c.aging.t_ref_k > 0.0)) ck.add("/aging/t_ref_k", "must be > 0");
  if (!(c.aging.ambient_k > 0.0)) ck.add("/aging/ambient_k", "must be > 0");
  if (!(c.aging.q0 > 0.0)) ck.add("/aging/q0", "must be > 0");
  if (!(c.aging.a >= 0.0)) ck.add("/aging/a", "must be >= 0");

  const json& p = m.at("policy");
  c.policy.alpha = p.at("alpha").get<double>();
  c.policy.beta = p.at("beta").get<double>();
  c.policy.band_w = p.at("band_w").get<double>();
  const std::size_t before = ck.count();
  read_curve(ck, p.at("beta_charge"), "/policy/beta_charge", c.policy.beta_charge);
  read_curve(ck, p.at("beta_discharge"), "/policy/beta_discharge", c.policy.beta_discharge);
  read_seasonal(ck, p.at("seasonal"), c.policy);
  if (ck.count() == before) {
    try {
      c.policy.validate();
    } catch (const Error& e) {
      const Diagnostic d = field_diagnostic("/policy", "policy.", e.what());
      ck.add(d.path, d.message);
    }
  }

  guard(ck, "/kpi/obu_normalization",
        [&] { c.kpi.obu = parse_obu_normalization(m.at("kpi").at("obu_normalization").get<std::string>()); });

  const json& tf = m.at("tariff");
  c.tariff.fixed_daily = tf.at("fixed_daily").get<double>();
  c.tariff.price_peak = tf.at("price_peak").get<double>();
  c.tariff.price_offpeak = tf.at("price_offpeak").get<double>();
  c.tariff.export_price = tf.at("export_price").get<double>();
  for (const char* key : {"offpeak_start", "offpeak_end"}) {
    const auto minute = parse_hhmm(tf.at(key).get<std::string>());
    if (!minute) {
      ck.add(std::string("/tariff/") + key, "expected HH:MM");
      continue;
    }
    (std::string_view(key) == "offpeak_start" ? c.tariff.offpeak_start_minute : c.tariff.offpeak_end_minute) = *minute;
  }
  guard(ck, "/tariff", [&] { c.tariff.validate(); });

  const json& co = m.at("costs");
  c.costs.module_price_per_wp = co.at("module_price_per_wp").get<double>();
  c.costs.pv_wp = co.at("pv_wp").get<double>();
  c.costs.inverter_pv_a = co.at("inverter_pv_a").get<double>();
  c.costs.inverter_pv_b = co.at("inverter_pv_b").get<double>();
  c.costs.lib = co.at("lib").get<double>();
  c.costs.lib_inverter = co.at("lib_inverter").get<double>();
  c.costs.vrfb = co.at("vrfb").get<double>();
  c.costs.vrfb_inverter = co.at("vrfb_inverter").get<double>();
  c.costs.vrfb_inverter_count = co.at("vrfb_inverter_count").get<int>();
  c.costs.cabling_hess = co.at("cabling_hess").get<double>();
  c.costs.cabling_single = co.at("cabling_single").get<double>();
  c.costs.opex_per_year = co.at("opex_per_year").get<double>();
  c.costs.opex_lib_only = co.at("opex_lib_only").get<double>();
  guard(ck, "/costs", [&] { c.costs.validate(); });

  const json& r = m.at("rates");
  c.rates.discount = r.at("discount").get<double>();
  c.rates.inflation = r.at("inflation").get<double>();
  c.rates.energy_escalation = r.at("energy_escalation").get<double>();
  c.rates.replacement_year = r.at("replacement_year").get<int>();
  c.rates.horizon = c.years;
  guard(ck, "/rates", [&] { c.rates.validate(); });

  const json& sw = m.at("sweep");
  guard(ck, "/sweep/use_case", [&] {
    const std::string uc = sw.at("use_case").get<std::string>();
    if (uc == "all") {
      c.sweep.use_cases = {UseCase::kAllYearVariable, UseCase::kWinterVariableSummerFixed,
                           UseCase::kWinterFixedSummerVariable};
    } else {
      c.sweep.use_cases = {parse_use_case(uc)};
    }
  });
  guard(ck, "/sweep/secondary",
        [&] { c.sweep.secondary = parse_secondary_kpi(sw.at("secondary").get<std::string>()); });
  c.sweep.tie_tolerance = sw.at("tie_tolerance").get<double>();
  if (!(c.sweep.tie_tolerance >= 0.0)) ck.add("/sweep/tie_tolerance", "must be >= 0");
  c.sweep.resume = sw.at("resume").get<bool>();

  const std::string out = m.at("output_dir").get<std::string>();
  if (out.empty()) ck.add("/output_dir", "must not be empty");
  c.output_dir = out;
  const auto workers = m.at("workers").get<std::int64_t>();
  if (workers < 0 || workers > 4096) ck.add("/workers", "must lie in [0, 4096]");
  else c.workers = static_cast<unsigned>(workers);
  c.trace = m.at("trace").get<bool>();
  return c;
}

std::optional<RunConfig> check(std::string_view text, const std::filesystem::path& base,
                               std::vector<Diagnostic>& diags) {
  Checker ck(diags);
  json user;
  try {
    user = parse_document(text);
  } catch (const json::parse_error& e) {
    ck.add("", std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
  if (!user.is_object()) {
    ck.add("", std::string("expected object, got ") + type_name(user));
    return std::nullopt;
  }
  ck.types(user, defaults(), "");
  if (ck.count() > 0) return std::nullopt;
  json merged = defaults();
  merge(merged, user);
  try {
    RunConfig c = read_config(ck, merged, base);
    if (ck.count() > 0) return std::nullopt;
    return c;
  } catch (const json::exception& e) {
    ck.add("", e.what());
    return std::nullopt;
  }
}

}  // namespace

std::string default_config_json() { return defaults().dump(2) + "\n"; }

std::vector<Diagnostic> validate_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  std::vector<Diagnostic> diags;
  try {
    check(json_text, base_dir, diags);
  } catch (const std::exception& e) {
    diags.push_back({"", e.what()});
  }
  return diags;
}

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  std::vector<Diagnostic> diags;
  auto c = check(json_text, base_dir, diags);
  if (!c) {
    const Diagnostic& d = diags.front();
    throw Error(ErrorCode::kConfig, (d.path.empty() ? std::string() : d.path + ": ") + d.message);
  }
  return *std::move(c);
}

void check_config_syntax(std::string_view json_text) {
  json doc;
  try {
    doc = parse_document(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() && !doc.is_null()) throw Error(ErrorCode::kConfig, "configuration must be a JSON object");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string set_config_value(std::string_view json_text, std::string_view pointer, std::string_view value_json) {
  try {
    json doc = parse_document(json_text);
    if (doc.is_null()) doc = json::object();
    const json value = json::parse(value_json.begin(), value_json.end());
    doc[json::json_pointer(std::string(pointer))] = value;
    return doc.dump(2) + "\n";
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("cannot set ") + std::string(pointer) + ": " + e.what());
  }
}

std::string canonical_config_json(const RunConfig& config) {
  json j = to_json(config);
  // Fields that cannot change any report value.
  j.erase("output_dir");
  j.erase("workers");
  j.erase("trace");
  return j.dump();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

StudyInputs build_study(const RunConfig& config) {
  StudyInputs in;
  in.sim.pv = config.pv.path ? load_profile(*config.pv.path, SeriesKind::kPv, config.pv.step_s)
                             : synthetic_pv_profile();
  in.sim.load = config.load.path ? load_profile(*config.load.path, SeriesKind::kLoad, config.load.step_s)
                                 : synthetic_load_profile();
  in.sim.scaling = config.scaling;
  in.sim.specs = config.batteries;
  in.sim.aging = config.aging;
  in.sim.years = config.years;
  in.policy_template = config.policy;
  in.kpi = config.kpi;
  in.tariff = config.tariff;
  in.costs = config.costs;
  in.rates = config.rates;
  in.rates.horizon = config.years;
  return in;
}

}  // namespace hess
