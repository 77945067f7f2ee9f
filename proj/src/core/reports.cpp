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


#include "hess/reports.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <system_error>

#include "hess/error.hpp"
#include "json.hpp"

namespace hess {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

std::string n(double v) { return format_number(v); }

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json kpi_object(const KpiReport& k) {
  return {
      {"scr", k.scr},
      {"ssr", k.ssr},
      {"grf", k.grf},
      {"fgu", k.fgu},
      {"tgu", k.tgu},
      {"obu_vrfb", k.obu[Tech::kVrfb]},
      {"obu_lib", k.obu[Tech::kLib]},
      {"fbu_vrfb", k.fbu[Tech::kVrfb]},
      {"fbu_lib", k.fbu[Tech::kLib]},
      {"tbu_vrfb", k.tbu[Tech::kVrfb]},
      {"tbu_lib", k.tbu[Tech::kLib]},
      {"eg_kwh", k.eg_kwh},
  };
}

constexpr const char* kKpiColumns[] = {"scr",     "ssr",     "grf",      "fgu",     "tgu",      "obu_vrfb",
                                       "obu_lib", "fbu_vrfb", "fbu_lib", "tbu_vrfb", "tbu_lib", "eg_kwh"};

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

ordered_json range_object(const SweepCase& c) {
  return {{"vrfb_min", c.vrfb.min_pct}, {"vrfb_max", c.vrfb.max_pct}, {"lib_min", c.lib.min_pct},
          {"lib_max", c.lib.max_pct}};
}

std::string render_kpi(const json& doc) {
  std::string out = "formula_version,scenario,period";
  for (const char* c : kKpiColumns) out += std::string(",") + c;
  out += '\n';
  const std::string version = cell(doc.at("formula_version"));
  for (const auto& s : doc.at("scenarios")) {
    auto row = [&](const std::string& period, const json& k) {
      out += version + "," + cell(s.at("scenario")) + "," + period;
      for (const char* c : kKpiColumns) out += "," + cell(k.at(c));
      out += '\n';
    };
    for (const auto& a : s.at("annual")) row(cell(a.at("year")), a);
    row("horizon", s.at("horizon"));
  }
  return out;
}

std::string render_economics(const json& doc) {
  const json& scenarios = doc.at("scenarios");
  std::string out = "metric";
  for (const auto& s : scenarios) out += "," + cell(s.at("scenario"));
  out += '\n';
  auto row = [&](const char* metric, auto get) {
    out += metric;
    for (const auto& s : scenarios) out += "," + cell(get(s));
    out += '\n';
  };
  row("formula_version", [&](const json&) { return doc.at("formula_version"); });
  for (const char* m : {"system", "total_investment_eur", "npv_eur", "lcoe_eur_per_kwh", "irr_pct", "spb_years"}) {
    row(m, [m](const json& s) { return s.at(m); });
  }
  return out;
}

ordered_json optima_json(const Ranking& ranking) {
  ordered_json optima = ordered_json::array();
  for (const auto& o : ranking.optima) {
    ordered_json cases = ordered_json::array();
    for (const auto& c : o.cases) cases.push_back(range_object(c));
    optima.push_back({{"kpi", o.kpi}, {"best", o.best}, {"cases", std::move(cases)}});
  }
  return optima;
}

std::string render_summary(const json& doc) {
  std::string out = "use_case,kpi,best,vrfb_min,vrfb_max,lib_min,lib_max\n";
  for (const auto& u : doc.at("use_cases")) {
    for (const auto& o : u.at("optima")) {
      for (const auto& c : o.at("cases")) {
        append_row(out, {cell(u.at("use_case")), cell(o.at("kpi")), cell(o.at("best")), cell(c.at("vrfb_min")),
                         cell(c.at("vrfb_max")), cell(c.at("lib_min")), cell(c.at("lib_max"))});
      }
    }
  }
  return out;
}

std::string render_ranking(const json& doc) {
  std::string out = "rank," + sweep_csv_header();
  const std::string uc = cell(doc.at("use_case"));
  for (const auto& r : doc.at("ordered")) {
    append_row(out, {cell(r.at("rank")), uc, cell(r.at("vrfb_min")), cell(r.at("vrfb_max")), cell(r.at("lib_min")),
                     cell(r.at("lib_max")), cell(r.at("scr")), cell(r.at("lcoe")), cell(r.at("obu_vrfb")),
                     cell(r.at("obu_lib")), cell(r.at("npv"))});
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string ledger_csv(std::span<const EnergyLedger> ledgers) {
  std::string out =
      "year,pv_wh,load_wh,import_wh,export_wh,vrfb_charge_wh,vrfb_discharge_wh,lib_charge_wh,lib_discharge_wh,"
      "standby_wh,loss_wh\n";
  for (const auto& l : ledgers) {
    append_row(out, {std::to_string(l.year), n(l.pv_wh), n(l.load_wh), n(l.import_wh), n(l.export_wh),
                     n(l.charge_wh[Tech::kVrfb]), n(l.discharge_wh[Tech::kVrfb]), n(l.charge_wh[Tech::kLib]),
                     n(l.discharge_wh[Tech::kLib]), n(l.standby_wh), n(l.total_loss_wh())});
  }
  return out;
}

std::string kpi_json(std::span<const ScenarioOutcome> outcomes, const KpiOptions& options) {
  ordered_json scenarios = ordered_json::array();
  for (const auto& o : outcomes) {
    ordered_json annual = ordered_json::array();
    for (const auto& l : o.horizon.ledgers) {
      ordered_json a{{"year", l.year}};
      a.update(kpi_object(annual_kpis(l, options)));
      annual.push_back(std::move(a));
    }
    scenarios.push_back({{"scenario", std::string(to_string(o.policy.id))},
                         {"horizon", kpi_object(o.kpis)},
                         {"annual", std::move(annual)},
                         {"notes", o.kpis.notes}});
  }
  ordered_json doc{{"kind", "kpi"}, {"formula_version", kpi_formula_version(options)}, {"scenarios", scenarios}};
  return doc.dump(2) + "\n";
}

std::string economics_json(std::span<const ScenarioOutcome> outcomes) {
  ordered_json scenarios = ordered_json::array();
  for (const auto& o : outcomes) {
    const EconomicReport& e = o.economics;
    ordered_json flows = ordered_json::array();
    const auto& cf = e.cashflows;
    flows.push_back({{"year", 0}, {"flow", cf.flows[0]}, {"savings", 0.0}, {"opex", 0.0}, {"replacement", 0.0}});
    for (std::size_t i = 0; i < cf.savings.size(); ++i) {
      flows.push_back({{"year", i + 1},
                       {"flow", cf.flows[i + 1]},
                       {"savings", cf.savings[i]},
                       {"opex", cf.opex[i]},
                       {"replacement", cf.replacement[i]}});
    }
    scenarios.push_back({{"scenario", std::string(to_string(o.policy.id))},
                         {"system", std::string(to_string(e.config))},
                         {"total_investment_eur", cf.investment},
                         {"npv_eur", e.npv},
                         {"lcoe_eur_per_kwh", opt(e.lcoe)},
                         {"irr_pct", e.irr ? ordered_json(*e.irr * 100.0) : ordered_json(nullptr)},
                         {"spb_years", opt(e.spb)},
                         {"notes", e.notes},
                         {"cashflows", std::move(flows)}});
  }
  ordered_json doc{
      {"kind", "economics"}, {"formula_version", std::string(kEconomicsFormulaVersion)}, {"scenarios", scenarios}};
  return doc.dump(2) + "\n";
}

std::string sweep_csv_header() { return "use_case,vrfb_min,vrfb_max,lib_min,lib_max,scr,lcoe,obu_vrfb,obu_lib,npv\n"; }

std::string sweep_csv_row(const SweepResult& r) {
  std::string out;
  const SweepCase& c = r.sweep_case;
  append_row(out, {std::string(to_string(c.use_case)), std::to_string(c.vrfb.min_pct), std::to_string(c.vrfb.max_pct),
                   std::to_string(c.lib.min_pct), std::to_string(c.lib.max_pct), n(r.scr),
                   r.lcoe ? n(*r.lcoe) : std::string(), n(r.obu[Tech::kVrfb]), n(r.obu[Tech::kLib]), n(r.npv)});
  return out;
}

std::string sweep_csv(std::span<const SweepResult> results) {
  std::string out = sweep_csv_header();
  for (const auto& r : results) out += sweep_csv_row(r);
  return out;
}

std::vector<SweepResult> parse_sweep_csv(std::string_view text, UseCase use_case) {
  std::map<std::array<int, 4>, SweepCase> by_range;
  for (const auto& c : enumerate_cases(use_case)) {
    by_range[{c.vrfb.min_pct, c.vrfb.max_pct, c.lib.min_pct, c.lib.max_pct}] = c;
  }
  std::vector<SweepResult> out;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) break;  // unterminated tail
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    const auto f = split(line, ',');
    if (f.size() != 10 || f[0] != to_string(use_case)) continue;
    std::array<int, 4> key{};
    SweepResult r;
    bool ok = parse_int(f[1], key[0]) && parse_int(f[2], key[1]) && parse_int(f[3], key[2]) &&
              parse_int(f[4], key[3]) && parse_double(f[5], r.scr) && parse_double(f[7], r.obu[Tech::kVrfb]) &&
              parse_double(f[8], r.obu[Tech::kLib]) && parse_double(f[9], r.npv);
    if (ok && !f[6].empty()) {
      double l = 0.0;
      ok = parse_double(f[6], l);
      r.lcoe = l;
    }
    const auto it = by_range.find(key);
    if (!ok || it == by_range.end()) continue;
    r.sweep_case = it->second;
    out.push_back(std::move(r));
  }
  return out;
}

std::string ranking_json(UseCase use_case, const Ranking& ranking, SecondaryKpi secondary, double tolerance) {
  ordered_json ordered = ordered_json::array();
  std::size_t rank = 1;
  for (const auto& r : ranking.ordered) {
    ordered_json row{{"rank", rank++}};
    row.update(range_object(r.sweep_case));
    row.update({{"scr", r.scr},
                {"lcoe", opt(r.lcoe)},
                {"obu_vrfb", r.obu[Tech::kVrfb]},
                {"obu_lib", r.obu[Tech::kLib]},
                {"npv", r.npv}});
    ordered.push_back(std::move(row));
  }
  ordered_json doc{{"kind", "ranking"},
                   {"use_case", std::string(to_string(use_case))},
                   {"secondary", std::string(to_string(secondary))},
                   {"tie_tolerance", tolerance},
                   {"ordered", std::move(ordered)},
                   {"optima", optima_json(ranking)}};
  return doc.dump(2) + "\n";
}

std::string sweep_summary_json(std::span<const std::pair<UseCase, Ranking>> rankings, SecondaryKpi secondary,
                               double tolerance) {
  ordered_json use_cases = ordered_json::array();
  for (const auto& [uc, ranking] : rankings) {
    ordered_json leader = range_object(ranking.ordered.front().sweep_case);
    leader["scr"] = ranking.ordered.front().scr;
    use_cases.push_back(
        {{"use_case", std::string(to_string(uc))}, {"leader", std::move(leader)}, {"optima", optima_json(ranking)}});
  }
  ordered_json doc{{"kind", "sweep_summary"},
                   {"secondary", std::string(to_string(secondary))},
                   {"tie_tolerance", tolerance},
                   {"use_cases", std::move(use_cases)}};
  return doc.dump(2) + "\n";
}

std::string manifest_json(const RunConfig& config, const ManifestInfo& info) {
  ordered_json doc{
      {"kind", "manifest"},
      {"command", info.command},
      {"version", HESS_VERSION_STRING},
      {"formula_versions",
       {{"kpi", kpi_formula_version(config.kpi)},
        {"economics", std::string(kEconomicsFormulaVersion)},
        {"ledger", std::string(kLedgerFormatVersion)}}},
      {"config_hash", config_hash(config)},
      {"config", ordered_json::parse(canonical_config_json(config))},
      {"scenarios", info.scenarios},
      {"files", info.files},
      {"timestamp", {{"started_utc", info.started_utc}, {"wall_time_s", info.wall_time_s}}},
  };
  return doc.dump(2) + "\n";
}

std::string render_csv(std::string_view json_text) {
  try {
    const json doc = json::parse(json_text.begin(), json_text.end());
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "kpi") return render_kpi(doc);
    if (kind == "economics") return render_economics(doc);
    if (kind == "ranking") return render_ranking(doc);
    if (kind == "sweep_summary") return render_summary(doc);
    throw Error(ErrorCode::kParse, "no CSV rendering for report kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed report: ") + e.what());
  }
}

TraceWriter::TraceWriter(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw Error(ErrorCode::kIo, "cannot open trace file " + path.string());
  std::setvbuf(file_, nullptr, _IOFBF, 1 << 20);
  std::fputs(
      "year,minute,pv_w,load_w,standby_w,pv_to_load_w,pv_to_vrfb_w,pv_to_lib_w,vrfb_to_load_w,lib_to_load_w,"
      "import_w,export_w,vrfb_soc,lib_soc\n",
      file_);
}

TraceWriter::~TraceWriter() {
  if (file_) std::fclose(file_);
}

void TraceWriter::write(int year, std::size_t minute, const StepRecord& r, const PerTech<BatteryState>& states) {
  char buf[512];
  char* p = buf;
  char* const end = buf + sizeof buf;
  auto put = [&](auto v) {
    p = std::to_chars(p, end - 1, v).ptr;
    *p++ = ',';
  };
  put(year);
  put(minute);
  for (double v : {r.pv, r.load, r.standby, r.pv_to_load, r.pv_to_batt[Tech::kVrfb], r.pv_to_batt[Tech::kLib],
                   r.batt_to_load[Tech::kVrfb], r.batt_to_load[Tech::kLib], r.grid_import, r.grid_export,
                   states[Tech::kVrfb].soc, states[Tech::kLib].soc}) {
    put(v);
  }
  p[-1] = '\n';
  std::fwrite(buf, 1, static_cast<std::size_t>(p - buf), file_);
}

void TraceWriter::close() {
  if (!file_) return;
  const bool bad = std::ferror(file_) != 0;
  const bool closed = std::fclose(file_) == 0;
  file_ = nullptr;
  if (bad || !closed) throw Error(ErrorCode::kIo, "failed writing trace file " + path_.string());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace hess
