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


#include "hess/hess.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "hess/config.hpp"
#include "hess/error.hpp"
#include "hess/reports.hpp"
#include "hess/runner.hpp"

struct hess_config {
  std::string text;
  std::filesystem::path base_dir;
};

struct hess_diagnostics {
  std::vector<hess::Diagnostic> items;
};

struct hess_result {
  hess::ScenarioOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

hess_status code_of(hess::ErrorCode c) {
  switch (c) {
    case hess::ErrorCode::kParse: return HESS_E_PARSE;
    case hess::ErrorCode::kGap: return HESS_E_GAP;
    case hess::ErrorCode::kLength: return HESS_E_LENGTH;
    case hess::ErrorCode::kRange: return HESS_E_RANGE;
    case hess::ErrorCode::kDomain: return HESS_E_DOMAIN;
    case hess::ErrorCode::kNumeric: return HESS_E_NUMERIC;
    case hess::ErrorCode::kConfig: return HESS_E_CONFIG;
    case hess::ErrorCode::kNoSolution: return HESS_E_NO_SOLUTION;
    case hess::ErrorCode::kUndefined: return HESS_E_UNDEFINED;
    case hess::ErrorCode::kIo: return HESS_E_IO;
  }
  return HESS_E_INTERNAL;
}

hess_status fail(hess_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

template <class F>
hess_status guarded(F&& f) {
  try {
    return f();
  } catch (const hess::Error& e) {
    return fail(code_of(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(HESS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(HESS_E_INTERNAL, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

hess::RunConfig resolve(const hess_config* config, const char* out_dir) {
  hess::RunConfig c = hess::parse_config(config->text, config->base_dir);
  if (out_dir) c.output_dir = out_dir;
  return c;
}

#define HESS_REQUIRE(cond) \
  if (!(cond)) return fail(HESS_E_INVALID_ARGUMENT, "invalid argument: " #cond)

}  // namespace

extern "C" {

const char* hess_status_name(hess_status status) {
  switch (status) {
    case HESS_OK: return "ok";
    case HESS_E_PARSE: return "parse";
    case HESS_E_GAP: return "gap";
    case HESS_E_LENGTH: return "length";
    case HESS_E_RANGE: return "range";
    case HESS_E_DOMAIN: return "domain";
    case HESS_E_NUMERIC: return "numeric";
    case HESS_E_CONFIG: return "config";
    case HESS_E_NO_SOLUTION: return "no_solution";
    case HESS_E_UNDEFINED: return "undefined";
    case HESS_E_IO: return "io";
    case HESS_E_INVALID_ARGUMENT: return "invalid_argument";
    case HESS_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hess_last_error(void) { return g_last_error.c_str(); }

const char* hess_version(void) { return HESS_VERSION_STRING; }

void hess_string_free(char* s) { std::free(s); }

hess_status hess_config_create(hess_config** out) {
  HESS_REQUIRE(out);
  return guarded([&] {
    *out = new hess_config{"{}", {}};
    return HESS_OK;
  });
}

hess_status hess_config_parse(const char* json_text, const char* base_dir, hess_config** out) {
  HESS_REQUIRE(json_text && out);
  return guarded([&] {
    std::string text = json_text;
    hess::check_config_syntax(text);
    *out = new hess_config{std::move(text), base_dir ? base_dir : ""};
    return HESS_OK;
  });
}

hess_status hess_config_load(const char* path, hess_config** out) {
  HESS_REQUIRE(path && out);
  return guarded([&] {
    const std::filesystem::path p = path;
    std::string text = hess::read_text_file(p);
    hess::check_config_syntax(text);
    *out = new hess_config{std::move(text), p.parent_path()};
    return HESS_OK;
  });
}

hess_status hess_config_set(hess_config* config, const char* json_pointer, const char* json_value) {
  HESS_REQUIRE(config && json_pointer && json_value);
  return guarded([&] {
    config->text = hess::set_config_value(config->text, json_pointer, json_value);
    return HESS_OK;
  });
}

hess_status hess_config_to_json(const hess_config* config, char** out) {
  HESS_REQUIRE(config && out);
  return guarded([&] {
    *out = dup(config->text);
    return HESS_OK;
  });
}

hess_status hess_config_defaults_json(char** out) {
  HESS_REQUIRE(out);
  return guarded([&] {
    *out = dup(hess::default_config_json());
    return HESS_OK;
  });
}

void hess_config_free(hess_config* config) { delete config; }

hess_status hess_config_validate(const hess_config* config, hess_diagnostics** out) {
  HESS_REQUIRE(config && out);
  return guarded([&] {
    *out = new hess_diagnostics{hess::validate_config(config->text, config->base_dir)};
    return HESS_OK;
  });
}

size_t hess_diagnostics_count(const hess_diagnostics* diags) { return diags ? diags->items.size() : 0; }

const char* hess_diagnostics_path(const hess_diagnostics* diags, size_t index) {
  if (!diags || index >= diags->items.size()) return nullptr;
  return diags->items[index].path.c_str();
}

const char* hess_diagnostics_message(const hess_diagnostics* diags, size_t index) {
  if (!diags || index >= diags->items.size()) return nullptr;
  return diags->items[index].message.c_str();
}

void hess_diagnostics_free(hess_diagnostics* diags) { delete diags; }

hess_status hess_simulate(const hess_config* config, const char* scenario, hess_result** out) {
  HESS_REQUIRE(config && scenario && out);
  return guarded([&] {
    const hess::RunConfig c = resolve(config, nullptr);
    const hess::StudyInputs inputs = hess::build_study(c);
    auto* r = new hess_result{hess::evaluate_scenario(inputs.policy(hess::parse_policy_id(scenario)), inputs)};
    *out = r;
    return HESS_OK;
  });
}

size_t hess_result_years(const hess_result* result) {
  return result ? result->outcome.horizon.ledgers.size() : 0;
}

hess_status hess_result_ledger(const hess_result* result, size_t year_index, hess_ledger* out) {
  HESS_REQUIRE(result && out);
  if (year_index >= result->outcome.horizon.ledgers.size()) return fail(HESS_E_RANGE, "year index out of range");
  const hess::EnergyLedger& l = result->outcome.horizon.ledgers[year_index];
  using hess::Tech;
  *out = hess_ledger{l.year,
                     l.pv_wh,
                     l.load_wh,
                     l.standby_wh,
                     l.pv_to_load_wh,
                     l.import_wh,
                     l.export_wh,
                     l.charge_wh[Tech::kVrfb],
                     l.discharge_wh[Tech::kVrfb],
                     l.charge_wh[Tech::kLib],
                     l.discharge_wh[Tech::kLib],
                     l.total_loss_wh()};
  return HESS_OK;
}

hess_status hess_result_kpis(const hess_result* result, hess_kpis* out) {
  HESS_REQUIRE(result && out);
  const hess::KpiReport& k = result->outcome.kpis;
  using hess::Tech;
  *out = hess_kpis{k.scr,           k.ssr,           k.grf,           k.fgu,           k.tgu,
                   k.obu[Tech::kVrfb], k.obu[Tech::kLib], k.fbu[Tech::kVrfb], k.fbu[Tech::kLib], k.tbu[Tech::kVrfb],
                   k.tbu[Tech::kLib], k.eg_kwh};
  return HESS_OK;
}

hess_status hess_result_economics(const hess_result* result, hess_economics* out) {
  HESS_REQUIRE(result && out);
  const hess::EconomicReport& e = result->outcome.economics;
  *out = hess_economics{e.cashflows.investment, e.npv,
                        e.lcoe.value_or(0.0),   e.lcoe.has_value(),
                        e.irr.value_or(0.0),    e.irr.has_value(),
                        e.spb.value_or(0.0),    e.spb.has_value()};
  return HESS_OK;
}

void hess_result_free(hess_result* result) { delete result; }

hess_status hess_run(const hess_config* config, const char* out_dir) {
  HESS_REQUIRE(config);
  return guarded([&] {
    hess::run(resolve(config, out_dir));
    return HESS_OK;
  });
}

hess_status hess_sweep(const hess_config* config, const char* out_dir) {
  HESS_REQUIRE(config);
  return guarded([&] {
    hess::sweep(resolve(config, out_dir));
    return HESS_OK;
  });
}

hess_status hess_report_render(const char* json_path, char** out_csv) {
  HESS_REQUIRE(json_path && out_csv);
  return guarded([&] {
    *out_csv = dup(hess::render_csv(hess::read_text_file(json_path)));
    return HESS_OK;
  });
}

hess_status hess_calendar_fade(double t_days, double soc_mean, double* out) {
  HESS_REQUIRE(out);
  return guarded([&] {
    *out = hess::lib_calendar_fade(hess::AgingParams{}, t_days, soc_mean);
    return HESS_OK;
  });
}

hess_status hess_npv(const double* flows, size_t count, double discount, double* out) {
  HESS_REQUIRE(out && (flows || count == 0));
  return guarded([&] {
    *out = hess::npv({flows, count}, discount);
    return HESS_OK;
  });
}

hess_status hess_irr(const double* flows, size_t count, double* out) {
  HESS_REQUIRE(out && (flows || count == 0));
  return guarded([&] {
    *out = hess::irr({flows, count});
    return HESS_OK;
  });
}

hess_status hess_spb(const double* flows, size_t count, double* out, int* defined) {
  HESS_REQUIRE(out && defined && (flows || count == 0));
  return guarded([&] {
    const auto v = hess::spb({flows, count});
    *out = v.value_or(0.0);
    *defined = v.has_value();
    return HESS_OK;
  });
}

hess_status hess_total_investment(const char* system, double* out) {
  HESS_REQUIRE(system && out);
  return guarded([&] {
    const std::string s = system;
    hess::SystemConfig c;
    if (s == "hess") c = hess::SystemConfig::kHess;
    else if (s == "vrfb_only") c = hess::SystemConfig::kVrfbOnly;
    else if (s == "lib_only") c = hess::SystemConfig::kLibOnly;
    else return fail(HESS_E_INVALID_ARGUMENT, "unknown system '" + s + "'");
    *out = hess::total_investment(hess::CostTable{}, c);
    return HESS_OK;
  });
}

}  // extern "C"
