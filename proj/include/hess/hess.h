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


#ifndef HESS_HESS_H_
#define HESS_HESS_H_

#include <stddef.h>

#if defined(HESS_BUILDING_LIBRARY)
#define HESS_API __attribute__((visibility("default")))
#else
#define HESS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hess_status {
  HESS_OK = 0,
  HESS_E_PARSE = 1,
  HESS_E_GAP = 2,
  HESS_E_LENGTH = 3,
  HESS_E_RANGE = 4,
  HESS_E_DOMAIN = 5,
  HESS_E_NUMERIC = 6,
  HESS_E_CONFIG = 7,
  HESS_E_NO_SOLUTION = 8,
  HESS_E_UNDEFINED = 9,
  HESS_E_IO = 10,
  HESS_E_INVALID_ARGUMENT = 11,
  HESS_E_INTERNAL = 12
} hess_status;

/* Short lowercase name of a status ("ok", "config", "io", ...). */
HESS_API const char* hess_status_name(hess_status status);

/* Message of the last failed call on this thread; "" if none. Valid until the
 * next failing call on the same thread. */
HESS_API const char* hess_last_error(void);

HESS_API const char* hess_version(void);

/* Strings returned through char** out-parameters are owned by the caller. */
HESS_API void hess_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

typedef struct hess_config hess_config;

/* Empty document: every value at its default. */
HESS_API hess_status hess_config_create(hess_config** out);

/* JSON text; relative profile paths resolve against base_dir (may be NULL).
 * Only JSON syntax is checked here, see hess_config_validate. */
HESS_API hess_status hess_config_parse(const char* json_text, const char* base_dir, hess_config** out);

/* Reads a JSON file; its directory becomes the base directory. */
HESS_API hess_status hess_config_load(const char* path, hess_config** out);

/* Sets a JSON value at a JSON pointer, e.g. ("/years", "1"). */
HESS_API hess_status hess_config_set(hess_config* config, const char* json_pointer, const char* json_value);

/* The document as given (not merged with defaults). */
HESS_API hess_status hess_config_to_json(const hess_config* config, char** out);

/* The full default document. */
HESS_API hess_status hess_config_defaults_json(char** out);

HESS_API void hess_config_free(hess_config* config);

typedef struct hess_diagnostics hess_diagnostics;

/* Dry run; never simulates. An empty list means the config is usable. */
HESS_API hess_status hess_config_validate(const hess_config* config, hess_diagnostics** out);
HESS_API size_t hess_diagnostics_count(const hess_diagnostics* diags);
/* JSON pointer of the offending field, "" for the whole document. */
HESS_API const char* hess_diagnostics_path(const hess_diagnostics* diags, size_t index);
HESS_API const char* hess_diagnostics_message(const hess_diagnostics* diags, size_t index);
HESS_API void hess_diagnostics_free(hess_diagnostics* diags);

/* ---- simulation ------------------------------------------------------- */

typedef struct hess_result hess_result;

typedef struct hess_ledger {
  int year;
  double pv_wh;
  double load_wh; /* building load, standby excluded */
  double standby_wh;
  double pv_to_load_wh;
  double import_wh;
  double export_wh;
  double vrfb_charge_wh;
  double vrfb_discharge_wh;
  double lib_charge_wh;
  double lib_discharge_wh;
  double loss_wh;
} hess_ledger;

typedef struct hess_kpis {
  double scr, ssr, grf, fgu, tgu;
  double obu_vrfb, obu_lib;
  double fbu_vrfb, fbu_lib;
  double tbu_vrfb, tbu_lib;
  double eg_kwh;
} hess_kpis;

/* Optional metrics carry a *_defined flag; the value is 0 when undefined. */
typedef struct hess_economics {
  double total_investment;
  double npv;
  double lcoe;
  int lcoe_defined;
  double irr;
  int irr_defined;
  double spb;
  int spb_defined;
} hess_economics;

/* Simulates one scenario ("s1", "s2", "s3", "s4", "s5_single_vrfb",
 * "s5_single_lib") over the configured horizon. Writes nothing to disk. */
HESS_API hess_status hess_simulate(const hess_config* config, const char* scenario, hess_result** out);
HESS_API size_t hess_result_years(const hess_result* result);
/* HESS_E_RANGE when year_index >= hess_result_years(). */
HESS_API hess_status hess_result_ledger(const hess_result* result, size_t year_index, hess_ledger* out);
/* Horizon mean. */
HESS_API hess_status hess_result_kpis(const hess_result* result, hess_kpis* out);
HESS_API hess_status hess_result_economics(const hess_result* result, hess_economics* out);
HESS_API void hess_result_free(hess_result* result);

/* ---- orchestration ---------------------------------------------------- */

/* Runs every configured scenario and writes the reports. out_dir overrides
 * the configured output directory when not NULL. */
HESS_API hess_status hess_run(const hess_config* config, const char* out_dir);

/* Runs the configured sweep use case. out_dir as for hess_run. */
HESS_API hess_status hess_sweep(const hess_config* config, const char* out_dir);

/* Re-renders a JSON report file (kpi, economics, ranking) as CSV text. */
HESS_API hess_status hess_report_render(const char* json_path, char** out_csv);

/* ---- calculators ------------------------------------------------------ */

/* Closed-form calendar capacity fraction with default aging parameters. */
HESS_API hess_status hess_calendar_fade(double t_days, double soc_mean, double* out);
HESS_API hess_status hess_npv(const double* flows, size_t count, double discount, double* out);
HESS_API hess_status hess_irr(const double* flows, size_t count, double* out);
/* *defined is 0 when the cumulative flow never turns non-negative. */
HESS_API hess_status hess_spb(const double* flows, size_t count, double* out, int* defined);
/* system: "hess", "vrfb_only" or "lib_only"; default cost table. */
HESS_API hess_status hess_total_investment(const char* system, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HESS_HESS_H_ */
