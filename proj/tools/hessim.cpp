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


// hessim: command-line front end over the hess C API.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hess/hess.h"

namespace {

constexpr int kExitSimulation = 1;
constexpr int kExitConfig = 2;
constexpr const char* kOutDirEnv = "HESSIM_OUT_DIR";

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int report_error(const std::string& kind, const std::string& message) {
  std::fprintf(stderr, "error[%s]: %s\n", kind.c_str(), one_line(message).c_str());
  return kind == "config" || kind == "usage" ? kExitConfig : kExitSimulation;
}

int report_status(hess_status s) { return report_error(hess_status_name(s), hess_last_error()); }

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

struct ConfigHandle {
  hess_config* ptr = nullptr;
  ~ConfigHandle() { hess_config_free(ptr); }
};

struct Common {
  std::string config_path;
  std::string out_dir;
  int years = 0;
  int workers = -1;
};

// Loads the config file (or defaults) and applies the command-line overrides.
// Returns 0 or an exit code.
int load(const Common& opts, ConfigHandle& cfg) {
  const hess_status s =
      opts.config_path.empty() ? hess_config_create(&cfg.ptr) : hess_config_load(opts.config_path.c_str(), &cfg.ptr);
  if (s == HESS_E_IO) return report_error("config", hess_last_error());
  if (s != HESS_OK) return report_status(s);

  std::vector<std::pair<std::string, std::string>> sets;
  std::string out = opts.out_dir;
  if (out.empty()) {
    if (const char* env = std::getenv(kOutDirEnv); env && *env) out = env;
  }
  if (!out.empty()) sets.emplace_back("/output_dir", json_string(out));
  if (opts.years != 0) sets.emplace_back("/years", std::to_string(opts.years));
  if (opts.workers >= 0) sets.emplace_back("/workers", std::to_string(opts.workers));
  for (const auto& [ptr, value] : sets) {
    if (const hess_status st = hess_config_set(cfg.ptr, ptr.c_str(), value.c_str()); st != HESS_OK) {
      return report_status(st);
    }
  }
  return 0;
}

// Prints every diagnostic; returns their count, or -1 if validation failed.
long diagnose(const ConfigHandle& cfg, bool print_all) {
  hess_diagnostics* diags = nullptr;
  if (hess_config_validate(cfg.ptr, &diags) != HESS_OK) return -1;
  const size_t n = hess_diagnostics_count(diags);
  if (print_all) {
    for (size_t i = 0; i < n; ++i) {
      const std::string path = hess_diagnostics_path(diags, i);
      std::printf("%s: %s\n", path.empty() ? "/" : path.c_str(), one_line(hess_diagnostics_message(diags, i)).c_str());
    }
  } else if (n > 0) {
    const std::string path = hess_diagnostics_path(diags, 0);
    std::string msg = (path.empty() ? "" : path + ": ") + hess_diagnostics_message(diags, 0);
    if (n > 1) msg += " (+" + std::to_string(n - 1) + " more, see validate)";
    report_error("config", msg);
  }
  hess_diagnostics_free(diags);
  return static_cast<long>(n);
}

void add_common(CLI::App* cmd, Common& opts, bool with_workers) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration (defaults when omitted)");
  cmd->add_option("--out", opts.out_dir, std::string("Output directory (overrides $") + kOutDirEnv + ")");
  cmd->add_option("--years", opts.years, "Simulated years, 1-15")->check(CLI::Range(1, 15));
  if (with_workers) cmd->add_option("--workers", opts.workers, "Parallel workers, 0 = hardware threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minute-resolution PV + hybrid VRFB/LIB battery simulator"};
  app.set_version_flag("--version", std::string(hess_version()));
  app.require_subcommand(1);

  Common run_opts;
  std::vector<std::string> scenarios;
  bool trace = false;
  auto* run = app.add_subcommand("run", "Simulate scenarios and write reports");
  add_common(run, run_opts, true);
  run->add_option("--scenario", scenarios, "Scenario id(s): s1 s2 s3 s4 s5_single_vrfb s5_single_lib")
      ->delimiter(',');
  run->add_flag("--trace", trace, "Also write per-minute trace CSVs (large)");

  Common sweep_opts;
  std::string use_case;
  bool no_resume = false;
  auto* sweep = app.add_subcommand("sweep", "Run the SOC-range sweep of one use case");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--use-case", use_case, "uc1, uc2, uc3 or all");
  sweep->add_flag("--no-resume", no_resume, "Ignore an existing checkpoint");

  Common validate_opts;
  bool print_defaults = false;
  auto* validate = app.add_subcommand("validate", "Check a configuration without simulating");
  add_common(validate, validate_opts, false);
  validate->add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

  std::string report_in;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Re-render a JSON report as CSV");
  report->add_option("input", report_in, "kpi, economics or ranking JSON")->required();
  report->add_option("--out", report_out, "CSV file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what());
  }

  if (*run || *sweep) {
    const bool is_run = run->parsed();
    const Common& opts = is_run ? run_opts : sweep_opts;
    ConfigHandle cfg;
    if (int rc = load(opts, cfg)) return rc;
    if (is_run && !scenarios.empty()) {
      std::string arr = "[";
      for (std::size_t i = 0; i < scenarios.size(); ++i) arr += (i ? "," : "") + json_string(scenarios[i]);
      hess_config_set(cfg.ptr, "/scenarios", (arr + "]").c_str());
    }
    if (is_run && trace) hess_config_set(cfg.ptr, "/trace", "true");
    if (!is_run && !use_case.empty()) hess_config_set(cfg.ptr, "/sweep/use_case", json_string(use_case).c_str());
    if (!is_run && no_resume) hess_config_set(cfg.ptr, "/sweep/resume", "false");

    const long n = diagnose(cfg, false);
    if (n < 0) return report_status(HESS_E_INTERNAL);
    if (n > 0) return kExitConfig;
    const hess_status s = is_run ? hess_run(cfg.ptr, nullptr) : hess_sweep(cfg.ptr, nullptr);
    if (s != HESS_OK) return report_status(s);
    return 0;
  }

  if (*validate) {
    if (print_defaults) {
      char* text = nullptr;
      if (hess_config_defaults_json(&text) != HESS_OK) return report_status(HESS_E_INTERNAL);
      std::fputs(text, stdout);
      hess_string_free(text);
      return 0;
    }
    ConfigHandle cfg;
    if (int rc = load(validate_opts, cfg)) return rc;
    const long n = diagnose(cfg, true);
    if (n < 0) return report_status(HESS_E_INTERNAL);
    if (n > 0) return report_error("config", std::to_string(n) + " problem(s) found");
    std::puts("ok");
    return 0;
  }

  char* csv = nullptr;
  if (const hess_status s = hess_report_render(report_in.c_str(), &csv); s != HESS_OK) return report_status(s);
  int rc = 0;
  if (report_out.empty()) {
    std::fputs(csv, stdout);
  } else if (std::FILE* f = std::fopen(report_out.c_str(), "wb")) {
    std::fputs(csv, f);
    if (std::fclose(f) != 0) rc = report_error("io", "failed writing " + report_out);
  } else {
    rc = report_error("io", "cannot write " + report_out);
  }
  hess_string_free(csv);
  return rc;
}
