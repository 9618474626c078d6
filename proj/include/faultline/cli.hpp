#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faultline/errors.hpp"
#include "faultline/explorer.hpp"
#include "faultline/fixtures/scenarios.hpp"
#include "faultline/report_html.hpp"
#include "faultline/report_json.hpp"
#include "faultline/value.hpp"

namespace faultline::cli {

namespace detail {

/// Settings a FAULTLINE_CONFIG file may pre-set; flags override field by
/// field. Every key is optional.
struct FileConfig {
  std::optional<std::string> scenario;
  std::optional<std::string> test;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::size_t> max_combination_size;
  std::optional<std::size_t> byte_flip_cap;
  std::optional<std::size_t> max_iterations;
  std::optional<bool> enable_cache_miss;
  std::vector<std::string> catalogs;
};

inline FileConfig load_file_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Value doc;
  try {
    doc = Value::parse(buffer.str());
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path + ": config must be a JSON object");

  FileConfig config;
  const auto read_string = [&](const char* key, std::optional<std::string>& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_string())
      throw ConfigError(path + ": '" + key + "' must be a string");
    out = doc[key].get<std::string>();
  };
  const auto read_count = [&](const char* key, std::optional<std::size_t>& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_unsigned())
      throw ConfigError(path + ": '" + key + "' must be a non-negative integer");
    out = doc[key].get<std::size_t>();
  };
  read_string("scenario", config.scenario);
  read_string("test", config.test);
  read_string("out", config.out);
  read_string("format", config.format);
  read_count("max_combination_size", config.max_combination_size);
  read_count("byte_flip_cap", config.byte_flip_cap);
  read_count("max_iterations", config.max_iterations);
  if (doc.contains("enable_cache_miss")) {
    if (!doc["enable_cache_miss"].is_boolean())
      throw ConfigError(path + ": 'enable_cache_miss' must be a boolean");
    config.enable_cache_miss = doc["enable_cache_miss"].get<bool>();
  }
  if (doc.contains("catalogs")) {
    if (!doc["catalogs"].is_array())
      throw ConfigError(path + ": 'catalogs' must be an array of paths");
    for (const auto& entry : doc["catalogs"]) {
      if (!entry.is_string())
        throw ConfigError(path + ": 'catalogs' must be an array of paths");
      config.catalogs.push_back(entry.get<std::string>());
    }
  }
  return config;
}

}  // namespace detail

/// Runs one bundled scenario under exploration and writes its reports.
/// Exit codes: 0 when every iteration passed, 1 when any iteration failed or
/// errored (including a failing baseline), 2 on configuration errors.
inline int cli_main(int argc, const char* const* argv) {
  detail::FileConfig file_config;
  if (const char* config_path = std::getenv("FAULTLINE_CONFIG")) {
    try {
      file_config = detail::load_file_config(config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{"faultline: fault-space exploration over functional tests"};
  std::string scenario_name = file_config.scenario.value_or("");
  std::string test_id = file_config.test.value_or("");
  std::string out_dir = file_config.out.value_or(".");
  std::string format = file_config.format.value_or("both");
  std::size_t max_combination_size = file_config.max_combination_size.value_or(2);
  std::size_t byte_flip_cap = file_config.byte_flip_cap.value_or(64);
  std::size_t max_iterations = file_config.max_iterations.value_or(10000);
  std::vector<std::string> catalog_paths = file_config.catalogs;

  app.add_option("--scenario", scenario_name, "Bundled scenario name to run");
  app.add_option("--test", test_id, "Bundled test id to run");
  app.add_option("--out", out_dir, "Directory the reports are written to");
  app.add_option("--max-combination-size", max_combination_size,
                 "Largest number of simultaneous faults per iteration");
  app.add_option("--byte-flip-cap", byte_flip_cap,
                 "Upper bound on bit-flip steps per byte-array value");
  app.add_flag("--enable-cache-miss",
               "Also inject cache-miss substitutions (null, \"\", [])");
  app.add_option("--catalog", catalog_paths,
                 "Additional fault catalog file (repeatable)");
  app.add_option("--max-iterations", max_iterations,
                 "Iteration budget including the baseline");
  app.add_option("--format", format, "Report format: json|html|both")
      ->check(CLI::IsMember({"json", "html", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  if (!scenario_name.empty() && !test_id.empty() &&
      app.count("--scenario") > 0 && app.count("--test") > 0) {
    std::cerr << "error: --scenario and --test are mutually exclusive\n";
    return 2;
  }

  const fixtures::Scenario* scenario = nullptr;
  if (app.count("--test") > 0 || (scenario_name.empty() && !test_id.empty())) {
    scenario = fixtures::find_scenario_by_test_id(test_id);
    if (!scenario) {
      std::cerr << "error: unknown test id '" << test_id << "'\n";
      return 2;
    }
  } else if (!scenario_name.empty()) {
    scenario = fixtures::find_scenario(scenario_name);
    if (!scenario) {
      std::cerr << "error: unknown scenario '" << scenario_name << "'\n";
      return 2;
    }
  } else {
    std::cerr << "error: one of --scenario or --test is required\n"
              << app.help();
    return 2;
  }

  ExplorationConfig config;
  config.max_combination_size = max_combination_size;
  config.byte_flip_cap = byte_flip_cap;
  config.max_iterations = max_iterations;
  config.catalog_paths = catalog_paths;
  if (app.count("--enable-cache-miss") > 0)
    config.enable_cache_miss = true;
  else if (file_config.enable_cache_miss)
    config.enable_cache_miss = *file_config.enable_cache_miss;
  else
    config.enable_cache_miss = scenario->enable_cache_miss_default;

  ExplorationResult result;
  try {
    config.catalogs = scenario->default_catalogs();
    const fixtures::ScenarioInstance instance = scenario->instantiate();
    result = run_exploration(scenario->test_id, instance.body, config);
  } catch (const BaselineFailedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path out(out_dir);
    if (format == "json" || format == "both")
      write_json_report(result, (out / "report.json").string());
    if (format == "html" || format == "both")
      write_html_report(result, (out / "report.html").string());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::size_t failed = result.count(TestStatus::Failed);
  const std::size_t errored = result.count(TestStatus::Errored);
  std::cout << "explored " << result.iterations.size() << " iterations: "
            << result.count(TestStatus::Passed) << " passed, " << failed
            << " failed, " << errored << " errored"
            << (result.truncated ? " (truncated)" : "") << "\n";
  return failed == 0 && errored == 0 ? 0 : 1;
}

}  // namespace faultline::cli
