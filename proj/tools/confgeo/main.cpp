#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;
using namespace confgeo::cli;

namespace {

enum Exit { pass = 0, tolerance_failure = 1, input_error = 2 };

struct Overrides {
  std::string config;
  std::string out;
  std::string format;
  std::int64_t seed = -1;
  std::vector<std::string> set;
  bool print = false;
};

ScenarioConfig effective_config(const Overrides& o, const std::string& scenario) {
  ScenarioConfig c = load_config(o.config);
  if (!scenario.empty()) c.scenario = scenario;
  for (const auto& s : o.set) apply_override(c, s);
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.out.empty()) c.output_path = o.out;
  if (!o.format.empty()) c.format = o.format;
  return c;
}

void write_records(std::ostream& os, const ScenarioConfig& c, const RunResult& r) {
  if (c.format == "json") write_json(os, r);
  else write_csv(os, r);
}

int run_one(const ScenarioConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const RunResult r = run(c);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.output_path.empty() || c.output_path == "-") {
    write_records(std::cout, c, r);
    if (c.format == "csv") write_summary(std::cerr, r);
  } else {
    std::ofstream out(c.output_path, std::ios::binary);
    if (!out) throw confgeo::InputError("cannot write " + c.output_path);
    write_records(out, c, r);
    write_summary(std::cout, r);
  }
  std::cerr << "wall_time_s: " << wall << '\n';
  return r.passed() ? pass : tolerance_failure;
}

struct BatchEntry {
  std::string name;
  int code = pass;
  std::string note;
};

BatchEntry run_batch_entry(const fs::path& file, const fs::path& out_dir, const std::string& format) {
  BatchEntry e{file.stem().string(), pass, {}};
  try {
    ScenarioConfig c = load_config(file.string());
    if (!format.empty()) c.format = format;
    c.output_path = (out_dir / (e.name + "." + c.format)).string();
    const RunResult r = run(c);
    std::ofstream out(c.output_path, std::ios::binary);
    write_records(out, c, r);
    std::ofstream summary(out_dir / (e.name + ".summary.txt"), std::ios::binary);
    write_summary(summary, r);
    e.code = r.passed() ? pass : tolerance_failure;
    for (const auto& ch : r.checks)
      if (!ch.passed) e.note += (e.note.empty() ? "" : ", ") + ch.name;
  } catch (const confgeo::InputError& ex) {
    e.code = input_error;
    e.note = ex.what();
  } catch (const confgeo::Error& ex) {
    e.code = tolerance_failure;
    e.note = ex.what();
  }
  return e;
}

int run_batch(const std::string& dir, const std::string& out_dir, const std::string& format, int jobs) {
  if (!fs::is_directory(dir)) throw confgeo::InputError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& p : fs::directory_iterator(dir))
    if (p.is_regular_file() && p.path().extension() == ".ini") files.push_back(p.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw confgeo::InputError("no .ini files in " + dir);
  fs::create_directories(out_dir);

  std::vector<BatchEntry> results(files.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t begin = 0; begin < files.size(); begin += width) {
    std::vector<std::future<BatchEntry>> running;
    const std::size_t end = std::min(files.size(), begin + width);
    for (std::size_t i = begin; i < end; ++i)
      running.push_back(std::async(std::launch::async, run_batch_entry, files[i], fs::path(out_dir), format));
    for (std::size_t i = begin; i < end; ++i) results[i] = running[i - begin].get();
  }
  int code = pass;
  for (const auto& e : results) {
    const char* verdict = e.code == pass ? "PASS" : e.code == tolerance_failure ? "FAIL" : "ERROR";
    std::cout << verdict << ' ' << e.name;
    if (!e.note.empty()) std::cout << " (" << e.note << ')';
    std::cout << '\n';
    code = std::max(code, e.code);
  }
  return code;
}

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "configuration file")->required();
  cmd->add_option("--out", o.out, "output file; stdout when omitted");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "override [scenario] seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--set", o.set, "override section.key=value (repeatable)");
  cmd->add_flag("--print-config", o.print, "print the effective configuration and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal geometry scenario runner"};
  app.require_subcommand(1);

  Overrides o;
  std::string chosen;
  for (const auto& name : scenario_names()) {
    auto* cmd = app.add_subcommand(name, "run the " + name + " scenario");
    add_run_options(cmd, o);
    cmd->callback([&chosen, name] { chosen = name; });
  }
  auto* run_cmd = app.add_subcommand("run", "run the scenario named in the configuration");
  add_run_options(run_cmd, o);

  std::string filter;
  auto* list_cmd = app.add_subcommand("list-metrics", "list registry metrics and conformal factors");
  list_cmd->add_option("filter", filter, "substring filter on names");

  std::string validate_path;
  std::vector<std::string> validate_set;
  auto* validate_cmd = app.add_subcommand("validate", "check a configuration without running it");
  validate_cmd->add_option("--config", validate_path, "configuration file")->required();
  validate_cmd->add_option("--set", validate_set, "override section.key=value (repeatable)");

  std::string batch_dir, batch_out = "confgeo-results", batch_format;
  int jobs = 1;
  auto* batch_cmd = app.add_subcommand("batch", "run every .ini file of a directory");
  batch_cmd->add_option("--dir", batch_dir, "directory of configurations")->required();
  batch_cmd->add_option("--out-dir", batch_out, "directory for results");
  batch_cmd->add_option("--format", batch_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  batch_cmd->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);

  bool docs = false;
  auto* defaults_cmd = app.add_subcommand("defaults", "print every key with its default value");
  defaults_cmd->add_flag("--docs", docs, "include a comment line per key");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pass : input_error;
  }

  try {
    if (list_cmd->parsed()) {
      std::cout << list_metrics(filter);
      return pass;
    }
    if (defaults_cmd->parsed()) {
      std::cout << print_config(ScenarioConfig{}, docs);
      return pass;
    }
    if (validate_cmd->parsed()) {
      ScenarioConfig c = load_config(validate_path);
      for (const auto& s : validate_set) apply_override(c, s);
      for (const auto& n : validate(c)) std::cout << n << '\n';
      std::cout << "valid\n";
      return pass;
    }
    if (batch_cmd->parsed()) return run_batch(batch_dir, batch_out, batch_format, jobs);

    const ScenarioConfig c = effective_config(o, chosen);
    if (o.print) {
      std::cout << print_config(c);
      return pass;
    }
    return run_one(c);
  } catch (const confgeo::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  } catch (const confgeo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tolerance_failure;
  }
}
