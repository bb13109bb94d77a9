// octnag: run experiments, list presets, re-render plots.
//
//   octnag run --preset distributed-ring6 --output-dir out
//   octnag run --config my.json --override schedule.m=-5 --override solver.t_end=20
//   octnag presets
//   octnag plot --input-dir out/distributed-ring6

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "octnag/experiment/config.hpp"
#include "octnag/experiment/plots.hpp"
#include "octnag/experiment/presets.hpp"
#include "octnag/experiment/runner.hpp"

namespace fs = std::filesystem;
using namespace octnag::experiment;

namespace {

struct Job {
  std::string label;
  json doc;
};

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("OCTNAG_OUTPUT_DIR"); env && *env) return env;
  return "runs";
}

fs::path run_directory(const json& doc, const std::string& flag) {
  const std::string name = doc.is_object() ? doc.value("name", std::string("unnamed")) : "unnamed";
  if (flag.empty() && doc.is_object() && doc.contains("output_dir") && doc.at("output_dir").is_string() &&
      !doc.at("output_dir").get<std::string>().empty()) {
    return doc.at("output_dir").get<std::string>();
  }
  return output_root(flag) / name;
}

int execute(const Job& job, const std::string& output_flag) {
  const fs::path dir = run_directory(job.doc, output_flag);
  const RunOutcome outcome = run_document(job.doc, dir);
  const std::string status = outcome.summary.value("status", std::string("error"));
  std::cout << job.label << ": " << status << " -> " << dir.string() << '\n';
  if (outcome.summary.contains("error")) {
    std::cerr << job.label << ": " << outcome.summary["error"].value("message", std::string()) << '\n';
  }
  if (outcome.summary.contains("checks")) {
    for (const auto& c : outcome.summary["checks"]) {
      if (!c.value("passed", false)) std::cerr << job.label << ": check failed: " << c.dump() << '\n';
    }
  }
  return outcome.exit_code;
}

// Runs jobs with at most `jobs` concurrent child processes; returns the worst exit code.
int run_all(const std::vector<Job>& work, int jobs, const std::string& output_flag) {
  int worst = 0;
  if (jobs <= 1 || work.size() <= 1) {
    for (const auto& job : work) worst = std::max(worst, execute(job, output_flag));
    return worst;
  }
  std::size_t next = 0;
  int running = 0;
  while (next < work.size() || running > 0) {
    while (running < jobs && next < work.size()) {
      std::cout.flush();
      const pid_t pid = fork();
      if (pid < 0) {
        worst = std::max(worst, execute(work[next++], output_flag));
        continue;
      }
      if (pid == 0) {
        const int code = execute(work[next], output_flag);
        std::cout.flush();
        std::_Exit(code);
      }
      ++next;
      ++running;
    }
    int status = 0;
    if (wait(&status) > 0) {
      --running;
      worst = std::max(worst, WIFEXITED(status) ? WEXITSTATUS(status) : int(kExitError));
    }
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online accelerated continuous-time optimization experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  auto* run = app.add_subcommand("run", "Run experiments from config files or presets");
  std::vector<std::string> configs, presets, overrides;
  std::string output_dir;
  int jobs = 1;
  run->add_option("--config", configs, "Experiment config JSON (repeatable)")->check(CLI::ExistingFile);
  run->add_option("--preset", presets, "Preset name (repeatable)");
  run->add_option("--output-dir", output_dir, "Output root; each run writes to <root>/<name>");
  run->add_option("--override", overrides, "key.path=value applied to every config (repeatable)");
  run->add_option("--jobs", jobs, "Parallel processes for independent runs")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("presets", "List the shipped presets");
  bool as_json = false;
  list->add_flag("--json", as_json, "Print the catalog as JSON");

  auto* plot = app.add_subcommand("plot", "Re-render SVG plots from a run directory");
  std::string input_dir;
  std::vector<std::string> plot_names;
  plot->add_option("--input-dir", input_dir, "Run directory with CSV artifacts")->required();
  plot->add_option("--plots", plot_names, "Plots to render (state, gap, regret)")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (configs.empty() && presets.empty()) throw CLI::RequiredError("--config or --preset");
      std::vector<Job> work;
      for (const auto& path : configs) work.push_back({path, load_json_file(path)});
      for (const auto& name : presets) work.push_back({name, load_preset(name)});
      for (auto& job : work) {
        for (const auto& o : overrides) apply_override(job.doc, o);
      }
      return run_all(work, jobs, output_dir);
    }
    if (*list) {
      const auto catalog = list_presets();
      if (as_json) {
        json out = json::array();
        for (const auto& p : catalog) out.push_back({{"name", p.name}, {"description", p.description}});
        std::cout << out.dump(2) << '\n';
      } else {
        for (const auto& p : catalog) std::cout << p.name << "\t" << p.description << '\n';
      }
      return 0;
    }
    if (*plot) {
      const fs::path dir = input_dir;
      if (!fs::is_directory(dir)) throw octnag::Error(octnag::ErrorKind::IoError, "no such directory " + dir.string());
      if (plot_names.empty()) {
        if (fs::exists(dir / "trajectory.csv")) plot_names.push_back("state");
        if (fs::exists(dir / "gap.csv") || fs::exists(dir / "iterates.csv")) plot_names.push_back("gap");
        if (fs::exists(dir / "regret.csv")) plot_names.push_back("regret");
      }
      for (const auto& f : emit_plots(dir, plot_names, plot_meta_from_summary(dir))) {
        std::cout << (dir / f).string() << '\n';
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
