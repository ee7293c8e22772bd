#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sfkit/parallel.hpp"
#include "sfkit/scenario.hpp"
#include "sfkit/toeplitz.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw sfkit::DomainError("cannot write " + path.string());
  out << text;
}

int fail(const sfkit::Error& e) {
  std::cerr << sfkit::error_json(e).dump() << "\n";
  return sfkit::exit_code(e.kind());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sfkit: spectral flow toolkit for finite semifinite models"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = 1;
  double tol = 0.0;
  app.add_option("--seed", seed, "override the scenario RNG seed");
  app.add_option("--out", out_dir, "directory for result.json and CSV tables");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "override quadrature / stability tolerance")->check(CLI::PositiveNumber);

  std::string scenario;
  auto* run = app.add_subcommand("run", "run a scenario file or a bundled scenario by name");
  run->add_option("scenario", scenario, "path or bundled name")->required();
  run->fallthrough();

  std::string report;
  auto* rep = app.add_subcommand("report", "print a report");
  rep->add_option("name", report, "report name")->required()->check(CLI::IsMember({"conventions"}));
  rep->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  sfkit::set_thread_count(threads);
  try {
    if (*rep) {
      std::cout << sfkit::conventions_csv(sfkit::conventions_report());
      return 0;
    }
    sfkit::RunOptions opts;
    if (app.count("--seed")) opts.seed = seed;
    if (app.count("--tol")) opts.tol = tol;
    const auto output = sfkit::run_scenario(sfkit::load_scenario(scenario), opts);
    const std::string text = output.result.dump(2);
    std::cout << text << "\n";
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / "result.json", text + "\n");
      for (const auto& [name, csv] : output.tables) write_file(std::filesystem::path(out_dir) / name, csv);
    }
    return 0;
  } catch (const sfkit::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(sfkit::DomainError(e.what()));
  }
}
