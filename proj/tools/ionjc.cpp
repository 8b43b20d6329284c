// ionjc: N-ion Jaynes-Cummings experiments from a JSON config.
//
//   ionjc modes|resonance|sweep-rabi|evolve --config cfg.json [--out file] [--format csv|json] [--threads n]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-validation failure.
// IONJC_THREADS sets the sweep thread count when --threads is absent.

#include "ionjc/errors.hpp"
#include "ionjc/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int default_threads() {
  if (const char* env = std::getenv("IONJC_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    std::cerr << "ionjc: ignoring invalid IONJC_THREADS=" << env << '\n';
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-ion Jaynes-Cummings simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  int threads = 0;

  for (const char* name : {"modes", "resonance", "sweep-rabi", "evolve"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "output file (default: config output.path, else stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ionjc::ExperimentConfig config = ionjc::load_config(config_path, command);
    if (!format.empty()) config.format = format == "json" ? ionjc::OutputFormat::json : ionjc::OutputFormat::csv;
    if (!out_path.empty()) config.output_path = out_path;
    if (threads <= 0) threads = default_threads();

    const ionjc::Table table = ionjc::run_experiment(config, threads);
    const std::string stamp = ionjc::utc_timestamp();
    if (config.output_path && *config.output_path != "-") {
      std::ofstream out(*config.output_path, std::ios::binary);
      if (!out) throw ionjc::ConfigError("cannot write " + *config.output_path);
      ionjc::write_table(out, table, config.format, stamp);
    } else {
      ionjc::write_table(std::cout, table, config.format, stamp);
    }
  } catch (const ionjc::ConfigError& e) {
    std::cerr << "ionjc: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ionjc::NumericalError& e) {
    std::cerr << "ionjc: numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ionjc: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "ionjc: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ionjc: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
