// fqnv_cli.cpp -- command-line front end.
//
// Subcommands: vro (averaged vacuum Rabi trace), sweep-strain, sweep-field,
// spectrum (resolvent response of one realization), selftest.
// Exit codes: 0 success, 2 configuration error, 3 numerical/analysis error,
// 4 file I/O error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fqnv/runner.hpp"

namespace {

fqnv::RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw fqnv::ConfigError(fqnv::ConfigError::Kind::Io, "cannot read config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return fqnv::parse_config(ss.str());
}

void ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw fqnv::ConfigError(fqnv::ConfigError::Kind::Io,
                            "cannot create output directory " + dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux-qubit / NV-ensemble vacuum Rabi simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 1;
  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    if (needs_config)
      cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->add_option("--out", out_dir, "output directory (created if absent)");
    cmd->add_option("--threads", threads, "worker threads for realization fan-out");
  };

  auto* vro = app.add_subcommand("vro", "averaged vacuum Rabi oscillation trace");
  add_common(vro);

  std::vector<double> strains{4.4, 6.0, 7.6};
  auto* sweep_strain =
      app.add_subcommand("sweep-strain", "re-run the trace for several strain widths");
  add_common(sweep_strain);
  sweep_strain->add_option("--strains", strains, "strain FWHM values (MHz)")
      ->delimiter(',');

  std::vector<double> fields{0.0, 2.6};
  auto* sweep_field =
      app.add_subcommand("sweep-field", "re-run the trace for several field magnitudes");
  add_common(sweep_field);
  sweep_field->add_option("--fields", fields, "field magnitudes (mT)")->delimiter(',');

  double nu_min = -40.0, nu_max = 40.0;
  std::size_t points = 1601;
  auto* spectrum = app.add_subcommand("spectrum", "resolvent response of one realization");
  add_common(spectrum);
  spectrum->add_option("--nu-min", nu_min, "probe grid start (MHz)");
  spectrum->add_option("--nu-max", nu_max, "probe grid end (MHz)");
  spectrum->add_option("--points", points, "probe grid size");

  auto* selftest =
      app.add_subcommand("selftest", "oracle-equivalence and norm-conservation checks");
  add_common(selftest, /*needs_config=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) return fqnv::run_selftest(std::cout) ? 0 : 3;

    const fqnv::RunConfig cfg = load_config(config_path);
    ensure_out_dir(out_dir);

    if (vro->parsed()) {
      fqnv::run_vro(cfg, out_dir, threads);
    } else if (sweep_strain->parsed()) {
      const auto result = fqnv::run_strain_sweep(cfg, strains, out_dir, threads);
      std::cout << "trace_spread = " << result.spread << "\n";
    } else if (sweep_field->parsed()) {
      const auto result = fqnv::run_field_sweep(cfg, fields, out_dir, threads);
      std::cout << "trace_spread = " << result.spread << "\n";
    } else if (spectrum->parsed()) {
      fqnv::run_spectrum(cfg, nu_min, nu_max, points, out_dir);
    }
  } catch (const fqnv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return e.kind == fqnv::ConfigError::Kind::Io ? 4 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
