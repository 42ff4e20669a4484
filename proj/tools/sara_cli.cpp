// Command-line front end: experiment sweeps, the radio imaging demo, image
// scoring and Fourier sampling masks.
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sara/config.hpp"
#include "sara/errors.hpp"
#include "sara/harness.hpp"
#include "sara/image_io.hpp"
#include "sara/measurement.hpp"

namespace {

// CLI flags that mirror config keys; values given on the command line win.
struct Overrides {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    options[key] = app.add_option(flag, values[key], help);
  }

  sara::KeyValueConfig apply(const std::string& config_path) const {
    auto cfg = config_path.empty() ? sara::KeyValueConfig{} : sara::KeyValueConfig::load(config_path);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) cfg.set(key, values.at(key));
    return cfg;
  }
};

void add_common(CLI::App& app, Overrides& o) {
  o.add(app, "--image", "image", "ground-truth PGM image");
  o.add(app, "--isnr", "isnr", "input SNR in dB (inf for noiseless)");
  o.add(app, "--algos", "algos", "comma-separated list of BP,BPDb8,RW-BPDb8,BPSA,SARA");
  o.add(app, "--seed", "seed", "master seed");
  o.add(app, "--out", "out", "output directory");
  o.add(app, "--dict", "dict", "frames of the SARA dictionary, e.g. dirac,db1,...,db8");
  o.add(app, "--levels", "levels", "wavelet decomposition depth");
  o.add(app, "--nmax", "nmax", "maximum number of weighted solves");
  o.add(app, "--max-iters", "max_iters", "inner solver iteration cap");
  o.add(app, "--step-ratio", "step_ratio", "primal step scale relative to the dual step");
  o.add(app, "--timing", "timing", "record wall times (off gives byte-stable CSVs)");
  o.add(app, "--images", "images", "write reconstruction and error images");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Sparsity averaging reweighted analysis: compressive imaging reconstruction"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  std::string config_path;
  Overrides run_opts;
  auto* run = app.add_subcommand("run", "undersampling sweep over (ratio, trial, algorithm) cells");
  run->add_option("--config", config_path, "key = value configuration file");
  add_common(*run, run_opts);
  run_opts.add(*run, "--ratios", "ratios", "comma-separated undersampling ratios M/N");
  run_opts.add(*run, "--trials", "trials", "trials per ratio");
  run_opts.add(*run, "--operator", "operator", "spread or fourier");
  run_opts.add(*run, "--threads", "threads", "worker threads (0 = all cores)");

  Overrides radio_opts;
  auto* radio = app.add_subcommand("radio", "radio imaging demo on a Fourier sampling mask");
  radio->add_option("--config", config_path, "key = value configuration file");
  add_common(*radio, radio_opts);
  radio_opts.add(*radio, "--target-m", "target_m", "number of visibilities (default scales 9413 at 256x256)");
  radio_opts.add(*radio, "--mask", "mask", "replay an archived mask file");
  radio_opts.add(*radio, "--decades", "decades", "dynamic range of log renderings");

  std::string ref_path;
  std::string est_path;
  auto* snr = app.add_subcommand("snr", "reconstruction SNR of an estimate against a reference");
  snr->add_option("reference", ref_path, "reference PGM")->required();
  snr->add_option("estimate", est_path, "estimate PGM")->required();

  auto* mask = app.add_subcommand("mask", "Fourier sampling patterns");
  mask->require_subcommand(1);
  int side = 64;
  long long target_m = 0;
  std::uint64_t mask_seed = 1;
  int ellipses = 8;
  int points = 0;
  std::string mask_out;
  auto* gen = mask->add_subcommand("gen", "generate an arcs-of-ellipses mask");
  gen->add_option("--side", side, "image side");
  gen->add_option("--m", target_m, "number of distinct cells (default scales 9413 at 256x256)");
  gen->add_option("--seed", mask_seed, "generator seed");
  gen->add_option("--ellipses", ellipses, "ellipses per generation round");
  gen->add_option("--points", points, "samples per arc (0 = 4 * side)");
  gen->add_option("--out", mask_out, "mask text file")->required();

  std::string mask_in;
  std::string render_out;
  auto* show = mask->add_subcommand("show", "summarize a mask and optionally render it");
  show->add_option("mask", mask_in, "mask text file")->required();
  show->add_option("--side", side, "image side");
  show->add_option("--out", render_out, "PGM rendering, zero frequency centered");

  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::debug);

  if (*run) {
    const auto spec = sara::experiment_spec_from_config(run_opts.apply(config_path));
    const auto rows = sara::run_experiment(spec);
    sara::write_results_csv(std::cout, rows);
  } else if (*radio) {
    const auto spec = sara::radio_spec_from_config(radio_opts.apply(config_path));
    const auto result = sara::run_radio_demo(spec);
    sara::write_results_csv(std::cout, result.rows);
  } else if (*snr) {
    const auto ref = sara::read_pgm(ref_path);
    const auto est = sara::read_pgm(est_path);
    fmt::print("{:.4f}\n", sara::snr_db(ref, est));
  } else if (*gen) {
    sara::FourierMaskConfig cfg;
    cfg.seed = mask_seed;
    cfg.image_side = side;
    cfg.n_ellipses = ellipses;
    cfg.points_per_arc = points;
    cfg.target_m = target_m > 0 ? target_m : sara::proportional_radio_m(side);
    const auto freqs = sara::generate_ellipse_mask(cfg);
    sara::write_mask(mask_out, sara::to_cells(freqs, {side, side}));
    fmt::print("wrote {} cells ({:.4f} of {}x{}) to {}\n", freqs.size(),
               static_cast<double>(freqs.size()) / (side * side), side, side, mask_out);
  } else if (*show) {
    const auto cells = sara::read_mask(mask_in);
    const sara::Shape shape{side, side};
    const auto freqs = sara::to_frequencies(cells, shape);
    sara::Image img(shape);
    for (const auto& c : cells) img((c.row + side / 2) % side, (c.col + side / 2) % side) = 1.0;
    fmt::print("{} cells, {:.4f} of {}x{}\n", freqs.size(), static_cast<double>(freqs.size()) / (side * side),
               side, side);
    if (!render_out.empty()) sara::write_pgm(render_out, img, 0.0, 1.0, 255);
    if (side <= 64)
      for (int r = 0; r < side; ++r) {
        std::string line;
        for (int c = 0; c < side; ++c) line += img(r, c) > 0.0 ? '#' : '.';
        fmt::print("{}\n", line);
      }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const sara::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
