#include "sara/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>

#include "sara/errors.hpp"
#include "sara/image_io.hpp"
#include "sara/random.hpp"
#include "sara/reweighting.hpp"
#include "sara/solver.hpp"

namespace sara {

namespace {

struct AlgorithmSetup {
  std::vector<FrameId> frames;
  bool reweighted = false;
};

AlgorithmSetup setup_for(Algorithm algo, const ReconstructionSettings& s) {
  switch (algo) {
    case Algorithm::bp:
      return {{FrameId::dirac()}, false};
    case Algorithm::bpdb8:
      return {{FrameId::db(Daubechies::db8)}, false};
    case Algorithm::rw_bpdb8:
      return {{FrameId::db(Daubechies::db8)}, true};
    case Algorithm::bpsa:
      return {s.sara_frames, false};
    case Algorithm::sara:
      return {s.sara_frames, true};
  }
  throw ConfigError("unknown algorithm");
}

std::string ratio_tag(double ratio) { return fmt::format("{:.2f}", ratio); }

std::string cell_stem(const std::string& algo, double ratio, int trial) {
  return fmt::format("{}_ratio{}_trial{}", algo, ratio_tag(ratio), trial);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

// Runs fn(i) for i in [0, count) on `threads` workers; fn must not throw.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

struct CellOutput {
  ResultRow row;
  Reconstruction recon;
};

CellOutput score_cell(Algorithm algo, const Image& truth, const ComplexVector& y,
                      const MeasurementOperator& phi, double sigma_n,
                      const ReconstructionSettings& settings, bool timing, double ratio, int trial) {
  CellOutput out;
  out.row.algorithm = to_string(algo);
  out.row.ratio = ratio;
  out.row.trial = trial;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.recon = reconstruct(algo, y, phi, sigma_n, settings);
    out.row.snr_db = snr_db(truth, out.recon.image);
    out.row.solver_iters = out.recon.solver_iters;
    out.row.converged = out.recon.converged;
  } catch (const Error& e) {
    spdlog::error("{} ratio {} trial {} failed: {}", out.row.algorithm, ratio, trial, e.what());
    out.row.snr_db = std::numeric_limits<double>::quiet_NaN();
    out.row.converged = false;
  }
  if (timing)
    out.row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_cell_files(const std::filesystem::path& dir, const CellOutput& cell, const Image& truth) {
  if (cell.recon.image.size() == 0) return;
  const auto stem = cell_stem(cell.row.algorithm, cell.row.ratio, cell.row.trial);
  write_pgm(dir / (stem + "_recon.pgm"), cell.recon.image);
  const Image err = abs_error(truth, cell.recon.image);
  const double peak = err.pixels.maxCoeff();
  write_pgm(dir / (stem + "_error.pgm"), err, 0.0, peak > 0.0 ? peak : 1.0);
  if (!cell.recon.trace.empty()) {
    std::ofstream trace(dir / (stem + "_trace.csv"));
    write_trace_csv(trace, cell.recon.trace);
  }
}

}  // namespace

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::bp:
      return "BP";
    case Algorithm::bpdb8:
      return "BPDb8";
    case Algorithm::rw_bpdb8:
      return "RW-BPDb8";
    case Algorithm::bpsa:
      return "BPSA";
    case Algorithm::sara:
      return "SARA";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string s(name);
  std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "bp") return Algorithm::bp;
  if (s == "bpdb8") return Algorithm::bpdb8;
  if (s == "rw-bpdb8" || s == "rw_bpdb8" || s == "rwbpdb8") return Algorithm::rw_bpdb8;
  if (s == "bpsa") return Algorithm::bpsa;
  if (s == "sara") return Algorithm::sara;
  throw ConfigError(fmt::format("unknown algorithm '{}'", name));
}

std::vector<Algorithm> parse_algorithms(std::string_view list) {
  std::vector<Algorithm> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = std::min(list.find(',', pos), list.size());
    out.push_back(parse_algorithm(list.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

void ExperimentSpec::validate() const {
  if (ratios.empty()) throw ConfigError("no undersampling ratios given");
  for (double r : ratios)
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError(fmt::format("undersampling ratio {} outside (0, 1]", r));
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (algorithms.empty()) throw ConfigError("no algorithms selected");
}

double snr_db(const Image& reference, const Image& estimate) {
  if (reference.shape != estimate.shape) throw DimensionError("snr: image shapes differ");
  const double ref = reference.pixels.norm();
  if (ref == 0.0) throw ZeroReference("snr: reference image is all zeros");
  const double err = (reference.pixels - estimate.pixels).norm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(ref / err);
}

Image load_ground_truth(const std::filesystem::path& path) {
  Image img = read_pgm(path);
  if (!std::has_single_bit(static_cast<unsigned>(img.shape.rows)) ||
      !std::has_single_bit(static_cast<unsigned>(img.shape.cols)))
    throw DimensionError(fmt::format("{}: {}x{} is not dyadic", path.string(), img.shape.rows, img.shape.cols));
  return img;
}

Reconstruction reconstruct(Algorithm algo, const ComplexVector& y, const MeasurementOperator& phi,
                           double sigma_n, const ReconstructionSettings& settings) {
  const auto setup = setup_for(algo, settings);
  const SaraDictionary dict(setup.frames, phi.shape(), settings.levels);
  SaraConfig cfg;
  cfg.epsilon = epsilon_from_sigma(sigma_n, phi.m());
  cfg.sigma_alpha = sigma_alpha(phi.m(), dict.coefficient_count(), sigma_n);
  cfg.n_max = setup.reweighted ? settings.n_max : 1;
  cfg.solver.positivity = settings.positivity;
  cfg.solver.max_iters = settings.max_iters;
  cfg.solver.rel_tol = settings.rel_tol;
  cfg.solver.feas_tol = settings.feas_tol;
  cfg.solver.step_ratio = settings.step_ratio;
  auto res = sara_reconstruct(y, phi, dict, cfg);
  Reconstruction out;
  out.image = std::move(res.x_hat);
  out.solver_iters = res.total_inner_iters;
  out.converged = res.all_converged;
  if (setup.reweighted) out.trace = std::move(res.trace);
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Image truth = load_ground_truth(spec.image_path);
  const Shape shape = truth.shape;
  const auto n = shape.size();
  if (spec.acquisition == Acquisition::fourier_mask && shape.rows != shape.cols)
    throw DimensionError("Fourier-mask acquisition needs a square image");

  struct Task {
    std::size_t ratio_index;
    int trial;
    std::size_t algo_index;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < spec.ratios.size(); ++r)
    for (int t = 0; t < spec.trials; ++t)
      for (std::size_t a = 0; a < spec.algorithms.size(); ++a) tasks.push_back({r, t, a});

  if (!spec.output_dir.empty()) ensure_dir(spec.output_dir);
  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const double ratio = spec.ratios[task.ratio_index];
    const Algorithm algo = spec.algorithms[task.algo_index];
    // Operator and noise depend only on (ratio, trial), never on the algorithm.
    const auto cell_seed = derive_seed(spec.seed, {task.ratio_index, static_cast<std::uint64_t>(task.trial)});
    const auto m = std::max<Eigen::Index>(1, std::llround(ratio * static_cast<double>(n)));
    try {
      const MeasurementOperator phi = [&] {
        if (spec.acquisition == Acquisition::spread_spectrum)
          return make_spread_spectrum({derive_seed(cell_seed, {1}), m, true}, shape);
        FourierMaskConfig mc;
        mc.seed = derive_seed(cell_seed, {1});
        mc.image_side = shape.rows;
        mc.n_ellipses = spec.mask_ellipses;
        mc.points_per_arc = spec.mask_points_per_arc;
        mc.target_m = m < n ? m : n - 1;
        return make_fourier_mask(mc);
      }();
      NoiseModel noise{spec.input_snr_db, derive_seed(cell_seed, {2}), std::nullopt};
      if (std::isinf(spec.input_snr_db)) noise.sigma_override = 0.0;
      const auto meas = apply_noise(phi.forward(truth), noise);
      auto cell = score_cell(algo, truth, meas.y, phi, meas.sigma_n, spec.recon, spec.record_timing,
                             ratio, task.trial);
      if (!spec.output_dir.empty() && spec.write_images) write_cell_files(spec.output_dir, cell, truth);
      rows[i] = std::move(cell.row);
    } catch (const Error& e) {
      spdlog::error("{} ratio {} trial {} setup failed: {}", to_string(algo), ratio, task.trial, e.what());
      rows[i] = {to_string(algo), ratio, task.trial, std::numeric_limits<double>::quiet_NaN(), 0.0, 0, false};
    }
    spdlog::info("{:<9} ratio {:.2f} trial {}: {:.2f} dB", rows[i].algorithm, ratio, task.trial, rows[i].snr_db);
  });
  if (!spec.output_dir.empty()) write_results_csv(spec.output_dir / "results.csv", rows);
  return rows;
}

Eigen::Index proportional_radio_m(int side) {
  const double scale = static_cast<double>(side) / 256.0;
  return std::llround(9413.0 * scale * scale);
}

RadioResult run_radio_demo(const RadioSpec& spec) {
  if (spec.algorithms.empty()) throw ConfigError("no algorithms selected");
  const Image truth = load_ground_truth(spec.image_path);
  const Shape shape = truth.shape;
  if (shape.rows != shape.cols) throw DimensionError("radio demo needs a square image");

  RadioResult out;
  if (spec.mask_path) {
    out.mask = to_frequencies(read_mask(*spec.mask_path), shape);
  } else {
    FourierMaskConfig mc;
    mc.seed = derive_seed(spec.seed, {1});
    mc.image_side = shape.rows;
    mc.n_ellipses = spec.mask_ellipses;
    mc.points_per_arc = spec.mask_points_per_arc;
    mc.target_m = spec.target_m.value_or(proportional_radio_m(shape.rows));
    out.mask = generate_ellipse_mask(mc);
  }
  const MeasurementOperator phi = make_fourier_mask(out.mask, shape);
  NoiseModel noise{spec.input_snr_db, derive_seed(spec.seed, {2}), std::nullopt};
  if (std::isinf(spec.input_snr_db)) noise.sigma_override = 0.0;
  const auto meas = apply_noise(phi.forward(truth), noise);
  const double ratio = static_cast<double>(phi.m()) / static_cast<double>(phi.n());

  out.dirty = dirty_image(phi, meas.y);
  out.rows.push_back({"dirty", ratio, 0, snr_db(truth, out.dirty), 0.0, 0, true});
  for (Algorithm algo : spec.algorithms) {
    auto cell = score_cell(algo, truth, meas.y, phi, meas.sigma_n, spec.recon, spec.record_timing, ratio, 0);
    spdlog::info("{:<9} {:.2f} dB", cell.row.algorithm, cell.row.snr_db);
    out.rows.push_back(cell.row);
    if (cell.recon.image.size() > 0) out.reconstructions[cell.row.algorithm] = std::move(cell.recon.image);
  }

  if (!spec.output_dir.empty()) {
    ensure_dir(spec.output_dir);
    write_results_csv(spec.output_dir / "radio_results.csv", out.rows);
    write_mask(spec.output_dir / "mask.txt", to_cells(out.mask, shape));
    if (spec.write_images) {
      write_pgm(spec.output_dir / "truth_log.pgm", log10_render(truth, spec.render_decades));
      const double lo = out.dirty.pixels.minCoeff();
      const double hi = out.dirty.pixels.maxCoeff();
      write_pgm(spec.output_dir / "dirty.pgm", out.dirty, lo, hi > lo ? hi : lo + 1.0);
      for (const auto& [name, img] : out.reconstructions)
        write_pgm(spec.output_dir / (name + "_log.pgm"), log10_render(img, spec.render_decades));
    }
  }
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "algorithm,ratio,trial,snr_db,wall_time_s,solver_iters,converged\n";
  for (const auto& r : rows)
    fmt::print(out, "{},{:.4f},{},{:.6f},{:.3f},{},{}\n", r.algorithm, r.ratio, r.trial, r.snr_db,
               r.wall_time_s, r.solver_iters, r.converged ? 1 : 0);
}

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  write_results_csv(out, rows);
}

namespace {

ReconstructionSettings recon_from_config(const KeyValueConfig& cfg, ReconstructionSettings s) {
  if (auto d = cfg.get("dict")) s.sara_frames = parse_frames(*d);
  s.levels = cfg.get_int("levels", s.levels);
  s.n_max = cfg.get_int("nmax", s.n_max);
  s.max_iters = cfg.get_int("max_iters", s.max_iters);
  s.rel_tol = cfg.get_double("rel_tol", s.rel_tol);
  s.feas_tol = cfg.get_double("feas_tol", s.feas_tol);
  s.step_ratio = cfg.get_double("step_ratio", s.step_ratio);
  s.positivity = cfg.get_bool("positivity", s.positivity);
  return s;
}

}  // namespace

ExperimentSpec experiment_spec_from_config(const KeyValueConfig& cfg) {
  ExperimentSpec spec;
  spec.image_path = cfg.get_string("image", "");
  const auto op = cfg.get_string("operator", "spread");
  if (op == "spread" || op == "spread_spectrum")
    spec.acquisition = Acquisition::spread_spectrum;
  else if (op == "fourier" || op == "fourier_mask")
    spec.acquisition = Acquisition::fourier_mask;
  else
    throw ConfigError(fmt::format("unknown operator '{}'", op));
  spec.mask_ellipses = cfg.get_int("ellipses", spec.mask_ellipses);
  spec.mask_points_per_arc = cfg.get_int("points_per_arc", spec.mask_points_per_arc);
  if (auto r = cfg.get("ratios")) spec.ratios = parse_double_list(*r);
  spec.input_snr_db = cfg.get_double("isnr", spec.input_snr_db);
  if (auto a = cfg.get("algos")) spec.algorithms = parse_algorithms(*a);
  spec.trials = cfg.get_int("trials", spec.trials);
  spec.seed = cfg.get_u64("seed", spec.seed);
  spec.output_dir = cfg.get_string("out", "");
  spec.recon = recon_from_config(cfg, spec.recon);
  spec.record_timing = cfg.get_bool("timing", spec.record_timing);
  spec.write_images = cfg.get_bool("images", spec.write_images);
  spec.threads = cfg.get_int("threads", spec.threads);
  return spec;
}

RadioSpec radio_spec_from_config(const KeyValueConfig& cfg) {
  RadioSpec spec;
  spec.image_path = cfg.get_string("image", "");
  if (cfg.has("target_m")) spec.target_m = cfg.get_int("target_m", 0);
  if (auto m = cfg.get("mask")) spec.mask_path = *m;
  spec.mask_ellipses = cfg.get_int("ellipses", spec.mask_ellipses);
  spec.mask_points_per_arc = cfg.get_int("points_per_arc", spec.mask_points_per_arc);
  spec.input_snr_db = cfg.get_double("isnr", spec.input_snr_db);
  spec.seed = cfg.get_u64("seed", spec.seed);
  if (auto a = cfg.get("algos")) spec.algorithms = parse_algorithms(*a);
  spec.output_dir = cfg.get_string("out", "");
  spec.recon = recon_from_config(cfg, spec.recon);
  spec.render_decades = cfg.get_double("decades", spec.render_decades);
  spec.record_timing = cfg.get_bool("timing", spec.record_timing);
  spec.write_images = cfg.get_bool("images", spec.write_images);
  return spec;
}

}  // namespace sara
