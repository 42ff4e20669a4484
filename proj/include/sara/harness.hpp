#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sara/config.hpp"
#include "sara/dictionary.hpp"
#include "sara/measurement.hpp"
#include "sara/reweighting.hpp"
#include "sara/types.hpp"

namespace sara {

/// BP: Dirac basis; BPDb8: Db8 basis; RW-BPDb8: reweighted Db8;
/// BPSA: concatenated dictionary, no reweighting; SARA: concatenated
/// dictionary with the full reweighting loop.
enum class Algorithm { bp, bpdb8, rw_bpdb8, bpsa, sara };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> parse_algorithms(std::string_view list);

enum class Acquisition { spread_spectrum, fourier_mask };

/// Shared reconstruction settings for every algorithm in a run.
struct ReconstructionSettings {
  std::vector<FrameId> sara_frames = daubechies_frames(false);
  int levels = 4;
  int n_max = 10;
  int max_iters = 20000;
  double rel_tol = 1e-5;
  double feas_tol = 1e-4;
  double step_ratio = 0.02;
  bool positivity = true;
};

struct ExperimentSpec {
  std::filesystem::path image_path;
  Acquisition acquisition = Acquisition::spread_spectrum;
  int mask_ellipses = 8;
  int mask_points_per_arc = 0;
  std::vector<double> ratios{0.2, 0.4, 0.6};
  double input_snr_db = 30.0;  // +inf for noiseless measurements
  std::vector<Algorithm> algorithms{Algorithm::bpdb8, Algorithm::bpsa, Algorithm::sara};
  int trials = 1;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir;  // empty: no files written
  ReconstructionSettings recon;
  bool record_timing = true;  // false writes wall_time_s = 0 for byte-stable CSVs
  bool write_images = true;
  int threads = 0;            // 0: hardware concurrency

  void validate() const;
};

struct ResultRow {
  std::string algorithm;
  double ratio = 0.0;
  int trial = 0;
  double snr_db = 0.0;  // +inf for exact recovery, NaN for failed cells
  double wall_time_s = 0.0;
  int solver_iters = 0;
  bool converged = false;
};

/// 20 log10(||reference|| / ||reference - estimate||); +inf on exact match.
double snr_db(const Image& reference, const Image& estimate);

/// Ground truth for the harness: PGM with power-of-two sides.
Image load_ground_truth(const std::filesystem::path& path);

struct Reconstruction {
  Image image;
  int solver_iters = 0;
  bool converged = false;
  std::vector<SaraTraceRow> trace;  // reweighted algorithms only
};

/// Runs one algorithm on measurements y; sigma_n sets ε and σ_α.
Reconstruction reconstruct(Algorithm algo, const ComplexVector& y, const MeasurementOperator& phi,
                           double sigma_n, const ReconstructionSettings& settings);

/// Sweeps (ratio, trial, algorithm) cells; rows are ordered by ratio, trial,
/// then algorithm. Writes results.csv and images when output_dir is set.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

struct RadioSpec {
  std::filesystem::path image_path;
  std::optional<Eigen::Index> target_m;  // default: 9413 scaled by (side / 256)^2
  std::optional<std::filesystem::path> mask_path;  // replay an archived mask
  int mask_ellipses = 8;
  int mask_points_per_arc = 0;
  double input_snr_db = 30.0;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::bp, Algorithm::bpdb8, Algorithm::sara};
  std::filesystem::path output_dir;
  ReconstructionSettings recon{daubechies_frames(true)};
  double render_decades = 3.0;
  bool record_timing = true;
  bool write_images = true;
};

struct RadioResult {
  std::vector<ResultRow> rows;  // "dirty" first, then the algorithms
  Image dirty;
  std::map<std::string, Image> reconstructions;
  std::vector<int> mask;
};

/// M for a side x side image scaled from 9413 measurements at 256 x 256.
Eigen::Index proportional_radio_m(int side);

RadioResult run_radio_demo(const RadioSpec& spec);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

/// Fill a spec from a key-value config (keys mirror the CLI flags).
ExperimentSpec experiment_spec_from_config(const KeyValueConfig& cfg);
RadioSpec radio_spec_from_config(const KeyValueConfig& cfg);

}  // namespace sara
