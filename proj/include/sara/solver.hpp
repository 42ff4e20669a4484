#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sara/dictionary.hpp"
#include "sara/measurement.hpp"
#include "sara/types.hpp"

namespace sara {

/// Strictly positive diagonal of W.
class WeightVector {
 public:
  explicit WeightVector(RealVector w);
  static WeightVector ones(Eigen::Index d) { return WeightVector(RealVector::Ones(d)); }

  [[nodiscard]] const RealVector& values() const { return w_; }
  [[nodiscard]] Eigen::Index size() const { return w_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return w_[i]; }

 private:
  RealVector w_;
};

struct SolverConfig {
  double epsilon = 0.0;    // radius of the data-fidelity l2 ball
  bool positivity = false;
  int max_iters = 20000;
  double rel_tol = 1e-5;   // relative iterate change
  double feas_tol = 1e-4;  // feasibility gap relative to max(epsilon, ||y||)
  /// Spectral norm of x -> (Φx, Ψ†x); estimated by power iteration when unset.
  std::optional<double> operator_norm;
  // Primal step is scaled by step_ratio and dual steps divided by it. Images in
  // [0,1] against unit-bounded duals converge far faster with a small ratio.
  double step_ratio = 0.02;

  void validate() const;
};

struct SolverResult {
  Image x_hat;
  int iterations = 0;
  double final_objective = 0.0;  // ||W Ψ† x_hat||_1
  double residual_norm = 0.0;    // ||y - Φ x_hat||_2
  double feasibility_gap = 0.0;  // max(0, residual_norm - epsilon)
  bool converged = false;
};

struct SolverTraceRow {
  int iteration = 0;
  double objective = 0.0;
  double residual_norm = 0.0;
  double rel_change = 0.0;
};

/// Complex soft-thresholding with per-entry threshold tau * w_i.
CoefficientVector prox_weighted_l1(const CoefficientVector& alpha, const WeightVector& w, double tau);
ComplexVector prox_weighted_l1(const ComplexVector& alpha, const WeightVector& w, double tau);

/// Euclidean projection of v onto {z : ||z - center|| <= epsilon}.
ComplexVector project_l2_ball(const ComplexVector& v, const ComplexVector& center, double epsilon);

RealVector project_positive(RealVector x);

struct PowerIterationOptions {
  double rel_tol = 1e-4;
  int max_iters = 5000;
  std::uint64_t seed = 0x5a7a;
};

using LinearMap = std::function<RealVector(const RealVector&)>;

/// Spectral norm of K given its normal operator K^T K, by power iteration.
/// Throws ConvergenceError when the iteration cap is reached.
double operator_norm(const LinearMap& normal_operator, Eigen::Index n,
                     const PowerIterationOptions& options = {});
/// Spectral norm of the stacked map x -> (Φx, Ψ†x).
double operator_norm(const MeasurementOperator& phi, const SaraDictionary& dict,
                     const PowerIterationOptions& options = {});

/// ε = σ_n sqrt(M + 2 sqrt(M)): mean plus two standard deviations of ||n||^2
/// for complex noise with E|n_k|^2 = σ_n^2.
double epsilon_from_sigma(double sigma_n, Eigen::Index m);

/// min ||W Ψ† x||_1 subject to ||y - Φx||_2 <= ε (and x >= 0 when requested)
/// over real images x, by a primal-dual iteration with one dual block for the
/// weighted l1 term and one for the l2-ball constraint. Returns the last
/// iterate with converged = false when max_iters is reached.
SolverResult solve_weighted_l1(const ComplexVector& y, const MeasurementOperator& phi,
                               const SaraDictionary& dict, const WeightVector& w,
                               const SolverConfig& cfg, const Image* warm_start = nullptr,
                               std::vector<SolverTraceRow>* trace = nullptr);

}  // namespace sara
