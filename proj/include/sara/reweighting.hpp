#pragma once

#include <ostream>
#include <vector>

#include "sara/dictionary.hpp"
#include "sara/measurement.hpp"
#include "sara/solver.hpp"

namespace sara {

struct SaraConfig {
  double epsilon = 0.0;
  double sigma_alpha = 0.0;  // floor for the homotopy parameter gamma
  double beta = 1e-1;        // gamma decay rate
  double eta = 1e-3;         // relative-change stopping bound
  int n_max = 10;            // total weighted solves, initial one included
  SolverConfig solver;       // solver.epsilon is overridden by epsilon

  void validate() const;
};

struct SaraTraceRow {
  int t = 0;
  double gamma = 0.0;
  double rho = 0.0;
  double objective = 0.0;  // ||W(t) Ψ† x(t)||_1
  int inner_iters = 0;
  bool converged = false;
};

struct SaraResult {
  Image x_hat;
  Image initial;  // unweighted solution x(0)
  std::vector<SaraTraceRow> trace;  // row 0 is the initial solve
  int solves = 0;
  int total_inner_iters = 0;
  bool all_converged = true;
};

/// sqrt(M / D) * sigma_n, the noise level in the representation domain.
double sigma_alpha(Eigen::Index m, Eigen::Index d, double sigma_n);

/// Empirical standard deviation about the mean (n - 1 normalization).
double empirical_std(const CoefficientVector& alpha);

/// w_i = gamma / (gamma + |alpha_i|), so every weight lies in (0, 1].
WeightVector update_weights(const CoefficientVector& alpha, double gamma);

/// Reweighted analysis reconstruction: an unweighted solve followed by
/// weighted solves with gamma(t) = max(beta gamma(t-1), sigma_alpha), until
/// the relative change drops to eta or n_max solves have run.
SaraResult sara_reconstruct(const ComplexVector& y, const MeasurementOperator& phi,
                            const SaraDictionary& dict, const SaraConfig& cfg);

/// Columns: t, gamma, rho, objective, inner_iters.
void write_trace_csv(std::ostream& out, const std::vector<SaraTraceRow>& trace);

}  // namespace sara
