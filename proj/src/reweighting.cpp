#include "sara/reweighting.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>

#include "sara/errors.hpp"

namespace sara {

void SaraConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError(fmt::format("beta must lie in (0, 1), got {}", beta));
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError(fmt::format("eta must lie in (0, 1), got {}", eta));
  if (n_max < 1) throw ConfigError("n_max must be at least 1");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  if (!(sigma_alpha >= 0.0)) throw ConfigError("sigma_alpha must be non-negative");
  solver.validate();
}

double sigma_alpha(Eigen::Index m, Eigen::Index d, double sigma_n) {
  if (m < 1 || d < 1) throw ConfigError("sigma_alpha needs positive M and D");
  return std::sqrt(static_cast<double>(m) / static_cast<double>(d)) * sigma_n;
}

double empirical_std(const CoefficientVector& alpha) {
  if (alpha.size() < 2) return 0.0;
  const double mean = alpha.mean();
  return std::sqrt((alpha.array() - mean).square().sum() / static_cast<double>(alpha.size() - 1));
}

WeightVector update_weights(const CoefficientVector& alpha, double gamma) {
  if (!(gamma > 0.0)) throw NonPositiveGamma(fmt::format("weight update needs gamma > 0, got {}", gamma));
  RealVector w = gamma / (gamma + alpha.array().abs());
  return WeightVector(std::move(w));
}

SaraResult sara_reconstruct(const ComplexVector& y, const MeasurementOperator& phi,
                            const SaraDictionary& dict, const SaraConfig& cfg) {
  cfg.validate();
  SolverConfig solver = cfg.solver;
  solver.epsilon = cfg.epsilon;
  if (!solver.operator_norm) solver.operator_norm = operator_norm(phi, dict);

  SaraResult out;
  const auto d = dict.coefficient_count();
  auto record = [&](int t, double gamma, double rho, const SolverResult& r) {
    out.trace.push_back({t, gamma, rho, r.final_objective, r.iterations, r.converged});
    ++out.solves;
    out.total_inner_iters += r.iterations;
    out.all_converged = out.all_converged && r.converged;
  };

  SolverResult current = solve_weighted_l1(y, phi, dict, WeightVector::ones(d), solver);
  double gamma = empirical_std(dict.analysis(current.x_hat));
  double rho = 1.0;
  record(0, gamma, rho, current);
  out.initial = current.x_hat;

  int t = 1;
  while (rho > cfg.eta && t < cfg.n_max) {
    if (!(gamma > 0.0)) {
      spdlog::warn("reweighting stopped: gamma collapsed to {} (zero coefficients)", gamma);
      break;
    }
    const WeightVector w = update_weights(dict.analysis(current.x_hat), gamma);
    SolverResult next = solve_weighted_l1(y, phi, dict, w, solver, &current.x_hat);
    gamma = std::max(cfg.beta * gamma, cfg.sigma_alpha);
    const double prev_norm = current.x_hat.pixels.norm();
    if (prev_norm == 0.0) {
      spdlog::warn("previous SARA iterate is zero; relative change set to 1");
      rho = 1.0;
    } else {
      rho = (next.x_hat.pixels - current.x_hat.pixels).norm() / prev_norm;
    }
    record(t, gamma, rho, next);
    current = std::move(next);
    ++t;
  }
  out.x_hat = std::move(current.x_hat);
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<SaraTraceRow>& trace) {
  out << "t,gamma,rho,objective,inner_iters\n";
  for (const auto& r : trace)
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{}\n", r.t, r.gamma, r.rho, r.objective, r.inner_iters);
}

}  // namespace sara
