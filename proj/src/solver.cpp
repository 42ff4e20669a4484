#include "sara/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sara/errors.hpp"

namespace sara {

WeightVector::WeightVector(RealVector w) : w_(std::move(w)) {
  for (Eigen::Index i = 0; i < w_.size(); ++i)
    if (!(w_[i] > 0.0) || !std::isfinite(w_[i]))
      throw ConfigError(fmt::format("weight {} is not a positive finite number ({})", i, w_[i]));
}

void SolverConfig::validate() const {
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!(rel_tol > 0.0) || !(feas_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (operator_norm && !(*operator_norm > 0.0)) throw ConfigError("operator norm must be positive");
  if (!(step_ratio > 0.0) || !std::isfinite(step_ratio)) throw ConfigError("step_ratio must be positive");
}

CoefficientVector prox_weighted_l1(const CoefficientVector& alpha, const WeightVector& w, double tau) {
  if (alpha.size() != w.size()) throw DimensionError("prox_weighted_l1: weight length mismatch");
  if (tau < 0.0) throw ConfigError("prox_weighted_l1: negative threshold");
  CoefficientVector out(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double mag = std::abs(alpha[i]);
    const double t = tau * w[i];
    out[i] = mag > t ? alpha[i] * (1.0 - t / mag) : 0.0;
  }
  return out;
}

ComplexVector prox_weighted_l1(const ComplexVector& alpha, const WeightVector& w, double tau) {
  if (alpha.size() != w.size()) throw DimensionError("prox_weighted_l1: weight length mismatch");
  if (tau < 0.0) throw ConfigError("prox_weighted_l1: negative threshold");
  ComplexVector out(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double mag = std::abs(alpha[i]);
    const double t = tau * w[i];
    out[i] = mag > t ? alpha[i] * (1.0 - t / mag) : Complex(0.0, 0.0);
  }
  return out;
}

ComplexVector project_l2_ball(const ComplexVector& v, const ComplexVector& center, double epsilon) {
  if (v.size() != center.size()) throw DimensionError("project_l2_ball: length mismatch");
  if (epsilon < 0.0) throw ConfigError("project_l2_ball: negative radius");
  const double dist = (v - center).norm();
  if (dist <= epsilon) return v;
  return center + (epsilon / dist) * (v - center);
}

RealVector project_positive(RealVector x) {
  x = x.cwiseMax(0.0);
  return x;
}

double operator_norm(const LinearMap& normal_operator, Eigen::Index n, const PowerIterationOptions& options) {
  if (n <= 0) throw DimensionError("operator_norm: empty domain");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < options.max_iters; ++it) {
    RealVector av = normal_operator(v);
    const double next = av.norm();
    if (next == 0.0) return 0.0;
    v = av / next;
    if (it > 0 && std::abs(next - lambda) <= options.rel_tol * next) return std::sqrt(next);
    lambda = next;
  }
  throw ConvergenceError(fmt::format("power iteration did not settle in {} iterations", options.max_iters));
}

double operator_norm(const MeasurementOperator& phi, const SaraDictionary& dict,
                     const PowerIterationOptions& options) {
  if (phi.shape() != dict.shape()) throw DimensionError("operator and dictionary shapes differ");
  return operator_norm(
      [&](const RealVector& x) {
        RealVector out = phi.adjoint(phi.forward(x));
        out += dict.synthesis(dict.analysis(Image(dict.shape(), x))).pixels;
        return out;
      },
      phi.n(), options);
}

double epsilon_from_sigma(double sigma_n, Eigen::Index m) {
  const auto mm = static_cast<double>(m);
  return sigma_n * std::sqrt(mm + 2.0 * std::sqrt(mm));
}

SolverResult solve_weighted_l1(const ComplexVector& y, const MeasurementOperator& phi,
                               const SaraDictionary& dict, const WeightVector& w,
                               const SolverConfig& cfg, const Image* warm_start,
                               std::vector<SolverTraceRow>* trace) {
  cfg.validate();
  if (phi.shape() != dict.shape()) throw DimensionError("operator and dictionary shapes differ");
  if (y.size() != phi.m()) throw DimensionError("measurement vector length does not match the operator");
  if (w.size() != dict.coefficient_count()) throw DimensionError("weight length does not match the dictionary");
  if (warm_start && warm_start->shape != dict.shape()) throw DimensionError("warm start shape mismatch");

  const Shape shape = dict.shape();
  const auto n = static_cast<std::size_t>(dict.pixel_count());
  const auto d = static_cast<std::size_t>(dict.coefficient_count());
  const double norm = cfg.operator_norm ? *cfg.operator_norm : operator_norm(phi, dict);
  // tau * sigma * L^2 = 0.99 keeps the iteration stable for any split.
  const double tau = std::sqrt(0.99) / norm * cfg.step_ratio;
  const double sigma = std::sqrt(0.99) / norm / cfg.step_ratio;
  const double eps = cfg.epsilon;
  const double feas_scale = std::max(eps, y.norm());
  const auto& weights = w.values();

  RealVector x = warm_start ? warm_start->pixels : RealVector::Zero(static_cast<Eigen::Index>(n));
  if (cfg.positivity) x = x.cwiseMax(0.0);
  RealVector x_prev(x.size());
  RealVector coeffs(static_cast<Eigen::Index>(d));
  RealVector coeffs_prev(coeffs.size());
  RealVector back(static_cast<Eigen::Index>(n));
  dict.analysis({x.data(), n}, {coeffs.data(), d});
  ComplexVector phi_x = phi.forward(x);
  ComplexVector phi_x_prev = phi_x;
  coeffs_prev = coeffs;

  RealVector dual_l1 = RealVector::Zero(static_cast<Eigen::Index>(d));
  ComplexVector dual_ball = ComplexVector::Zero(y.size());

  SolverResult result;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    // Dual ascent at the extrapolated point x̄ = 2x_k - x_{k-1}, using linearity.
    // prox of the conjugate of ||W.||_1 is the projection onto |u_i| <= w_i.
    dual_l1 += sigma * (2.0 * coeffs - coeffs_prev);
    dual_l1 = dual_l1.cwiseMax(-weights).cwiseMin(weights);

    // Moreau: prox_{σ f*}(v) = v - σ proj_B(v / σ) for the ball indicator f.
    ComplexVector v = dual_ball + sigma * (2.0 * phi_x - phi_x_prev);
    dual_ball = v - sigma * project_l2_ball(v / sigma, y, eps);

    x_prev = x;
    dict.synthesis({dual_l1.data(), d}, {back.data(), n});
    back += phi.adjoint(dual_ball);
    x -= tau * back;
    if (cfg.positivity) x = x.cwiseMax(0.0);

    coeffs_prev.swap(coeffs);
    dict.analysis({x.data(), n}, {coeffs.data(), d});
    phi_x_prev.swap(phi_x);
    phi_x = phi.forward(x);

    const double x_norm = x.norm();
    const double step = (x - x_prev).norm();
    const double rel_change = step == 0.0 ? 0.0 : step / std::max(x_norm, 1e-300);
    const double residual = (y - phi_x).norm();
    const double gap = std::max(0.0, residual - eps);
    const double objective = weights.cwiseProduct(coeffs.cwiseAbs()).sum();
    if (trace) trace->push_back({it, objective, residual, rel_change});

    result.iterations = it;
    result.final_objective = objective;
    result.residual_norm = residual;
    result.feasibility_gap = gap;
    if (rel_change < cfg.rel_tol && gap <= cfg.feas_tol * feas_scale) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged)
    spdlog::debug("weighted l1 solve stopped at the {}-iteration cap (gap {:.3e})", cfg.max_iters,
                  result.feasibility_gap);
  result.x_hat = Image(shape, std::move(x));
  return result;
}

}  // namespace sara
