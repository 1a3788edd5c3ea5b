#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lips {

// Real-valued design without the intercept column; the intercept is
// implicit and always fitted first.
struct DesignMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd X;  // n x m

  void validate() const {
    if (static_cast<std::size_t>(X.cols()) != names.size())
      throw std::invalid_argument("design name/column count mismatch");
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j])
          throw std::invalid_argument("duplicate design column: " + names[i]);
    if (!X.allFinite())
      throw std::invalid_argument("non-finite design entries");
  }
};

struct FitOptions {
  int max_iter = 100;
  double tol = 1e-8;
  double ridge_eps = 1e-8;
  double separation_bound = 30.0;
};

struct FittedModel {
  Eigen::VectorXd coefficients;   // intercept first
  Eigen::VectorXd standard_errors;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  bool separation_suspected = false;
  bool hessian_ridged = false;
  std::string feature_recipe;
  std::vector<std::string> feature_names;  // excludes intercept
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

inline double log_likelihood(const Eigen::VectorXd& eta,
                             const Eigen::VectorXd& y) {
  double ll = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    // log sigma(eta) and log(1 - sigma(eta)) in a stable form
    double z = eta[i];
    double log1pexp = z > 30 ? z : std::log1p(std::exp(z));
    ll += y[i] * z - log1pexp;
  }
  return ll;
}

inline Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Xa(X.rows(), X.cols() + 1);
  Xa.col(0).setOnes();
  Xa.rightCols(X.cols()) = X;
  return Xa;
}

}  // namespace detail

// Newton/IRLS maximum-likelihood logistic fit with step-halving when a
// step would decrease the likelihood. A ridge term is added to the
// Hessian only when the solve is numerically singular. Complete
// separation is reported, not refused.
inline FittedModel fit_logistic(const DesignMatrix& design,
                                const std::vector<double>& y,
                                const FitOptions& opts = {}) {
  design.validate();
  const Eigen::Index n = design.X.rows();
  if (static_cast<std::size_t>(n) != y.size())
    throw std::invalid_argument("design/outcome length mismatch");
  Eigen::VectorXd yv(n);
  double ymean = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    yv[i] = y[static_cast<std::size_t>(i)];
    ymean += yv[i];
  }
  ymean /= static_cast<double>(n);
  if (ymean <= 0.0 || ymean >= 1.0)
    throw std::invalid_argument("outcome has a single class");

  Eigen::MatrixXd Xa = detail::with_intercept(design.X);
  const Eigen::Index m = Xa.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
  beta[0] = std::log(ymean / (1 - ymean));

  FittedModel model;
  Eigen::VectorXd eta = Xa * beta;
  double ll = detail::log_likelihood(eta, yv);

  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    Eigen::VectorXd p(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p[i] = detail::sigmoid(eta[i]);
      w[i] = p[i] * (1 - p[i]);
    }
    Eigen::VectorXd score = Xa.transpose() * (yv - p);
    if (score.cwiseAbs().maxCoeff() < opts.tol) {
      model.converged = true;
      break;
    }
    if (iter == opts.max_iter) break;
    model.iterations = iter + 1;
    Eigen::MatrixXd hess = Xa.transpose() * w.asDiagonal() * Xa;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    Eigen::VectorXd step;
    bool singular = ldlt.info() != Eigen::Success ||
                    !(hess * (step = ldlt.solve(score)) - score).isZero(1e-6 * (1 + score.norm()));
    if (singular) {
      model.hessian_ridged = true;
      Eigen::MatrixXd hr = hess;
      hr.diagonal().array() += opts.ridge_eps;
      double bump = opts.ridge_eps;
      while (true) {
        Eigen::LDLT<Eigen::MatrixXd> l2(hr);
        step = l2.solve(score);
        if (l2.info() == Eigen::Success && step.allFinite()) break;
        bump *= 10;
        hr = hess;
        hr.diagonal().array() += bump;
      }
    }

    // step-halving keeps the likelihood non-decreasing
    double new_ll = ll;
    Eigen::VectorXd candidate = beta;
    for (int half = 0; half < 40; ++half) {
      candidate = beta + step;
      Eigen::VectorXd e2 = Xa * candidate;
      new_ll = detail::log_likelihood(e2, yv);
      if (new_ll >= ll - 1e-14) {
        eta = e2;
        break;
      }
      step *= 0.5;
    }
    double rel_change = std::fabs(new_ll - ll) / (std::fabs(ll) + 1.0);
    beta = candidate;
    ll = new_ll;
    if (rel_change < opts.tol) {
      model.converged = true;
      break;
    }
  }

  model.coefficients = beta;
  model.log_likelihood = ll;
  model.feature_names = design.names;
  if (beta.cwiseAbs().maxCoeff() > opts.separation_bound) {
    model.separation_suspected = true;
    model.converged = false;
  }

  // SEs from the inverse observed information at the estimate
  Eigen::VectorXd p(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p[i] = detail::sigmoid(eta[i]);
    w[i] = p[i] * (1 - p[i]);
  }
  Eigen::MatrixXd hess = Xa.transpose() * w.asDiagonal() * Xa;
  if (model.hessian_ridged) hess.diagonal().array() += opts.ridge_eps;
  Eigen::MatrixXd cov =
      hess.completeOrthogonalDecomposition().pseudoInverse();
  model.standard_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return model;
}

// L1-penalized logistic regression via IRLS with coordinate-wise
// soft-thresholded updates on the working least-squares problem.
// The intercept is unpenalized; exact zeros are produced.
inline FittedModel fit_logistic_l1(const DesignMatrix& design,
                                   const std::vector<double>& y, double lambda,
                                   const FitOptions& opts = {}) {
  if (lambda < 0) throw std::invalid_argument("lambda must be >= 0");
  design.validate();
  const Eigen::Index n = design.X.rows();
  if (static_cast<std::size_t>(n) != y.size())
    throw std::invalid_argument("design/outcome length mismatch");
  Eigen::VectorXd yv(n);
  double ymean = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    yv[i] = y[static_cast<std::size_t>(i)];
    ymean += yv[i];
  }
  ymean /= static_cast<double>(n);
  if (ymean <= 0.0 || ymean >= 1.0)
    throw std::invalid_argument("outcome has a single class");

  const Eigen::Index m = design.X.cols();
  const double nd = static_cast<double>(n);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
  double beta0 = std::log(ymean / (1 - ymean));

  FittedModel model;
  auto objective = [&](double b0, const Eigen::VectorXd& b) {
    Eigen::VectorXd eta = design.X * b;
    eta.array() += b0;
    return -detail::log_likelihood(eta, yv) / nd +
           lambda * b.cwiseAbs().sum();
  };
  double obj = objective(beta0, beta);

  for (int iter = 1; iter <= std::max(opts.max_iter, 200); ++iter) {
    model.iterations = iter;
    Eigen::VectorXd eta = design.X * beta;
    eta.array() += beta0;
    Eigen::VectorXd p(n), w(n), z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p[i] = detail::sigmoid(eta[i]);
      w[i] = std::max(p[i] * (1 - p[i]), 1e-10);
      z[i] = eta[i] + (yv[i] - p[i]) / w[i];
    }
    // coordinate descent on the weighted working response
    Eigen::VectorXd r = z - eta;  // residual of current fit
    for (int sweep = 0; sweep < 50; ++sweep) {
      double max_delta = 0;
      // intercept
      double num0 = 0, den0 = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        num0 += w[i] * (r[i] + beta0);
        den0 += w[i];
      }
      double nb0 = num0 / den0;
      r.array() -= (nb0 - beta0);
      max_delta = std::max(max_delta, std::fabs(nb0 - beta0));
      beta0 = nb0;
      for (Eigen::Index j = 0; j < m; ++j) {
        double num = 0, den = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          num += w[i] * design.X(i, j) * (r[i] + design.X(i, j) * beta[j]);
          den += w[i] * design.X(i, j) * design.X(i, j);
        }
        num /= nd;
        den /= nd;
        double nbj = 0;
        if (den > 0) {
          if (num > lambda) nbj = (num - lambda) / den;
          else if (num < -lambda) nbj = (num + lambda) / den;
        }
        if (nbj != beta[j]) {
          r -= design.X.col(j) * (nbj - beta[j]);
          max_delta = std::max(max_delta, std::fabs(nbj - beta[j]));
          beta[j] = nbj;
        }
      }
      if (max_delta < opts.tol) break;
    }
    double new_obj = objective(beta0, beta);
    if (std::fabs(new_obj - obj) / (std::fabs(obj) + 1.0) < opts.tol) {
      obj = new_obj;
      model.converged = true;
      break;
    }
    obj = new_obj;
  }

  model.coefficients = Eigen::VectorXd(m + 1);
  model.coefficients[0] = beta0;
  model.coefficients.tail(m) = beta;
  Eigen::VectorXd eta = design.X * beta;
  eta.array() += beta0;
  model.log_likelihood = detail::log_likelihood(eta, yv);
  model.standard_errors = Eigen::VectorXd::Zero(m + 1);  // not defined for L1
  model.feature_names = design.names;
  if (model.coefficients.cwiseAbs().maxCoeff() > opts.separation_bound) {
    model.separation_suspected = true;
    model.converged = false;
  }
  return model;
}

inline std::vector<double> predict_proba(const FittedModel& model,
                                         const DesignMatrix& design) {
  if (design.names != model.feature_names)
    throw std::invalid_argument("design columns do not match model recipe");
  Eigen::VectorXd eta = design.X * model.coefficients.tail(design.X.cols());
  eta.array() += model.coefficients[0];
  std::vector<double> out(static_cast<std::size_t>(eta.size()));
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    out[static_cast<std::size_t>(i)] = detail::sigmoid(eta[i]);
  return out;
}

struct WaldStat {
  double z = 0.0;
  double p_value = 1.0;
};

inline std::vector<WaldStat> wald_stats(const FittedModel& model) {
  std::vector<WaldStat> out;
  for (Eigen::Index i = 0; i < model.coefficients.size(); ++i) {
    double se = model.standard_errors[i];
    if (se == 0.0) throw std::invalid_argument("zero standard error");
    double z = model.coefficients[i] / se;
    out.push_back({z, std::erfc(std::fabs(z) / std::sqrt(2.0))});
  }
  return out;
}

inline int count_nonzero_terms(const FittedModel& model, double eps = 0.0) {
  int c = 0;
  for (Eigen::Index i = 1; i < model.coefficients.size(); ++i)
    if (std::fabs(model.coefficients[i]) > eps) ++c;
  return c;
}

}  // namespace lips
