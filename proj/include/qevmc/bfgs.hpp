// Copyright 2026 The QEVMC Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEVMC_BFGS_HPP
#define QEVMC_BFGS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>

namespace qevmc {

struct BfgsResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/**
 * Quasi-Newton minimiser with central-finite-difference gradients and a
 * backtracking Armijo line search. Suited to the few-parameter smooth
 * objectives used here.
 */
inline BfgsResult bfgs_minimize(
    const std::function<double(const Eigen::VectorXd &)> &f,
    Eigen::VectorXd x0, int max_iters = 200, double grad_tol = 1e-7,
    double fd_step = 1e-5) {
  const int n = static_cast<int>(x0.size());
  auto gradient = [&](const Eigen::VectorXd &x) {
    Eigen::VectorXd g(n);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < n; ++i) {
      xp[i] = x[i] + fd_step;
      double fp = f(xp);
      xp[i] = x[i] - fd_step;
      double fm = f(xp);
      xp[i] = x[i];
      g[i] = (fp - fm) / (2.0 * fd_step);
    }
    return g;
  };

  BfgsResult out;
  out.x = x0;
  out.value = f(x0);
  if (!std::isfinite(out.value)) return out;

  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = gradient(out.x);

  for (int iter = 0; iter < max_iters; ++iter) {
    out.iterations = iter;
    if (g.norm() < grad_tol) {
      out.converged = true;
      return out;
    }
    Eigen::VectorXd p = -(Hinv * g);
    if (p.dot(g) >= 0.0) {  // non-descent: reset curvature
      Hinv.setIdentity();
      p = -g;
    }
    double alpha = 1.0;
    double f0 = out.value;
    double slope = g.dot(p);
    Eigen::VectorXd x_new;
    double f_new = f0;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = out.x + alpha * p;
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= f0 + 1e-4 * alpha * slope) {
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok) {
      out.converged = g.norm() < 1e-5;
      return out;
    }
    Eigen::VectorXd g_new = gradient(x_new);
    Eigen::VectorXd s = x_new - out.x;
    Eigen::VectorXd y = g_new - g;
    double sy = s.dot(y);
    if (sy > 1e-12) {
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Eigen::MatrixXd V = I - (s * y.transpose()) / sy;
      Hinv = V * Hinv * V.transpose() + (s * s.transpose()) / sy;
    }
    out.x = x_new;
    out.value = f_new;
    g = g_new;
  }
  return out;
}

}  // namespace qevmc

#endif  // QEVMC_BFGS_HPP
