#ifndef MARINESIM_TESTS_TEST_UTIL_HPP
#define MARINESIM_TESTS_TEST_UTIL_HPP

#include <functional>

#include <Eigen/Dense>

namespace testutil {

// Classical fixed-step RK4 on a flat state vector; deriv(t, y) -> ydot.
inline Eigen::VectorXd rk4_step(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& deriv,
    double t, const Eigen::VectorXd& y, double dt) {
  const Eigen::VectorXd k1 = deriv(t, y);
  const Eigen::VectorXd k2 = deriv(t + 0.5 * dt, y + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = deriv(t + 0.5 * dt, y + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = deriv(t + dt, y + dt * k3);
  return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace testutil

#endif
