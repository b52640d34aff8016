#ifndef MARINESIM_FILTERS_HPP
#define MARINESIM_FILTERS_HPP

#include <cmath>
#include <numbers>

namespace marinesim {

// Single-pole low pass with the exact discrete pole.
class FirstOrderLowPass {
 public:
  FirstOrderLowPass() = default;
  explicit FirstOrderLowPass(double time_constant) : tau_(time_constant) {}

  void reset(double y0) { y_ = y0; }

  double step(double u, double dt) {
    const double a = std::exp(-dt / tau_);
    y_ = a * y_ + (1.0 - a) * u;
    return y_;
  }

  double value() const { return y_; }

 private:
  double tau_ = 1.0;
  double y_ = 0.0;
};

// Critically damped second-order tracker; exposes the tracked value and its
// first two derivatives for reference shaping.
class SecondOrderTracker {
 public:
  SecondOrderTracker() = default;
  explicit SecondOrderTracker(double cutoff_hz)
      : wn_(2.0 * std::numbers::pi * cutoff_hz) {}

  void reset(double y0) {
    y_ = y0;
    yd_ = 0.0;
    ydd_ = 0.0;
  }

  void step(double u, double dt) {
    ydd_ = wn_ * wn_ * (u - y_) - 2.0 * wn_ * yd_;
    yd_ += dt * ydd_;
    y_ += dt * yd_;
  }

  double value() const { return y_; }
  double rate() const { return yd_; }
  double accel() const { return ydd_; }

 private:
  double wn_ = 1.0;
  double y_ = 0.0;
  double yd_ = 0.0;
  double ydd_ = 0.0;
};

// Two cascaded critically damped sections (fourth-order reference shaping).
class FourthOrderTracker {
 public:
  FourthOrderTracker() = default;
  explicit FourthOrderTracker(double cutoff_hz) : a_(cutoff_hz), b_(cutoff_hz) {}

  void reset(double y0) {
    a_.reset(y0);
    b_.reset(y0);
  }

  void step(double u, double dt) {
    a_.step(u, dt);
    b_.step(a_.value(), dt);
  }

  double value() const { return b_.value(); }
  double rate() const { return b_.rate(); }
  double accel() const { return b_.accel(); }

 private:
  SecondOrderTracker a_{1.0};
  SecondOrderTracker b_{1.0};
};

// Finite difference followed by a low pass; cascaded twice this provides the
// smoothed first and second derivatives of a sampled reference.
class SmoothedDifferentiator {
 public:
  SmoothedDifferentiator() = default;
  explicit SmoothedDifferentiator(double cutoff_hz)
      : lp1_(1.0 / (2.0 * std::numbers::pi * cutoff_hz)),
        lp2_(1.0 / (2.0 * std::numbers::pi * cutoff_hz)) {}

  void reset(double x0) {
    prev0_ = x0;
    prev1_ = 0.0;
    lp1_.reset(0.0);
    lp2_.reset(0.0);
    primed_ = false;
  }

  void step(double x, double dt) {
    if (!primed_) {
      prev0_ = x;
      primed_ = true;
    }
    const double d1 = (x - prev0_) / dt;
    prev0_ = x;
    const double v = lp1_.step(d1, dt);
    const double d2 = (v - prev1_) / dt;
    prev1_ = v;
    lp2_.step(d2, dt);
  }

  double rate() const { return lp1_.value(); }
  double accel() const { return lp2_.value(); }

 private:
  FirstOrderLowPass lp1_{1.0};
  FirstOrderLowPass lp2_{1.0};
  double prev0_ = 0.0;
  double prev1_ = 0.0;
  bool primed_ = false;
};

}  // namespace marinesim

#endif
