#ifndef MARINESIM_NOISE_HPP
#define MARINESIM_NOISE_HPP

#include <array>
#include <cstdint>
#include <string>

#include "marinesim/controller.hpp"

namespace marinesim {

// Deterministic normal deviates: xoshiro-free, splitmix64-seeded 64-bit
// generator with a Box-Muller transform. Bit-stable across platforms, which
// the byte-identical trace contract relies on.
class GaussianRng {
 public:
  explicit GaussianRng(uint64_t seed);
  double next();          // standard normal
  double uniform();       // [0, 1)

 private:
  uint64_t next_u64();
  uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One additive feedback corruption: white Gaussian shaped by a first-order
// low pass, with the input variance solved so the stationary output has the
// requested mean absolute value (mav = sigma * sqrt(2/pi)).
class NoiseChannel {
 public:
  NoiseChannel() = default;
  NoiseChannel(double target_mav, double cutoff_hz, double dt);

  double sample(GaussianRng& rng);
  double target() const { return target_; }

 private:
  double target_ = 0.0;
  double pole_ = 0.0;
  double sigma_in_ = 0.0;
  double y_ = 0.0;
};

// Mean-absolute-error targets per feedback channel. Position-level targets
// follow the sensor-accuracy figures of the study; rate and acceleration
// channels default to GPS/INS-grade values and are configuration-exposed.
struct NoiseSpec {
  bool enabled = true;
  uint64_t seed = 1;
  double cutoff_hz = 10.0;
  double position_m = 0.02;        // x_u, z_u
  double pitch_rad = 0.008726646259971648;      // 0.5 deg
  double elevation_rad = 0.002792526803190927;  // 0.16 deg
  double range_m = 0.02;           // r
  double velocity_mps = 0.02;      // xdot_u, zdot_u, rdot
  double pitch_rate_radps = 0.008726646259971648;
  double elevation_rate_radps = 0.002792526803190927;
  double accel_mps2 = 0.05;        // xddot_u, zddot_u, rddot
  double elevation_accel_radps2 = 0.002792526803190927;
};

// Channel order of the corrupted primaries.
enum NoiseChannelIndex {
  kNoiseXu = 0,
  kNoiseZu,
  kNoiseThetaU,
  kNoiseAlpha,
  kNoiseR,
  kNoiseVxu,
  kNoiseVzu,
  kNoiseThetaURate,
  kNoiseAlphaRate,
  kNoiseRdot,
  kNoiseAxu,
  kNoiseAzu,
  kNoiseRddot,
  kNoiseAlphaAccel,
  kNoiseChannelCount
};

// Corrupts the primary feedback channels and re-derives the buoy states from
// them. With noise disabled the output equals the truth.
class SensorModel {
 public:
  SensorModel(const NoiseSpec& spec, double sample_dt);

  Feedback measure(const Feedback& truth);

  // Empirical mean absolute value per channel over a calibration horizon;
  // used by the startup verification.
  std::array<double, kNoiseChannelCount> empirical_mav(double horizon_s) const;
  std::array<double, kNoiseChannelCount> targets() const;

  // Largest relative mav calibration error over the named horizon.
  double verify_calibration(double horizon_s) const;

 private:
  NoiseSpec spec_;
  double dt_;
  GaussianRng rng_;
  std::array<NoiseChannel, kNoiseChannelCount> channels_;
};

}  // namespace marinesim

#endif
