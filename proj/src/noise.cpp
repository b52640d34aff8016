#include "marinesim/noise.hpp"

#include <cmath>
#include <numbers>

namespace marinesim {

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

GaussianRng::GaussianRng(uint64_t seed) {
  uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

uint64_t GaussianRng::next_u64() {
  // xoshiro256** step.
  const uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double GaussianRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double GaussianRng::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

NoiseChannel::NoiseChannel(double target_mav, double cutoff_hz, double dt) {
  target_ = target_mav;
  pole_ = std::exp(-2.0 * std::numbers::pi * cutoff_hz * dt);
  // Stationary output variance of y_k = a y_{k-1} + (1-a) w_k is
  // sigma_w^2 (1-a)/(1+a); solve sigma_w for mav = sigma_y sqrt(2/pi).
  const double sigma_y = target_mav * std::sqrt(std::numbers::pi / 2.0);
  sigma_in_ = sigma_y * std::sqrt((1.0 + pole_) / (1.0 - pole_));
}

double NoiseChannel::sample(GaussianRng& rng) {
  const double w = sigma_in_ * rng.next();
  y_ = pole_ * y_ + (1.0 - pole_) * w;
  return y_;
}

SensorModel::SensorModel(const NoiseSpec& spec, double sample_dt)
    : spec_(spec), dt_(sample_dt), rng_(spec.seed) {
  const double fc = spec.cutoff_hz;
  channels_[kNoiseXu] = NoiseChannel(spec.position_m, fc, dt_);
  channels_[kNoiseZu] = NoiseChannel(spec.position_m, fc, dt_);
  channels_[kNoiseThetaU] = NoiseChannel(spec.pitch_rad, fc, dt_);
  channels_[kNoiseAlpha] = NoiseChannel(spec.elevation_rad, fc, dt_);
  channels_[kNoiseR] = NoiseChannel(spec.range_m, fc, dt_);
  channels_[kNoiseVxu] = NoiseChannel(spec.velocity_mps, fc, dt_);
  channels_[kNoiseVzu] = NoiseChannel(spec.velocity_mps, fc, dt_);
  channels_[kNoiseThetaURate] = NoiseChannel(spec.pitch_rate_radps, fc, dt_);
  channels_[kNoiseAlphaRate] = NoiseChannel(spec.elevation_rate_radps, fc, dt_);
  channels_[kNoiseRdot] = NoiseChannel(spec.velocity_mps, fc, dt_);
  channels_[kNoiseAxu] = NoiseChannel(spec.accel_mps2, fc, dt_);
  channels_[kNoiseAzu] = NoiseChannel(spec.accel_mps2, fc, dt_);
  channels_[kNoiseRddot] = NoiseChannel(spec.accel_mps2, fc, dt_);
  channels_[kNoiseAlphaAccel] = NoiseChannel(spec.elevation_accel_radps2, fc, dt_);
}

Feedback SensorModel::measure(const Feedback& truth) {
  if (!spec_.enabled) {
    Feedback clean = truth;
    derive_buoy_feedback(clean);
    return clean;
  }
  Feedback fb = truth;
  fb.x_u += channels_[kNoiseXu].sample(rng_);
  fb.z_u += channels_[kNoiseZu].sample(rng_);
  fb.theta_u += channels_[kNoiseThetaU].sample(rng_);
  fb.alpha += channels_[kNoiseAlpha].sample(rng_);
  fb.r += channels_[kNoiseR].sample(rng_);
  fb.vx_u += channels_[kNoiseVxu].sample(rng_);
  fb.vz_u += channels_[kNoiseVzu].sample(rng_);
  fb.theta_u_rate += channels_[kNoiseThetaURate].sample(rng_);
  fb.alphadot += channels_[kNoiseAlphaRate].sample(rng_);
  fb.rdot += channels_[kNoiseRdot].sample(rng_);
  fb.ax_u += channels_[kNoiseAxu].sample(rng_);
  fb.az_u += channels_[kNoiseAzu].sample(rng_);
  fb.rddot += channels_[kNoiseRddot].sample(rng_);
  fb.alphaddot += channels_[kNoiseAlphaAccel].sample(rng_);
  derive_buoy_feedback(fb);
  return fb;
}

std::array<double, kNoiseChannelCount> SensorModel::targets() const {
  std::array<double, kNoiseChannelCount> out{};
  for (int i = 0; i < kNoiseChannelCount; ++i) out[i] = channels_[i].target();
  return out;
}

std::array<double, kNoiseChannelCount> SensorModel::empirical_mav(double horizon_s) const {
  // Replay an independent copy so the verification does not consume the
  // scenario's noise stream.
  SensorModel probe(spec_, dt_);
  const int n = static_cast<int>(horizon_s / dt_);
  std::array<double, kNoiseChannelCount> acc{};
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < kNoiseChannelCount; ++c) {
      acc[c] += std::abs(probe.channels_[c].sample(probe.rng_));
    }
  }
  for (auto& a : acc) a /= n;
  return acc;
}

double SensorModel::verify_calibration(double horizon_s) const {
  const auto mav = empirical_mav(horizon_s);
  const auto tgt = targets();
  double worst = 0.0;
  for (int c = 0; c < kNoiseChannelCount; ++c) {
    if (tgt[c] <= 0.0) continue;
    worst = std::max(worst, std::abs(mav[c] - tgt[c]) / tgt[c]);
  }
  return worst;
}

}  // namespace marinesim
