#ifndef MARINESIM_TRACE_HPP
#define MARINESIM_TRACE_HPP

#include <string>
#include <vector>

#include "marinesim/controller.hpp"

namespace marinesim {

// One decimated sample of the full simulation state. The CSV column order is
// fixed and documented in the README; re-parsing a written file reproduces
// the in-memory trace exactly.
struct TraceRow {
  double t = 0.0;
  Mode mode = Mode::Free;
  Configuration configuration = Configuration::Front;
  int coupled = 0;
  double x_b = 0.0, z_b = 0.0, theta_b = 0.0;
  double vx_b = 0.0, vz_b = 0.0, w_b = 0.0;
  double x_u = 0.0, z_u = 0.0, theta_u = 0.0;
  double vx_u = 0.0, vz_u = 0.0, w_u = 0.0;
  double r = 0.0, alpha = 0.0, rdot = 0.0, alphadot = 0.0;
  double tension = 0.0;
  double vol_ratio = 0.0;
  double zeta = 0.0;
  double u1_cmd = 0.0, u1 = 0.0, u2_cmd = 0.0, u2 = 0.0;
  double v_ref = 0.0, r_ref = 0.0, alpha_ref = 0.0, zu_ref = 0.0;
  int hanging_risk = 0, airborne = 0, thrust_gate = 0;
  double fb_v = 0.0, fb_z_u = 0.0, fb_r = 0.0, fb_alpha = 0.0, fb_theta_u = 0.0;
};

class Trace {
 public:
  static const std::vector<std::string>& column_names();

  void push(const TraceRow& row) { rows_.push_back(row); }
  const std::vector<TraceRow>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }
  void clear() { rows_.clear(); }

  void write_csv(const std::string& path) const;
  std::string to_csv() const;
  static Trace from_csv_file(const std::string& path);
  static Trace from_csv_text(const std::string& text);

  bool operator==(const Trace& other) const;

 private:
  std::vector<TraceRow> rows_;
};

}  // namespace marinesim

#endif
