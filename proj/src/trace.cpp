#include "marinesim/trace.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace marinesim {

namespace {

Mode mode_from_string(const std::string& s) {
  if (s == "free") return Mode::Free;
  if (s == "ready") return Mode::ReadyToPull;
  if (s == "reposition") return Mode::Repositioning;
  if (s == "pulling") return Mode::Pulling;
  throw std::invalid_argument("trace: bad mode '" + s + "'");
}

Configuration config_from_string(const std::string& s) {
  if (s == "front") return Configuration::Front;
  if (s == "rear") return Configuration::Rear;
  throw std::invalid_argument("trace: bad configuration '" + s + "'");
}

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

const std::vector<std::string>& Trace::column_names() {
  static const std::vector<std::string> names = {
      "t_s", "mode", "configuration", "coupled",
      "x_b_m", "z_b_m", "theta_b_rad", "vx_b_mps", "vz_b_mps", "w_b_radps",
      "x_u_m", "z_u_m", "theta_u_rad", "vx_u_mps", "vz_u_mps", "w_u_radps",
      "r_m", "alpha_rad", "rdot_mps", "alphadot_radps",
      "tension_n", "vol_im_ratio", "zeta_m",
      "u1_cmd_n", "u1_n", "u2_cmd_nm", "u2_nm",
      "v_ref_mps", "r_ref_m", "alpha_ref_rad", "zu_ref_m",
      "hanging_risk", "airborne", "thrust_gate",
      "fb_v_mps", "fb_z_u_m", "fb_r_m", "fb_alpha_rad", "fb_theta_u_rad"};
  return names;
}

std::string Trace::to_csv() const {
  std::string out;
  out.reserve(rows_.size() * 400 + 512);
  const auto& names = column_names();
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    append_num(out, r.t);
    out += ',';
    out += to_string(r.mode);
    out += ',';
    out += to_string(r.configuration);
    out += ',';
    out += std::to_string(r.coupled);
    for (double v : {r.x_b, r.z_b, r.theta_b, r.vx_b, r.vz_b, r.w_b,
                     r.x_u, r.z_u, r.theta_u, r.vx_u, r.vz_u, r.w_u,
                     r.r, r.alpha, r.rdot, r.alphadot,
                     r.tension, r.vol_ratio, r.zeta,
                     r.u1_cmd, r.u1, r.u2_cmd, r.u2,
                     r.v_ref, r.r_ref, r.alpha_ref, r.zu_ref}) {
      out += ',';
      append_num(out, v);
    }
    for (int v : {r.hanging_risk, r.airborne, r.thrust_gate}) {
      out += ',';
      out += std::to_string(v);
    }
    for (double v : {r.fb_v, r.fb_z_u, r.fb_r, r.fb_alpha, r.fb_theta_u}) {
      out += ',';
      append_num(out, v);
    }
    out += '\n';
  }
  return out;
}

void Trace::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("trace: cannot open '" + path + "' for writing");
  const std::string text = to_csv();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("trace: short write to '" + path + "'");
}

Trace Trace::from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace: empty CSV");
  {
    std::string expected;
    const auto& names = column_names();
    for (size_t i = 0; i < names.size(); ++i) {
      if (i) expected += ',';
      expected += names[i];
    }
    if (line != expected) throw std::invalid_argument("trace: unexpected CSV header");
  }
  Trace t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    f.reserve(column_names().size());
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != column_names().size()) {
      throw std::invalid_argument("trace: bad field count in row");
    }
    TraceRow r;
    size_t i = 0;
    auto num = [&]() { return std::strtod(f[i++].c_str(), nullptr); };
    r.t = num();
    r.mode = mode_from_string(f[i++]);
    r.configuration = config_from_string(f[i++]);
    r.coupled = std::stoi(f[i++]);
    r.x_b = num(); r.z_b = num(); r.theta_b = num();
    r.vx_b = num(); r.vz_b = num(); r.w_b = num();
    r.x_u = num(); r.z_u = num(); r.theta_u = num();
    r.vx_u = num(); r.vz_u = num(); r.w_u = num();
    r.r = num(); r.alpha = num(); r.rdot = num(); r.alphadot = num();
    r.tension = num(); r.vol_ratio = num(); r.zeta = num();
    r.u1_cmd = num(); r.u1 = num(); r.u2_cmd = num(); r.u2 = num();
    r.v_ref = num(); r.r_ref = num(); r.alpha_ref = num(); r.zu_ref = num();
    r.hanging_risk = std::stoi(f[i++]);
    r.airborne = std::stoi(f[i++]);
    r.thrust_gate = std::stoi(f[i++]);
    r.fb_v = num(); r.fb_z_u = num(); r.fb_r = num(); r.fb_alpha = num();
    r.fb_theta_u = num();
    t.push(r);
  }
  return t;
}

Trace Trace::from_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("trace: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_csv_text(ss.str());
}

bool Trace::operator==(const Trace& other) const {
  if (rows_.size() != other.rows_.size()) return false;
  for (size_t i = 0; i < rows_.size(); ++i) {
    const TraceRow& a = rows_[i];
    const TraceRow& b = other.rows_[i];
    const bool same =
        a.t == b.t && a.mode == b.mode && a.configuration == b.configuration &&
        a.coupled == b.coupled && a.x_b == b.x_b && a.z_b == b.z_b &&
        a.theta_b == b.theta_b && a.vx_b == b.vx_b && a.vz_b == b.vz_b &&
        a.w_b == b.w_b && a.x_u == b.x_u && a.z_u == b.z_u &&
        a.theta_u == b.theta_u && a.vx_u == b.vx_u && a.vz_u == b.vz_u &&
        a.w_u == b.w_u && a.r == b.r && a.alpha == b.alpha && a.rdot == b.rdot &&
        a.alphadot == b.alphadot && a.tension == b.tension &&
        a.vol_ratio == b.vol_ratio && a.zeta == b.zeta && a.u1_cmd == b.u1_cmd &&
        a.u1 == b.u1 && a.u2_cmd == b.u2_cmd && a.u2 == b.u2 &&
        a.v_ref == b.v_ref && a.r_ref == b.r_ref && a.alpha_ref == b.alpha_ref &&
        a.zu_ref == b.zu_ref && a.hanging_risk == b.hanging_risk &&
        a.airborne == b.airborne && a.thrust_gate == b.thrust_gate &&
        a.fb_v == b.fb_v && a.fb_z_u == b.fb_z_u && a.fb_r == b.fb_r &&
        a.fb_alpha == b.fb_alpha && a.fb_theta_u == b.fb_theta_u;
    if (!same) return false;
  }
  return true;
}

}  // namespace marinesim
