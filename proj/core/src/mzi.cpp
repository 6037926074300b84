#include "xbarsim/mzi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xbarsim/errors.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void check_loss(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError(std::string("loss '") + name + "' must be finite and >= 0");
  }
}

}  // namespace

double db_to_field(double il_db) { return std::pow(10.0, -il_db / 20.0); }

LossModel LossModel::with_node_loss(double il_node_db) const {
  check_loss(il_node_db, "il_node_db");
  LossModel out = *this;
  if (il_node_db >= 2.0 * il_coup_db) {
    out.il_ps_db = (il_node_db - 2.0 * il_coup_db) / 2.0;
  } else {
    out.il_coup_db = il_node_db / 2.0;
    out.il_ps_db = 0.0;
  }
  return out;
}

void LossModel::validate() const {
  check_loss(il_coup_db, "il_coup_db");
  check_loss(il_ps_db, "il_ps_db");
  check_loss(il_xi_db, "il_xi_db");
  check_loss(il_x_db, "il_x_db");
  check_loss(alpha_db, "alpha_db");
}

double LossModel::l_coup() const { return db_to_field(il_coup_db); }
double LossModel::k() const { return db_to_field(il_ps_db); }
double LossModel::l_xi() const { return db_to_field(il_xi_db); }
double LossModel::l_x() const { return db_to_field(il_x_db); }
double LossModel::alpha() const { return db_to_field(alpha_db); }

double LossModel::t_node() const {
  const double lc = l_coup();
  const double kk = k();
  return lc * lc * kk * kk;
}

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

NodeSettings::NodeSettings(double theta, double phi)
    : theta_(wrap_angle(theta)), phi_(wrap_angle(phi)) {}

Mat2 node_transfer(const NodeSettings& s, const LossModel& loss) {
  // i e^{i theta/2} [[sin, cos], [cos, -sin]](theta/2) * diag(e^{i phi}, 1)
  const double half = s.theta() / 2.0;
  const double sn = std::sin(half);
  const double cs = std::cos(half);
  const Complex pre = loss.t_node() * kI * std::exp(kI * half);
  const Complex ephi = std::exp(kI * s.phi());
  Mat2 m;
  m << pre * sn * ephi, pre * cs,
       pre * cs * ephi, -pre * sn;
  return m;
}

Complex voa_port_transfer(const NodeSettings& s, const LossModel& loss) {
  const double half = s.theta() / 2.0;
  return loss.t_node() * kI * std::exp(kI * (half + s.phi())) * std::sin(half);
}

VoaSetting voa_transfer(double target_amplitude, const LossModel& loss) {
  if (!(target_amplitude >= 0.0 && target_amplitude <= 1.0)) {
    throw DomainError("attenuator amplitude must lie in [0, 1], got " +
                      std::to_string(target_amplitude));
  }
  const double theta = 2.0 * std::asin(target_amplitude);
  const NodeSettings s(theta, -std::numbers::pi / 2.0 - theta / 2.0);
  return VoaSetting{s, voa_port_transfer(s, loss)};
}

Complex xbar_node_transfer(double w, double phi, const LossModel& loss) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError("crossbar node weight must lie in [0, 1], got " +
                      std::to_string(w));
  }
  return loss.t_node() * w * std::exp(kI * phi);
}

PhaseOffset draw_phase_offset(double sigma, RandomStream& stream) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("phase error sigma must be finite and >= 0");
  }
  const double dtheta = stream.normal(sigma);
  const double dphi = stream.normal(sigma);
  return PhaseOffset{dtheta, dphi};
}

NodeSettings apply_offset(const NodeSettings& s, const PhaseOffset& offset) {
  if (offset.dtheta == 0.0 && offset.dphi == 0.0) return s;
  return NodeSettings(s.theta() + offset.dtheta, s.phi() + offset.dphi);
}

NodeSettings perturb_phases(const NodeSettings& s, double sigma,
                            RandomStream& stream) {
  return apply_offset(s, draw_phase_offset(sigma, stream));
}

Complex perturbed_xbar_weight(Complex w, const PhaseOffset& offset) {
  if (offset.dtheta == 0.0 && offset.dphi == 0.0) return w;
  const double half = std::asin(std::min(std::abs(w), 1.0)) + offset.dtheta / 2.0;
  return std::sin(half) *
         std::exp(Complex(0.0, std::arg(w) + offset.dphi + offset.dtheta / 2.0));
}

}  // namespace xbarsim
