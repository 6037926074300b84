#pragma once

#include <Eigen/Dense>

#include "xbarsim/linalg.hpp"

namespace xbarsim {

class RandomStream;

using Mat2 = Eigen::Matrix2cd;

/// Component insertion losses in dB (power). Field coefficients follow as
/// 10^(-IL/20).
struct LossModel {
  double il_coup_db = 0.0;  ///< 3 dB coupler / Y-junction excess loss
  double il_ps_db = 0.0;    ///< per phase shifter
  double il_xi_db = 0.0;    ///< per xi^2:t^2 directional coupler
  double il_x_db = 0.0;     ///< per waveguide crossing
  double alpha_db = 0.0;    ///< input modulator at transparency

  static LossModel lossless() { return {}; }
  /// Silicon-photonic passives: 0.06 dB couplers, 0.1 dB xi couplers,
  /// 0.02 dB crossings, lossless phase shifters and modulators.
  static LossModel silicon_passives() { return {0.06, 0.0, 0.1, 0.02, 0.0}; }

  /// Copy whose MZI node loss totals `il_node_db`.
  ///
  /// Keeps il_coup_db and assigns the remainder to the two phase shifters.
  /// When the target is below the two couplers' share, the node loss is split
  /// evenly over the couplers and the phase shifters become lossless.
  LossModel with_node_loss(double il_node_db) const;

  /// Throws DomainError unless every loss is finite and >= 0.
  void validate() const;

  double l_coup() const;
  double k() const;
  double l_xi() const;
  double l_x() const;
  double alpha() const;
  /// Node field transmittivity l_coup^2 k^2.
  double t_node() const;
  /// 2 IL_coup + 2 IL_ps.
  double il_node_db() const { return 2.0 * il_coup_db + 2.0 * il_ps_db; }

  bool operator==(const LossModel&) const = default;
};

/// dB power loss -> field transmission coefficient.
double db_to_field(double il_db);

/// MZI phases, stored reduced to [0, 2pi).
class NodeSettings {
 public:
  NodeSettings() = default;
  NodeSettings(double theta, double phi);

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  bool operator==(const NodeSettings&) const = default;

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Reduces an angle into [0, 2pi).
double wrap_angle(double a);

/// Transfer matrix T_node * B diag(e^{i theta}, 1) B diag(e^{i phi}, 1),
/// B = [[1, i], [i, 1]] / sqrt(2).
///
/// theta = pi is the bar state, theta = 0 the cross state. Loss is a scalar on
/// the whole node (both arms equally lossy).
Mat2 node_transfer(const NodeSettings& s, const LossModel& loss);

/// MZI used as a single-port attenuator: input 0 -> output 0.
struct VoaSetting {
  NodeSettings settings;
  Complex transfer;
};

/// Programs an attenuator for `target_amplitude` in [0, 1].
///
/// theta = 2 asin(a); phi cancels the MZI's intrinsic phase so the lossless
/// transfer is the real amplitude itself.
VoaSetting voa_transfer(double target_amplitude, const LossModel& loss);

/// Connected-port field transfer of an attenuator with arbitrary settings.
Complex voa_port_transfer(const NodeSettings& s, const LossModel& loss);

/// Crossbar node: T_node * w * e^{i phi}. Throws DomainError for w outside [0, 1].
Complex xbar_node_transfer(double w, double phi, const LossModel& loss);

/// Additive phase error on one node.
struct PhaseOffset {
  double dtheta = 0.0;
  double dphi = 0.0;
};

/// Draws (dtheta, dphi) i.i.d. Normal(0, sigma^2); DomainError for sigma < 0.
PhaseOffset draw_phase_offset(double sigma, RandomStream& stream);

NodeSettings apply_offset(const NodeSettings& s, const PhaseOffset& offset);

/// settings + independent Normal(0, sigma^2) errors on theta and phi.
NodeSettings perturb_phases(const NodeSettings& s, double sigma,
                            RandomStream& stream);

/// Realized weight of a crossbar node programmed for `w` after a phase error.
///
/// The node is an attenuator MZI (theta = 2 asin|w|, intrinsic phase
/// compensated at design) followed by a phase shifter at arg(w). A theta error
/// changes both the amplitude sin(theta/2) and the MZI's output phase by
/// dtheta/2, so the result stays 2pi-periodic in dtheta. |result| <= 1.
Complex perturbed_xbar_weight(Complex w, const PhaseOffset& offset);

}  // namespace xbarsim
