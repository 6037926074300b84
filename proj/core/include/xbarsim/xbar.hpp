#pragma once

#include <span>
#include <vector>

#include "xbarsim/clements.hpp"
#include "xbarsim/linalg.hpp"
#include "xbarsim/mzi.hpp"

namespace xbarsim {

class RandomStream;

/// Crossbar geometry for an N x M operator padded to N_f rows.
struct XbarTopology {
  int n = 0;                 ///< active input rows
  int m = 0;                 ///< columns
  int n_f = 0;               ///< smallest power of two >= n
  int log2_nf = 0;
  int m_fwd = 0;             ///< crossings per forwarding row per column
  int recomb_crossings = 0;  ///< crossings along each recombination path

  bool operator==(const XbarTopology&) const = default;
};

/// Throws DomainError for n < 2 or m < 1.
///
/// N_f = 2: no crossings. N_f >= 4: m_fwd = max(1, log2 N_f - 2) and
/// recomb_crossings = N_f/2 - 1.
XbarTopology build_topology(int n, int m);

/// Column couplers: xi has M entries (xi_M = 1), t has M - 1 with
/// xi_c^2 + t_c^2 = 1.
struct SplitterDesign {
  std::vector<double> xi;
  std::vector<double> t;
};

/// Loss-balanced couplers: every column ends up with the same p_c.
SplitterDesign design_splitters(const XbarTopology& topology, const LossModel& loss);

/// All M-1 couplers share the first coupler of the balanced design.
SplitterDesign uniform_splitters(const XbarTopology& topology, const LossModel& loss);

/// Passive field transmission L_c (1-based column) through Y-junctions,
/// xi couplers and crossings. Throws DomainError when c is out of [1, M].
double passive_loss(int c, const XbarTopology& topology, const LossModel& loss);

enum class XbarMode { balanced, uniform };

struct XbarDevice {
  XbarTopology topology;
  ComplexMatrix weights{1, 1};  ///< N x M, |entry| <= 1
  std::vector<double> xi;
  std::vector<double> t;
  LossModel loss;
  XbarMode mode = XbarMode::balanced;
  int programming_steps = 1;
};

/// Diagonal of P: p_c = alpha T_node L_c (1/N_f) (prod_{q<c} t_q) xi_c.
struct TransmissionMatrix {
  std::vector<double> p;
};

TransmissionMatrix transmission_matrix(const XbarDevice& device);

/// Maps every element of `y` (N x M) onto its own node after scaling the
/// largest entry to magnitude 1. Throws DomainError for the zero matrix.
XbarDevice build_xbar(const ComplexMatrix& y, const LossModel& loss, XbarMode mode);

/// Column outputs for inputs x (length N, |x_r| <= 1), E_in = 1.
///
/// Sums every node's field column by column. DimensionError on a length
/// mismatch, DomainError when an input exceeds the modulator range.
std::vector<Complex> evaluate_xbar(const XbarDevice& device, std::span<const Complex> x);

/// The M x N operator P^T W^T that evaluate_xbar applies.
ComplexMatrix realized_matrix(const XbarDevice& device);

/// Closed-form insertion loss (dB) of the loss-balanced crossbar with
/// transparent nodes and a lossless modulator.
double xbar_insertion_loss(const XbarTopology& topology, const LossModel& loss);

/// As above with the node loss given explicitly instead of 2 IL_coup + 2 IL_ps,
/// so the passive coupler loss can stay fixed while IL_node is swept.
double xbar_insertion_loss(const XbarTopology& topology, const LossModel& loss,
                           double il_node_db);

/// Same quantity measured by driving a transparent, balanced device with
/// all-ones inputs and reading column 1's output power.
double simulated_xbar_insertion_loss(const XbarTopology& topology, const LossModel& loss);

/// Diagonal of (P^T)^-1. Throws DegenerateDeviceError when some p_c is 0.
std::vector<double> restoration_matrix(const XbarDevice& device);

/// restoration_matrix(device) applied to realized_matrix(device).
ComplexMatrix restored_matrix(const XbarDevice& device);

/// Copy of `device` with phase errors on every node.
XbarDevice perturb_xbar(const XbarDevice& device, PhaseErrorModel model, double sigma,
                        RandomStream& stream);

/// Copy of `device` with `offset` applied to node (row, col) only (0-based).
XbarDevice perturb_xbar_node(const XbarDevice& device, int row, int col,
                             const PhaseOffset& offset);

}  // namespace xbarsim
