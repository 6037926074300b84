#include "xbarsim/serialize.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "xbarsim/errors.hpp"

namespace xbarsim {
namespace {

using nlohmann::json;

constexpr int kIndent = 2;

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing key '") + key + "'");
  return *it;
}

double as_double(const json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw FormatError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<double> as_doubles(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& v : j) out.push_back(as_double(v, what));
  return out;
}

json matrix_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

void fill_part(const json& part, const char* name, Eigen::Index rows, Eigen::Index cols,
               Eigen::MatrixXcd& out, bool imag) {
  if (!part.is_array() || static_cast<Eigen::Index>(part.size()) != rows) {
    throw FormatError(std::string("'") + name + "' must have " + std::to_string(rows) + " rows");
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = part[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(std::string("'") + name + "' row " + std::to_string(r) + " must have " +
                        std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double v = as_double(row[static_cast<std::size_t>(c)], name);
      if (imag) {
        out(r, c).imag(v);
      } else {
        out(r, c).real(v);
      }
    }
  }
}

ComplexMatrix matrix_of(const json& j) {
  const int rows = as_int(require(j, "rows"), "rows");
  const int cols = as_int(require(j, "cols"), "cols");
  if (rows < 1 || cols < 1) throw DimensionError("matrix must be at least 1x1");
  Eigen::MatrixXcd data = Eigen::MatrixXcd::Zero(rows, cols);
  fill_part(require(j, "re"), "re", rows, cols, data, false);
  if (j.contains("im")) fill_part(j.at("im"), "im", rows, cols, data, true);
  return ComplexMatrix(std::move(data));
}

json loss_json(const LossModel& l) {
  return json{{"il_coup_db", l.il_coup_db},
              {"il_ps_db", l.il_ps_db},
              {"il_xi_db", l.il_xi_db},
              {"il_x_db", l.il_x_db},
              {"alpha_db", l.alpha_db}};
}

LossModel loss_of(const json& j) {
  if (!j.is_object()) throw FormatError("loss model must be a JSON object");
  LossModel l;
  for (const auto& [key, value] : j.items()) {
    if (key == "il_coup_db") {
      l.il_coup_db = as_double(value, "il_coup_db");
    } else if (key == "il_ps_db") {
      l.il_ps_db = as_double(value, "il_ps_db");
    } else if (key == "il_xi_db") {
      l.il_xi_db = as_double(value, "il_xi_db");
    } else if (key == "il_x_db") {
      l.il_x_db = as_double(value, "il_x_db");
    } else if (key == "alpha_db") {
      l.alpha_db = as_double(value, "alpha_db");
    } else {
      throw FormatError("unknown loss key '" + key + "'");
    }
  }
  l.validate();
  return l;
}

json mesh_nodes_json(const ClementsMesh& mesh) {
  json nodes = json::array();
  for (const MeshNode& node : mesh.nodes) {
    nodes.push_back(json{{"row", node.row},
                         {"layer", node.layer},
                         {"theta", node.settings.theta()},
                         {"phi", node.settings.phi()}});
  }
  return nodes;
}

ClementsMesh mesh_of(int n, const json& nodes, const json& phases, const char* name) {
  if (!nodes.is_array()) throw FormatError(std::string("'") + name + "' must be an array");
  ClementsMesh mesh;
  mesh.n = n;
  for (const json& node : nodes) {
    MeshNode m;
    m.row = as_int(require(node, "row"), "row");
    m.layer = as_int(require(node, "layer"), "layer");
    if (m.row < 0 || m.row + 1 >= n || m.layer < 0) {
      throw FormatError(std::string("node position out of range in '") + name + "'");
    }
    m.settings = NodeSettings(as_double(require(node, "theta"), "theta"),
                              as_double(require(node, "phi"), "phi"));
    mesh.nodes.push_back(m);
  }
  if (mesh.nodes.size() != static_cast<std::size_t>(n * (n - 1) / 2)) {
    throw FormatError(std::string("'") + name + "' must hold N(N-1)/2 nodes");
  }
  mesh.output_phases = as_doubles(phases, "output phases");
  if (mesh.output_phases.size() != static_cast<std::size_t>(n)) {
    throw FormatError("output phase screen must have N entries");
  }
  return mesh;
}

std::string_view mode_name(XbarMode mode) {
  return mode == XbarMode::balanced ? "balanced" : "uniform";
}

ClementsDevice clements_of(const json& j) {
  ClementsDevice dev;
  dev.n = as_int(require(j, "n"), "n");
  if (dev.n < 2) throw FormatError("n must be >= 2");
  dev.v_dagger_mesh =
      mesh_of(dev.n, require(j, "v_dagger"), require(j, "v_dagger_output_phases"), "v_dagger");
  dev.u_mesh = mesh_of(dev.n, require(j, "u"), require(j, "u_output_phases"), "u");
  const json& sigma = require(j, "sigma");
  if (!sigma.is_array() || sigma.size() != static_cast<std::size_t>(dev.n)) {
    throw FormatError("'sigma' must hold N attenuator settings");
  }
  for (const json& s : sigma) {
    dev.sigma_settings.emplace_back(as_double(require(s, "theta"), "theta"),
                                    as_double(require(s, "phi"), "phi"));
  }
  dev.loss = loss_of(require(j, "loss"));
  dev.programming_steps = dev.n * (dev.n - 1) / 2;
  return dev;
}

XbarDevice xbar_of(const json& j) {
  XbarDevice dev;
  const int n = as_int(require(j, "n"), "n");
  const int m = as_int(require(j, "m"), "m");
  dev.topology = build_topology(n, m);
  if (as_int(require(j, "n_f"), "n_f") != dev.topology.n_f) {
    throw FormatError("n_f does not match n");
  }
  const json& mode = require(j, "mode");
  if (mode == "balanced") {
    dev.mode = XbarMode::balanced;
  } else if (mode == "uniform") {
    dev.mode = XbarMode::uniform;
  } else {
    throw FormatError("mode must be \"balanced\" or \"uniform\"");
  }
  json weights = require(j, "weights");
  if (weights.is_object() && !weights.contains("rows")) {
    weights["rows"] = n;
    weights["cols"] = m;
  }
  dev.weights = matrix_of(weights);
  if (dev.weights.rows() != n || dev.weights.cols() != m) {
    throw FormatError("weights must be n x m");
  }
  if (dev.weights.max_abs() > 1.0 + 1e-12) throw DomainError("weight magnitudes must be <= 1");
  dev.xi = as_doubles(require(j, "xi"), "xi");
  dev.t = as_doubles(require(j, "t"), "t");
  if (dev.xi.size() != static_cast<std::size_t>(m) ||
      dev.t.size() != static_cast<std::size_t>(m - 1)) {
    throw FormatError("xi must have m entries and t m - 1");
  }
  dev.loss = loss_of(require(j, "loss"));
  return dev;
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m) { return matrix_json(m).dump(kIndent); }

ComplexMatrix matrix_from_json(std::string_view text) { return matrix_of(parse(text)); }

std::string loss_to_json(const LossModel& loss) { return loss_json(loss).dump(kIndent); }

LossModel loss_from_json(std::string_view text) { return loss_of(parse(text)); }

std::string vector_to_json(std::span<const Complex> v) {
  json re = json::array();
  json im = json::array();
  for (const Complex& z : v) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}}.dump(kIndent);
}

std::vector<Complex> vector_from_json(std::string_view text) {
  const json j = parse(text);
  std::vector<double> re;
  std::vector<double> im;
  if (j.is_array()) {
    re = as_doubles(j, "vector");
  } else {
    re = as_doubles(require(j, "re"), "re");
    if (j.contains("im")) im = as_doubles(j.at("im"), "im");
  }
  if (!im.empty() && im.size() != re.size()) throw FormatError("'re' and 'im' lengths differ");
  std::vector<Complex> out(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    out[i] = Complex(re[i], im.empty() ? 0.0 : im[i]);
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag())) {
      throw DomainError("vector entries must be finite");
    }
  }
  return out;
}

std::string device_to_json(const ClementsDevice& device) {
  json sigma = json::array();
  for (const NodeSettings& s : device.sigma_settings) {
    sigma.push_back(json{{"theta", s.theta()}, {"phi", s.phi()}});
  }
  json j{{"arch", "svd-clements"},
         {"n", device.n},
         {"v_dagger", mesh_nodes_json(device.v_dagger_mesh)},
         {"v_dagger_output_phases", device.v_dagger_mesh.output_phases},
         {"sigma", std::move(sigma)},
         {"u", mesh_nodes_json(device.u_mesh)},
         {"u_output_phases", device.u_mesh.output_phases},
         {"loss", loss_json(device.loss)},
         {"programming_steps", device.programming_steps}};
  return j.dump(kIndent);
}

std::string device_to_json(const XbarDevice& device) {
  json weights = matrix_json(device.weights);
  json j{{"arch", "xbar"},
         {"n", device.topology.n},
         {"m", device.topology.m},
         {"n_f", device.topology.n_f},
         {"mode", mode_name(device.mode)},
         {"xi", device.xi},
         {"t", device.t},
         {"weights", std::move(weights)},
         {"loss", loss_json(device.loss)},
         {"restoration", restoration_matrix(device)},
         {"programming_steps", device.programming_steps}};
  return j.dump(kIndent);
}

Device device_from_json(std::string_view text) {
  const json j = parse(text);
  const json& arch = require(j, "arch");
  if (arch == "svd-clements") return clements_of(j);
  if (arch == "xbar") return xbar_of(j);
  throw FormatError("unknown device arch");
}

}  // namespace xbarsim
