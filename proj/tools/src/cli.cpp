#include "xbarsim_cli/cli.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xbarsim/errors.hpp"
#include "xbarsim/montecarlo.hpp"
#include "xbarsim/serialize.hpp"
#include "xbarsim/version.hpp"
#include "xbarsim/xbar.hpp"
#include "xbarsim_cli/output.hpp"
#include "xbarsim_cli/ranges.hpp"

namespace xbarsim::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::uint64_t seed = 0;
  std::string out;
  std::string loss_path;
  int threads = 1;
  std::string svg;
  int matrices = 500;
  int trials = 100;
  std::string phase_model = "shared";
  std::vector<std::string> archs;
  std::string mode = "balanced";
  std::string matrix_path;
  std::string device_path;
  std::string input_path;
  std::string n_text;
  std::string m_text;
  std::string node_loss_text;
  std::string sigma_text;
};

struct Outputs {
  std::vector<std::string> files;
};

LossModel load_loss(const Options& o) {
  if (o.loss_path.empty()) return LossModel::silicon_passives();
  const std::string text = read_file(o.loss_path);
  try {
    return loss_from_json(text);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("loss model: ") + e.what());
  }
}

std::vector<Architecture> architectures(const Options& o) {
  if (o.archs.empty()) return {Architecture::xbar, Architecture::svd_clements};
  std::vector<Architecture> out;
  for (const std::string& a : o.archs) out.push_back(parse_architecture(a));
  return out;
}

PhaseErrorModel phase_model(const std::string& name) {
  if (name == "shared") return PhaseErrorModel::shared_per_trial;
  if (name == "independent") return PhaseErrorModel::independent_per_node;
  throw ConfigError("phase model must be 'shared' or 'independent'");
}

std::string_view phase_model_name(PhaseErrorModel m) {
  return m == PhaseErrorModel::shared_per_trial ? "shared" : "independent";
}

std::vector<int> required_ints(const std::string& text, const char* flag) {
  if (text.empty()) throw ConfigError(std::string(flag) + " is required");
  return parse_int_list(text);
}

std::vector<double> required_reals(const std::string& text, const char* flag) {
  if (text.empty()) throw ConfigError(std::string(flag) + " is required");
  return parse_real_list(text);
}

void require_out(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
}

json loss_json(const LossModel& l) { return json::parse(loss_to_json(l)); }

json sweep_json(const SweepConfig& c) {
  json archs = json::array();
  for (Architecture a : c.architectures) archs.push_back(std::string(to_string(a)));
  return json{{"architectures", archs},
              {"n", c.n_values},
              {"il_node_db", c.il_node_grid},
              {"sigma_rad", c.sigma_grid},
              {"matrices", c.n_matrices},
              {"trials", c.n_phase_trials},
              {"passive_losses", loss_json(c.passive_losses)},
              {"phase_model", phase_model_name(c.phase_model)},
              {"threads", c.threads}};
}

SweepConfig sweep_config(const Options& o) {
  SweepConfig c;
  c.architectures = architectures(o);
  c.n_values = required_ints(o.n_text, "--n");
  c.n_matrices = o.matrices;
  c.n_phase_trials = o.trials;
  c.passive_losses = load_loss(o);
  c.master_seed = o.seed;
  c.phase_model = phase_model(o.phase_model);
  c.threads = o.threads;
  if (o.matrices < 1) throw ConfigError("--matrices must be >= 1");
  if (o.trials < 1) throw ConfigError("--trials must be >= 1");
  return c;
}

void maybe_svg(const Options& o, Outputs& outputs, const std::vector<Series>& series,
               std::string_view title, std::string_view x_label, std::string_view y_label) {
  if (o.svg.empty()) return;
  write_atomic(o.svg, render_svg(series, title, x_label, y_label));
  outputs.files.push_back(o.svg);
}

json run_fig3(const Options& o, Outputs& outputs) {
  require_out(o);
  SweepConfig c = sweep_config(o);
  c.il_node_grid = required_reals(o.node_loss_text, "--node-loss");
  const auto rows = insertion_loss_sweep(c);

  std::string csv = "arch,case,n,il_node_db,il_total_db\n";
  std::map<std::string, Series> series;
  std::vector<std::string> order;
  for (const InsertionLossRow& r : rows) {
    csv += std::string(to_string(r.arch)) + ',' + r.path_case + ',' + std::to_string(r.n) + ',' +
           format_double(r.il_node_db) + ',' + format_double(r.il_total_db) + '\n';
    const std::string label =
        std::string(to_string(r.arch)) + ' ' + r.path_case + " N=" + std::to_string(r.n);
    if (!series.contains(label)) order.push_back(label);
    Series& s = series[label];
    s.label = label;
    s.x.push_back(r.il_node_db);
    s.y.push_back(r.il_total_db);
  }
  write_atomic(o.out, csv);
  outputs.files.push_back(o.out);
  std::vector<Series> ordered;
  for (const std::string& l : order) ordered.push_back(series[l]);
  maybe_svg(o, outputs, ordered, "Insertion loss", "IL_node (dB)", "total IL (dB)");
  json cfg = sweep_json(c);
  cfg.erase("sigma_rad");
  cfg.erase("matrices");
  cfg.erase("trials");
  cfg.erase("phase_model");
  return cfg;
}

json run_fidelity(const Options& o, Outputs& outputs, bool phase) {
  require_out(o);
  SweepConfig c = sweep_config(o);
  std::vector<FidelityReport> reports;
  if (phase) {
    c.sigma_grid = required_reals(o.sigma_text, "--sigma");
    reports = phase_fidelity_sweep(c);
  } else {
    c.il_node_grid = required_reals(o.node_loss_text, "--node-loss");
    reports = loss_fidelity_sweep(c);
  }

  std::string csv = phase ? "arch,n,sigma_rad,fidelity_mean,fidelity_std,n_samples,seed\n"
                          : "arch,n,il_node_db,fidelity_mean,fidelity_std,n_samples,seed\n";
  std::map<std::string, Series> series;
  std::vector<std::string> order;
  for (const FidelityReport& r : reports) {
    csv += std::string(to_string(r.arch)) + ',' + std::to_string(r.n) + ',' +
           format_double(r.sweep_value) + ',' + format_double(r.fidelity_mean) + ',' +
           format_double(r.fidelity_std) + ',' + std::to_string(r.n_samples) + ',' +
           std::to_string(r.master_seed) + '\n';
    const std::string label = std::string(to_string(r.arch)) + " N=" + std::to_string(r.n);
    if (!series.contains(label)) order.push_back(label);
    Series& s = series[label];
    s.label = label;
    s.x.push_back(r.sweep_value);
    s.y.push_back(r.fidelity_mean);
  }
  write_atomic(o.out, csv);
  outputs.files.push_back(o.out);
  std::vector<Series> ordered;
  for (const std::string& l : order) ordered.push_back(series[l]);
  maybe_svg(o, outputs, ordered, phase ? "Fidelity under phase errors" : "Fidelity under loss",
            phase ? "sigma (rad)" : "IL_node (dB)", "mean fidelity");

  json cfg = sweep_json(c);
  if (phase) {
    cfg.erase("il_node_db");
    cfg.erase("passive_losses");
    // Errors hit both meshes and the attenuator column of svd-clements.
    cfg["sigma_perturbed"] = true;
  } else {
    cfg.erase("sigma_rad");
    cfg.erase("trials");
    cfg.erase("phase_model");
  }
  return cfg;
}

XbarMode xbar_mode(const std::string& name) {
  if (name == "balanced") return XbarMode::balanced;
  if (name == "uniform") return XbarMode::uniform;
  throw ConfigError("--mode must be 'balanced' or 'uniform'");
}

json run_compile(const Options& o, Outputs& outputs) {
  require_out(o);
  if (o.matrix_path.empty()) throw ConfigError("--matrix is required");
  if (o.archs.size() != 1) throw ConfigError("compile needs exactly one --arch");
  const Architecture arch = parse_architecture(o.archs.front());
  const LossModel loss = load_loss(o);
  const ComplexMatrix target = matrix_from_json(read_file(o.matrix_path));
  std::string doc;
  if (arch == Architecture::xbar) {
    doc = device_to_json(build_xbar(target, loss, xbar_mode(o.mode)));
  } else {
    doc = device_to_json(build_svd_clements(target, loss));
  }
  write_atomic(o.out, doc + '\n');
  outputs.files.push_back(o.out);
  json cfg{{"arch", std::string(to_string(arch))},
           {"matrix", o.matrix_path},
           {"loss", loss_json(loss)}};
  if (arch == Architecture::xbar) cfg["mode"] = o.mode;
  return cfg;
}

json run_eval(const Options& o, Outputs& outputs, std::ostream& out) {
  if (o.device_path.empty()) throw ConfigError("--device is required");
  if (o.input_path.empty()) throw ConfigError("--input is required");
  const Device device = device_from_json(read_file(o.device_path));
  const std::vector<Complex> x = vector_from_json(read_file(o.input_path));
  std::vector<Complex> y;
  if (const auto* xb = std::get_if<XbarDevice>(&device)) {
    y = evaluate_xbar(*xb, x);
  } else {
    const ComplexMatrix t = evaluate_svd_clements(std::get<ClementsDevice>(device));
    if (static_cast<Eigen::Index>(x.size()) != t.cols()) {
      throw DimensionError("input length " + std::to_string(x.size()) + " does not match N = " +
                           std::to_string(t.cols()));
    }
    const Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXcd yv = t.data() * xv;
    y.assign(yv.data(), yv.data() + yv.size());
  }
  const std::string doc = vector_to_json(y) + '\n';
  if (o.out.empty()) {
    out << doc;
  } else {
    write_atomic(o.out, doc);
    outputs.files.push_back(o.out);
  }
  return json{{"device", o.device_path}, {"input", o.input_path}};
}

json run_stats(const Options& o, Outputs& outputs, std::ostream& out) {
  const std::vector<int> ns = required_ints(o.n_text, "--n");
  std::vector<int> ms;
  if (!o.m_text.empty()) {
    ms = parse_int_list(o.m_text);
    if (ms.size() != ns.size() && ms.size() != 1) {
      throw ConfigError("--m must give one value or one per --n");
    }
  }
  json rows = json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int n = ns[i];
    const int m = ms.empty() ? n : ms[ms.size() == 1 ? 0 : i];
    const SvdArchitectureStats s = svd_architecture_stats(n);
    const XbarTopology t = build_topology(n, m);
    rows.push_back(json{{"n", n},
                        {"svd-clements",
                         {{"nodes", s.nodes},
                          {"best_depth", s.best_depth},
                          {"worst_depth", s.worst_depth},
                          {"programming_steps", s.programming_steps}}},
                        {"xbar",
                         {{"m", t.m},
                          {"nodes", t.n * t.m},
                          {"n_f", t.n_f},
                          {"log2_nf", t.log2_nf},
                          {"m_fwd", t.m_fwd},
                          {"recomb_crossings", t.recomb_crossings},
                          {"programming_steps", 1}}}});
  }
  const std::string doc = rows.dump(2) + '\n';
  if (o.out.empty()) {
    out << doc;
  } else {
    write_atomic(o.out, doc);
    outputs.files.push_back(o.out);
  }
  return json{{"n", ns}, {"m", ms}};
}

void write_manifest(const std::string& command, const std::vector<std::string>& args,
                    const json& config, const Options& o, double seconds,
                    const Outputs& outputs) {
  if (outputs.files.empty()) return;
  json manifest{{"command", command},
                {"argv", args},
                {"config", config},
                {"master_seed", o.seed},
                {"version", kVersion},
                {"duration_s", seconds},
                {"outputs", outputs.files}};
  write_atomic(outputs.files.front() + ".manifest.json", manifest.dump(2) + '\n');
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output path");
  sub->add_option("--loss", o.loss_path, "loss model JSON (default: silicon passives)");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Crossbar and SVD-Clements photonic processor simulator", "xbarsim"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* fig3 = app.add_subcommand("fig3", "insertion loss versus node loss");
  add_common(fig3, o);
  fig3->add_option("--n", o.n_text, "matrix sizes, e.g. 4,8")->required();
  fig3->add_option("--node-loss", o.node_loss_text, "IL_node grid in dB, e.g. 0:2:0.05")
      ->required();
  fig3->add_option("--arch", o.archs, "xbar and/or svd-clements");
  fig3->add_option("--svg", o.svg, "also write an SVG chart");

  auto* floss = app.add_subcommand("fidelity-loss", "fidelity versus node loss");
  add_common(floss, o);
  floss->add_option("--n", o.n_text)->required();
  floss->add_option("--node-loss", o.node_loss_text)->required();
  floss->add_option("--matrices", o.matrices, "random targets per point");
  floss->add_option("--arch", o.archs);
  floss->add_option("--svg", o.svg);

  auto* fphase = app.add_subcommand("fidelity-phase", "fidelity versus phase error");
  add_common(fphase, o);
  fphase->add_option("--n", o.n_text)->required();
  fphase->add_option("--sigma", o.sigma_text, "phase error std in rad, e.g. 0:0.2:0.02")
      ->required();
  fphase->add_option("--matrices", o.matrices);
  fphase->add_option("--trials", o.trials, "phase-error draws per target");
  fphase->add_option("--phase-model", o.phase_model, "shared or independent");
  fphase->add_option("--arch", o.archs);
  fphase->add_option("--svg", o.svg);

  auto* compile = app.add_subcommand("compile", "compile a matrix into device settings");
  add_common(compile, o);
  compile->add_option("--arch", o.archs)->required()->expected(1);
  compile->add_option("--matrix", o.matrix_path, "matrix JSON")->required();
  compile->add_option("--mode", o.mode, "balanced or uniform (xbar)");

  auto* eval = app.add_subcommand("eval", "propagate an input through a compiled device");
  add_common(eval, o);
  eval->add_option("--device", o.device_path)->required();
  eval->add_option("--input", o.input_path, "input vector JSON")->required();

  auto* stats = app.add_subcommand("stats", "architecture counts for given sizes");
  add_common(stats, o);
  stats->add_option("--n", o.n_text)->required();
  stats->add_option("--m", o.m_text, "crossbar columns (default N)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const auto start = std::chrono::steady_clock::now();
  Outputs outputs;
  try {
    if (o.threads < 0) throw ConfigError("--threads must be >= 0");
    json config;
    if (command == "fig3") {
      config = run_fig3(o, outputs);
    } else if (command == "fidelity-loss") {
      config = run_fidelity(o, outputs, false);
    } else if (command == "fidelity-phase") {
      config = run_fidelity(o, outputs, true);
    } else if (command == "compile") {
      config = run_compile(o, outputs);
    } else if (command == "eval") {
      config = run_eval(o, outputs, out);
    } else {
      config = run_stats(o, outputs, out);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(command, args, config, o, seconds, outputs);
  } catch (const ConfigError& e) {
    err << "xbarsim " << command << ": " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "xbarsim " << command << ": " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "xbarsim " << command << ": " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "xbarsim " << command << ": " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace xbarsim::cli
