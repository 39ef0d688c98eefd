#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcg/analysis.hpp"
#include "dcg/config.hpp"
#include "dcg/io.hpp"
#include "dcg/rng.hpp"
#include "dcg/scqc.hpp"
#include "dcg/sim.hpp"
#include "dcg/tomo.hpp"

namespace {

using dcg::RunConfig;
using json = nlohmann::ordered_json;

struct CommonArgs {
  std::string profile;
  std::string config;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--profile", args.profile, "base configuration file (JSON)");
  cmd->add_option("--config", args.config, "override configuration file (JSON)");
  cmd->add_option("--seed", args.seed, "master seed (required here or in a config file)")
      ->trigger_on_parse()
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--workers", args.workers, "worker threads");
  cmd->add_option("--out", args.out_dir, "output directory");
}

RunConfig resolve(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.profile.empty()) dcg::merge_config_file(cfg, args.profile);
  if (!args.config.empty()) dcg::merge_config_file(cfg, args.config);
  if (args.seed_given) {
    cfg.seed = args.seed;
    cfg.seed_set = true;
  }
  if (args.workers > 0) cfg.workers = args.workers;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (!cfg.seed_set)
    throw dcg::ConfigError("a seed is required: pass --seed or set \"seed\" in a config");
  return cfg;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::string path_in(const RunConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/" + name;
}

json design_json(const dcg::IdentityDesign& d) {
  return json{{"dez_mhz", d.dez},
              {"j1_mhz", d.j1},
              {"j2_mhz", d.j2},
              {"t1_ns", d.t1},
              {"t2_ns", d.t2},
              {"tilt_rad", d.gamma_rad},
              {"closure_residual_ns", d.closure_residual_ns},
              {"total_ns", d.total_ns}};
}

json design_json(const dcg::HadamardDesign& d) {
  return json{{"dez_mhz", d.dez},
              {"jh_mhz", d.jh},
              {"th_ns", d.th},
              {"j1_mhz", d.j1},
              {"j2_mhz", d.j2},
              {"t1_ns", d.t1},
              {"t2_ns", d.t2},
              {"tb_ns", d.tb},
              {"tilt_rad", d.gamma_rad},
              {"residual_per_ns", d.residual_per_ns},
              {"gate_fidelity", d.gate_fidelity}};
}

dcg::GateKind parse_gate(const std::string& name) {
  if (name == "identity") return dcg::GateKind::identity;
  if (name == "hadamard") return dcg::GateKind::hadamard;
  throw dcg::ConfigError("--gate must be \"identity\" or \"hadamard\"");
}

// Seed keys shared with table1(): the sweep/scatter commands reproduce the
// same landscapes the table uses.
uint64_t corrected_sweep_seed(const RunConfig& cfg, dcg::GateKind gate) {
  return dcg::derive_stream(cfg.seed, gate == dcg::GateKind::hadamard ? 0x51 : 0x52);
}
uint64_t uncorrected_sweep_seed(const RunConfig& cfg, dcg::GateKind gate) {
  return dcg::derive_stream(cfg.seed, gate == dcg::GateKind::hadamard ? 0x41 : 0x42);
}

dcg::NoiseSpec noise_for(const RunConfig& cfg, dcg::GateKind gate, uint64_t seed) {
  dcg::NoiseSpec ns = cfg.noise;
  ns.n_realizations = gate == dcg::GateKind::hadamard ? cfg.hadamard.n_realizations
                                                      : cfg.identity.n_realizations;
  ns.seed = seed;
  return ns;
}

double gate_dez(const RunConfig& cfg, dcg::GateKind gate) {
  return gate == dcg::GateKind::hadamard ? cfg.hadamard.dez_mhz : cfg.identity.dez_mhz;
}

dcg::PulseSequence corrected_pulse(const RunConfig& cfg, dcg::GateKind gate) {
  if (gate == dcg::GateKind::hadamard)
    return dcg::hadamard_pulse(dcg::run_design_hadamard(cfg));
  return dcg::identity_pulse(dcg::run_design_identity(cfg));
}

int cmd_design(const RunConfig& cfg, const std::string& cmdline) {
  const std::string resolved = dcg::config_to_json(cfg);
  const dcg::IdentityDesign id = dcg::run_design_identity(cfg);
  const dcg::HadamardDesign hd = dcg::run_design_hadamard(cfg);

  const dcg::PulseSequence pid = dcg::identity_pulse(id);
  const dcg::PulseSequence phd = dcg::hadamard_pulse(hd);
  dcg::write_with_meta(path_in(cfg, "identity_pulse.csv"), dcg::pulse_csv(pid), cmdline,
                       resolved);
  dcg::write_with_meta(path_in(cfg, "hadamard_pulse.csv"), dcg::pulse_csv(phd), cmdline,
                       resolved);
  dcg::write_with_meta(path_in(cfg, "identity_error_curve.csv"),
                       dcg::error_curve_csv(dcg::error_curve_from_pulse(pid, 0.1)),
                       cmdline, resolved);
  dcg::write_with_meta(path_in(cfg, "hadamard_error_curve.csv"),
                       dcg::error_curve_csv(dcg::error_curve_from_pulse(phd, 0.1)),
                       cmdline, resolved);
  const dcg::BinormalCurve bc = dcg::build_identity_binormal(id.j1, id.j2, id.dez);
  dcg::write_with_meta(path_in(cfg, "identity_binormal.csv"), dcg::binormal_csv(bc),
                       cmdline, resolved);

  json j;
  j["identity"] = design_json(id);
  j["hadamard"] = design_json(hd);
  dcg::write_with_meta(path_in(cfg, "designs.json"), j.dump(2) + "\n", cmdline, resolved);
  std::printf("identity: t1=%s t2=%s closure=%s ns\n", dcg::fmt12(id.t1).c_str(),
              dcg::fmt12(id.t2).c_str(), dcg::fmt12(id.closure_residual_ns).c_str());
  std::printf("hadamard: t1=%s t2=%s tb=%s fidelity=%s\n", dcg::fmt12(hd.t1).c_str(),
              dcg::fmt12(hd.t2).c_str(), dcg::fmt12(hd.tb).c_str(),
              dcg::fmt12(hd.gate_fidelity).c_str());
  return 0;
}

int cmd_sweep(const RunConfig& cfg, dcg::GateKind gate, bool uncorrected,
              const std::string& cmdline) {
  const std::string resolved = dcg::config_to_json(cfg);
  const dcg::FilterSpec* filter = cfg.filter_enabled ? &cfg.filter : nullptr;
  const std::string gate_name = gate == dcg::GateKind::hadamard ? "hadamard" : "identity";
  dcg::FidelityGrid grid;
  std::string ax1 = "beta1", ax2 = "beta2";
  if (uncorrected) {
    grid = dcg::sweep_uncorrected(gate, gate_dez(cfg, gate), cfg.model, filter,
                                  noise_for(cfg, gate, uncorrected_sweep_seed(cfg, gate)),
                                  cfg.sweep_xi, cfg.dt_ns, cfg.workers);
    ax1 = "xi1";
    ax2 = "xi2";
  } else {
    grid = dcg::sweep_corrected(corrected_pulse(cfg, gate), dcg::gate_target(gate),
                                cfg.model, filter,
                                noise_for(cfg, gate, corrected_sweep_seed(cfg, gate)),
                                cfg.sweep_beta, cfg.dt_ns, cfg.workers);
  }
  const std::string name =
      std::string("sweep_") + (uncorrected ? "plain_" : "corrected_") + gate_name + ".csv";
  dcg::write_with_meta(path_in(cfg, name), dcg::grid_csv(grid, ax1, ax2), cmdline, resolved);
  std::printf("%s: best f=%s at (%s, %s)\n", grid.label.c_str(),
              dcg::fmt12(grid.f(grid.i_best, grid.j_best)).c_str(),
              dcg::fmt12(grid.ax1(grid.i_best)).c_str(),
              dcg::fmt12(grid.ax2(grid.j_best)).c_str());
  return 0;
}

int cmd_table1(const RunConfig& cfg, const std::string& cmdline) {
  const std::string resolved = dcg::config_to_json(cfg);
  const dcg::Table1Result r = dcg::table1(dcg::table_spec(cfg));
  dcg::write_with_meta(path_in(cfg, "table1.csv"), dcg::table_csv(r), cmdline, resolved);
  dcg::write_with_meta(path_in(cfg, "table1.txt"), dcg::table_text(r), cmdline, resolved);
  dcg::write_with_meta(path_in(cfg, "table1_sweep_hadamard.csv"),
                       dcg::grid_csv(r.sweep_h, "beta1", "beta2"), cmdline, resolved);
  dcg::write_with_meta(path_in(cfg, "table1_sweep_identity.csv"),
                       dcg::grid_csv(r.sweep_i, "beta1", "beta2"), cmdline, resolved);
  json j;
  j["beta_hadamard"] = {r.beta_h[0], r.beta_h[1]};
  j["beta_identity"] = {r.beta_i[0], r.beta_i[1]};
  j["designs"] = {{"identity", design_json(r.identity)},
                  {"hadamard", design_json(r.hadamard)}};
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"gate", row.label},
                        {"both_noises", row.f[0]},
                        {"gradient_noise", row.f[1]},
                        {"exchange_noise", row.f[2]},
                        {"no_noise", row.f[3]}});
  j["rows"] = rows;
  dcg::write_with_meta(path_in(cfg, "table1.json"), j.dump(2) + "\n", cmdline, resolved);
  std::fputs(dcg::table_text(r).c_str(), stdout);
  return 0;
}

int cmd_calibrate(const RunConfig& cfg, const std::string& envelope, int shots,
                  const std::string& cmdline) {
  const std::string resolved = dcg::config_to_json(cfg);
  const dcg::Envelope env = envelope == "exp-envelope" ? dcg::Envelope::exponential
                                                       : dcg::Envelope::gaussian;
  const double dez = cfg.identity.dez_mhz;

  // synthetic free-induction scans across the exchange range, ideal readout
  std::vector<double> j_levels;
  Eigen::VectorXd v_points = Eigen::VectorXd::LinSpaced(12, -1.5, 3.0);
  for (Eigen::Index i = 0; i < v_points.size(); ++i)
    j_levels.push_back(cfg.model.exchange(v_points(i) * cfg.model.v0_mv));
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(241, 0.0, 600.0);
  const auto records = dcg::simulate_calibration_records(
      dcg::PovmSet{}, dez, j_levels, t, cfg.noise.sigma_dez_mhz, shots,
      dcg::derive_stream(cfg.seed, 0xCA1));

  std::ostringstream fits;
  fits << "v_mv,j_true_mhz,f_mhz,t2_ns,amplitude,rms\n";
  Eigen::VectorXd vv(v_points.size()), ff(v_points.size());
  for (size_t s = 0; s < records.size(); ++s) {
    const Eigen::VectorXd y = records[s].p_plus.row(1).transpose();  // y-axis readout
    const dcg::RamseyFit fit = dcg::fit_ramsey(records[s].t_ns, y, env);
    vv(static_cast<Eigen::Index>(s)) = v_points(static_cast<Eigen::Index>(s)) * cfg.model.v0_mv;
    ff(static_cast<Eigen::Index>(s)) = fit.f_mhz;
    fits << dcg::fmt12(vv(static_cast<Eigen::Index>(s))) << ','
         << dcg::fmt12(j_levels[s]) << ',' << dcg::fmt12(fit.f_mhz) << ','
         << dcg::fmt12(fit.t2_ns) << ',' << dcg::fmt12(fit.a) << ','
         << dcg::fmt12(fit.rms) << '\n';
  }
  dcg::write_with_meta(path_in(cfg, "ramsey_fits.csv"), fits.str(), cmdline, resolved);

  const dcg::ExchangeFit ef = dcg::fit_exchange_model(vv, ff);
  json j;
  j["j0_mhz"] = ef.j0_mhz;
  j["v0_mv"] = ef.v0_mv;
  j["dez_mhz"] = ef.dez_mhz;
  j["rms_mhz"] = ef.rms;
  j["condition"] = ef.condition;
  j["ill_conditioned"] = ef.ill_conditioned;
  dcg::write_with_meta(path_in(cfg, "exchange_fit.json"), j.dump(2) + "\n", cmdline,
                       resolved);

  // readout calibration demo: recover a planted weak z visibility
  dcg::PovmSet planted;
  planted.z.visibility = 0.85;
  const auto cal_records = dcg::simulate_calibration_records(
      planted, dez, {0.3 * dez, 3.0 * dez}, Eigen::VectorXd::LinSpaced(25, 0.0, 600.0),
      cfg.noise.sigma_dez_mhz, shots, dcg::derive_stream(cfg.seed, 0xCA2));
  const dcg::CalibrationResult cal = dcg::calibrate_povm(cal_records);
  json pj;
  pj["planted_z_visibility"] = 0.85;
  pj["visibility"] = {cal.povm.x.visibility, cal.povm.y.visibility, cal.povm.z.visibility};
  pj["offset"] = {cal.povm.x.offset, cal.povm.y.offset, cal.povm.z.offset};
  pj["rms_naive"] = cal.rms_naive;
  pj["rms_fit"] = cal.rms_fit;
  dcg::write_with_meta(path_in(cfg, "povm_calibration.json"), pj.dump(2) + "\n", cmdline,
                       resolved);
  std::printf("exchange fit: j0=%s v0=%s dez=%s (ill-conditioned: %s)\n",
              dcg::fmt12(ef.j0_mhz).c_str(), dcg::fmt12(ef.v0_mv).c_str(),
              dcg::fmt12(ef.dez_mhz).c_str(), ef.ill_conditioned ? "yes" : "no");
  std::printf("readout: vz=%s (planted 0.85), oscillation rms %s -> %s\n",
              dcg::fmt12(cal.povm.z.visibility).c_str(), dcg::fmt12(cal.rms_naive).c_str(),
              dcg::fmt12(cal.rms_fit).c_str());
  return 0;
}

int cmd_errorbars(const RunConfig& cfg, const std::string& in_path, int axis, int index,
                  const std::string& cmdline) {
  const std::string resolved = dcg::config_to_json(cfg);
  const dcg::FidelityGrid g = dcg::read_grid_csv(in_path);
  Eigen::VectorXd x, f;
  if (axis == 1) {
    const Eigen::Index j = index >= 0 ? index : g.j_best;
    if (j >= g.ax2.size()) throw dcg::ConfigError("--index out of range");
    x = g.ax1;
    f = g.f.col(j);
  } else if (axis == 2) {
    const Eigen::Index i = index >= 0 ? index : g.i_best;
    if (i >= g.ax1.size()) throw dcg::ConfigError("--index out of range");
    x = g.ax2;
    f = g.f.row(i).transpose();
  } else {
    throw dcg::ConfigError("--axis must be 1 or 2");
  }
  const dcg::LinecutErrorbar lb = dcg::linecut_errorbar(x, f);
  dcg::write_with_meta(path_in(cfg, "linecut_residuals.csv"),
                       dcg::columns_csv({"x", "fidelity", "residual"}, {x, f, lb.residuals}),
                       cmdline, resolved);
  json j;
  j["input"] = in_path;
  j["axis"] = axis;
  j["sigma"] = lb.sigma;
  j["qq_correlation"] = lb.qq_correlation;
  j["n"] = static_cast<int>(x.size());
  dcg::write_with_meta(path_in(cfg, "errorbars.json"), j.dump(2) + "\n", cmdline, resolved);
  std::printf("linecut spread: sigma=%s (qq correlation %s)\n", dcg::fmt12(lb.sigma).c_str(),
              dcg::fmt12(lb.qq_correlation).c_str());
  return 0;
}

int cmd_distort(const RunConfig& cfg, dcg::GateKind gate, const std::string& cmdline) {
  const std::string resolved = dcg::config_to_json(cfg);
  const std::string gate_name = gate == dcg::GateKind::hadamard ? "hadamard" : "identity";
  const dcg::PulseSequence seq = corrected_pulse(cfg, gate);

  const dcg::Waveform ideal = dcg::rasterize(seq, cfg.dt_ns, true);
  const dcg::Waveform kernel = dcg::distort_exchange(seq, cfg.model, cfg.filter, cfg.dt_ns);

  // voltage-domain comparison of kernel filters vs the RC network
  dcg::FilterSpec vf = cfg.filter;
  vf.domain = dcg::FilterSpec::Domain::voltage;
  dcg::Waveform v{cfg.dt_ns, dcg::SampleKind::voltage,
                  ideal.samples.unaryExpr([&](double x) {
                    return cfg.model.voltage(std::max(x, vf.j_floor_mhz));
                  })};
  const dcg::Waveform vk = dcg::apply_distortion(v, vf);
  dcg::Waveform vc = dcg::circuit_response(v, cfg.circuit, cfg.dt_ns);
  vc.samples = dcg::one_pole_lowpass(vc.samples, vf.tau_lp_ns, cfg.dt_ns);
  Eigen::VectorXd jk(vk.samples.size()), jc(vc.samples.size());
  for (Eigen::Index k = 0; k < jk.size(); ++k) {
    jk(k) = cfg.model.exchange(vk.samples(k));
    jc(k) = cfg.model.exchange(vc.samples(k));
  }
  Eigen::VectorXd t(ideal.samples.size());
  for (Eigen::Index k = 0; k < t.size(); ++k) t(k) = (k + 0.5) * cfg.dt_ns;
  dcg::write_with_meta(
      path_in(cfg, "distort_" + gate_name + ".csv"),
      dcg::columns_csv({"t_ns", "ideal_mhz", "distorted_mhz", "kernel_v_mhz",
                        "circuit_v_mhz"},
                       {t, ideal.samples, kernel.samples, jk, jc}),
      cmdline, resolved);

  const double rms = std::sqrt((jk - jc).squaredNorm() / jk.size());
  const double swing = jk.maxCoeff() - jk.minCoeff();
  json j;
  j["gate"] = gate_name;
  j["rms_kernel_vs_circuit_mhz"] = rms;
  j["waveform_swing_mhz"] = swing;
  j["rms_over_swing"] = rms / swing;
  dcg::write_with_meta(path_in(cfg, "distort_" + gate_name + ".json"), j.dump(2) + "\n",
                       cmdline, resolved);
  std::printf("%s: kernel vs circuit rms/swing = %s\n", gate_name.c_str(),
              dcg::fmt12(rms / swing).c_str());
  return 0;
}

int cmd_scatter(const RunConfig& cfg, const std::string& gate_arg,
                const std::string& cmdline) {
  const std::string resolved = dcg::config_to_json(cfg);
  std::vector<dcg::GateKind> gates;
  if (gate_arg == "both")
    gates = {dcg::GateKind::hadamard, dcg::GateKind::identity};
  else
    gates = {parse_gate(gate_arg)};
  const dcg::FilterSpec* filter = cfg.filter_enabled ? &cfg.filter : nullptr;
  json j;
  for (const dcg::GateKind gate : gates) {
    const std::string gate_name =
        gate == dcg::GateKind::hadamard ? "hadamard" : "identity";
    const dcg::PulseSequence seq = corrected_pulse(cfg, gate);
    const dcg::FidelityGrid grid = dcg::sweep_corrected(
        seq, dcg::gate_target(gate), cfg.model, filter,
        noise_for(cfg, gate, corrected_sweep_seed(cfg, gate)), cfg.sweep_beta, cfg.dt_ns,
        cfg.workers);
    const double b1 = grid.ax1(grid.i_best), b2 = grid.ax2(grid.j_best);
    const dcg::PulseSequence scaled = dcg::scale_pulse(seq, b1, b2);
    const dcg::Waveform w = filter
                                ? dcg::distort_exchange(scaled, cfg.model, *filter, cfg.dt_ns)
                                : dcg::rasterize(scaled, cfg.dt_ns, true);
    const auto stats = dcg::fidelity_scatter(
        w, gate_dez(cfg, gate), dcg::gate_target(gate), noise_for(cfg, gate, 0),
        cfg.scatter_repeats,
        dcg::derive_stream(cfg.seed, gate == dcg::GateKind::hadamard ? 0x5C0 : 0x5C1),
        cfg.workers);
    dcg::write_with_meta(path_in(cfg, "scatter_" + gate_name + ".csv"),
                         dcg::scatter_csv(stats), cmdline, resolved);
    json gj;
    gj["beta"] = {b1, b2};
    for (const auto& s : stats)
      gj[s.label] = {{"mean", s.mean}, {"std", s.stddev}, {"n_repeats", s.values.size()}};
    j[gate_name] = gj;
    for (const auto& s : stats)
      std::printf("%s / %s: %s +- %s\n", gate_name.c_str(), s.label.c_str(),
                  dcg::fmt12(s.mean).c_str(), dcg::fmt12(s.stddev).c_str());
  }
  dcg::write_with_meta(path_in(cfg, "scatter.json"), j.dump(2) + "\n", cmdline, resolved);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulse design and noise simulation for singlet-triplet qubits"};
  app.require_subcommand(1);
  const std::string cmdline = join_args(argc, argv);

  CommonArgs common;
  std::string gate_arg = "hadamard";
  std::string scatter_gate = "both";
  std::string envelope = "gauss-envelope";
  std::string in_path;
  bool uncorrected = false;
  int shots = 10000;
  int axis = 1, index = -1;

  CLI::App* c_calibrate =
      app.add_subcommand("calibrate", "fit the exchange model and readout from synthetic scans");
  add_common(c_calibrate, common);
  c_calibrate->add_option("--model", envelope, "ramsey envelope: gauss-envelope or exp-envelope")
      ->check(CLI::IsMember({"gauss-envelope", "exp-envelope"}));
  c_calibrate->add_option("--shots", shots, "shots per measured point");

  CLI::App* c_design = app.add_subcommand("design", "build the corrected identity and hadamard");
  add_common(c_design, common);

  CLI::App* c_sweep = app.add_subcommand("sweep", "fidelity landscape over pulse scale factors");
  add_common(c_sweep, common);
  c_sweep->add_option("--gate", gate_arg, "identity or hadamard")->required();
  c_sweep->add_flag("--uncorrected", uncorrected, "sweep the plain square pulse instead");

  CLI::App* c_table = app.add_subcommand("table1", "noise-averaged fidelity table");
  add_common(c_table, common);

  CLI::App* c_errorbars =
      app.add_subcommand("errorbars", "residual spread of a landscape linecut");
  add_common(c_errorbars, common);
  c_errorbars->add_option("--in", in_path, "grid CSV produced by sweep/table1")->required();
  c_errorbars->add_option("--axis", axis, "varying axis: 1 or 2");
  c_errorbars->add_option("--index", index, "fixed index on the other axis (default: best)");

  CLI::App* c_distort = app.add_subcommand("distort", "distorted waveforms and circuit check");
  add_common(c_distort, common);
  c_distort->add_option("--gate", gate_arg, "identity or hadamard");

  CLI::App* c_scatter = app.add_subcommand("scatter", "repeated-batch fidelity statistics");
  add_common(c_scatter, common);
  c_scatter->add_option("--gate", scatter_gate, "identity, hadamard or both")
      ->check(CLI::IsMember({"identity", "hadamard", "both"}));

  try {
    app.parse(argc, argv);
    const RunConfig cfg = resolve(common);
    dcg::ensure_dir(cfg.out_dir);
    if (*c_design) return cmd_design(cfg, cmdline);
    if (*c_sweep) return cmd_sweep(cfg, parse_gate(gate_arg), uncorrected, cmdline);
    if (*c_table) return cmd_table1(cfg, cmdline);
    if (*c_calibrate) return cmd_calibrate(cfg, envelope, shots, cmdline);
    if (*c_errorbars) return cmd_errorbars(cfg, in_path, axis, index, cmdline);
    if (*c_distort) return cmd_distort(cfg, parse_gate(gate_arg), cmdline);
    if (*c_scatter) return cmd_scatter(cfg, scatter_gate, cmdline);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const dcg::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
