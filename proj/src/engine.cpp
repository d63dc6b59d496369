#include "hess/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <span>

#include "hess/csv.hpp"
#include "hess/errors.hpp"

namespace hess {

namespace {

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

std::vector<std::vector<double> RunResult::*>& run_fields() {
  static std::vector<std::vector<double> RunResult::*> fields = {
      &RunResult::time,          &RunResult::p_dc,     &RunResult::delta,
      &RunResult::p_sc_ref,      &RunResult::p_ess_ref, &RunResult::p_sc,
      &RunResult::p_ess,         &RunResult::u_sc,     &RunResult::u_ess,
      &RunResult::soc_sc,        &RunResult::soc_ess,  &RunResult::p_grid,
      &RunResult::freq_hz,       &RunResult::ramp_estimate,
      &RunResult::omega_ramp};
  return fields;
}

std::size_t step_count(const SimConfig& c) {
  return static_cast<std::size_t>(std::llround(c.duration / c.dt));
}

}  // namespace

const std::vector<std::string>& run_columns() {
  static const std::vector<std::string> names = {
      "time",   "p_dc",   "delta",  "p_sc_ref", "p_ess_ref",
      "p_sc",   "p_ess",  "u_sc",   "u_ess",    "soc_sc",
      "soc_ess", "p_grid", "freq_hz", "ramp_estimate", "omega_ramp"};
  return names;
}

void RunResult::check_aligned() const {
  for (auto field : run_fields())
    if ((this->*field).size() != time.size())
      throw InputError("run series have mismatched lengths");
}

void SimConfig::validate() const {
  require(dt > 0, "sim.dt", "must be > 0");
  require(duration >= dt, "sim.duration", "must be >= dt");
  load.validate();
  require(std::abs(load.sample_interval - dt) <= 1e-12 * dt,
          "load.sample_interval", "must equal sim.dt");
  require(duration <= load.total_duration() + 0.5 * dt, "sim.duration",
          "exceeds the load schedule length");
  grid.validate();
  bess.validate("bess");
  sc.validate("sc");
  kf.validate();
  require(std::abs(kf.dt - dt) <= 1e-12 * dt, "kf.dt", "must equal sim.dt");
  weights.validate();
  require(command.hpf_cutoff > 0, "command.hpf_cutoff", "must be > 0");
  require(command.t_eff > 0, "command.t_eff", "must be > 0");
  require(reference_power() >= 0, "command.reference_power", "must be >= 0");
  command.ess_bias.validate("command.ess_bias");
  command.sc_bias.validate("command.sc_bias");
  require(command.correction_window >= dt, "command.correction_window",
          "must be >= sim.dt");
  require(command.reference_ramp_max > 0, "command.reference_ramp_max",
          "must be > 0");
  sc_controller.validate();
  ess_controller.validate();
  require(sensor_noise_std >= 0, "sim.sensor_noise_std", "must be >= 0");
}

RunResult run_simulation(const SimConfig& config) {
  config.validate();
  const double dt = config.dt;
  const std::size_t n = step_count(config);

  const LoadTrace load = generate_load(config.load);
  const std::vector<bool> active = phase_mask(config.load);
  const double nominal_reference = config.reference_power();
  const auto window =
      static_cast<std::size_t>(std::llround(config.command.correction_window / dt));

  ScController sc_ctrl(config.sc_controller, dt);
  EssController ess_ctrl(config.ess_controller, dt);
  if (!sc_ctrl.filters_stable())
    throw ConfigError("sc_controller", "discretized filter has a pole outside the unit circle");
  if (!ess_ctrl.filters_stable())
    throw ConfigError("ess_controller", "discretized filter has a pole outside the unit circle");

  KfState kf;
  JerkFilter jerk(config.weights.jerk_filter_hz, dt);
  HpfState hpf{config.command.hpf_cutoff, 0.0, 0.0};
  SocBiasState ess_bias, sc_bias;
  DeviceState bess{0.0, config.bess.soc_target};
  DeviceState sc{0.0, config.sc.soc_target};
  GridState grid;
  double reference = nominal_reference;

  std::mt19937_64 sensor_rng(config.sensor_seed);
  std::normal_distribution<double> sensor_noise(0.0, 1.0);
  auto measure = [&](double p) {
    if (config.sensor_noise_std <= 0) return p;
    return p + config.sensor_noise_std * sensor_noise(sensor_rng);
  };

  RunResult r;
  for (auto field : run_fields()) (r.*field).reserve(n);

  const bool hess = config.toggles.hess_enabled;
  for (std::size_t k = 0; k < n; ++k) {
    // (1) demand and its deviation from the (possibly corrected) reference.
    const double p_dc = load.samples[k];
    if (config.toggles.baseline_correction_enabled) {
      double target = nominal_reference;
      if (!active[k]) {
        const std::size_t len = std::min(window, k + 1);
        target = baseline_correction(
            std::span<const double>(load.samples).subspan(k + 1 - len, len));
      }
      // Start on the target; slew-limited after that.
      const double max_move = config.command.reference_ramp_max * dt;
      if (k == 0) reference = target;
      else reference += std::clamp(target - reference, -max_move, max_move);
    }
    const double delta = p_dc - reference;

    double ramp = 0.0, omega = 0.0, u_sc = 0.0, u_ess = 0.0;
    CommandSet cmd;
    if (hess) {
      // (2) ramp estimate, (3) adaptive weight.
      const KfStepResult est = kf_step(kf, config.kf, delta);
      kf = est.state;
      ramp = est.ramp_estimate;
      const double jerk_value = jerk.step(ramp);
      const double jerk_input =
          config.weights.jerk_source == JerkSource::kFilteredJerk ? jerk_value
                                                                  : ramp;
      omega = adaptive_weight(ramp, jerk_input, config.weights).omega_ramp;

      // (4) complementary split.
      const HpfSplit split = hpf_step(hpf, delta, dt);
      hpf = split.state;
      const double sc_ref1 =
          config.toggles.ramp_term_enabled
              ? sc_ramp_command(split.high, omega, config.command.t_eff, ramp)
              : split.high;

      // (5) SoC bias offsets.
      const bool bias_on =
          config.toggles.soc_manager_enabled &&
          (config.command.soc_manager_mode == SocManagerMode::kContinuous ||
           !active[k]);
      if (bias_on) {
        ess_bias = soc_bias_step(ess_bias, config.command.ess_bias,
                                 config.bess.soc_target - bess.soc, dt)
                       .state;
        sc_bias = soc_bias_step(sc_bias, config.command.sc_bias,
                                config.sc.soc_target - sc.soc, dt)
                      .state;
      } else {
        ess_bias = soc_bias_decay(ess_bias, config.command.ess_bias, dt).state;
        sc_bias = soc_bias_decay(sc_bias, config.command.sc_bias, dt).state;
      }

      // (6) references, (7) controllers on last step's outputs.
      cmd = assemble_commands(split.high, split.low, sc_ref1, ess_bias.offset,
                              sc_bias.offset);
      u_sc = sc_ctrl.step(cmd.p_sc_ref, measure(sc.power), ramp).u;
      u_ess = ess_ctrl.step(cmd.p_ess_ref, measure(bess.power)).u;
      if (!std::isfinite(u_sc) || !std::isfinite(u_ess))
        throw InputError("non-finite controller output at step " + std::to_string(k));

      // (8) devices.
      sc = device_step(sc, config.sc, u_sc, dt);
      bess = device_step(bess, config.bess, u_ess, dt);
    }

    // (9) power balance at the POI, (10) grid response.
    const double p_grid = p_dc - bess.power - sc.power;
    grid = grid_step(grid, config.grid, p_grid, reference, dt);
    const double f = freq_hz(grid, config.grid);
    if (!std::isfinite(p_grid) || !std::isfinite(f))
      throw InputError("non-finite signal at step " + std::to_string(k));

    r.time.push_back(dt * static_cast<double>(k));
    r.p_dc.push_back(p_dc);
    r.delta.push_back(delta);
    r.p_sc_ref.push_back(cmd.p_sc_ref);
    r.p_ess_ref.push_back(cmd.p_ess_ref);
    r.p_sc.push_back(sc.power);
    r.p_ess.push_back(bess.power);
    r.u_sc.push_back(u_sc);
    r.u_ess.push_back(u_ess);
    r.soc_sc.push_back(sc.soc);
    r.soc_ess.push_back(bess.soc);
    r.p_grid.push_back(p_grid);
    r.freq_hz.push_back(f);
    r.ramp_estimate.push_back(ramp);
    r.omega_ramp.push_back(omega);
  }
  return r;
}

std::pair<RunResult, RunResult> run_comparison(const SimConfig& config) {
  config.validate();
  SimConfig without = config;
  without.toggles.hess_enabled = false;
  auto with_run = std::async(std::launch::async, run_simulation, config);
  auto without_run = std::async(std::launch::async, run_simulation, without);
  return {with_run.get(), without_run.get()};
}

void write_run(const RunResult& run, std::ostream& out) {
  run.check_aligned();
  CsvTable table;
  table.header = run_columns();
  for (auto field : run_fields()) table.columns.push_back(run.*field);
  write_csv(table, out);
}

void write_run(const RunResult& run, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_run(run, out);
}

RunResult read_run(std::istream& in) {
  const CsvTable table = read_csv(in);
  RunResult r;
  const auto& names = run_columns();
  for (std::size_t i = 0; i < names.size(); ++i)
    r.*run_fields()[i] = table.column(names[i]);
  return r;
}

RunResult read_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_run(in);
}

}  // namespace hess
