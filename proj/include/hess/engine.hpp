#pragma once

// Closed-loop simulation of a datacenter load with a co-located battery and
// supercapacitor on a single-machine grid.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hess/command.hpp"
#include "hess/control.hpp"
#include "hess/estimation.hpp"
#include "hess/plant.hpp"
#include "hess/signals.hpp"

namespace hess {

enum class SocManagerMode { kIdleOnly, kContinuous };

struct CommandParams {
  double hpf_cutoff = 0.2;  // Hz
  double t_eff = 0.02;      // s, ramp look-ahead horizon
  // P_DC^0. Unset means the load's active plateau (peak_power).
  std::optional<double> reference_power;
  SocBiasParams ess_bias{5.0, 30.0, 0.002};
  SocBiasParams sc_bias{1.6, 30.0, 0.002};
  SocManagerMode soc_manager_mode = SocManagerMode::kIdleOnly;
  double correction_window = 10.0;    // s of load averaged while idle
  double reference_ramp_max = 5.0;    // MW/s slew of the corrected reference
};

struct Toggles {
  bool hess_enabled = true;
  bool soc_manager_enabled = false;
  bool baseline_correction_enabled = false;
  bool ramp_term_enabled = true;
};

struct SimConfig {
  LoadProfileSpec load;
  GridParams grid;
  DeviceParams bess = default_bess_params();
  DeviceParams sc = default_sc_params();
  KfParams kf;
  RampWeightParams weights;
  CommandParams command;
  ScControllerParams sc_controller;
  EssControllerParams ess_controller;
  Toggles toggles;
  double dt = 0.01;        // s
  double duration = 600.0; // s
  double sensor_noise_std = 0.0;  // MW, on the controllers' power feedback
  std::uint64_t sensor_seed = 7;

  double reference_power() const {
    return command.reference_power.value_or(load.peak_power);
  }

  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Column-aligned per-step record; field order is the CSV column order.
struct RunResult {
  std::vector<double> time;
  std::vector<double> p_dc;
  std::vector<double> delta;
  std::vector<double> p_sc_ref;
  std::vector<double> p_ess_ref;
  std::vector<double> p_sc;
  std::vector<double> p_ess;
  std::vector<double> u_sc;
  std::vector<double> u_ess;
  std::vector<double> soc_sc;
  std::vector<double> soc_ess;
  std::vector<double> p_grid;
  std::vector<double> freq_hz;
  std::vector<double> ramp_estimate;
  std::vector<double> omega_ramp;

  std::size_t size() const { return time.size(); }
  // Throws InputError if the series lengths differ.
  void check_aligned() const;
};

// CSV header names, in field order.
const std::vector<std::string>& run_columns();

RunResult run_simulation(const SimConfig& config);

// Runs with and without storage on the same load trace, concurrently.
std::pair<RunResult, RunResult> run_comparison(const SimConfig& config);

// Sectioned key-value text:
//   # comment
//   [bess]
//   tau = 0.25
// Missing keys keep their defaults; unknown keys, malformed values and
// invariant violations throw ConfigError naming the key and line.
SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::string& path);

void write_run(const RunResult& run, std::ostream& out);
void write_run(const RunResult& run, const std::string& path);
RunResult read_run(std::istream& in);
RunResult read_run(const std::string& path);

}  // namespace hess
