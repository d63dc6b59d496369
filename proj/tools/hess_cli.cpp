// hess: simulate, compare and analyse battery + supercapacitor smoothing runs.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hess/analysis.hpp"
#include "hess/csv.hpp"
#include "hess/engine.hpp"
#include "hess/errors.hpp"

namespace fs = std::filesystem;
using namespace hess;

namespace {

SimConfig config_or_default(const std::string& path) {
  if (path.empty()) {
    std::istringstream empty;
    return parse_config(empty);
  }
  return load_config(path);
}

// "-" or empty means stdout.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  fn(out);
  if (!out) throw InputError("write failed for '" + path + "'");
}

CsvTable metrics_table(const std::vector<RunMetrics>& rows,
                       const std::vector<double>* hess_flag = nullptr) {
  CsvTable t;
  if (hess_flag) t.header.push_back("hess_enabled");
  for (const char* name : {"freq_dev_max", "freq_dev_rms", "grid_power_std",
                           "soc_excursion_ess", "soc_excursion_sc", "ramp_lag_ms"})
    t.header.push_back(name);
  t.columns.resize(t.header.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t c = 0;
    if (hess_flag) t.columns[c++].push_back((*hess_flag)[i]);
    const RunMetrics& m = rows[i];
    for (double v : {m.freq_dev_max, m.freq_dev_rms, m.grid_power_std,
                     m.soc_excursion_ess, m.soc_excursion_sc, m.ramp_lag_ms})
      t.columns[c++].push_back(v);
  }
  return t;
}

TransferFunction loop_tf(const std::string& loop, const SimConfig& c) {
  if (loop == "sc") return sc_open_loop(c.sc_controller);
  if (loop == "ess") return ess_open_loop(c.ess_controller, true);
  if (loop == "ess-norc") return ess_open_loop(c.ess_controller, false);
  if (loop == "hpf") return high_pass(c.command.hpf_cutoff);
  if (loop == "sc-plant") return first_order_lag(c.sc.tau);
  if (loop == "ess-plant") return first_order_lag(c.bess.tau);
  throw InputError("unknown loop '" + loop + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid battery/supercapacitor smoothing simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, in_path, out_dir, column = "delta", loop = "ess";
  std::optional<std::size_t> segment;
  double overlap = 0.5, f_lo = 1e-3, f_hi = 10.0;
  int per_decade = 40;
  bool discrete = false;

  auto* simulate = app.add_subcommand("simulate", "run one scenario, write the per-step CSV");
  simulate->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_path, "output CSV")->required();

  auto* compare = app.add_subcommand("compare", "run with and without storage on one load trace");
  compare->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  compare->add_option("--out-dir", out_dir, "output directory")->required();

  auto* gen = app.add_subcommand("gen-load", "write the synthetic load trace (time_s,p_dc_mw)");
  gen->add_option("--config", config_path, "scenario file (only [load] and sim.dt matter)")
      ->check(CLI::ExistingFile);
  gen->add_option("--out", out_path, "output CSV, '-' for stdout");

  auto* psd = app.add_subcommand("psd", "Welch PSD of one CSV column");
  psd->add_option("--in", in_path, "input CSV")->required()->check(CLI::ExistingFile);
  psd->add_option("--column", column, "column name (default delta)");
  psd->add_option("--segment", segment, "segment length in samples");
  psd->add_option("--overlap", overlap, "fractional overlap, default 0.5");
  psd->add_option("--out", out_path, "output CSV, '-' for stdout");

  auto* bode = app.add_subcommand("bode", "open-loop frequency response of a controller");
  bode->add_option("--config", config_path, "scenario file for gains")->check(CLI::ExistingFile);
  bode->add_option("--loop", loop, "sc | ess | ess-norc | hpf | sc-plant | ess-plant");
  bode->add_option("--fmin", f_lo, "Hz");
  bode->add_option("--fmax", f_hi, "Hz");
  bode->add_option("--per-decade", per_decade, "grid points per decade");
  bode->add_flag("--discrete", discrete, "evaluate the bilinear realization at sim.dt");
  bode->add_option("--out", out_path, "output CSV, '-' for stdout");

  auto* metrics = app.add_subcommand("metrics", "one-row summary of a run CSV");
  metrics->add_option("--in", in_path, "run CSV from simulate")->required()->check(CLI::ExistingFile);
  metrics->add_option("--out", out_path, "output CSV, '-' for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      write_run(run_simulation(load_config(config_path)), out_path);
    } else if (*compare) {
      const SimConfig c = load_config(config_path);
      const auto [with_hess, without_hess] = run_comparison(c);
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      write_run(with_hess, (dir / "with_hess.csv").string());
      write_run(without_hess, (dir / "without_hess.csv").string());
      const std::vector<double> flags = {1.0, 0.0};
      with_output((dir / "metrics.csv").string(), [&](std::ostream& o) {
        write_csv(metrics_table({compute_metrics(with_hess, c.grid.nominal_freq),
                                 compute_metrics(without_hess, c.grid.nominal_freq)},
                                &flags),
                  o);
      });
    } else if (*gen) {
      const SimConfig c = config_or_default(config_path);
      const LoadTrace trace = generate_load(c.load);
      with_output(out_path, [&](std::ostream& o) { write_load_csv(trace, o); });
    } else if (*psd) {
      const CsvTable t = read_csv_file(in_path);
      const auto& x = t.column(column);
      const std::string time_name =
          std::find(t.header.begin(), t.header.end(), "time") != t.header.end() ? "time"
                                                                                : "time_s";
      const auto& time = t.column(time_name);
      if (time.size() < 2) throw InputError("psd: need at least two samples");
      const double dt = time[1] - time[0];
      const PsdResult r = segment ? psd_welch(x, dt, *segment, overlap)
                                  : psd_welch(x, dt, default_segment_length(x.size()), overlap);
      CsvTable out;
      out.header = {"freq_hz", "density"};
      out.columns = {r.freqs, r.density};
      with_output(out_path, [&](std::ostream& o) { write_csv(out, o); });
    } else if (*bode) {
      const SimConfig c = config_or_default(config_path);
      const TransferFunction tf = loop_tf(loop, c);
      const auto freqs = log_grid(f_lo, f_hi, per_decade);
      const BodeResult r = discrete ? bode_eval(bilinear(tf, c.dt), c.dt, freqs)
                                    : bode_eval(tf, freqs);
      for (std::size_t i : r.failed)
        std::cerr << "bode: no response at " << r.freqs[i] << " Hz (pole on the axis)\n";
      CsvTable out;
      out.header = {"freq_hz", "mag_db", "phase_deg"};
      out.columns = {r.freqs, r.magnitude_db, r.phase_deg};
      with_output(out_path, [&](std::ostream& o) { write_csv(out, o); });
      if (!r.failed.empty()) return 3;
    } else if (*metrics) {
      const RunResult run = read_run(in_path);
      with_output(out_path, [&](std::ostream& o) {
        write_csv(metrics_table({compute_metrics(run)}), o);
      });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
