#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "hess/engine.hpp"
#include "hess/errors.hpp"

namespace hess {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Value {
  std::string key;
  std::string text;
  int line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(key, what, line);
  }

  double number() const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
      fail("expected a number, got '" + text + "'");
    return v;
  }

  std::uint64_t unsigned_integer() const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
      fail("expected a non-negative integer, got '" + text + "'");
    return v;
  }

  bool boolean() const {
    if (text == "true" || text == "on" || text == "1") return true;
    if (text == "false" || text == "off" || text == "0") return false;
    fail("expected true/false, got '" + text + "'");
  }

  // "idle:10, active:580, idle:10"
  std::vector<SchedulePhase> schedule() const {
    std::vector<SchedulePhase> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail("expected phase:duration, got '" + item + "'");
      const std::string name = strip(item.substr(0, colon));
      SchedulePhase p;
      if (name == "active") p.phase = Phase::kActive;
      else if (name == "idle") p.phase = Phase::kIdle;
      else fail("unknown phase '" + name + "'");
      Value d{key, strip(item.substr(colon + 1)), line};
      p.duration = d.number();
      out.push_back(p);
    }
    if (out.empty()) fail("empty schedule");
    return out;
  }
};

using Setter = std::function<void(SimConfig&, const Value&)>;

#define NUM(section, name, field) \
  {section "." name, [](SimConfig& c, const Value& v) { c.field = v.number(); }}
#define FLAG(section, name, field) \
  {section "." name, [](SimConfig& c, const Value& v) { c.field = v.boolean(); }}

void add_device(std::map<std::string, Setter>& m, const std::string& prefix,
                DeviceParams SimConfig::*dev) {
  auto field = [&](const char* name, double DeviceParams::*f) {
    m[prefix + "." + name] = [dev, f](SimConfig& c, const Value& v) {
      (c.*dev).*f = v.number();
    };
  };
  field("p_max", &DeviceParams::p_max);
  field("ramp_max", &DeviceParams::ramp_max);
  field("tau", &DeviceParams::tau);
  field("efficiency", &DeviceParams::efficiency);
  field("capacity", &DeviceParams::capacity);
  field("soc_min", &DeviceParams::soc_min);
  field("soc_max", &DeviceParams::soc_max);
  field("soc_target", &DeviceParams::soc_target);
}

void add_bias(std::map<std::string, Setter>& m, const std::string& prefix,
              SocBiasParams CommandParams::*bias) {
  auto field = [&](const char* name, double SocBiasParams::*f) {
    m[prefix + "_" + name] = [bias, f](SimConfig& c, const Value& v) {
      (c.command.*bias).*f = v.number();
    };
  };
  field("kq", &SocBiasParams::gain_kq);
  field("tq", &SocBiasParams::time_const_tq);
  field("deadband", &SocBiasParams::deadband);
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m = {
        NUM("sim", "dt", dt),
        NUM("sim", "duration", duration),
        NUM("sim", "sensor_noise_std", sensor_noise_std),
        {"sim.sensor_seed",
         [](SimConfig& c, const Value& v) { c.sensor_seed = v.unsigned_integer(); }},

        NUM("load", "baseline_power", load.baseline_power),
        NUM("load", "peak_power", load.peak_power),
        NUM("load", "dominant_freq", load.dominant_freq),
        NUM("load", "sub_freq", load.sub_freq),
        NUM("load", "dominant_amplitude", load.dominant_amplitude),
        NUM("load", "sub_amplitude", load.sub_amplitude),
        NUM("load", "noise_std", load.noise_std),
        NUM("load", "ramp_duration", load.ramp_duration),
        NUM("load", "sample_interval", load.sample_interval),
        {"load.seed",
         [](SimConfig& c, const Value& v) { c.load.seed = v.unsigned_integer(); }},
        {"load.schedule",
         [](SimConfig& c, const Value& v) { c.load.schedule = v.schedule(); }},

        NUM("grid", "inertia_h", grid.inertia_h),
        NUM("grid", "damping_d", grid.damping_d),
        NUM("grid", "droop_r", grid.droop_r),
        NUM("grid", "governor_tg", grid.governor_tg),
        NUM("grid", "base_power", grid.base_power),
        NUM("grid", "nominal_freq", grid.nominal_freq),

        NUM("kf", "phi", kf.phi),
        NUM("kf", "q_baseline", kf.process_noise[0][0]),
        NUM("kf", "q_ramp", kf.process_noise[1][1]),
        {"kf.q_cross",
         [](SimConfig& c, const Value& v) {
           c.kf.process_noise[0][1] = c.kf.process_noise[1][0] = v.number();
         }},
        NUM("kf", "meas_noise", kf.meas_noise),

        NUM("weights", "s_ref", weights.s_ref),
        NUM("weights", "a_ref", weights.a_ref),
        FLAG("weights", "threshold_shift", weights.threshold_shift),
        NUM("weights", "jerk_filter_hz", weights.jerk_filter_hz),
        {"weights.jerk_source",
         [](SimConfig& c, const Value& v) {
           if (v.text == "ramp") c.weights.jerk_source = JerkSource::kRampMagnitude;
           else if (v.text == "filtered") c.weights.jerk_source = JerkSource::kFilteredJerk;
           else v.fail("expected ramp or filtered, got '" + v.text + "'");
         }},

        NUM("command", "hpf_cutoff", command.hpf_cutoff),
        NUM("command", "t_eff", command.t_eff),
        {"command.reference_power",
         [](SimConfig& c, const Value& v) { c.command.reference_power = v.number(); }},
        NUM("command", "correction_window", command.correction_window),
        NUM("command", "reference_ramp_max", command.reference_ramp_max),
        {"command.soc_manager_mode",
         [](SimConfig& c, const Value& v) {
           if (v.text == "idle") c.command.soc_manager_mode = SocManagerMode::kIdleOnly;
           else if (v.text == "continuous") c.command.soc_manager_mode = SocManagerMode::kContinuous;
           else v.fail("expected idle or continuous, got '" + v.text + "'");
         }},

        NUM("sc_controller", "kp", sc_controller.kp),
        NUM("sc_controller", "kd", sc_controller.kd),
        NUM("sc_controller", "fd", sc_controller.fd),
        NUM("sc_controller", "k_rk", sc_controller.k_rk),
        NUM("sc_controller", "ff_scale", sc_controller.ff_scale),

        NUM("ess_controller", "ki", ess_controller.ki),
        NUM("ess_controller", "t_leak", ess_controller.t_leak),
        NUM("ess_controller", "k_rc", ess_controller.k_rc),
        NUM("ess_controller", "omega_rc", ess_controller.omega_rc),
        NUM("ess_controller", "rc_damping", ess_controller.rc_damping),
        NUM("ess_controller", "fd", ess_controller.fd),
        NUM("ess_controller", "ff_scale", ess_controller.ff_scale),
        {"ess_controller.rc_form",
         [](SimConfig& c, const Value& v) {
           if (v.text == "resonant") c.ess_controller.rc_form = RcForm::kResonant;
           else if (v.text == "lowpass") c.ess_controller.rc_form = RcForm::kLowPass;
           else v.fail("expected resonant or lowpass, got '" + v.text + "'");
         }},

        FLAG("toggles", "hess_enabled", toggles.hess_enabled),
        FLAG("toggles", "soc_manager_enabled", toggles.soc_manager_enabled),
        FLAG("toggles", "baseline_correction_enabled",
             toggles.baseline_correction_enabled),
        FLAG("toggles", "ramp_term_enabled", toggles.ramp_term_enabled),
    };
    add_device(m, "bess", &SimConfig::bess);
    add_device(m, "sc", &SimConfig::sc);
    add_bias(m, "command.ess_bias", &CommandParams::ess_bias);
    add_bias(m, "command.sc_bias", &CommandParams::sc_bias);
    return m;
  }();
  return table;
}

#undef NUM
#undef FLAG

}  // namespace

SimConfig parse_config(std::istream& in) {
  SimConfig c;
  std::map<std::string, int> seen;
  bool dt_set = false, interval_set = false, duration_set = false;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = strip(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(text, "malformed section header", line);
      section = strip(text.substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(section.empty() ? text : section + "." + text,
                        "expected key = value", line);
    const std::string name = strip(text.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key", line);
    if (seen.count(key)) throw ConfigError(key, "duplicate key", line);
    seen[key] = line;
    it->second(c, Value{key, strip(text.substr(eq + 1)), line});
    dt_set |= key == "sim.dt";
    interval_set |= key == "load.sample_interval";
    duration_set |= key == "sim.duration";
  }

  // Derived defaults: one sampling interval everywhere, full schedule length,
  // and device time constants mirrored into the controllers.
  if (!interval_set) c.load.sample_interval = c.dt;
  if (!dt_set && interval_set) c.dt = c.load.sample_interval;
  c.kf.dt = c.dt;
  if (!duration_set) c.duration = c.load.total_duration();
  c.sc_controller.tau_sc = c.sc.tau;
  c.sc_controller.hpf_cutoff = c.command.hpf_cutoff;
  c.ess_controller.tau_ess = c.bess.tau;

  try {
    c.validate();
  } catch (const ConfigError& e) {
    auto it = seen.find(e.key());
    if (it == seen.end() || e.line() > 0) throw;
    const std::string what = e.what();
    throw ConfigError(e.key(), what.substr(what.find(": ") + 2), it->second);
  }
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace hess
