#include "ionjc/errors.hpp"
#include "ionjc/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace ionjc {

namespace {

using json = nlohmann::ordered_json;

// Finds the line of a key path in the raw text by searching each key after the
// position of its parent. Falls back to the deepest key found.
class Locator {
 public:
  explicit Locator(const std::string& text) : text_(text) {}

  int line(std::initializer_list<std::string_view> path) const {
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    for (std::string_view key : path) {
      const std::string quoted = "\"" + std::string(key) + "\"";
      const std::size_t at = text_.find(quoted, pos);
      if (at == std::string::npos) break;
      found = at;
      pos = at + quoted.size();
    }
    if (found == std::string::npos) return 1;
    return line_at(found);
  }

  int line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
  }

 private:
  const std::string& text_;
};

class Reader {
 public:
  explicit Reader(const Locator& loc) : loc_(loc) {}

  [[noreturn]] void fail(const std::string& message, std::initializer_list<std::string_view> path) const {
    throw ConfigError(message, loc_.line(path));
  }

  void only_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                 std::initializer_list<std::string_view> path) const {
    if (!obj.is_object()) fail("expected an object", path);
    for (const auto& item : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
        throw ConfigError("unknown key \"" + item.key() + "\"", loc_.line({item.key()}));
    }
  }

  double number(const json& v, std::initializer_list<std::string_view> path) const {
    if (!v.is_number()) fail("expected a number", path);
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number", path);
    return x;
  }

  int integer(const json& v, std::initializer_list<std::string_view> path) const {
    if (!v.is_number_integer()) fail("expected an integer", path);
    return v.get<int>();
  }

  std::string string(const json& v, std::initializer_list<std::string_view> path) const {
    if (!v.is_string()) fail("expected a string", path);
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, std::initializer_list<std::string_view> path) const {
    if (!v.is_array()) fail("expected an array of numbers", path);
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, path));
    return out;
  }

  const Locator& locator() const { return loc_; }

 private:
  const Locator& loc_;
};

std::vector<double> grid_from_range(const Reader& r, const json& obj, std::initializer_list<std::string_view> path) {
  r.only_keys(obj, {"start", "stop", "points", "spacing"}, path);
  if (!obj.contains("start") || !obj.contains("stop") || !obj.contains("points")) r.fail("range needs start, stop and points", path);
  const double start = r.number(obj["start"], path);
  const double stop = r.number(obj["stop"], path);
  const int points = r.integer(obj["points"], path);
  const std::string spacing = obj.contains("spacing") ? r.string(obj["spacing"], path) : "linear";
  if (points < 1) r.fail("range needs at least one point", path);
  std::vector<double> out(static_cast<std::size_t>(points));
  if (spacing == "linear") {
    for (int i = 0; i < points; ++i)
      out[static_cast<std::size_t>(i)] = points == 1 ? start : start + (stop - start) * i / (points - 1);
  } else if (spacing == "log") {
    if (!(start > 0.0) || !(stop > 0.0)) r.fail("logarithmic range needs positive start and stop", path);
    const double a = std::log10(start);
    const double b = std::log10(stop);
    for (int i = 0; i < points; ++i)
      out[static_cast<std::size_t>(i)] = points == 1 ? start : std::pow(10.0, a + (b - a) * i / (points - 1));
  } else {
    r.fail("spacing must be \"linear\" or \"log\"", path);
  }
  if (points > 1) {
    out.front() = start;
    out.back() = stop;
  }
  return out;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

const char* units_name(Units u) { return u == Units::nu1 ? "nu1" : "physical"; }

}  // namespace

std::vector<double> default_sweep_grid() {
  std::vector<double> out(25);
  for (int i = 0; i < 25; ++i) out[static_cast<std::size_t>(i)] = std::pow(10.0, -2.0 + 3.0 * i / 24.0);
  out.front() = 1e-2;
  out.back() = 10.0;
  return out;
}

int ExperimentConfig::effective_n_max() const {
  if (n_max) return *n_max;
  return ions == 1 ? 40 : ions == 2 ? 12 : 6;
}

int ExperimentConfig::effective_guard() const {
  if (guard) return *guard;
  return ions == 1 ? 10 : ions == 2 ? 4 : 2;
}

double ExperimentConfig::frequency_scale() const { return units == Units::nu1 ? 1.0 : 1.0 / nu1; }

ExperimentConfig parse_config(const std::string& text, const std::string& experiment) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const Locator loc(text);
    throw ConfigError(std::string("malformed JSON: ") + e.what(), loc.line_at(e.byte == 0 ? 0 : e.byte - 1));
  }
  const Locator loc(text);
  const Reader r(loc);
  r.only_keys(root, {"experiment", "units", "chain", "omega_ge", "drives", "hilbert", "sweep", "evolve", "output"}, {});

  ExperimentConfig c;
  if (root.contains("experiment")) {
    c.experiment = r.string(root["experiment"], {"experiment"});
    if (!experiment.empty() && c.experiment != experiment)
      r.fail("config is for \"" + c.experiment + "\" but \"" + experiment + "\" was requested", {"experiment"});
  } else if (!experiment.empty()) {
    c.experiment = experiment;
  } else {
    throw ConfigError("missing \"experiment\"", 1);
  }
  if (c.experiment != "modes" && c.experiment != "resonance" && c.experiment != "sweep-rabi" && c.experiment != "evolve")
    r.fail("unknown experiment \"" + c.experiment + "\"", {"experiment"});

  if (root.contains("units")) {
    const std::string u = r.string(root["units"], {"units"});
    if (u == "nu1") c.units = Units::nu1;
    else if (u == "physical") c.units = Units::physical;
    else r.fail("units must be \"nu1\" or \"physical\"", {"units"});
  }

  if (!root.contains("chain")) throw ConfigError("missing \"chain\"", 1);
  const json& chain = root["chain"];
  if (c.units == Units::nu1) {
    r.only_keys(chain, {"ions", "lamb_dicke"}, {"chain"});
    if (chain.contains("lamb_dicke")) c.lamb_dicke = r.number(chain["lamb_dicke"], {"chain", "lamb_dicke"});
    if (!(c.lamb_dicke > 0.0)) r.fail("lamb_dicke must be positive", {"chain", "lamb_dicke"});
  } else {
    r.only_keys(chain, {"ions", "nu1", "mass_amu"}, {"chain"});
    if (!chain.contains("nu1") || !chain.contains("mass_amu"))
      r.fail("physical units need chain.nu1 (rad/s) and chain.mass_amu", {"chain"});
    c.nu1 = r.number(chain["nu1"], {"chain", "nu1"});
    c.mass_amu = r.number(chain["mass_amu"], {"chain", "mass_amu"});
    if (!(c.nu1 > 0.0)) r.fail("nu1 must be positive", {"chain", "nu1"});
    if (!(c.mass_amu > 0.0)) r.fail("mass_amu must be positive", {"chain", "mass_amu"});
  }
  if (!chain.contains("ions")) r.fail("missing chain.ions", {"chain"});
  c.ions = r.integer(chain["ions"], {"chain", "ions"});
  if (c.ions < 1) r.fail("ions must be at least 1", {"chain", "ions"});
  if (c.ions > kMaxIons) r.fail("N exceeds supported range (1.." + std::to_string(kMaxIons) + ")", {"chain", "ions"});

  if (root.contains("omega_ge")) c.omega_ge = r.number(root["omega_ge"], {"omega_ge"});

  if (root.contains("drives")) {
    const json& drives = root["drives"];
    if (!drives.is_array()) r.fail("drives must be an array", {"drives"});
    std::set<int> used;
    for (const json& d : drives) {
      r.only_keys(d, {"ion", "rabi", "detuning", "omega_l", "beam_angle", "k_l", "phase"}, {"drives"});
      DriveConfig dc;
      if (!d.contains("ion") || !d.contains("rabi")) r.fail("each drive needs ion and rabi", {"drives"});
      dc.ion = r.integer(d["ion"], {"drives", "ion"});
      dc.rabi = r.number(d["rabi"], {"drives", "rabi"});
      if (d.contains("detuning") == d.contains("omega_l")) r.fail("each drive needs exactly one of detuning, omega_l", {"drives"});
      if (d.contains("detuning")) dc.detuning = r.number(d["detuning"], {"drives", "detuning"});
      if (d.contains("omega_l")) dc.omega_l = r.number(d["omega_l"], {"drives", "omega_l"});
      if (d.contains("beam_angle")) dc.beam_angle = r.number(d["beam_angle"], {"drives", "beam_angle"});
      if (d.contains("k_l")) dc.k_l = r.number(d["k_l"], {"drives", "k_l"});
      else if (c.units == Units::physical) r.fail("physical units need k_l (1/m) for every drive", {"drives"});
      if (d.contains("phase")) dc.phase = r.number(d["phase"], {"drives", "phase"});
      if (dc.ion < 1 || dc.ion > c.ions) r.fail("drive ion index out of range", {"drives", "ion"});
      if (!used.insert(dc.ion).second) r.fail("ion " + std::to_string(dc.ion) + " is driven twice", {"drives"});
      if (!(dc.rabi >= 0.0)) r.fail("rabi must be non-negative", {"drives", "rabi"});
      if (!(dc.k_l > 0.0)) r.fail("k_l must be positive", {"drives", "k_l"});
      c.drives.push_back(dc);
    }
  }

  if (root.contains("hilbert")) {
    const json& h = root["hilbert"];
    r.only_keys(h, {"n_max", "guard"}, {"hilbert"});
    if (h.contains("n_max")) c.n_max = r.integer(h["n_max"], {"hilbert", "n_max"});
    if (h.contains("guard")) c.guard = r.integer(h["guard"], {"hilbert", "guard"});
  }
  if (c.effective_n_max() < 2) r.fail("n_max must be at least 2", {"hilbert", "n_max"});
  if (c.effective_guard() < 0 || c.effective_guard() >= c.effective_n_max())
    r.fail("guard must satisfy 0 <= guard < n_max", {"hilbert", "guard"});

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    r.only_keys(s, {"drive", "mode", "grid", "range"}, {"sweep"});
    if (s.contains("drive")) c.sweep_drive = r.integer(s["drive"], {"sweep", "drive"});
    if (s.contains("mode")) c.sweep_mode = r.integer(s["mode"], {"sweep", "mode"});
    if (s.contains("grid") && s.contains("range")) r.fail("give either grid or range, not both", {"sweep"});
    if (s.contains("grid")) c.sweep_grid = r.numbers(s["grid"], {"sweep", "grid"});
    if (s.contains("range")) c.sweep_grid = grid_from_range(r, s["range"], {"sweep", "range"});
    if (!s.contains("grid") && !s.contains("range")) c.sweep_grid = default_sweep_grid();
  } else if (c.experiment == "sweep-rabi") {
    c.sweep_grid = default_sweep_grid();
  }

  if (root.contains("evolve")) {
    const json& e = root["evolve"];
    r.only_keys(e, {"method", "times", "range", "resonant_pairs", "initial_state"}, {"evolve"});
    if (e.contains("method")) {
      const std::string name = r.string(e["method"], {"evolve", "method"});
      const auto m = parse_method(name);
      if (!m) r.fail("unknown method \"" + name + "\"", {"evolve", "method"});
      c.method = *m;
    }
    if (e.contains("times") && e.contains("range")) r.fail("give either times or range, not both", {"evolve"});
    if (e.contains("times")) c.times = r.numbers(e["times"], {"evolve", "times"});
    if (e.contains("range")) c.times = grid_from_range(r, e["range"], {"evolve", "range"});
    if (e.contains("resonant_pairs")) {
      const json& pairs = e["resonant_pairs"];
      if (!pairs.is_array()) r.fail("resonant_pairs must be an array of [drive, mode]", {"evolve", "resonant_pairs"});
      for (const json& p : pairs) {
        if (!p.is_array() || p.size() != 2) r.fail("resonant pair must be [drive, mode]", {"evolve", "resonant_pairs"});
        c.resonant_pairs.push_back({r.integer(p[0], {"evolve", "resonant_pairs"}), r.integer(p[1], {"evolve", "resonant_pairs"})});
      }
    }
    if (e.contains("initial_state")) {
      const json& s = e["initial_state"];
      r.only_keys(s, {"modes", "spins"}, {"evolve", "initial_state"});
      if (s.contains("modes")) {
        if (!s["modes"].is_array()) r.fail("modes must be an array", {"initial_state", "modes"});
        for (const json& m : s["modes"]) {
          ModeState ms;
          if (m.is_number_integer()) {
            ms.fock = m.get<int>();
          } else if (m.is_object()) {
            r.only_keys(m, {"alpha"}, {"initial_state", "modes"});
            const auto a = r.numbers(m["alpha"], {"initial_state", "alpha"});
            if (a.size() != 2) r.fail("alpha must be [re, im]", {"initial_state", "alpha"});
            ms.alpha = Complex(a[0], a[1]);
          } else {
            r.fail("mode state must be a Fock number or {\"alpha\": [re, im]}", {"initial_state", "modes"});
          }
          c.initial_modes.push_back(ms);
        }
      }
      if (s.contains("spins")) {
        if (!s["spins"].is_array()) r.fail("spins must be an array of \"e\" / \"g\"", {"initial_state", "spins"});
        for (const json& v : s["spins"]) {
          const std::string sv = r.string(v, {"initial_state", "spins"});
          if (sv != "e" && sv != "g") r.fail("spin state must be \"e\" or \"g\"", {"initial_state", "spins"});
          c.initial_spins.push_back(sv[0]);
        }
      }
    }
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    r.only_keys(o, {"path", "format"}, {"output"});
    if (o.contains("path")) c.output_path = r.string(o["path"], {"output", "path"});
    if (o.contains("format")) {
      const std::string f = r.string(o["format"], {"output", "format"});
      if (f == "csv") c.format = OutputFormat::csv;
      else if (f == "json") c.format = OutputFormat::json;
      else r.fail("format must be \"csv\" or \"json\"", {"output", "format"});
    }
  }

  // experiment-specific checks
  if ((c.experiment == "resonance" || c.experiment == "sweep-rabi" || c.experiment == "evolve") && c.drives.empty())
    r.fail("experiment \"" + c.experiment + "\" needs at least one drive", {"drives"});

  if (c.experiment == "sweep-rabi") {
    if (c.drives.size() != 1) r.fail("sweep-rabi needs exactly one drive", {"drives"});
    if (c.sweep_grid.size() < 2) r.fail("sweep grid needs at least 2 points", {"sweep"});
    if (!strictly_increasing(c.sweep_grid)) r.fail("sweep grid must be strictly increasing", {"sweep"});
    if (!(c.sweep_grid.front() > 0.0)) r.fail("sweep grid must be positive", {"sweep"});
    if (c.sweep_drive != 1) r.fail("sweep drive out of range", {"sweep", "drive"});
    if (c.sweep_mode < 1 || c.sweep_mode > c.ions) r.fail("sweep mode out of range", {"sweep", "mode"});
  }

  if (c.experiment == "evolve") {
    if (c.times.empty()) r.fail("evolve needs times", {"evolve"});
    if (!strictly_increasing(c.times)) r.fail("evolution times must be strictly increasing", {"evolve", "times"});
    if (c.times.front() < 0.0) r.fail("evolution times must be non-negative", {"evolve", "times"});
    const bool rwa = c.method == Method::pipeline_rwa || c.method == Method::standard_rwa || c.method == Method::rwa_jc;
    if (rwa && c.resonant_pairs.empty()) r.fail("RWA methods need resonant_pairs", {"evolve", "method"});
    for (const ResonantPair& p : c.resonant_pairs) {
      if (p.drive < 1 || p.drive > static_cast<int>(c.drives.size()) || p.mode < 1 || p.mode > c.ions)
        r.fail("resonant pair out of range", {"evolve", "resonant_pairs"});
    }
    if (!c.initial_modes.empty() && static_cast<int>(c.initial_modes.size()) != c.ions)
      r.fail("initial_state.modes needs one entry per mode", {"initial_state", "modes"});
    if (!c.initial_spins.empty() && c.initial_spins.size() != c.drives.size())
      r.fail("initial_state.spins needs one entry per drive", {"initial_state", "spins"});
    for (const ModeState& m : c.initial_modes)
      if (!m.alpha && (m.fock < 0 || m.fock >= c.effective_n_max()))
        r.fail("Fock occupation outside the truncated space", {"initial_state", "modes"});
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), experiment);
}

std::string serialize_config(const ExperimentConfig& c) {
  json root;
  root["experiment"] = c.experiment;
  root["units"] = units_name(c.units);
  json chain;
  chain["ions"] = c.ions;
  if (c.units == Units::nu1) {
    chain["lamb_dicke"] = c.lamb_dicke;
  } else {
    chain["nu1"] = c.nu1;
    chain["mass_amu"] = c.mass_amu;
  }
  root["chain"] = chain;
  root["omega_ge"] = c.omega_ge;

  json drives = json::array();
  for (const DriveConfig& d : c.drives) {
    json j;
    j["ion"] = d.ion;
    j["rabi"] = d.rabi;
    if (d.detuning) j["detuning"] = *d.detuning;
    if (d.omega_l) j["omega_l"] = *d.omega_l;
    j["beam_angle"] = d.beam_angle;
    j["k_l"] = d.k_l;
    j["phase"] = d.phase;
    drives.push_back(j);
  }
  root["drives"] = drives;

  json hilbert = json::object();
  if (c.n_max) hilbert["n_max"] = *c.n_max;
  if (c.guard) hilbert["guard"] = *c.guard;
  root["hilbert"] = hilbert;

  if (!c.sweep_grid.empty() || c.sweep_drive != 1 || c.sweep_mode != 1)
    root["sweep"] = json{{"drive", c.sweep_drive}, {"mode", c.sweep_mode}, {"grid", c.sweep_grid}};

  const bool has_evolve = !c.times.empty() || c.method != Method::exact || !c.resonant_pairs.empty() ||
                          !c.initial_modes.empty() || !c.initial_spins.empty();
  if (has_evolve) {
    json e;
    e["method"] = method_name(c.method);
    e["times"] = c.times;
    json pairs = json::array();
    for (const ResonantPair& p : c.resonant_pairs) pairs.push_back(json::array({p.drive, p.mode}));
    e["resonant_pairs"] = pairs;
    json modes = json::array();
    for (const ModeState& m : c.initial_modes) {
      if (m.alpha) modes.push_back(json{{"alpha", json::array({m.alpha->real(), m.alpha->imag()})}});
      else modes.push_back(m.fock);
    }
    json spins = json::array();
    for (char s : c.initial_spins) spins.push_back(std::string(1, s));
    e["initial_state"] = json{{"modes", modes}, {"spins", spins}};
    root["evolve"] = e;
  }

  json out;
  if (c.output_path) out["path"] = *c.output_path;
  out["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  root["output"] = out;
  return root.dump(2) + "\n";
}

ChainModel build_chain(const ExperimentConfig& c) {
  if (c.units == Units::nu1) return make_chain(c.ions, 1.0 / (2.0 * c.lamb_dicke * c.lamb_dicke), 1.0);
  return make_chain(c.ions, mass_over_hbar(c.mass_amu), c.nu1);
}

ModelSpec build_model(const ExperimentConfig& c) {
  const ChainModel chain = build_chain(c);
  const double scale = c.frequency_scale();
  const double omega_ge = c.omega_ge * scale;
  std::vector<LaserDrive> drives;
  for (const DriveConfig& d : c.drives) {
    LaserDrive ld;
    ld.ion = d.ion - 1;
    ld.rabi = d.rabi * scale;
    ld.omega_l = d.omega_l ? *d.omega_l * scale : omega_ge - *d.detuning * scale;
    ld.beam_angle = d.beam_angle;
    ld.k_l = d.k_l;
    ld.phase = d.phase;
    drives.push_back(ld);
  }
  try {
    return make_model(chain, std::move(drives), c.effective_n_max(), c.effective_guard(), omega_ge);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace ionjc
