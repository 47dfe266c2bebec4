#include "fraclab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "fraclab/dimer_counting.hpp"
#include "fraclab/dirac_continuum.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/fock_charge.hpp"
#include "fraclab/ssh_lattice.hpp"

namespace fraclab::runner {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) invalid("'" + key + "' expects a number, got '" + text + "'");
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number<T>(key, item));
  return out;
}

std::pair<std::string, std::string> parse_pair(const std::string& key, const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) invalid("'" + key + "' expects lo:hi, got '" + text + "'");
  return {parts[0], parts[1]};
}

struct Reader {
  const ExperimentConfig& cfg;

  bool has(const std::string& k) const { return cfg.values.count(k) != 0; }
  const std::string& raw(const std::string& k) const {
    const auto it = cfg.values.find(k);
    if (it == cfg.values.end()) invalid("missing required key '" + k + "'");
    return it->second;
  }
  template <typename T>
  T number(const std::string& k) const { return parse_number<T>(k, raw(k)); }
  template <typename T>
  T number_or(const std::string& k, T fallback) const { return has(k) ? number<T>(k) : fallback; }
  std::string text_or(const std::string& k, const std::string& fallback) const { return has(k) ? raw(k) : fallback; }
};

const std::vector<std::string> kGlobal{"emit", "jobs"};
const std::vector<std::string> kCount{"sites", "walls", "region", "vacuum", "diagram"};
const std::vector<std::string> kLattice{"sites",    "t0",        "delta-t",          "xi",
                                        "walls",    "wall-fractions", "boundary",    "occupancy",
                                        "window",   "window-fractions", "vacuum",    "midgap-fraction",
                                        "subtraction"};
const std::vector<std::string> kContinuum{"profile", "phi0", "xi", "L", "grid-step"};
const std::vector<std::string> kFock{"modes", "state", "max-check-modes"};

std::vector<std::string> with_global(std::vector<std::string> keys) {
  keys.insert(keys.end(), kGlobal.begin(), kGlobal.end());
  return keys;
}

// ---- count ---------------------------------------------------------------

json run_count(const Reader& r) {
  const int sites = r.number<int>("sites");
  dimer::DomainWallSpec walls;
  if (r.has("walls")) walls.wall_positions = parse_list<int>("walls", r.raw("walls"));
  const std::string vac = r.text_or("vacuum", "A");
  if (vac != "A" && vac != "B") invalid("vacuum must be A or B");
  const auto vacuum = vac == "A" ? dimer::Vacuum::A : dimer::Vacuum::B;

  const auto solitonic = dimer::build_pattern(sites, vacuum, walls);
  const auto vacuum_pattern = dimer::build_pattern(sites, vacuum, {});
  dimer::SiteInterval region{0, sites - 1};
  if (r.has("region")) {
    const auto [lo, hi] = parse_pair("region", r.raw("region"));
    region = {parse_number<int>("region", lo), parse_number<int>("region", hi)};
  }
  const auto deficit = dimer::link_deficit(solitonic, vacuum_pattern, region);

  json out;
  out["links_vacuum"] = dimer::count_links(vacuum_pattern, region);
  out["links_solitonic"] = dimer::count_links(solitonic, region);
  out["deficit_total"] = fraclab::to_string(deficit.total);
  out["deficit_per_wall"] = fraclab::to_string(deficit.per_wall);
  out["defect_sites"] = solitonic.defect_sites;
  if (r.text_or("diagram", "false") == "true") {
    out["diagram_vacuum"] = dimer::render_ascii(vacuum_pattern);
    out["diagram_solitonic"] = dimer::render_ascii(solitonic);
  }
  return out;
}

// ---- lattice -------------------------------------------------------------

struct LatticeSetup {
  lattice::ChainConfig chain;
  lattice::Window window;
  bool vacuum_chain_subtraction = false;
};

LatticeSetup resolve_lattice(const Reader& r) {
  LatticeSetup s;
  auto& c = s.chain;
  c.sites = r.number<int>("sites");
  c.t0 = r.number_or<double>("t0", 1.0);
  c.delta_t = r.number_or<double>("delta-t", 0.1);
  c.xi = r.number_or<double>("xi", 8.0);
  c.midgap_fraction = r.number_or<double>("midgap-fraction", 0.1);

  const std::string boundary = r.text_or("boundary", "ring");
  if (boundary == "ring") c.boundary = lattice::Boundary::Ring;
  else if (boundary == "open") c.boundary = lattice::Boundary::Open;
  else invalid("boundary must be ring or open");

  const std::string occ = r.text_or("occupancy", "empty");
  if (occ == "empty") c.occupancy = lattice::Occupancy::ZeroModesEmpty;
  else if (occ == "filled") c.occupancy = lattice::Occupancy::ZeroModesFilled;
  else invalid("occupancy must be empty or filled");

  const std::string vac = r.text_or("vacuum", "A");
  if (vac != "A" && vac != "B") invalid("vacuum must be A or B");
  c.left_vacuum = vac == "A" ? 1 : -1;

  if (r.has("walls") && r.has("wall-fractions")) invalid("give walls or wall-fractions, not both");
  if (r.has("walls")) c.walls = parse_list<int>("walls", r.raw("walls"));
  if (r.has("wall-fractions")) {
    for (double f : parse_list<double>("wall-fractions", r.raw("wall-fractions"))) {
      c.walls.push_back(static_cast<int>(std::lround(f * c.sites)));
    }
  }

  if (r.has("window") && r.has("window-fractions")) invalid("give window or window-fractions, not both");
  if (r.has("window")) {
    const auto [lo, hi] = parse_pair("window", r.raw("window"));
    s.window = {parse_number<int>("window", lo), parse_number<int>("window", hi)};
  } else if (r.has("window-fractions")) {
    const auto [lo, hi] = parse_pair("window-fractions", r.raw("window-fractions"));
    const auto at = [&](const std::string& f) {
      return std::min(c.sites - 1, static_cast<int>(std::lround(parse_number<double>("window-fractions", f) * c.sites)));
    };
    s.window = {at(lo), at(hi)};
  } else {
    invalid("missing required key 'window' (or 'window-fractions')");
  }

  const std::string sub = r.text_or("subtraction", "counterterm");
  if (sub != "counterterm" && sub != "vacuum-chain") invalid("subtraction must be counterterm or vacuum-chain");
  s.vacuum_chain_subtraction = sub == "vacuum-chain";
  lattice::validate(c);
  return s;
}

json run_lattice(const Reader& r) {
  const auto setup = resolve_lattice(r);
  const auto& c = setup.chain;
  const auto rep = lattice::analyze(c, setup.window);

  double max_zm = 0.0;
  for (double e : rep.zero_mode_energies) max_zm = std::max(max_zm, std::abs(e));

  json out;
  out["N"] = c.sites;
  out["xi"] = c.xi;
  out["delta_t"] = c.delta_t;
  out["window_lo"] = rep.window.lo;
  out["window_hi"] = rep.window.hi;
  out["zero_mode_count"] = rep.zero_mode_count;
  out["max_zero_mode_energy"] = max_zm;
  out["charge"] = rep.charge;
  out["pairing_defect"] = rep.pairing_defect;
  out["completeness_defect"] = rep.completeness_defect;
  out["local_identity_defect"] = rep.local_identity_defect;
  out["predicted_zero_modes"] = rep.predicted_zero_modes;
  out["zero_mode_energies"] = rep.zero_mode_energies;
  out["density_symmetry_defect"] = rep.density_symmetry_defect;
  out["residual_bound"] = rep.residual_bound;
  out["total_charge"] = rep.total_charge;
  out["occupancy"] = c.occupancy == lattice::Occupancy::ZeroModesEmpty ? "empty" : "filled";
  // One spin species is simulated; the physical chain carries both.
  out["charge_both_spins"] = 2.0 * rep.charge;

  if (setup.vacuum_chain_subtraction) {
    const auto h = lattice::build_hamiltonian(lattice::build_hoppings(c));
    const auto sp = lattice::diagonalize(h);
    const auto mid = lattice::find_midgap(sp, c);
    const auto rho = lattice::vacuum_subtracted_density(sp, mid.indices, c.occupancy, c);
    out["charge_vacuum_chain"] = lattice::window_charge(rho, setup.window, c);
  }
  return out;
}

// ---- continuum -----------------------------------------------------------

continuum::PhononProfile load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open profile table '" + path + "'");
  std::vector<double> xs, phis;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream row(t);
    double x = 0, p = 0;
    if (!(row >> x >> p)) invalid("bad table row '" + t + "'");
    xs.push_back(x);
    phis.push_back(p);
  }
  return continuum::table_profile(xs, phis);
}

json run_continuum(const Reader& r) {
  const std::string profile = r.text_or("profile", "tanh");
  continuum::PhononProfile p;
  if (profile == "tanh") {
    const double phi0 = r.number_or<double>("phi0", 1.0);
    const double xi = r.number_or<double>("xi", 2.0);
    const double L = r.number_or<double>("L", 20.0 * xi);
    const double h = r.number_or<double>("grid-step", 0.01);
    p = continuum::tanh_profile(phi0, xi, L, h);
  } else if (profile.rfind("table:", 0) == 0) {
    p = load_table(profile.substr(6));
  } else {
    invalid("profile must be tanh or table:<path>");
  }
  const auto topo = continuum::classify(p);
  json out;
  out["class"] = topo == continuum::Topology::Kink ? "kink"
                 : topo == continuum::Topology::Antikink ? "antikink" : "vacuum";
  if (topo == continuum::Topology::Vacuum) {
    // Surfaces NonNormalizable, the expected outcome for a vacuum profile.
    (void)continuum::zero_mode(p);
  }
  const auto zm = continuum::zero_mode(p);
  out["charge"] = continuum::zero_mode_charge(zm);
  out["norm_check"] = zm.norm_check;
  out["tail_decay_rate"] = zm.tail_decay_rate();
  out["component"] = zm.component == continuum::Component::Upper ? "upper" : "lower";
  out["refinement_delta"] = zm.refinement_delta;
  return out;
}

// ---- fock ----------------------------------------------------------------

json run_fock(const Reader& r) {
  const int k = r.number<int>("modes");
  const auto modes = fock::ModeSet::with_modes(k);
  fock::validate(modes);
  const auto state = fock::parse_state(modes, r.text_or("state", ""));
  const int max_check = r.number_or<int>("max-check-modes", 3);

  json out;
  out["state"] = fock::format_state(modes, state);
  out["charge"] = fraclab::to_string(fock::charge_eigenvalue(modes, state));
  out["variance"] = fraclab::to_string(fock::charge_variance(modes, state));
  if (k <= max_check) {
    out["checks_passed"] = fock::verify_car_algebra(modes, max_check).all_passed();
  } else {
    out["checks_passed"] = nullptr;
  }
  return out;
}

// ---- sweeps --------------------------------------------------------------

json lattice_row(const ExperimentConfig& cfg) {
  json row;
  try {
    const json res = run_lattice(Reader{cfg});
    for (const auto& col : lattice_csv_columns()) row[col] = res[col];
    row["error"] = "";
  } catch (const Error& e) {
    const Reader r{cfg};
    for (const auto& col : lattice_csv_columns()) row[col] = nullptr;
    const auto echo = [&](const char* col, const char* key) {
      if (r.has(key)) row[col] = r.raw(key);
    };
    echo("N", "sites");
    echo("xi", "xi");
    echo("delta_t", "delta-t");
    row["error"] = e.what();
  }
  return row;
}

std::vector<json> run_points(const std::vector<ExperimentConfig>& points, int jobs) {
  std::vector<json> rows(points.size());
  const auto workers = static_cast<std::size_t>(std::clamp<int>(jobs, 1, 64));
  if (workers == 1 || points.size() < 2) {
    for (std::size_t i = 0; i < points.size(); ++i) rows[i] = lattice_row(points[i]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, points.size()); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = lattice_row(points[i]);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

std::string csv_field(const json& v) {
  std::string s;
  if (v.is_null()) return s;
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) s = v.get<std::string>();
  else s = v.dump();
  if (s.find_first_of(",\"\r\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return s;
}

std::string csv_table(const std::vector<std::string>& columns, const std::vector<json>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out += (i ? "," : "") + csv_field(row.contains(columns[i]) ? row[columns[i]] : json());
    }
    out += "\r\n";
  }
  return out;
}

std::vector<std::string> sweep_columns() {
  auto cols = lattice_csv_columns();
  cols.push_back("error");
  return cols;
}

int jobs_of(const Reader& r) {
  const int jobs = r.number_or<int>("jobs", 1);
  if (jobs < 1) invalid("jobs must be >= 1");
  return jobs;
}

json run_converge(const ExperimentConfig& cfg) {
  const Reader r{cfg};
  const auto sites = split(r.raw("sites"), ',');
  const auto xis = r.has("xi") ? split(r.raw("xi"), ',') : std::vector<std::string>{"8"};
  std::vector<ExperimentConfig> points;
  for (const auto& n : sites) {
    for (const auto& xi : xis) {
      ExperimentConfig p{Command::Lattice, cfg.values};
      p.values.erase("emit");
      p.values.erase("jobs");
      p.values["sites"] = n;
      p.values["xi"] = xi;
      points.push_back(std::move(p));
    }
  }
  json out;
  out["columns"] = sweep_columns();
  out["rows"] = run_points(points, jobs_of(r));
  return out;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Count: return "count";
    case Command::Lattice: return "lattice";
    case Command::Continuum: return "continuum";
    case Command::Fock: return "fock";
    case Command::Converge: return "converge";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::Count, Command::Lattice, Command::Continuum, Command::Fock, Command::Converge}) {
    if (to_string(c) == name) return c;
  }
  invalid("unknown subcommand '" + std::string(name) + "'");
}

const std::vector<std::string>& allowed_keys(Command command) {
  static const auto count = with_global(kCount);
  static const auto lattice = with_global(kLattice);
  static const auto continuum = with_global(kContinuum);
  static const auto fock = with_global(kFock);
  switch (command) {
    case Command::Count: return count;
    case Command::Lattice:
    case Command::Converge: return lattice;
    case Command::Continuum: return continuum;
    case Command::Fock: return fock;
  }
  return lattice;
}

void check_keys(const ExperimentConfig& config) {
  if (config.values.empty()) invalid("empty configuration");
  const auto& allowed = allowed_keys(config.command);
  for (const auto& [key, value] : config.values) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid("unknown key '" + key + "' for " + std::string(to_string(config.command)));
    }
  }
}

ExperimentConfig parse_config_text(Command command, std::string_view text) {
  ExperimentConfig cfg;
  cfg.command = command;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::parse_error& e) {
      invalid(std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) cfg.values[key] = value.get<std::string>();
      else if (value.is_array()) {
        std::string joined;
        for (const auto& item : value) {
          if (!joined.empty()) joined += ',';
          joined += item.is_string() ? item.get<std::string>() : item.dump();
        }
        cfg.values[key] = joined;
      } else {
        cfg.values[key] = value.dump();
      }
    }
  } else {
    std::istringstream in(body);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      const auto t = trim(std::string_view(line).substr(0, hash));
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) invalid("line " + std::to_string(lineno) + ": expected key=value");
      cfg.values[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
    }
  }
  const auto& allowed = allowed_keys(command);
  for (const auto& [key, value] : cfg.values) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid("unknown key '" + key + "' for " + std::string(to_string(command)));
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(Command command, const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(command, buf.str());
}

json ResultRecord::to_json() const {
  json j;
  j["command"] = command;
  j["config"] = config;
  j["result"] = result;
  j["duration_seconds"] = duration_seconds;
  return j;
}

ResultRecord ResultRecord::from_json(const json& j) {
  ResultRecord r;
  r.command = j.at("command").get<std::string>();
  r.config = j.at("config");
  r.result = j.at("result");
  r.duration_seconds = j.at("duration_seconds").get<double>();
  return r;
}

ResultRecord run(const ExperimentConfig& config) {
  check_keys(config);
  const auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  rec.command = std::string(to_string(config.command));
  for (const auto& [k, v] : config.values) rec.config[k] = v;
  const Reader r{config};
  switch (config.command) {
    case Command::Count: rec.result = run_count(r); break;
    case Command::Lattice: rec.result = run_lattice(r); break;
    case Command::Continuum: rec.result = run_continuum(r); break;
    case Command::Fock: rec.result = run_fock(r); break;
    case Command::Converge: rec.result = run_converge(config); break;
  }
  rec.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

const std::vector<std::string>& lattice_csv_columns() {
  static const std::vector<std::string> cols{
      "N",      "xi",             "delta_t",             "window_lo", "window_hi", "zero_mode_count",
      "max_zero_mode_energy", "charge", "pairing_defect", "completeness_defect", "local_identity_defect"};
  return cols;
}

std::string sweep(const ExperimentConfig& base, const std::string& axis, const std::vector<std::string>& values,
                  int jobs) {
  static const std::vector<std::string> sweepable{"sites", "xi", "delta-t", "t0", "midgap-fraction"};
  if (std::find(sweepable.begin(), sweepable.end(), axis) == sweepable.end()) {
    invalid("'" + axis + "' is not a sweepable parameter");
  }
  std::vector<ExperimentConfig> points;
  for (const auto& v : values) {
    ExperimentConfig p{Command::Lattice, base.values};
    p.values[axis] = v;
    points.push_back(std::move(p));
  }
  return csv_table(sweep_columns(), run_points(points, jobs));
}

std::string emit(const ResultRecord& record, Emit format) {
  if (format == Emit::Json) return record.to_json().dump(2) + "\n";
  if (record.command == "converge") {
    std::vector<std::string> cols = record.result.at("columns").get<std::vector<std::string>>();
    std::vector<json> rows(record.result.at("rows").begin(), record.result.at("rows").end());
    return csv_table(cols, rows);
  }
  if (record.command == "lattice") return csv_table(lattice_csv_columns(), {record.result});
  std::vector<std::string> cols;
  for (const auto& [key, value] : record.result.items()) {
    if (value.is_primitive()) cols.push_back(key);
  }
  return csv_table(cols, {record.result});
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace fraclab::runner
