#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "fourq/scenario.hpp"

namespace fourq {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_double(v[i]);
  return s;
}

const std::map<std::string, ScenarioKind>& kind_names() {
  static const std::map<std::string, ScenarioKind> names = {
      {"intensity_sweep", ScenarioKind::IntensitySweep},
      {"correlation_map", ScenarioKind::CorrelationMap},
      {"zernike_retrieval", ScenarioKind::ZernikeRetrieval},
      {"fermion_aperture", ScenarioKind::FermionAperture},
      {"custom", ScenarioKind::Custom},
  };
  return names;
}

struct Entry {
  std::string value;
  int line;
};

}  // namespace

std::string to_string(ScenarioKind k) {
  for (const auto& [name, kind] : kind_names())
    if (kind == k) return name;
  return "?";
}

std::optional<double> parse_number(const std::string& raw) {
  std::string token = trim(raw);
  if (token.empty()) return std::nullopt;
  double scale = 1.0;
  if (token.size() >= 2 && token.compare(token.size() - 2, 2, "pi") == 0) {
    scale = kPi;
    token = trim(token.substr(0, token.size() - 2));
    if (token.empty() || token == "+") return kPi;
    if (token == "-") return -kPi;
  }
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) return std::nullopt;
  return v * scale;
}

EmitFlags parse_emit(const std::string& list) {
  EmitFlags flags{false, false, false};
  for (const std::string& item : split_list(list)) {
    if (item == "csv") flags.csv = true;
    else if (item == "json") flags.json = true;
    else if (item == "pgm") flags.pgm = true;
    else if (!item.empty()) throw ConfigError("unknown emit format '" + item + "' (expected csv, json, pgm)");
  }
  return flags;
}

std::map<std::string, std::string> ScenarioConfig::echo() const {
  std::map<std::string, std::string> e;
  e["scenario"] = to_string(kind);
  e["wavelength_mm"] = fmt_double(wavelength_mm);
  e["focal_length_mm"] = fmt_double(focal_length_mm);
  e["separation_mm"] = fmt_double(separation_mm);
  e["waist_mm"] = fmt_double(waist_mm);
  e["half_width_mm"] = fmt_double(half_width_mm);
  e["half_extent_mm"] = fmt_double(half_extent_mm);
  e["n"] = std::to_string(n);
  e["n_max"] = std::to_string(n_max);
  e["a_p"] = fmt_list(amplitudes);
  e["phi"] = fmt_list(phases);
  e["aperture_widths_mm"] = fmt_list(aperture_widths_mm);
  e["zernike_delta"] = fmt_double(zernike_delta);
  e["mask_origin_mm"] = fmt_double(mask_origin_mm);
  e["quadrature_points"] = std::to_string(quadrature_points);
  e["custom_mask_file"] = custom_mask_file.filename().string();
  std::string emits;
  if (emit.csv) emits += "csv";
  if (emit.json) emits += std::string(emits.empty() ? "" : ",") + "json";
  if (emit.pgm) emits += std::string(emits.empty() ? "" : ",") + "pgm";
  e["emit"] = emits;
  return e;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source_name,
                            const std::filesystem::path& base_dir) {
  static const std::set<std::string> known = {
      "scenario",   "wavelength_mm", "focal_length_mm", "separation_mm",      "waist_mm",
      "half_width_mm", "half_extent_mm", "n",          "n_max",              "a_p",
      "phi",        "aperture_widths_mm", "zernike_delta", "mask_origin_mm", "quadrature_points",
      "custom_mask_file", "output_dir", "emit"};

  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known.count(key)) throw ConfigError(where + "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
    if (entries.count(key))
      throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                        std::to_string(entries[key].line) + ")");
    entries[key] = Entry{value, line_no};
  }

  auto where = [&](const std::string& key) {
    return source_name + ":" + std::to_string(entries.at(key).line) + ": ";
  };
  auto number = [&](const std::string& key, double fallback) {
    if (!entries.count(key)) return fallback;
    auto v = parse_number(entries[key].value);
    if (!v) throw ConfigError(where(key) + "'" + key + "' is not a number: " + entries[key].value);
    return *v;
  };
  auto positive = [&](const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw ConfigError((entries.count(key) ? where(key) : source_name + ": ") + "'" + key +
                                      "' must be positive");
    return v;
  };
  auto integer = [&](const std::string& key, long fallback) {
    const double v = number(key, static_cast<double>(fallback));
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw ConfigError(where(key) + "'" + key + "' must be an integer");
    return static_cast<long>(v);
  };
  auto list = [&](const std::string& key, std::vector<double> fallback) {
    if (!entries.count(key)) return fallback;
    std::vector<double> out;
    for (const std::string& item : split_list(entries[key].value)) {
      auto v = parse_number(item);
      if (!v) throw ConfigError(where(key) + "'" + key + "' has a non-numeric entry '" + item + "'");
      out.push_back(*v);
    }
    return out;
  };
  auto fail = [&](const std::string& key, const std::string& msg) -> ConfigError {
    return ConfigError((entries.count(key) ? where(key) : source_name + ": ") + msg);
  };

  ScenarioConfig c;
  if (!entries.count("scenario")) throw ConfigError(source_name + ": missing required key 'scenario'");
  {
    auto it = kind_names().find(entries["scenario"].value);
    if (it == kind_names().end())
      throw ConfigError(where("scenario") + "unknown scenario '" + entries["scenario"].value + "'");
    c.kind = it->second;
  }

  c.wavelength_mm = positive("wavelength_mm", c.wavelength_mm);
  c.focal_length_mm = positive("focal_length_mm", c.focal_length_mm);
  c.separation_mm = positive("separation_mm", c.separation_mm);
  const double d = c.separation_mm;
  c.waist_mm = positive("waist_mm", d / 8.0);
  c.half_width_mm = positive("half_width_mm", d / 4.0);
  c.half_extent_mm = positive("half_extent_mm", 32.0 * d);

  const long n = integer("n", 4096);
  if (n < 2) throw fail("n", "'n' must be at least 2");
  c.n = static_cast<std::size_t>(n);
  const long n_max = integer("n_max", 12);
  if (n_max < 1 || n_max > 40) throw fail("n_max", "'n_max' must be in [1, 40]");
  c.n_max = static_cast<int>(n_max);
  const long qp = integer("quadrature_points", 65536);
  if (qp < 256) throw fail("quadrature_points", "'quadrature_points' must be at least 256");
  c.quadrature_points = static_cast<int>(qp);

  const std::vector<double> walk_sweep = {0.1 * kPi, 0.2 * kPi, 0.3 * kPi, 0.4 * kPi, 0.5 * kPi,
                                          0.6 * kPi, 0.7 * kPi, 0.8 * kPi, 0.9 * kPi, 1.0 * kPi};
  const std::vector<double> four_phases = {0.0, 0.5 * kPi, kPi, -0.5 * kPi};
  switch (c.kind) {
    case ScenarioKind::IntensitySweep:
      c.amplitudes = list("a_p", walk_sweep);
      c.phases = list("phi", {0.0});
      break;
    case ScenarioKind::CorrelationMap:
    case ScenarioKind::ZernikeRetrieval:
      c.amplitudes = list("a_p", {0.86 * kPi});
      c.phases = list("phi", four_phases);
      break;
    case ScenarioKind::FermionAperture:
      c.amplitudes = list("a_p", {});
      c.phases = list("phi", {});
      break;
    case ScenarioKind::Custom:
      c.amplitudes = list("a_p", {});
      c.phases = list("phi", {0.0});
      break;
  }
  c.aperture_widths_mm = list("aperture_widths_mm", c.kind == ScenarioKind::FermionAperture
                                                        ? std::vector<double>{d / 2, d / 4, d / 8, d / 16}
                                                        : std::vector<double>{});
  c.zernike_delta = number("zernike_delta", c.kind == ScenarioKind::ZernikeRetrieval ? kPi / 4.0 : 0.0);
  c.mask_origin_mm = number("mask_origin_mm", 0.0);

  for (double a : c.amplitudes)
    if (!(a >= 0.0 && a <= 30.0)) throw fail("a_p", "'a_p' entries must lie in [0, 30] rad");
  for (double p : c.phases)
    if (!(p > -kPi + 1e-12 && p <= kPi + 1e-12)) throw fail("phi", "'phi' entries must lie in (-pi, pi]");
  for (double w : c.aperture_widths_mm)
    if (!(w > 0.0)) throw fail("aperture_widths_mm", "'aperture_widths_mm' entries must be positive");

  if ((c.kind == ScenarioKind::CorrelationMap || c.kind == ScenarioKind::ZernikeRetrieval) &&
      (c.amplitudes.empty() || c.phases.empty()))
    throw fail("phi", "scenario needs at least one 'a_p' and one 'phi'");
  if (c.kind == ScenarioKind::IntensitySweep && c.amplitudes.empty())
    throw fail("a_p", "scenario needs at least one 'a_p'");
  if (c.kind == ScenarioKind::FermionAperture && c.aperture_widths_mm.empty())
    throw fail("aperture_widths_mm", "scenario needs at least one aperture width");

  // lattice registration: a whole number of sites per window, dividing n
  const double sites = 2.0 * c.half_extent_mm / d;
  const double whole = std::round(sites);
  if (std::abs(sites - whole) > 1e-9 * sites)
    throw fail("half_extent_mm", "2 * half_extent_mm / separation_mm = " + fmt_double(sites) +
                                     " must be a whole number of lattice sites");
  if (c.n % static_cast<std::size_t>(whole) != 0)
    throw fail("n", "n = " + std::to_string(c.n) + " must be a multiple of the " + fmt_double(whole) +
                        " lattice sites in the window");
  if (whole <= 8.0)
    throw fail("half_extent_mm", "window holds " + fmt_double(whole) +
                                     " sites; the Fourier-plane mask needs more than 8 samples per period");
  if (static_cast<double>(c.n) / whole < 2.0)
    throw fail("n", "Fourier plane must span at least two mask periods");
  if (2.0 * c.half_width_mm > d) throw fail("half_width_mm", "detector bins overlap: 2 * half_width_mm > separation_mm");
  if ((c.n_max + 0.5) * d + c.half_width_mm > c.half_extent_mm)
    throw fail("n_max", "detector sites [-n_max, n_max] do not fit inside the window");

  if (c.kind == ScenarioKind::Custom) {
    if (!entries.count("custom_mask_file")) throw ConfigError(source_name + ": custom scenario needs 'custom_mask_file'");
    std::filesystem::path p = entries["custom_mask_file"].value;
    c.custom_mask_file = p.is_relative() ? base_dir / p : p;
  } else if (entries.count("custom_mask_file")) {
    throw fail("custom_mask_file", "'custom_mask_file' is only used by the custom scenario");
  }

  if (entries.count("output_dir")) c.output_dir = entries["output_dir"].value;
  if (entries.count("emit")) {
    try {
      c.emit = parse_emit(entries["emit"].value);
    } catch (const ConfigError& e) {
      throw fail("emit", e.what());
    }
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), path.parent_path());
}

}  // namespace fourq
