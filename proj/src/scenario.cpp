#include "fourq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>

#include "json.hpp"

#include "fourq/biphoton.hpp"
#include "fourq/errors.hpp"
#include "fourq/fourf.hpp"
#include "fourq/lattice.hpp"
#include "fourq/masks.hpp"

namespace fourq {

namespace {

using nlohmann::json;

constexpr double kOracleFloor = 1e-3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs fn(0..count-1) as independent tasks and returns results in index order.
template <class Fn>
auto parallel_map(std::size_t count, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::future<R>> futures;
  futures.reserve(count);
  for (std::size_t i = 0; i < count; ++i) futures.push_back(std::async(std::launch::async, fn, i));
  std::vector<R> out;
  out.reserve(count);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const ScenarioConfig& config) : dir_(config.output_dir), emit_(config.emit) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
      throw std::runtime_error("cannot create output directory " + dir_.string());
  }

  void matrix_csv(const std::string& name, const Matrix<double>& m, int first_site) {
    if (!emit_.csv) return;
    std::string text = "q\\r";
    for (std::size_t r = 0; r < m.cols(); ++r) text += "," + std::to_string(first_site + static_cast<int>(r));
    text += "\n";
    for (std::size_t q = 0; q < m.rows(); ++q) {
      text += std::to_string(first_site + static_cast<int>(q));
      for (std::size_t r = 0; r < m.cols(); ++r) text += "," + fmt(m(q, r));
      text += "\n";
    }
    write(name, text);
  }

  // Rows of (label columns..., one value per site).
  void table_csv(const std::string& name, const std::vector<std::string>& head,
                 const std::vector<std::vector<double>>& rows) {
    if (!emit_.csv) return;
    std::string text;
    for (std::size_t i = 0; i < head.size(); ++i) text += (i ? "," : "") + head[i];
    text += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + fmt(row[i]);
      text += "\n";
    }
    write(name, text);
  }

  void heatmap(const std::string& name, const Matrix<double>& m) {
    if (!emit_.pgm) return;
    emit_heatmap(m, dir_ / name);
    files_.push_back(name);
    files_.push_back(name + ".json");
  }

  void summary(const ScenarioConfig& config, json metrics) {
    if (!emit_.json) return;
    std::vector<std::string> listed = files_;
    std::sort(listed.begin(), listed.end());
    json doc;
    doc["scenario"] = to_string(config.kind);
    doc["config"] = config.echo();
    doc["metrics"] = std::move(metrics);
    doc["files"] = listed;
    write("summary.json", doc.dump(2) + "\n");
  }

  ScenarioResult result() const {
    ScenarioResult r{files_};
    std::sort(r.files.begin(), r.files.end());
    return r;
  }

 private:
  void write(const std::string& name, const std::string& text) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + (dir_ / name).string());
    files_.push_back(name);
  }

  std::filesystem::path dir_;
  EmitFlags emit_;
  std::vector<std::string> files_;
};

LatticeGeometry geometry_for(const ScenarioConfig& c) {
  const auto sites = static_cast<std::size_t>(std::llround(2.0 * c.half_extent_mm / c.separation_mm));
  return LatticeGeometry(OpticsParams{c.wavelength_mm, c.focal_length_mm}, c.separation_mm, c.n, sites);
}

// Sum of a sampled density over each detector bin.
std::vector<double> bin_density(const std::vector<double>& density, const Grid& grid, const DetectorArray& det) {
  std::vector<double> out;
  for (const BinSamples& b : snap_bins(det, grid)) {
    double s = 0.0;
    for (std::size_t k = b.begin; k < b.end; ++k) s += density[k];
    out.push_back(s * grid.dx());
  }
  return out;
}

// max |engine/sum - oracle| / oracle over entries with oracle > floor.
double max_relative_deviation(const Matrix<double>& engine_normalized, const Matrix<double>& oracle) {
  double worst = 0.0;
  for (std::size_t i = 0; i < oracle.data().size(); ++i) {
    const double o = oracle.data()[i];
    if (o > kOracleFloor) worst = std::max(worst, std::abs(engine_normalized.data()[i] - o) / o);
  }
  return worst;
}

std::string tag(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

// Indices (i, j), i < j, with phases[i] == -phases[j] and a nonzero imaginary part.
std::vector<std::pair<std::size_t, std::size_t>> conjugate_pairs(const std::vector<double>& phases) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < phases.size(); ++i)
    for (std::size_t j = i + 1; j < phases.size(); ++j)
      if (std::abs(phases[i] + phases[j]) < 1e-12 && std::abs(std::sin(phases[i])) > 1e-12) out.emplace_back(i, j);
  return out;
}

ScenarioResult run_intensity_sweep(const ScenarioConfig& c) {
  const LatticeGeometry geo = geometry_for(c);
  const DetectorArray det = geo.detectors(c.half_width_mm, c.n_max);
  const Field1D beam = gaussian_mode(geo.input_grid(), geo.site_position(0), c.waist_mm);
  const double phi = c.phases.empty() ? 0.0 : c.phases.front();
  const BiphotonState pair = build_path_entangled(geo.input_grid(), geo.site_position(0), geo.site_position(1),
                                                  c.waist_mm, phi);

  struct Row {
    std::vector<double> single, oracle, pair;
    double deviation, pn_engine, pn_oracle, norm_out;
  };
  const std::vector<Row> rows = parallel_map(c.amplitudes.size(), [&](std::size_t i) {
    const double ap = c.amplitudes[i];
    const MaskSpec mask = geo.sinusoidal(ap, c.mask_origin_mm);
    const Field1D out = run_4f_single(beam, mask, geo.optics());
    Row row;
    row.single = bin_probabilities(out, det);
    row.norm_out = out.norm_sq();
    const LatticeAmplitudes u = walk_coefficients(ap, c.n_max);
    for (int s = -c.n_max; s <= c.n_max; ++s) row.oracle.push_back(std::norm(u.at(s)));
    row.deviation = 0.0;
    for (std::size_t k = 0; k < row.oracle.size(); ++k)
      if (row.oracle[k] > kOracleFloor)
        row.deviation = std::max(row.deviation, std::abs(row.single[k] - row.oracle[k]) / row.oracle[k]);
    row.pn_engine = participation_number(row.single);
    row.pn_oracle = participation_number(row.oracle);
    const BiphotonState pout = run_4f_biphoton(pair, mask, geo.optics());
    row.pair = bin_density(intensity_marginal(pout), geo.input_grid(), det);
    return row;
  });

  ArtifactWriter out(c);
  std::vector<std::string> head = {"a_p"};
  for (int s = -c.n_max; s <= c.n_max; ++s) head.push_back(std::to_string(s));
  std::vector<std::vector<double>> single, oracle, pairs;
  json per = json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    auto with_ap = [&](const std::vector<double>& v) {
      std::vector<double> row = {c.amplitudes[i]};
      row.insert(row.end(), v.begin(), v.end());
      return row;
    };
    single.push_back(with_ap(r.single));
    oracle.push_back(with_ap(r.oracle));
    pairs.push_back(with_ap(r.pair));
    if (i > 0 && !(r.pn_engine > rows[i - 1].pn_engine)) monotone = false;
    per.push_back({{"a_p", c.amplitudes[i]},
                   {"max_rel_deviation", r.deviation},
                   {"participation_engine", r.pn_engine},
                   {"participation_oracle", r.pn_oracle},
                   {"output_norm_sq", r.norm_out}});
  }
  out.table_csv("intensity_single.csv", head, single);
  out.table_csv("intensity_oracle.csv", head, oracle);
  out.table_csv("intensity_pair.csv", head, pairs);
  json metrics;
  metrics["per_amplitude"] = per;
  metrics["participation_monotone"] = monotone;
  metrics["pair_phi"] = phi;
  out.summary(c, metrics);
  return out.result();
}

struct CorrelationRun {
  CorrelationMap engine;
  Matrix<double> oracle;
  double norm_out;
  std::vector<double> marginal;
};

ScenarioResult run_correlation_map(const ScenarioConfig& c) {
  const LatticeGeometry geo = geometry_for(c);
  const DetectorArray det = geo.detectors(c.half_width_mm, c.n_max);
  const std::size_t np = c.phases.size();

  const auto runs = parallel_map(c.amplitudes.size() * np, [&](std::size_t idx) {
    const double ap = c.amplitudes[idx / np];
    const double phi = c.phases[idx % np];
    const BiphotonState in = build_path_entangled(geo.input_grid(), geo.site_position(0), geo.site_position(1),
                                                  c.waist_mm, phi);
    const BiphotonState out = run_4f_biphoton(in, geo.sinusoidal(ap, c.mask_origin_mm), geo.optics());
    // a mask origin shifts the walk phases; the oracle models x0 = 0 only
    return CorrelationRun{correlation_map(out, det), oracle_correlation(phi, ap, 0, 1, c.n_max), out.norm_sq(), {}};
  });

  ArtifactWriter writer(c);
  json per = json::array();
  for (std::size_t ia = 0; ia < c.amplitudes.size(); ++ia) {
    for (std::size_t ip = 0; ip < np; ++ip) {
      const CorrelationRun& r = runs[ia * np + ip];
      const std::string name = tag("A", ia) + "_" + tag("phi", ip);
      const Matrix<double> normalized = r.engine.normalized();
      writer.matrix_csv("gamma_" + name + ".csv", r.engine.gamma, -c.n_max);
      writer.matrix_csv("oracle_" + name + ".csv", r.oracle, -c.n_max);
      writer.heatmap("gamma_" + name + ".pgm", r.engine.gamma);
      double oracle_diag = 0.0;
      for (std::size_t q = 0; q < r.oracle.rows(); ++q) oracle_diag += r.oracle(q, q);
      per.push_back({{"a_p", c.amplitudes[ia]},
                     {"phi", c.phases[ip]},
                     {"gamma_total", r.engine.total()},
                     {"output_norm_sq", r.norm_out},
                     {"diagonal_fraction_engine", r.engine.diagonal_fraction()},
                     {"diagonal_fraction_oracle", oracle_diag},
                     {"max_rel_deviation", max_relative_deviation(normalized, r.oracle)},
                     {"snapped_bin_width_mm", r.engine.snapped_width.front()}});
    }
  }
  json degeneracy = json::array();
  for (std::size_t ia = 0; ia < c.amplitudes.size(); ++ia)
    for (auto [i, j] : conjugate_pairs(c.phases))
      degeneracy.push_back({{"a_p", c.amplitudes[ia]},
                            {"phi_plus", c.phases[i]},
                            {"phi_minus", c.phases[j]},
                            {"distinguishability",
                             distinguishability(runs[ia * np + i].engine.normalized(),
                                                runs[ia * np + j].engine.normalized())}});
  json metrics;
  metrics["per_map"] = per;
  metrics["phase_degeneracy"] = degeneracy;
  writer.summary(c, metrics);
  return writer.result();
}

ScenarioResult run_zernike_retrieval(const ScenarioConfig& c) {
  const LatticeGeometry geo = geometry_for(c);
  const DetectorArray det = geo.detectors(c.half_width_mm, c.n_max);
  const double ap = c.amplitudes.front();
  const MaskSpec plain = geo.sinusoidal(ap, c.mask_origin_mm);
  const MaskSpec zernike{CompositeMask{{plain, geo.zernike_quarter(c.zernike_delta, c.mask_origin_mm)}}};
  const auto extra = zernike_quarter_phase(c.zernike_delta);
  const std::size_t np = c.phases.size();

  // index: phase * 2 + (0 plain, 1 zernike)
  const auto runs = parallel_map(2 * np, [&](std::size_t idx) {
    const double phi = c.phases[idx / 2];
    const bool with = idx % 2 == 1;
    const BiphotonState in = build_path_entangled(geo.input_grid(), geo.site_position(0), geo.site_position(1),
                                                  c.waist_mm, phi);
    const BiphotonState out = run_4f_biphoton(in, with ? zernike : plain, geo.optics());
    Matrix<double> oracle = with ? oracle_with_extra_phase(phi, ap, extra, 0, 1, c.n_max, c.quadrature_points)
                                 : oracle_correlation(phi, ap, 0, 1, c.n_max);
    return CorrelationRun{correlation_map(out, det), std::move(oracle), out.norm_sq(), intensity_marginal(out)};
  });

  ArtifactWriter writer(c);
  json per = json::array();
  std::vector<std::string> head = {"phi", "zernike"};
  for (int s = -c.n_max; s <= c.n_max; ++s) head.push_back(std::to_string(s));
  std::vector<std::vector<double>> intensity_rows;
  const double dx = geo.input_grid().dx();
  for (std::size_t ip = 0; ip < np; ++ip) {
    const CorrelationRun& p = runs[2 * ip];
    const CorrelationRun& z = runs[2 * ip + 1];
    for (int with = 0; with < 2; ++with) {
      const CorrelationRun& r = with ? z : p;
      const std::string name = std::string(with ? "zernike_" : "plain_") + tag("phi", ip);
      writer.matrix_csv("gamma_" + name + ".csv", r.engine.gamma, -c.n_max);
      writer.matrix_csv("oracle_" + name + ".csv", r.oracle, -c.n_max);
      writer.heatmap("gamma_" + name + ".pgm", r.engine.gamma);
      std::vector<double> row = {c.phases[ip], static_cast<double>(with)};
      const std::vector<double> binned = bin_density(r.marginal, geo.input_grid(), det);
      row.insert(row.end(), binned.begin(), binned.end());
      intensity_rows.push_back(std::move(row));
    }
    double l1 = 0.0;
    double flux = 0.0;
    for (std::size_t k = 0; k < p.marginal.size(); ++k) {
      l1 += std::abs(z.marginal[k] - p.marginal[k]) * dx;
      flux += p.marginal[k] * dx;
    }
    per.push_back({{"phi", c.phases[ip]},
                   {"marginal_l1_fraction", l1 / flux},
                   {"output_norm_sq_plain", p.norm_out},
                   {"output_norm_sq_zernike", z.norm_out},
                   {"max_rel_deviation_plain", max_relative_deviation(p.engine.normalized(), p.oracle)},
                   {"max_rel_deviation_zernike", max_relative_deviation(z.engine.normalized(), z.oracle)},
                   {"diagonal_fraction_plain", p.engine.diagonal_fraction()},
                   {"diagonal_fraction_zernike", z.engine.diagonal_fraction()}});
  }
  writer.table_csv("intensity.csv", head, intensity_rows);

  json retrieval = json::array();
  for (auto [i, j] : conjugate_pairs(c.phases)) {
    const CorrelationRun& pi_ = runs[2 * i];
    const CorrelationRun& pj = runs[2 * j];
    const CorrelationRun& zi = runs[2 * i + 1];
    const CorrelationRun& zj = runs[2 * j + 1];
    retrieval.push_back({{"phi_plus", c.phases[i]},
                         {"phi_minus", c.phases[j]},
                         {"distinguishability_plain_engine",
                          distinguishability(pi_.engine.normalized(), pj.engine.normalized())},
                         {"distinguishability_plain_oracle", distinguishability(pi_.oracle, pj.oracle)},
                         {"distinguishability_zernike_engine",
                          distinguishability(zi.engine.normalized(), zj.engine.normalized())},
                         {"distinguishability_zernike_oracle", distinguishability(zi.oracle, zj.oracle)}});
  }
  json metrics;
  metrics["a_p"] = ap;
  metrics["per_phase"] = per;
  metrics["retrieval"] = retrieval;
  writer.summary(c, metrics);
  return writer.result();
}

ScenarioResult run_fermion_aperture(const ScenarioConfig& c) {
  const LatticeGeometry geo = geometry_for(c);
  const Grid& grid = geo.input_grid();
  const Field1D ground = hermite_gauss_mode(grid, 0.0, c.waist_mm, 0);
  const Field1D first = hermite_gauss_mode(grid, 0.0, c.waist_mm, 1);
  const BiphotonState boson = build_product_pair(ground);
  const BiphotonState fermion = build_fermion_pair(ground, first);

  const auto norms = parallel_map(c.aperture_widths_mm.size(), [&](std::size_t i) {
    const MaskSpec ap{Aperture{0.0, c.aperture_widths_mm[i]}};
    return std::pair{run_4f_biphoton(boson, ap, geo.optics()).norm_sq(),
                     run_4f_biphoton(fermion, ap, geo.optics()).norm_sq()};
  });

  ArtifactWriter writer(c);
  std::vector<std::vector<double>> rows;
  json per = json::array();
  bool fermion_monotone = true;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const auto [b, f] = norms[i];
    rows.push_back({c.aperture_widths_mm[i], b, f, f / b});
    per.push_back({{"width_mm", c.aperture_widths_mm[i]}, {"boson_norm_sq", b}, {"fermion_norm_sq", f}, {"ratio", f / b}});
    // widths are listed in the order given; monotone means "shrinks with the width"
    if (i > 0) {
      const bool narrower = c.aperture_widths_mm[i] < c.aperture_widths_mm[i - 1];
      if (narrower != (f < norms[i - 1].second)) fermion_monotone = false;
    }
  }
  writer.table_csv("aperture.csv", {"width_mm", "boson_norm_sq", "fermion_norm_sq", "ratio"}, rows);
  json metrics;
  metrics["per_width"] = per;
  metrics["fermion_monotone"] = fermion_monotone;
  metrics["modes"] = "boson: both photons in HG0; fermion: HG0 and HG1; waist as configured, centred on axis";
  writer.summary(c, metrics);
  return writer.result();
}

ScenarioResult run_custom(const ScenarioConfig& c) {
  const LatticeGeometry geo = geometry_for(c);
  const DetectorArray det = geo.detectors(c.half_width_mm, c.n_max);
  MaskSpec mask{load_custom_mask(c.custom_mask_file, geo.fourier_grid())};
  if (!c.amplitudes.empty() && c.amplitudes.front() != 0.0)
    mask = MaskSpec{CompositeMask{{geo.sinusoidal(c.amplitudes.front(), c.mask_origin_mm), mask}}};

  const auto runs = parallel_map(c.phases.size(), [&](std::size_t i) {
    const BiphotonState in = build_path_entangled(geo.input_grid(), geo.site_position(0), geo.site_position(1),
                                                  c.waist_mm, c.phases[i]);
    const BiphotonState out = run_4f_biphoton(in, mask, geo.optics());
    return CorrelationRun{correlation_map(out, det), {}, out.norm_sq(), intensity_marginal(out)};
  });

  ArtifactWriter writer(c);
  json per = json::array();
  std::vector<std::string> head = {"phi"};
  for (int s = -c.n_max; s <= c.n_max; ++s) head.push_back(std::to_string(s));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const CorrelationRun& r = runs[i];
    writer.matrix_csv("gamma_" + tag("phi", i) + ".csv", r.engine.gamma, -c.n_max);
    writer.heatmap("gamma_" + tag("phi", i) + ".pgm", r.engine.gamma);
    std::vector<double> row = {c.phases[i]};
    const std::vector<double> binned = bin_density(r.marginal, geo.input_grid(), det);
    row.insert(row.end(), binned.begin(), binned.end());
    rows.push_back(std::move(row));
    per.push_back({{"phi", c.phases[i]},
                   {"gamma_total", r.engine.total()},
                   {"output_norm_sq", r.norm_out},
                   {"diagonal_fraction", r.engine.diagonal_fraction()}});
  }
  writer.table_csv("intensity.csv", head, rows);
  json metrics;
  metrics["per_phase"] = per;
  metrics["mask_phase_only"] = mask.phase_only();
  writer.summary(c, metrics);
  return writer.result();
}

}  // namespace

HeatmapInfo emit_heatmap(const Matrix<double>& matrix, const std::filesystem::path& path) {
  double max_value = 0.0;
  for (double v : matrix.data()) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("emit_heatmap: entries must be finite and non-negative");
    max_value = std::max(max_value, v);
  }
  const bool all_zero = max_value == 0.0;

  std::string header = "P5\n" + std::to_string(matrix.cols()) + " " + std::to_string(matrix.rows()) + "\n255\n";
  std::string pixels(matrix.data().size(), '\0');
  if (!all_zero)
    for (std::size_t i = 0; i < pixels.size(); ++i)
      pixels[i] = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * matrix.data()[i] / max_value)));

  std::ofstream out(path, std::ios::binary);
  out << header << pixels;
  if (!out) throw std::runtime_error("failed writing " + path.string());

  json meta;
  meta["rows"] = matrix.rows();
  meta["cols"] = matrix.cols();
  meta["max_value"] = max_value;
  meta["scale"] = "pixel = round(255 * value / max_value)";
  meta["warning"] = all_zero ? json("all-zero matrix; image is uniformly black") : json(nullptr);
  std::ofstream side(path.string() + ".json", std::ios::binary);
  side << meta.dump(2) << "\n";
  if (!side) throw std::runtime_error("failed writing " + path.string() + ".json");
  return HeatmapInfo{max_value, all_zero};
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  switch (config.kind) {
    case ScenarioKind::IntensitySweep: return run_intensity_sweep(config);
    case ScenarioKind::CorrelationMap: return run_correlation_map(config);
    case ScenarioKind::ZernikeRetrieval: return run_zernike_retrieval(config);
    case ScenarioKind::FermionAperture: return run_fermion_aperture(config);
    case ScenarioKind::Custom: return run_custom(config);
  }
  throw InvalidArgument("run_scenario: unknown scenario kind");
}

}  // namespace fourq
