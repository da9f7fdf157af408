#include "fourq/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fourq/errors.hpp"

namespace fourq {

namespace {

constexpr double kSymmetryTol = 1e-10;

double exchange_sign(ExchangeSymmetry s) { return s == ExchangeSymmetry::Bosonic ? 1.0 : -1.0; }

// Relative defect ||B - s B^T|| / ||B|| evaluated entry by entry.
template <class Eval>
double pairwise_defect(std::size_t n, double sign, Eval&& b) {
  double diff = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += std::norm(b(j, j));
    diff += std::norm(b(j, j) - sign * b(j, j));
    for (std::size_t k = j + 1; k < n; ++k) {
      const cplx jk = b(j, k);
      const cplx kj = b(k, j);
      total += std::norm(jk) + std::norm(kj);
      diff += 2.0 * std::norm(jk - sign * kj);
    }
  }
  return total > 0.0 ? std::sqrt(diff / total) : 0.0;
}

Field1D row_field(const Matrix<cplx>& m, std::size_t j, const Grid& grid) {
  std::vector<cplx> row(m.cols());
  for (std::size_t k = 0; k < m.cols(); ++k) row[k] = m(j, k);
  return Field1D(grid, std::move(row));
}

Field1D column_field(const Matrix<cplx>& m, std::size_t k, const Grid& grid) {
  std::vector<cplx> col(m.rows());
  for (std::size_t j = 0; j < m.rows(); ++j) col[j] = m(j, k);
  return Field1D(grid, std::move(col));
}

void require_grid(const Grid& expected, const Grid& actual, const char* what) {
  if (!expected.matches(actual)) throw InvalidArgument(std::string(what) + ": grid mismatch");
}

}  // namespace

const char* to_string(ExchangeSymmetry s) { return s == ExchangeSymmetry::Bosonic ? "bosonic" : "fermionic"; }

BiphotonState::BiphotonState(Grid grid, ExchangeSymmetry symmetry, Rep rep)
    : grid_(grid), symmetry_(symmetry), rep_(std::move(rep)) {}

BiphotonState BiphotonState::dense(Grid grid, ExchangeSymmetry symmetry, Matrix<cplx> amplitude) {
  if (amplitude.rows() != grid.n() || amplitude.cols() != grid.n())
    throw InvalidArgument("BiphotonState::dense: amplitude must be n x n on the grid");
  BiphotonState s(grid, symmetry, std::move(amplitude));
  s.check_symmetry();
  return s;
}

BiphotonState BiphotonState::schmidt(Grid grid, ExchangeSymmetry symmetry, std::vector<SchmidtTerm> terms) {
  if (terms.empty()) throw InvalidArgument("BiphotonState::schmidt: need at least one term");
  for (const SchmidtTerm& t : terms) {
    require_grid(grid, t.u.grid(), "BiphotonState::schmidt");
    require_grid(grid, t.v.grid(), "BiphotonState::schmidt");
  }
  BiphotonState s(grid, symmetry, std::move(terms));
  s.check_symmetry();
  return s;
}

void BiphotonState::check_symmetry() const {
  const double defect = exchange_defect();
  if (defect > kSymmetryTol)
    throw InvalidArgument(std::string("BiphotonState: amplitude is not ") + to_string(symmetry_) +
                          " (relative defect " + std::to_string(defect) + ")");
}

const Matrix<cplx>& BiphotonState::dense_amplitude() const {
  if (!is_dense()) throw InvalidArgument("BiphotonState: state is held in Schmidt form");
  return std::get<Matrix<cplx>>(rep_);
}

std::span<const SchmidtTerm> BiphotonState::terms() const {
  if (is_dense()) throw InvalidArgument("BiphotonState: state is held in dense form");
  return std::get<std::vector<SchmidtTerm>>(rep_);
}

Matrix<cplx> BiphotonState::densify() const {
  if (is_dense()) return dense_amplitude();
  const std::size_t n = grid_.n();
  Matrix<cplx> out(n, n);
  for (const SchmidtTerm& t : terms())
    for (std::size_t j = 0; j < n; ++j) {
      const cplx cu = t.coefficient * t.u[j];
      for (std::size_t k = 0; k < n; ++k) out(j, k) += cu * t.v[k];
    }
  return out;
}

BiphotonState BiphotonState::to_dense() const { return BiphotonState(grid_, symmetry_, densify()); }

double BiphotonState::norm_sq() const {
  const double dx2 = grid_.dx() * grid_.dx();
  if (is_dense()) {
    double s = 0.0;
    for (const cplx& b : dense_amplitude().data()) s += std::norm(b);
    return s * dx2;
  }
  // sum_{t,t'} conj(c_t) c_t' <u_t|u_t'> <v_t|v_t'>
  const auto ts = terms();
  cplx s{};
  for (const SchmidtTerm& a : ts)
    for (const SchmidtTerm& b : ts) s += std::conj(a.coefficient) * b.coefficient * inner(a.u, b.u) * inner(a.v, b.v);
  return s.real();
}

double BiphotonState::exchange_defect() const {
  const double sign = exchange_sign(symmetry_);
  if (is_dense()) {
    const Matrix<cplx>& m = dense_amplitude();
    return pairwise_defect(grid_.n(), sign, [&](std::size_t j, std::size_t k) { return m(j, k); });
  }
  const auto ts = terms();
  return pairwise_defect(grid_.n(), sign, [&](std::size_t j, std::size_t k) {
    cplx v{};
    for (const SchmidtTerm& t : ts) v += t.coefficient * t.u[j] * t.v[k];
    return v;
  });
}

SinglePhotonOp::SinglePhotonOp(Grid in, Grid out, Fn fn, std::string name)
    : in_(in), out_(out), fn_(std::move(fn)), name_(std::move(name)) {}

Field1D SinglePhotonOp::operator()(const Field1D& f) const {
  require_grid(in_, f.grid(), name_.c_str());
  Field1D out = fn_(f);
  require_grid(out_, out.grid(), name_.c_str());
  return out;
}

SinglePhotonOp SinglePhotonOp::identity(const Grid& grid) {
  return SinglePhotonOp(grid, grid, [](const Field1D& f) { return f; }, "identity");
}

SinglePhotonOp SinglePhotonOp::lens(const OpticsParams& optics, const Grid& in, const Grid& out) {
  return SinglePhotonOp(
      in, out, [optics, out](const Field1D& f) { return lens_fourier(f, optics, out); }, "lens");
}

SinglePhotonOp SinglePhotonOp::mask(SampledMask mask) {
  const Grid grid = mask.grid;
  return SinglePhotonOp(
      grid, grid,
      [m = std::move(mask)](const Field1D& f) {
        Field1D out = f;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] *= m.values[k];
        return out;
      },
      "mask");
}

SinglePhotonOp SinglePhotonOp::reflection(const Grid& grid) {
  return SinglePhotonOp(grid, grid, [](const Field1D& f) { return reflect(f); }, "reflection");
}

SinglePhotonOp SinglePhotonOp::matrix(const Grid& in, const Grid& out, Matrix<cplx> m) {
  if (m.rows() != out.n() || m.cols() != in.n()) throw InvalidArgument("SinglePhotonOp::matrix: shape mismatch");
  return SinglePhotonOp(
      in, out,
      [out, m = std::move(m)](const Field1D& f) {
        Field1D r(out);
        for (std::size_t k = 0; k < m.rows(); ++k) {
          cplx s{};
          for (std::size_t j = 0; j < m.cols(); ++j) s += m(k, j) * f[j];
          r[k] = s;
        }
        return r;
      },
      "matrix");
}

BiphotonState build_path_entangled(const Grid& grid, double x_a, double x_b, double waist, double phi) {
  Field1D pa = gaussian_mode(grid, x_a, waist);
  Field1D pb = gaussian_mode(grid, x_b, waist);
  const double overlap = std::abs(inner(pa, pb));
  if (overlap >= 1e-6)
    throw InvalidArgument("build_path_entangled: paths overlap (|<p_a|p_b>| = " + std::to_string(overlap) + ")");
  const double r = 1.0 / std::numbers::sqrt2;
  std::vector<SchmidtTerm> terms;
  terms.push_back({cplx(r, 0.0), pa, pa});
  terms.push_back({std::polar(r, phi), pb, pb});
  return BiphotonState::schmidt(grid, ExchangeSymmetry::Bosonic, std::move(terms));
}

BiphotonState build_product_pair(const Field1D& mode) {
  if (std::abs(mode.norm_sq() - 1.0) > 1e-9) throw InvalidArgument("build_product_pair: mode is not normalized");
  return BiphotonState::schmidt(mode.grid(), ExchangeSymmetry::Bosonic, {SchmidtTerm{cplx(1.0, 0.0), mode, mode}});
}

BiphotonState build_fermion_pair(const Field1D& mode_a, const Field1D& mode_b) {
  require_grid(mode_a.grid(), mode_b.grid(), "build_fermion_pair");
  if (std::abs(mode_a.norm_sq() - 1.0) > 1e-9 || std::abs(mode_b.norm_sq() - 1.0) > 1e-9)
    throw InvalidArgument("build_fermion_pair: modes must be normalized");
  const double overlap = std::abs(inner(mode_a, mode_b));
  if (overlap >= 1e-6)
    throw InvalidArgument("build_fermion_pair: modes are not orthogonal (|<a|b>| = " + std::to_string(overlap) + ")");
  const double r = 1.0 / std::numbers::sqrt2;
  std::vector<SchmidtTerm> terms;
  terms.push_back({cplx(r, 0.0), mode_a, mode_b});
  terms.push_back({cplx(-r, 0.0), mode_b, mode_a});
  return BiphotonState::schmidt(mode_a.grid(), ExchangeSymmetry::Fermionic, std::move(terms));
}

BiphotonState apply_single_photon_op(const BiphotonState& state, const SinglePhotonOp& op) {
  require_grid(op.in_grid(), state.grid(), "apply_single_photon_op");
  const Grid& in = op.in_grid();
  const Grid& out = op.out_grid();

  if (state.is_dense()) {
    const Matrix<cplx>& b = state.dense_amplitude();
    Matrix<cplx> half(in.n(), out.n());  // photon 2 transformed
    for (std::size_t j = 0; j < in.n(); ++j) {
      const Field1D row = op(row_field(b, j, in));
      for (std::size_t k = 0; k < out.n(); ++k) half(j, k) = row[k];
    }
    Matrix<cplx> full(out.n(), out.n());
    for (std::size_t k = 0; k < out.n(); ++k) {
      const Field1D col = op(column_field(half, k, in));
      for (std::size_t j = 0; j < out.n(); ++j) full(j, k) = col[j];
    }
    return BiphotonState::dense(out, state.symmetry(), std::move(full));
  }

  std::vector<SchmidtTerm> terms;
  for (const SchmidtTerm& t : state.terms()) terms.push_back({t.coefficient, op(t.u), op(t.v)});
  return BiphotonState::schmidt(out, state.symmetry(), std::move(terms));
}

BiphotonState apply_mask(const BiphotonState& state, const SampledMask& mask) {
  require_grid(mask.grid, state.grid(), "apply_mask");
  const auto& m = mask.values;
  if (state.is_dense()) {
    Matrix<cplx> b = state.dense_amplitude();
    for (std::size_t j = 0; j < b.rows(); ++j)
      for (std::size_t k = 0; k < b.cols(); ++k) b(j, k) *= m[j] * m[k];
    return BiphotonState::dense(state.grid(), state.symmetry(), std::move(b));
  }
  return apply_single_photon_op(state, SinglePhotonOp::mask(mask));
}

std::vector<double> intensity_marginal(const BiphotonState& state) {
  const Grid& g = state.grid();
  const std::size_t n = g.n();
  std::vector<double> out(n, 0.0);
  if (state.is_dense()) {
    const Matrix<cplx>& b = state.dense_amplitude();
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::norm(b(j, k));
      out[j] = 2.0 * s * g.dx();
    }
    return out;
  }
  // I_j = 2 sum_{t,t'} c_t conj(c_t') u_t(j) conj(u_t'(j)) <v_t'|v_t>
  const auto ts = state.terms();
  const std::size_t r = ts.size();
  Matrix<cplx> weight(r, r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      weight(a, b) = ts[a].coefficient * std::conj(ts[b].coefficient) * inner(ts[b].v, ts[a].v);
  for (std::size_t j = 0; j < n; ++j) {
    cplx s{};
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) s += weight(a, b) * ts[a].u[j] * std::conj(ts[b].u[j]);
    out[j] = 2.0 * s.real();
  }
  return out;
}

void DetectorArray::validate() const {
  if (!(pitch > 0.0) || !(half_width > 0.0)) throw InvalidArgument("DetectorArray: pitch and half width must be positive");
  if (2.0 * half_width > pitch * (1.0 + 1e-12)) throw InvalidArgument("DetectorArray: bins overlap (2w > pitch)");
  if (last_site < first_site) throw InvalidArgument("DetectorArray: empty site range");
}

std::vector<BinSamples> snap_bins(const DetectorArray& det, const Grid& grid) {
  det.validate();
  const double tol = 1e-9;
  std::vector<BinSamples> bins;
  bins.reserve(det.count());
  for (int q = det.first_site; q <= det.last_site; ++q) {
    const double lo = det.center(q) - det.half_width;
    const double hi = det.center(q) + det.half_width;
    if (lo < grid.x_min() - tol * grid.dx() || hi > grid.x_max() + tol * grid.dx())
      throw InvalidArgument("detector bin " + std::to_string(q) + " [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "] mm lies outside the grid");
    const double first = std::ceil((lo - grid.x_min()) / grid.dx() - tol);
    const double last = std::floor((hi - grid.x_min()) / grid.dx() + tol);
    if (last <= first) throw InvalidArgument("detector bin " + std::to_string(q) + " captures no whole sample");
    bins.push_back({static_cast<std::size_t>(first), static_cast<std::size_t>(last)});
  }
  return bins;
}

double CorrelationMap::total() const {
  double s = 0.0;
  for (double g : gamma.data()) s += g;
  return s;
}

double CorrelationMap::diagonal_fraction() const {
  double d = 0.0;
  for (std::size_t q = 0; q < gamma.rows(); ++q) d += gamma(q, q);
  return d / total();
}

Matrix<double> CorrelationMap::normalized() const {
  Matrix<double> out = gamma;
  const double t = total();
  for (double& g : out.data()) g /= t;
  return out;
}

CorrelationMap correlation_map(const BiphotonState& state, const DetectorArray& det) {
  const Grid& g = state.grid();
  const std::vector<BinSamples> bins = snap_bins(det, g);
  const std::size_t m = bins.size();
  const double dx = g.dx();

  CorrelationMap out{Matrix<double>(m, m), det, {}};
  for (const BinSamples& b : bins) out.snapped_width.push_back(static_cast<double>(b.end - b.begin) * dx);

  if (state.is_dense()) {
    const Matrix<cplx>& b = state.dense_amplitude();
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = q; r < m; ++r) {
        double s = 0.0;
        for (std::size_t j = bins[q].begin; j < bins[q].end; ++j)
          for (std::size_t k = bins[r].begin; k < bins[r].end; ++k) s += std::norm(b(j, k));
        out.gamma(q, r) = s * dx * dx;
        out.gamma(r, q) = out.gamma(q, r);
      }
    return out;
  }

  // Per-bin Gram blocks: U_q[t][t'] = sum_{j in q} u_t conj(u_t') dx, same for v.
  const auto ts = state.terms();
  const std::size_t rank = ts.size();
  std::vector<Matrix<cplx>> gu(m, Matrix<cplx>(rank, rank));
  std::vector<Matrix<cplx>> gv(m, Matrix<cplx>(rank, rank));
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t a = 0; a < rank; ++a)
      for (std::size_t c = 0; c < rank; ++c) {
        cplx su{};
        cplx sv{};
        for (std::size_t j = bins[q].begin; j < bins[q].end; ++j) {
          su += ts[a].u[j] * std::conj(ts[c].u[j]);
          sv += ts[a].v[j] * std::conj(ts[c].v[j]);
        }
        gu[q](a, c) = su * dx;
        gv[q](a, c) = sv * dx;
      }
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t r = q; r < m; ++r) {
      cplx s{};
      for (std::size_t a = 0; a < rank; ++a)
        for (std::size_t c = 0; c < rank; ++c)
          s += ts[a].coefficient * std::conj(ts[c].coefficient) * gu[q](a, c) * gv[r](a, c);
      out.gamma(q, r) = std::max(0.0, s.real());
      out.gamma(r, q) = out.gamma(q, r);
    }
  return out;
}

std::vector<double> bin_probabilities(const Field1D& field, const DetectorArray& det) {
  const std::vector<BinSamples> bins = snap_bins(det, field.grid());
  std::vector<double> out;
  out.reserve(bins.size());
  for (const BinSamples& b : bins) {
    double s = 0.0;
    for (std::size_t k = b.begin; k < b.end; ++k) s += std::norm(field[k]);
    out.push_back(s * field.grid().dx());
  }
  return out;
}

}  // namespace fourq
