#include "fourq/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "fourq/errors.hpp"

namespace fourq {

namespace {

constexpr double kGridTol = 1e-12;
constexpr double kReciprocityTol = 1e-9;

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

// exp(i pi m / denom) with m reduced exactly in integers beforehand.
cplx unit_phase(long long m, long long denom) {
  const double angle = std::numbers::pi * static_cast<double>(m) / static_cast<double>(denom);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

Grid::Grid(std::size_t n, double x_min, double x_max) : n_(n), x_min_(x_min), x_max_(x_max) {
  if (n < 2) throw InvalidArgument("Grid: need at least 2 samples, got " + std::to_string(n));
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw InvalidArgument("Grid: x_max must exceed x_min");
  dx_ = (x_max - x_min) / static_cast<double>(n);
}

bool Grid::centered() const {
  return std::abs(x_min_ + x_max_) <= kGridTol * extent();
}

bool Grid::matches(const Grid& other) const {
  return n_ == other.n_ && std::abs(x_min_ - other.x_min_) <= kGridTol * extent() &&
         std::abs(x_max_ - other.x_max_) <= kGridTol * extent();
}

Grid make_grid(std::size_t n, double half_extent) {
  if (!(half_extent > 0.0)) throw InvalidArgument("make_grid: half_extent must be positive");
  return Grid(n, -half_extent, half_extent);
}

void OpticsParams::validate() const {
  if (!(wavelength_mm > 0.0) || !(focal_length_mm > 0.0))
    throw InvalidArgument("OpticsParams: wavelength and focal length must be positive");
}

Grid conjugate_grid(const Grid& input, const OpticsParams& optics) {
  optics.validate();
  const double dx_out = optics.lambda_f() / (static_cast<double>(input.n()) * input.dx());
  return make_grid(input.n(), 0.5 * dx_out * static_cast<double>(input.n()));
}

Field1D::Field1D(Grid grid, std::vector<cplx> amp) : grid_(grid), amp_(std::move(amp)) {
  if (amp_.size() != grid_.n())
    throw InvalidArgument("Field1D: amplitude length " + std::to_string(amp_.size()) +
                          " does not match grid size " + std::to_string(grid_.n()));
}

Field1D::Field1D(Grid grid) : grid_(grid), amp_(grid.n()) {}

double Field1D::norm_sq() const {
  double s = 0.0;
  for (const cplx& a : amp_) s += std::norm(a);
  return s * grid_.dx();
}

Field1D Field1D::scaled(cplx factor) const {
  Field1D out = *this;
  for (cplx& a : out.amp_) a *= factor;
  return out;
}

Field1D& Field1D::operator+=(const Field1D& other) {
  if (!grid_.matches(other.grid_)) throw InvalidArgument("Field1D: grid mismatch in sum");
  for (std::size_t k = 0; k < amp_.size(); ++k) amp_[k] += other.amp_[k];
  return *this;
}

Field1D operator+(Field1D lhs, const Field1D& rhs) {
  lhs += rhs;
  return lhs;
}

cplx inner(const Field1D& a, const Field1D& b) {
  if (!a.grid().matches(b.grid())) throw InvalidArgument("inner: grid mismatch");
  cplx s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s * a.grid().dx();
}

Field1D hermite_gauss_mode(const Grid& grid, double center, double waist, int order) {
  if (!(waist > 0.0)) throw InvalidArgument("hermite_gauss_mode: waist must be positive");
  if (order < 0 || order > 20) throw InvalidArgument("hermite_gauss_mode: order must be in [0, 20]");
  if (waist < 4.0 * grid.dx())
    throw ResolutionError("mode waist " + std::to_string(waist) + " mm is below 4 dx = " +
                          std::to_string(4.0 * grid.dx()) + " mm");

  Field1D field(grid);
  double inside = 0.0;
  for (std::size_t k = 0; k < grid.n(); ++k) {
    const double u = (grid.x(k) - center) / waist;
    const double t = std::numbers::sqrt2 * u;
    double h_prev = 1.0;
    double h = 1.0;
    if (order >= 1) {
      h = 2.0 * t;
      for (int m = 1; m < order; ++m) {
        const double next = 2.0 * t * h - 2.0 * m * h_prev;
        h_prev = h;
        h = next;
      }
    }
    const double value = h * std::exp(-u * u);
    field[k] = value;
    inside += value * value;
  }
  inside *= grid.dx();

  // integral of H_m(sqrt2 u/w)^2 exp(-2u^2/w^2) du = (w/sqrt2) 2^m m! sqrt(pi)
  const double analytic = waist / std::numbers::sqrt2 * std::ldexp(1.0, order) *
                          std::tgamma(order + 1.0) * std::sqrt(std::numbers::pi);
  const double outside = 1.0 - inside / analytic;
  if (outside > 1e-8)
    throw ResolutionError("mode centred at " + std::to_string(center) + " mm is truncated: fraction " +
                          std::to_string(outside) + " of its energy lies outside the grid");

  return field.scaled(1.0 / std::sqrt(field.norm_sq()));
}

Field1D gaussian_mode(const Grid& grid, double center, double waist) {
  return hermite_gauss_mode(grid, center, waist, 0);
}

Field1D lens_fourier(const Field1D& field, const OpticsParams& optics, const Grid& out_grid) {
  optics.validate();
  const Grid& in = field.grid();
  if (in.n() != out_grid.n()) throw SamplingError("lens_fourier: input and output sample counts differ");
  if (!in.centered() || !out_grid.centered())
    throw SamplingError("lens_fourier: grids must be symmetric about the optical axis");
  const double product = in.dx() * out_grid.dx() * static_cast<double>(in.n());
  if (!close_rel(product, optics.lambda_f(), kReciprocityTol))
    throw SamplingError("lens_fourier: dx_in * dx_out * n = " + std::to_string(product) +
                        " mm^2 but lambda f = " + std::to_string(optics.lambda_f()) + " mm^2");

  // With x_j = (j - c) dx_in, x_k = (k - c) dx_out, c = (n-1)/2 the kernel is
  // exp(-2 pi i (k-c)(j-c)/n) = exp(-2 pi i kj/n) e^{2 pi i c k/n} e^{2 pi i c j/n} e^{-2 pi i c^2/n}.
  // 2 pi c k / n = pi (n-1) k / n, reduced mod 2n.
  const auto n = static_cast<long long>(in.n());
  std::vector<cplx> tilt(in.n());
  for (long long k = 0; k < n; ++k) tilt[static_cast<std::size_t>(k)] = unit_phase(((n - 1) * k) % (2 * n), n);
  // 2 pi c^2 / n = pi (n-1)^2 / (2n), reduced mod 4n.
  const long long m2 = ((n - 1) % (4 * n)) * ((n - 1) % (4 * n)) % (4 * n);
  const cplx global = std::conj(unit_phase(m2, 2 * n)) * (in.dx() / std::sqrt(optics.lambda_f()));

  std::vector<cplx> buf(field.amp().begin(), field.amp().end());
  for (std::size_t j = 0; j < buf.size(); ++j) buf[j] *= tilt[j];
  detail::fft_forward(buf);
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= tilt[k] * global;
  return Field1D(out_grid, std::move(buf));
}

Field1D reflect(const Field1D& field) {
  if (!field.grid().centered()) throw InvalidArgument("reflect: grid must be centred");
  std::vector<cplx> out(field.amp().rbegin(), field.amp().rend());
  return Field1D(field.grid(), std::move(out));
}

}  // namespace fourq
