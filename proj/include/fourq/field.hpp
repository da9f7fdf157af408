#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fourq {

using cplx = std::complex<double>;

/// Uniform 1-D sampling in millimetres. Samples sit at cell centres,
/// x_k = x_min + (k + 1/2) dx, so a symmetric grid has no sample at 0.
class Grid {
 public:
  Grid(std::size_t n, double x_min, double x_max);

  std::size_t n() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  double extent() const { return x_max_ - x_min_; }
  double x(std::size_t k) const { return x_min_ + (static_cast<double>(k) + 0.5) * dx_; }

  // x_min == -x_max up to rounding.
  bool centered() const;

  // Same sample count and bounds to 1e-12 relative.
  bool matches(const Grid& other) const;

 private:
  std::size_t n_;
  double x_min_;
  double x_max_;
  double dx_;
};

/// Symmetric grid on [-half_extent, +half_extent].
Grid make_grid(std::size_t n, double half_extent);

struct OpticsParams {
  double wavelength_mm;
  double focal_length_mm;

  double lambda_f() const { return wavelength_mm * focal_length_mm; }
  void validate() const;
};

/// Fourier-plane grid paired with `input` by dx_in * dx_out * n = lambda f.
Grid conjugate_grid(const Grid& input, const OpticsParams& optics);

/// Complex single-photon amplitude; norm^2 = sum |amp_k|^2 dx.
class Field1D {
 public:
  Field1D(Grid grid, std::vector<cplx> amp);
  explicit Field1D(Grid grid);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> amp() const { return amp_; }
  std::span<cplx> amp() { return amp_; }
  std::size_t size() const { return amp_.size(); }
  cplx operator[](std::size_t k) const { return amp_[k]; }
  cplx& operator[](std::size_t k) { return amp_[k]; }

  double norm_sq() const;
  Field1D scaled(cplx factor) const;
  Field1D& operator+=(const Field1D& other);

 private:
  Grid grid_;
  std::vector<cplx> amp_;
};

Field1D operator+(Field1D lhs, const Field1D& rhs);

/// <a|b> = sum conj(a_k) b_k dx. Grids must match.
cplx inner(const Field1D& a, const Field1D& b);

/// Normalized Gaussian exp(-(x-center)^2 / waist^2).
/// Throws ResolutionError if waist < 4 dx or more than 1e-8 of the
/// mode's energy falls outside the grid.
Field1D gaussian_mode(const Grid& grid, double center, double waist);

/// Normalized Hermite-Gauss mode H_m(sqrt(2)(x-c)/w) exp(-(x-c)^2/w^2).
/// Order 0 is gaussian_mode.
Field1D hermite_gauss_mode(const Grid& grid, double center, double waist, int order);

/// Lens transform out(x_f) = (1/sqrt(lambda f)) * integral exp(-2 pi i x_f x / (lambda f)) in(x) dx,
/// evaluated exactly on the grid pair with an FFT. `out_grid` must satisfy
/// the reciprocity relation with the field's grid, otherwise SamplingError.
Field1D lens_fourier(const Field1D& field, const OpticsParams& optics, const Grid& out_grid);

/// out(x) = in(-x) on a centered grid (index k -> n-1-k).
Field1D reflect(const Field1D& field);

}  // namespace fourq
