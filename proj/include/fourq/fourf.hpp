#pragma once

#include <cstddef>

#include "fourq/biphoton.hpp"
#include "fourq/field.hpp"
#include "fourq/masks.hpp"

namespace fourq {

/// Lens -> Fourier-plane mask -> lens, with the 4-f image inversion undone so
/// that a unit mask is the identity on the input grid. Both lenses share
/// lambda f. The Fourier grid is conjugate_grid(input grid).
Field1D run_4f_single(const Field1D& field, const MaskSpec& mask, const OpticsParams& optics);

BiphotonState run_4f_biphoton(const BiphotonState& state, const MaskSpec& mask, const OpticsParams& optics);

/// Input plane registered to a lattice of pitch d: the window holds a whole
/// number of sites and the Fourier-plane mask period lambda f / d holds a
/// whole number of Fourier samples, so each diffraction order shifts the
/// field by exactly one site. Site s sits at (s - 1/2) d, so sites 0 and 1
/// straddle the axis at -d/2 and +d/2.
class LatticeGeometry {
 public:
  /// Throws InvalidArgument unless n is a multiple of sites_per_window.
  LatticeGeometry(OpticsParams optics, double pitch, std::size_t n, std::size_t sites_per_window);

  const OpticsParams& optics() const { return optics_; }
  double pitch() const { return pitch_; }
  std::size_t sites_per_window() const { return sites_; }

  const Grid& input_grid() const { return input_; }
  const Grid& fourier_grid() const { return fourier_; }

  double site_position(int site) const { return (site - 0.5) * pitch_; }
  /// nu = d / (lambda f), cycles per mm in the Fourier plane.
  double mask_frequency() const { return pitch_ / optics_.lambda_f(); }
  double fourier_period() const { return optics_.lambda_f() / pitch_; }

  MaskSpec sinusoidal(double amplitude, double origin = 0.0) const;
  MaskSpec zernike_quarter(double delta, double origin = 0.0) const;

  /// Bins centred on sites [-n_max, n_max].
  DetectorArray detectors(double half_width, int n_max) const;

 private:
  OpticsParams optics_;
  double pitch_;
  std::size_t sites_;
  Grid input_;
  Grid fourier_;
};

}  // namespace fourq
