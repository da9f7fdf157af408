#include "fourq/fourf.hpp"

#include <string>

#include "fourq/errors.hpp"

namespace fourq {

Field1D run_4f_single(const Field1D& field, const MaskSpec& mask, const OpticsParams& optics) {
  const Grid& in = field.grid();
  const Grid fourier = conjugate_grid(in, optics);
  const SampledMask m = sample_mask(mask, fourier);

  Field1D f = lens_fourier(field, optics, fourier);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] *= m.values[k];
  // conjugate of the conjugate grid is the input grid; the second lens inverts the image
  return reflect(lens_fourier(f, optics, in));
}

BiphotonState run_4f_biphoton(const BiphotonState& state, const MaskSpec& mask, const OpticsParams& optics) {
  const Grid& in = state.grid();
  const Grid fourier = conjugate_grid(in, optics);
  const SampledMask m = sample_mask(mask, fourier);

  BiphotonState s = apply_single_photon_op(state, SinglePhotonOp::lens(optics, in, fourier));
  s = apply_mask(s, m);
  s = apply_single_photon_op(s, SinglePhotonOp::lens(optics, fourier, in));
  return apply_single_photon_op(s, SinglePhotonOp::reflection(in));
}

LatticeGeometry::LatticeGeometry(OpticsParams optics, double pitch, std::size_t n, std::size_t sites_per_window)
    : optics_(optics),
      pitch_(pitch),
      sites_(sites_per_window),
      input_(make_grid(n, 0.5 * pitch * static_cast<double>(sites_per_window > 0 ? sites_per_window : 1))),
      fourier_(conjugate_grid(input_, optics)) {
  if (!(pitch > 0.0)) throw InvalidArgument("LatticeGeometry: pitch must be positive");
  if (sites_per_window < 2 || n % sites_per_window != 0)
    throw InvalidArgument("LatticeGeometry: n = " + std::to_string(n) + " is not a multiple of sites_per_window = " +
                          std::to_string(sites_per_window));
}

MaskSpec LatticeGeometry::sinusoidal(double amplitude, double origin) const {
  return MaskSpec{SinusoidalPhase{amplitude, mask_frequency(), origin}};
}

MaskSpec LatticeGeometry::zernike_quarter(double delta, double origin) const {
  return MaskSpec{ZernikeQuarter{delta, fourier_period(), origin}};
}

DetectorArray LatticeGeometry::detectors(double half_width, int n_max) const {
  DetectorArray det{site_position(0), pitch_, half_width, -n_max, n_max};
  det.validate();
  return det;
}

}  // namespace fourq
