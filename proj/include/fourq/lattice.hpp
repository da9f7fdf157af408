#pragma once

#include <functional>
#include <vector>

#include "fourq/biphoton.hpp"
#include "fourq/field.hpp"
#include "fourq/matrix.hpp"

namespace fourq {

/// Bessel function of the first kind, J_order(x), for |order| <= 60 and
/// |x| <= 30, to about 1e-12 absolute. Miller downward recurrence with
/// sum normalization; power series for |x| < 1.
double bessel_j(int order, double x);

/// Complex amplitude per lattice site s in [-n_max, n_max].
struct LatticeAmplitudes {
  int n_max;
  std::vector<cplx> amp;

  cplx at(int s) const { return amp[static_cast<std::size_t>(s + n_max)]; }
  double total_probability() const;
};

/// Two-photon amplitude over site pairs (q, r), both in [-n_max, n_max].
struct LatticeBiphoton {
  int n_max;
  Matrix<cplx> amp;
  ExchangeSymmetry symmetry;
};

/// Transfer amplitudes of the sinusoidal Fourier mask: a photon entering
/// site a leaves at a + s with amplitude U_s = i^s J_s(A_p).
/// Throws TruncationError if sum_{|s|<=n_max} |U_s|^2 <= 1 - 1e-10.
LatticeAmplitudes walk_coefficients(double amplitude, int n_max);

/// Transfer amplitudes for an arbitrary mask phase exp(i A_p cos t + i extra(t)),
/// t in [0, 2 pi) being the phase coordinate of one Fourier-plane period:
/// U_s = (1/2pi) integral exp(i A_p cos t + i extra(t)) exp(i s t) dt.
/// Midpoint rule with `points` nodes, repeated with 2*points; throws
/// QuadratureError when the two disagree by more than 1e-8.
LatticeAmplitudes transfer_by_quadrature(double amplitude, const std::function<double(double)>& extra, int n_max,
                                         int points);

/// (U_{q-a} U_{r-a} + e^{i phi} U_{q-b} U_{r-b}) / sqrt2 on sites [-n_max, n_max].
/// `transfer` must cover displacements up to n_max + max(|a|, |b|).
LatticeBiphoton walk_path_entangled(const LatticeAmplitudes& transfer, double phi, int a, int b, int n_max);

/// |amp|^2 renormalized to unit sum, mirrored across the diagonal. Throws
/// TruncationError if the window holds less than min_captured of the pair.
Matrix<double> lattice_correlation(const LatticeBiphoton& state, double min_captured = 1.0 - 1e-8);

/// Correlation map of the path-entangled pair after the sinusoidal mask,
/// from the Bessel transfer amplitudes. Sums to 1.
Matrix<double> oracle_correlation(double phi, double amplitude, int a, int b, int n_max);

/// As oracle_correlation, with an extra per-period phase computed by quadrature.
/// A discontinuous extra phase leaks weight beyond any finite window; the map
/// is renormalized over the window without a truncation check.
Matrix<double> oracle_with_extra_phase(double phi, double amplitude, const std::function<double(double)>& extra,
                                       int a, int b, int n_max, int quadrature_points);

/// Quarter-cell phase step: delta where |t - pi| < pi/4, else 0.
std::function<double(double)> zernike_quarter_phase(double delta);

/// (sum p)^2 / sum p^2.
double participation_number(const std::vector<double>& probabilities);

/// sum |g1 - g2| / 2 over matching entries.
double distinguishability(const Matrix<double>& g1, const Matrix<double>& g2);

}  // namespace fourq
