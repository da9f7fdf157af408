#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fourq/field.hpp"
#include "fourq/masks.hpp"
#include "fourq/matrix.hpp"

namespace fourq {

enum class ExchangeSymmetry { Bosonic, Fermionic };

const char* to_string(ExchangeSymmetry s);

/// One product term c * u(x1) * v(x2).
struct SchmidtTerm {
  cplx coefficient;
  Field1D u;
  Field1D v;
};

/// Two-photon amplitude B(x1, x2) on a shared grid, normalized so that
/// sum_jk |B_jk|^2 dx^2 = 1. Held either as a dense n x n matrix
/// (row = photon 1, column = photon 2) or as a short sum of product terms.
/// Construction checks the exchange symmetry to 1e-10 relative.
class BiphotonState {
 public:
  static BiphotonState dense(Grid grid, ExchangeSymmetry symmetry, Matrix<cplx> amplitude);
  static BiphotonState schmidt(Grid grid, ExchangeSymmetry symmetry, std::vector<SchmidtTerm> terms);

  const Grid& grid() const { return grid_; }
  ExchangeSymmetry symmetry() const { return symmetry_; }
  bool is_dense() const { return std::holds_alternative<Matrix<cplx>>(rep_); }

  // Only valid for the matching representation; throws InvalidArgument otherwise.
  const Matrix<cplx>& dense_amplitude() const;
  std::span<const SchmidtTerm> terms() const;

  Matrix<cplx> densify() const;
  BiphotonState to_dense() const;

  double norm_sq() const;

  // ||B -/+ B^T|| / ||B||, i.e. how far the state is from its declared
  // exchange symmetry.
  double exchange_defect() const;

 private:
  using Rep = std::variant<Matrix<cplx>, std::vector<SchmidtTerm>>;
  BiphotonState(Grid grid, ExchangeSymmetry symmetry, Rep rep);
  void check_symmetry() const;

  Grid grid_;
  ExchangeSymmetry symmetry_;
  Rep rep_;
};

/// A linear single-photon map from one grid to another.
class SinglePhotonOp {
 public:
  using Fn = std::function<Field1D(const Field1D&)>;

  SinglePhotonOp(Grid in, Grid out, Fn fn, std::string name);

  const Grid& in_grid() const { return in_; }
  const Grid& out_grid() const { return out_; }
  const std::string& name() const { return name_; }
  Field1D operator()(const Field1D& f) const;

  static SinglePhotonOp identity(const Grid& grid);
  static SinglePhotonOp lens(const OpticsParams& optics, const Grid& in, const Grid& out);
  static SinglePhotonOp mask(SampledMask mask);
  static SinglePhotonOp reflection(const Grid& grid);
  // out_k = sum_j m(k, j) a_j
  static SinglePhotonOp matrix(const Grid& in, const Grid& out, Matrix<cplx> m);

 private:
  Grid in_;
  Grid out_;
  Fn fn_;
  std::string name_;
};

// Input states

/// (1/sqrt2)[p_a(x1) p_a(x2) + e^{i phi} p_b(x1) p_b(x2)] with Gaussian p.
/// Throws InvalidArgument if |<p_a|p_b>| >= 1e-6.
BiphotonState build_path_entangled(const Grid& grid, double x_a, double x_b, double waist, double phi);

/// Both photons in `mode`.
BiphotonState build_product_pair(const Field1D& mode);

/// (1/sqrt2)[a(x1) b(x2) - b(x1) a(x2)]. Modes must be normalized and orthogonal to 1e-6.
BiphotonState build_fermion_pair(const Field1D& mode_a, const Field1D& mode_b);

// Evolution

/// B'(x1,x2) = sum U(x1,y1) U(x2,y2) B(y1,y2), applied per axis (dense) or per mode (Schmidt).
BiphotonState apply_single_photon_op(const BiphotonState& state, const SinglePhotonOp& op);

/// B'_jk = M_j M_k B_jk.
BiphotonState apply_mask(const BiphotonState& state, const SampledMask& mask);

// Observables

/// I_j = 2 sum_k |B_jk|^2 dx, so that sum_j I_j dx = 2 norm^2.
std::vector<double> intensity_marginal(const BiphotonState& state);

/// Detector bins centred at origin + q * pitch for q in [first_site, last_site].
struct DetectorArray {
  double origin;
  double pitch;
  double half_width;
  int first_site;
  int last_site;

  std::size_t count() const { return static_cast<std::size_t>(last_site - first_site + 1); }
  double center(int site) const { return origin + site * pitch; }
  void validate() const;
};

/// Index range [begin, end) of the grid samples whose cells lie inside a bin.
struct BinSamples {
  std::size_t begin;
  std::size_t end;
};

/// Snaps each detector bin inward to whole samples; throws InvalidArgument
/// if a bin leaves the grid or captures no sample.
std::vector<BinSamples> snap_bins(const DetectorArray& det, const Grid& grid);

/// Coincidence probabilities Gamma_{q,r} (raw, not renormalized).
struct CorrelationMap {
  Matrix<double> gamma;
  DetectorArray detectors;
  std::vector<double> snapped_width;  // 2w actually integrated, per bin

  double at(int q, int r) const {
    return gamma(static_cast<std::size_t>(q - detectors.first_site), static_cast<std::size_t>(r - detectors.first_site));
  }
  double total() const;
  double diagonal_fraction() const;  // sum_q Gamma_qq / total
  Matrix<double> normalized() const;  // Gamma / total
};

CorrelationMap correlation_map(const BiphotonState& state, const DetectorArray& det);

/// Single-photon probability per detector bin, sum over the bin of |amp|^2 dx.
std::vector<double> bin_probabilities(const Field1D& field, const DetectorArray& det);

}  // namespace fourq
