#include "fourq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "fourq/errors.hpp"

namespace fourq {

namespace {

constexpr int kMaxOrder = 60;
constexpr double kMaxArgument = 30.0;
constexpr double kTruncationTol = 1e-10;

double bessel_series(int n, double x) {
  // sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  for (int k = 0; k < 60; ++k) {
    term *= -half * half / ((k + 1.0) * (k + 1.0 + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_miller(int n, double x) {
  const int top = std::max(n, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(160.0 * top));
  start += start % 2;  // even, so the normalization sum ends on J_0

  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start)] = 1e-300;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250)
      for (int i = k - 1; i <= start; ++i) j[i] *= 1e-250;
  }
  // 1 = J_0 + 2 sum_{k>=1} J_{2k}
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  return j[n] / norm;
}

std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::size_t site_index(int s, int n_max) { return static_cast<std::size_t>(s + n_max); }

}  // namespace

double bessel_j(int order, double x) {
  if (std::abs(order) > kMaxOrder) throw InvalidArgument("bessel_j: |order| must be <= 60");
  if (!(std::abs(x) <= kMaxArgument)) throw InvalidArgument("bessel_j: |x| must be <= 30");

  // J_{-n} = (-1)^n J_n, J_n(-x) = (-1)^n J_n(x)
  const int n = std::abs(order);
  double sign = 1.0;
  if (order < 0 && n % 2 == 1) sign = -sign;
  if (x < 0.0 && n % 2 == 1) sign = -sign;
  const double ax = std::abs(x);

  if (ax == 0.0) return n == 0 ? 1.0 : 0.0;
  return sign * (ax < 1.0 ? bessel_series(n, ax) : bessel_miller(n, ax));
}

double LatticeAmplitudes::total_probability() const {
  double s = 0.0;
  for (const cplx& a : amp) s += std::norm(a);
  return s;
}

LatticeAmplitudes walk_coefficients(double amplitude, int n_max) {
  if (n_max < 0 || n_max > kMaxOrder) throw InvalidArgument("walk_coefficients: n_max must be in [0, 60]");
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  LatticeAmplitudes out{n_max, std::vector<cplx>(site_index(n_max, n_max) + 1)};
  for (int s = -n_max; s <= n_max; ++s) out.amp[site_index(s, n_max)] = kIPow[((s % 4) + 4) % 4] * bessel_j(s, amplitude);
  const double kept = out.total_probability();
  if (!(kept > 1.0 - kTruncationTol))
    throw TruncationError("walk_coefficients: |s| <= " + std::to_string(n_max) + " keeps only " +
                          std::to_string(kept) + " of the probability at A_p = " + std::to_string(amplitude));
  return out;
}

LatticeAmplitudes transfer_by_quadrature(double amplitude, const std::function<double(double)>& extra, int n_max,
                                         int points) {
  if (points < 256) throw InvalidArgument("transfer_by_quadrature: need at least 256 quadrature points");
  if (n_max < 0) throw InvalidArgument("transfer_by_quadrature: n_max must be non-negative");

  auto integrate = [&](int nodes) {
    std::vector<cplx> f(static_cast<std::size_t>(nodes));
    const double h = 2.0 * std::numbers::pi / nodes;
    for (int k = 0; k < nodes; ++k) {
      const double t = (k + 0.5) * h;
      f[k] = std::polar(1.0, amplitude * std::cos(t) + extra(t));
    }
    LatticeAmplitudes u{n_max, std::vector<cplx>(site_index(n_max, n_max) + 1)};
    for (int s = -n_max; s <= n_max; ++s) {
      cplx sum{};
      for (int k = 0; k < nodes; ++k) sum += f[k] * std::polar(1.0, s * (k + 0.5) * h);
      u.amp[site_index(s, n_max)] = sum / static_cast<double>(nodes);
    }
    return u;
  };

  const LatticeAmplitudes coarse = integrate(points);
  LatticeAmplitudes fine = integrate(2 * points);
  double change = 0.0;
  for (std::size_t i = 0; i < fine.amp.size(); ++i) change = std::max(change, std::abs(fine.amp[i] - coarse.amp[i]));
  if (change > 1e-8)
    throw QuadratureError("transfer_by_quadrature: doubling " + std::to_string(points) + " nodes changed U_s by " +
                          scientific(change));
  return fine;
}

LatticeBiphoton walk_path_entangled(const LatticeAmplitudes& transfer, double phi, int a, int b, int n_max) {
  if (a == b) throw InvalidArgument("walk_path_entangled: input sites must differ");
  const int reach = n_max + std::max(std::abs(a), std::abs(b));
  if (transfer.n_max < reach)
    throw InvalidArgument("walk_path_entangled: transfer amplitudes cover |s| <= " + std::to_string(transfer.n_max) +
                          ", need " + std::to_string(reach));
  const std::size_t m = site_index(n_max, n_max) + 1;
  const cplx weight_b = std::polar(1.0, phi);
  const double r = 1.0 / std::numbers::sqrt2;
  LatticeBiphoton out{n_max, Matrix<cplx>(m, m), ExchangeSymmetry::Bosonic};
  for (int q = -n_max; q <= n_max; ++q)
    for (int s = q; s <= n_max; ++s) {
      const cplx v =
          r * (transfer.at(q - a) * transfer.at(s - a) + weight_b * transfer.at(q - b) * transfer.at(s - b));
      out.amp(site_index(q, n_max), site_index(s, n_max)) = v;
      out.amp(site_index(s, n_max), site_index(q, n_max)) = v;
    }
  return out;
}

Matrix<double> lattice_correlation(const LatticeBiphoton& state, double min_captured) {
  const std::size_t m = state.amp.rows();
  Matrix<double> g(m, m);
  double total = 0.0;
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t r = q; r < m; ++r) {
      g(q, r) = std::norm(state.amp(q, r));
      g(r, q) = g(q, r);
      total += q == r ? g(q, r) : 2.0 * g(q, r);
    }
  if (!(total > 0.0) || total < min_captured)
    throw TruncationError("lattice_correlation: site window keeps only " + std::to_string(total) +
                          " of the pair probability");
  for (double& v : g.data()) v /= total;
  return g;
}

Matrix<double> oracle_correlation(double phi, double amplitude, int a, int b, int n_max) {
  const int reach = std::min(kMaxOrder, n_max + std::max(std::abs(a), std::abs(b)));
  // truncation check at n_max as documented, then widen for the shifted inputs
  walk_coefficients(amplitude, n_max);
  return lattice_correlation(walk_path_entangled(walk_coefficients(amplitude, reach), phi, a, b, n_max));
}

Matrix<double> oracle_with_extra_phase(double phi, double amplitude, const std::function<double(double)>& extra,
                                       int a, int b, int n_max, int quadrature_points) {
  const int reach = n_max + std::max(std::abs(a), std::abs(b));
  const LatticeAmplitudes transfer = transfer_by_quadrature(amplitude, extra, reach, quadrature_points);
  // a phase step has 1/s tails, so some weight always leaves the window
  return lattice_correlation(walk_path_entangled(transfer, phi, a, b, n_max), 0.0);
}

std::function<double(double)> zernike_quarter_phase(double delta) {
  return [delta](double t) { return std::abs(t - std::numbers::pi) < 0.25 * std::numbers::pi ? delta : 0.0; };
}

double participation_number(const std::vector<double>& probabilities) {
  double sum = 0.0;
  double sq = 0.0;
  for (double p : probabilities) {
    sum += p;
    sq += p * p;
  }
  if (!(sq > 0.0)) throw InvalidArgument("participation_number: distribution is empty");
  return sum * sum / sq;
}

double distinguishability(const Matrix<double>& g1, const Matrix<double>& g2) {
  if (g1.rows() != g2.rows() || g1.cols() != g2.cols()) throw InvalidArgument("distinguishability: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < g1.data().size(); ++i) s += std::abs(g1.data()[i] - g2.data()[i]);
  return 0.5 * s;
}

}  // namespace fourq
