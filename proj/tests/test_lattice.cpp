#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fourq/errors.hpp"
#include "fourq/lattice.hpp"

using namespace fourq;

namespace {

constexpr double kPi = std::numbers::pi;

double diagonal(const Matrix<double>& g) {
  double s = 0.0;
  for (std::size_t q = 0; q < g.rows(); ++q) s += g(q, q);
  return s;
}

double total(const Matrix<double>& g) {
  double s = 0.0;
  for (double v : g.data()) s += v;
  return s;
}

}  // namespace

TEST_CASE("bessel_j against the standard library") {
  for (int n = -20; n <= 20; ++n)
    for (double x : {0.0, 1e-6, 0.3, 0.99, 1.0, 2.7, 5.5, 10.0, 17.3, 29.9}) {
      const double ref = n >= 0 ? std::cyl_bessel_j(n, x) : ((-n) % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(-n, x);
      CHECK(std::abs(bessel_j(n, x) - ref) < 1e-12);
      CHECK(bessel_j(n, -x) == doctest::Approx((std::abs(n) % 2 ? -1.0 : 1.0) * bessel_j(n, x)).epsilon(1e-14));
    }
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j(61, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bessel_j(0, 31.0), InvalidArgument);
}

TEST_CASE("bessel sum rule") {
  for (double x : {0.5, 2.7, 8.0}) {
    double s = 0.0;
    for (int n = -40; n <= 40; ++n) s += bessel_j(n, x) * bessel_j(n, x);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("walk coefficients") {
  const LatticeAmplitudes zero = walk_coefficients(0.0, 5);
  CHECK(zero.at(0) == cplx(1.0, 0.0));
  for (int s = 1; s <= 5; ++s) CHECK(std::abs(zero.at(s)) == 0.0);

  const LatticeAmplitudes u = walk_coefficients(0.86 * kPi, 12);
  CHECK(u.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(u.at(1) - cplx(0.0, bessel_j(1, 0.86 * kPi))) < 1e-15);
  CHECK(std::abs(u.at(-2) - cplx(-bessel_j(2, 0.86 * kPi), 0.0)) < 1e-15);
  for (int s = 1; s <= 12; ++s) CHECK(std::norm(u.at(s)) == doctest::Approx(std::norm(u.at(-s))));

  CHECK_THROWS_AS(walk_coefficients(0.86 * kPi, 5), TruncationError);
  CHECK_THROWS_AS(walk_coefficients(20.0, 12), TruncationError);
}

TEST_CASE("quadrature reproduces the Bessel amplitudes") {
  const auto none = [](double) { return 0.0; };
  for (double a : {0.2, 0.86 * kPi, 6.0}) {
    const LatticeAmplitudes q = transfer_by_quadrature(a, none, 20, 4096);
    const LatticeAmplitudes b = walk_coefficients(a, 20);
    for (int s = -20; s <= 20; ++s) CHECK(std::abs(q.at(s) - b.at(s)) < 1e-12);
  }
  CHECK_THROWS_AS(transfer_by_quadrature(1.0, none, 5, 100), InvalidArgument);
}

TEST_CASE("quadrature with a phase step is unitary") {
  const auto smooth = [](double t) { return 0.7 * std::sin(t) + 0.2 * std::cos(3 * t); };
  CHECK(std::abs(transfer_by_quadrature(0.86 * kPi, smooth, 30, 4096).total_probability() - 1.0) < 1e-8);

  // the step's tails fall as 1/s^2: partial sums climb towards 1
  const LatticeAmplitudes q = transfer_by_quadrature(0.86 * kPi, zernike_quarter_phase(kPi / 4), 40, 65536);
  double partial = 0.0, previous_gap = 1.0;
  for (int n = 0; n <= 40; ++n) {
    partial = 0.0;
    for (int s = -n; s <= n; ++s) partial += std::norm(q.at(s));
    CHECK(1.0 - partial <= previous_gap);
    previous_gap = 1.0 - partial;
  }
  CHECK(partial > 0.998);
  CHECK(partial < 1.0);
  // without the sinusoid the step alone keeps most weight at s = 0:
  // U_0 = 1 + (e^{i delta} - 1)/4
  const LatticeAmplitudes step = transfer_by_quadrature(0.0, zernike_quarter_phase(kPi / 4), 4, 65536);
  CHECK(std::abs(step.at(0) - (1.0 + (std::polar(1.0, kPi / 4) - 1.0) / 4.0)) < 1e-4);
}

TEST_CASE("quadrature refuses unresolved integrands") {
  // a rapidly varying extra phase that 256 nodes cannot resolve
  const auto wild = [](double t) { return 40.0 * std::cos(37.0 * t); };
  CHECK_THROWS_AS(transfer_by_quadrature(1.0, wild, 4, 256), QuadratureError);
}

TEST_CASE("oracle at A_p = 0 keeps the photons on their sites") {
  for (double phi : {0.0, 1.0, kPi}) {
    const Matrix<double> g = oracle_correlation(phi, 0.0, 0, 1, 4);
    CHECK(g(4, 4) == doctest::Approx(0.5));
    CHECK(g(5, 5) == doctest::Approx(0.5));
    CHECK(total(g) == doctest::Approx(1.0));
  }
}

TEST_CASE("oracle correlation properties") {
  const double a = 0.86 * kPi;
  for (double phi : {-0.5 * kPi, 0.0, 1.0, kPi}) {
    const Matrix<double> g = oracle_correlation(phi, a, 0, 1, 12);
    CHECK(total(g) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t q = 0; q < g.rows(); ++q)
      for (std::size_t r = 0; r < g.cols(); ++r) {
        CHECK(g(q, r) >= 0.0);
        CHECK(g(q, r) == g(r, q));
      }
  }
  // the sinusoid alone cannot tell phi from -phi
  CHECK(distinguishability(oracle_correlation(0.5 * kPi, a, 0, 1, 12), oracle_correlation(-0.5 * kPi, a, 0, 1, 12)) <
        1e-12);
}

TEST_CASE("coincidences depend on phi only through cos phi") {
  // Gamma(phi) = X + Y cos phi + Z sin phi with Z = 0: fit X, Y from phi = 0, pi
  const double a = 0.86 * kPi;
  const Matrix<double> g0 = oracle_correlation(0.0, a, 0, 1, 12);
  const Matrix<double> gpi = oracle_correlation(kPi, a, 0, 1, 12);
  for (double phi : {0.3, 1.2, 2.0}) {
    const Matrix<double> g = oracle_correlation(phi, a, 0, 1, 12);
    const double c = std::cos(phi);
    for (std::size_t i = 0; i < g.data().size(); ++i) {
      const double expect = 0.5 * (g0.data()[i] + gpi.data()[i]) + 0.5 * c * (g0.data()[i] - gpi.data()[i]);
      CHECK(std::abs(g.data()[i] - expect) < 1e-12);
    }
  }
}

TEST_CASE("diagonal fraction ordering") {
  const double a = 0.86 * kPi;
  const double f0 = diagonal(oracle_correlation(0.0, a, 0, 1, 12));
  const double fp = diagonal(oracle_correlation(0.5 * kPi, a, 0, 1, 12));
  const double fm = diagonal(oracle_correlation(-0.5 * kPi, a, 0, 1, 12));
  const double fpi = diagonal(oracle_correlation(kPi, a, 0, 1, 12));
  CHECK(f0 < fp);
  CHECK(fp == doctest::Approx(fm).epsilon(1e-12));
  CHECK(fp < fpi);
}

TEST_CASE("phase step breaks the +-phi degeneracy") {
  const double a = 0.86 * kPi;
  const auto step = zernike_quarter_phase(kPi / 4);
  const double d = distinguishability(oracle_with_extra_phase(0.5 * kPi, a, step, 0, 1, 12, 65536),
                                      oracle_with_extra_phase(-0.5 * kPi, a, step, 0, 1, 12, 65536));
  CHECK(d > 0.1);
  const auto none = [](double) { return 0.0; };
  CHECK(distinguishability(oracle_with_extra_phase(0.5 * kPi, a, none, 0, 1, 12, 4096),
                           oracle_with_extra_phase(-0.5 * kPi, a, none, 0, 1, 12, 4096)) < 1e-10);
}

TEST_CASE("participation number") {
  CHECK(participation_number({1.0}) == 1.0);
  CHECK(participation_number({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(4.0));
  CHECK(participation_number({2.0, 2.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(participation_number({0.0, 0.0}), InvalidArgument);

  double previous = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const LatticeAmplitudes u = walk_coefficients(0.1 * k * kPi, 20);
    std::vector<double> p;
    for (const cplx& v : u.amp) p.push_back(std::norm(v));
    const double pn = participation_number(p);
    CHECK(pn > previous);
    previous = pn;
  }
}

TEST_CASE("walk_path_entangled argument checks") {
  const LatticeAmplitudes u = walk_coefficients(1.0, 12);
  CHECK_THROWS_AS(walk_path_entangled(u, 0.0, 0, 0, 12), InvalidArgument);
  CHECK_THROWS_AS(walk_path_entangled(u, 0.0, 0, 1, 12), InvalidArgument);
  CHECK_NOTHROW(walk_path_entangled(u, 0.0, 0, 1, 11));
  CHECK_THROWS_AS(distinguishability(Matrix<double>(2, 2), Matrix<double>(3, 3)), InvalidArgument);
}
