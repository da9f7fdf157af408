#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fourq/errors.hpp"
#include "fourq/field.hpp"
#include "oracles.hpp"

using namespace fourq;

namespace {

const OpticsParams kOptics{808e-6, 100.0};

// Window where a Gaussian of waist sqrt(lambda f / pi) maps onto itself.
Grid balanced_grid(std::size_t n) { return make_grid(n, 0.5 * std::sqrt(static_cast<double>(n) * kOptics.lambda_f())); }

}  // namespace

TEST_CASE("make_grid samples cell centres") {
  const Grid g = make_grid(4, 2.0);
  CHECK(g.dx() == doctest::Approx(1.0));
  CHECK(g.x(0) == doctest::Approx(-1.5));
  CHECK(g.x(1) == doctest::Approx(-0.5));
  CHECK(g.x(2) == doctest::Approx(0.5));
  CHECK(g.x(3) == doctest::Approx(1.5));
  CHECK(g.centered());

  CHECK(make_grid(1024, 10.0).dx() == 20.0 / 1024.0);

  CHECK_THROWS_AS(make_grid(0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(16, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(16, -1.0), InvalidArgument);
}

TEST_CASE("conjugate grid satisfies reciprocity") {
  const Grid in = make_grid(512, 8.0);
  const Grid out = conjugate_grid(in, kOptics);
  CHECK(out.n() == 512);
  CHECK(in.dx() * out.dx() * 512 == doctest::Approx(kOptics.lambda_f()).epsilon(1e-14));
  CHECK(conjugate_grid(out, kOptics).matches(in));
}

TEST_CASE("gaussian_mode") {
  const Grid g = make_grid(256, 4.0);
  SUBCASE("centred mode is even and normalized") {
    const Field1D p = gaussian_mode(g, 0.0, 0.4);
    CHECK(std::abs(p.norm_sq() - 1.0) < 1e-12);
    for (std::size_t k = 0; k < g.n(); ++k) CHECK(std::abs(p[k] - p[g.n() - 1 - k]) < 1e-12);
  }
  SUBCASE("off-centre mode is normalized") {
    CHECK(std::abs(gaussian_mode(g, 1.3, 0.25).norm_sq() - 1.0) < 1e-12);
  }
  SUBCASE("unresolved waist") {
    CHECK_THROWS_AS(gaussian_mode(g, 0.0, g.dx() / 2), ResolutionError);
    CHECK_THROWS_AS(gaussian_mode(g, 0.0, 3.9 * g.dx()), ResolutionError);
  }
  SUBCASE("mode spilling off the grid") {
    CHECK_THROWS_AS(gaussian_mode(g, 3.8, 0.4), ResolutionError);
  }
  SUBCASE("non-positive waist") { CHECK_THROWS_AS(gaussian_mode(g, 0.0, 0.0), InvalidArgument); }
}

TEST_CASE("hermite_gauss_mode orders are orthonormal") {
  const Grid g = make_grid(512, 4.0);
  const Field1D h0 = hermite_gauss_mode(g, 0.3, 0.5, 0);
  const Field1D h1 = hermite_gauss_mode(g, 0.3, 0.5, 1);
  const Field1D h2 = hermite_gauss_mode(g, 0.3, 0.5, 2);
  CHECK(std::abs(h1.norm_sq() - 1.0) < 1e-12);
  CHECK(std::abs(inner(h0, h1)) < 1e-12);
  CHECK(std::abs(inner(h0, h2)) < 1e-12);
  CHECK(std::abs(inner(h1, h2)) < 1e-12);
}

TEST_CASE("lens maps a Gaussian to the transform-pair Gaussian") {
  const Grid in = balanced_grid(256);
  const Grid out = conjugate_grid(in, kOptics);
  const double waist = 0.12;
  const Field1D f = lens_fourier(gaussian_mode(in, 0.0, waist), kOptics, out);
  const Field1D expected = gaussian_mode(out, 0.0, kOptics.lambda_f() / (std::numbers::pi * waist));
  CHECK(std::abs(f.norm_sq() - 1.0) < 1e-9);
  // the transform of a real even function is real and even
  CHECK(oracle::max_abs_diff(f.amp(), expected.amp()) < 1e-9 * oracle::max_abs(expected.amp()));
}

TEST_CASE("lens shift theorem") {
  const Grid in = balanced_grid(256);
  const Grid out = conjugate_grid(in, kOptics);
  const double xa = 0.37;
  const Field1D centred = lens_fourier(gaussian_mode(in, 0.0, 0.12), kOptics, out);
  const Field1D shifted = lens_fourier(gaussian_mode(in, xa, 0.12), kOptics, out);
  double worst = 0.0;
  for (std::size_t k = 0; k < out.n(); ++k) {
    const cplx ramp = std::polar(1.0, -2.0 * std::numbers::pi * out.x(k) * xa / kOptics.lambda_f());
    worst = std::max(worst, std::abs(shifted[k] - ramp * centred[k]));
  }
  CHECK(worst < 1e-9 * oracle::max_abs(centred.amp()));
}

TEST_CASE("two lenses reflect the input (composed quadrature kernel, n = 64)") {
  const Grid in = balanced_grid(64);
  const Grid mid = conjugate_grid(in, kOptics);
  const Matrix<cplx> twice =
      oracle::multiply(oracle::lens_kernel(mid, in, kOptics.lambda_f()), oracle::lens_kernel(in, mid, kOptics.lambda_f()));
  // composed kernel is the exchange matrix k -> n-1-k
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) CHECK(std::abs(twice(r, c) - (r + c == 63 ? 1.0 : 0.0)) < 1e-9);

  std::mt19937_64 rng(7);
  const Field1D f = oracle::random_field(in, rng);
  const Field1D back = lens_fourier(lens_fourier(f, kOptics, mid), kOptics, in);
  CHECK(oracle::max_abs_diff(back.amp(), oracle::apply(twice, f.amp())) < 1e-9);
  CHECK(oracle::max_abs_diff(back.amp(), reflect(f).amp()) < 1e-9);
}

TEST_CASE("fast transform agrees with direct quadrature") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {16u, 64u, 100u, 256u, 512u}) {
    CAPTURE(n);
    const Grid in = balanced_grid(n);
    const Grid out = conjugate_grid(in, kOptics);
    const Matrix<cplx> kernel = oracle::lens_kernel(in, out, kOptics.lambda_f());
    for (int trial = 0; trial < 3; ++trial) {
      const Field1D f = oracle::random_field(in, rng);
      const std::vector<cplx> direct = oracle::apply(kernel, f.amp());
      const Field1D fast = lens_fourier(f, kOptics, out);
      CHECK(oracle::max_abs_diff(fast.amp(), direct) < 1e-9 * oracle::max_abs(direct));
    }
  }
}

TEST_CASE("lens is linear and norm preserving (random fields)") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const Grid in = balanced_grid(512);
  const Grid out = conjugate_grid(in, kOptics);
  for (int trial = 0; trial < 20; ++trial) {
    const Field1D u = oracle::random_field(in, rng);
    const Field1D v = oracle::random_field(in, rng);
    const cplx a(uni(rng), uni(rng));
    const cplx b(uni(rng), uni(rng));
    const Field1D lhs = lens_fourier(u.scaled(a) + v.scaled(b), kOptics, out);
    const Field1D rhs = lens_fourier(u, kOptics, out).scaled(a) + lens_fourier(v, kOptics, out).scaled(b);
    CHECK(oracle::max_abs_diff(lhs.amp(), rhs.amp()) < 1e-12 * oracle::max_abs(rhs.amp()));
    CHECK(std::abs(lens_fourier(u, kOptics, out).norm_sq() - 1.0) < 1e-9);
  }
}

TEST_CASE("lens rejects grids that break reciprocity") {
  const Grid in = make_grid(128, 2.0);
  const Field1D f = gaussian_mode(in, 0.0, 0.2);
  CHECK_THROWS_AS(lens_fourier(f, kOptics, make_grid(128, 1.0)), SamplingError);
  CHECK_THROWS_AS(lens_fourier(f, kOptics, conjugate_grid(make_grid(64, 2.0), kOptics)), SamplingError);
  CHECK_THROWS_AS(lens_fourier(f, kOptics, Grid(128, 0.0, 2.0)), SamplingError);
  CHECK_THROWS_AS(lens_fourier(f, OpticsParams{-1.0, 100.0}, in), InvalidArgument);
}
