#include "fourq/masks.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "fourq/errors.hpp"

namespace fourq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_periodic(const Grid& grid, double period, const char* what) {
  if (!(period > 0.0) || !std::isfinite(period))
    throw InvalidArgument(std::string(what) + ": period must be positive");
  if (grid.extent() < 2.0 * period)
    throw ResolutionError(std::string(what) + ": grid spans " + std::to_string(grid.extent() / period) +
                          " periods, need at least 2");
  if (!(grid.dx() < period / 8.0))
    throw ResolutionError(std::string(what) + ": dx = " + std::to_string(grid.dx()) +
                          " mm does not resolve period " + std::to_string(period) + " mm (need dx < period/8)");
}

// When the period is a whole number of samples, sample k is evaluated at its
// representative k mod K so that M(x_k) == M(x_k + period) bit for bit.
std::size_t samples_per_period(const Grid& grid, double period) {
  const double ratio = period / grid.dx();
  const double whole = std::round(ratio);
  return (whole >= 1.0 && std::abs(ratio - whole) <= 1e-9 * ratio) ? static_cast<std::size_t>(whole) : 0;
}

double periodic_x(const Grid& grid, std::size_t k, std::size_t per) {
  return grid.x(per ? k % per : k);
}

void sample_into(const MaskSpec& spec, const Grid& grid, std::vector<cplx>& out) {
  std::visit(
      overloaded{
          [&](const SinusoidalPhase& s) {
            check_periodic(grid, 1.0 / s.frequency, "sinusoidal mask");
            const std::size_t per = samples_per_period(grid, 1.0 / s.frequency);
            for (std::size_t k = 0; k < grid.n(); ++k) {
              const double x = periodic_x(grid, k, per);
              const double phase = s.amplitude * std::cos(2.0 * std::numbers::pi * s.frequency * (x - s.origin));
              out[k] *= cplx(std::cos(phase), std::sin(phase));
            }
          },
          [&](const ZernikeQuarter& z) {
            check_periodic(grid, z.period, "zernike quarter mask");
            const cplx shift(std::cos(z.delta), std::sin(z.delta));
            const std::size_t per = samples_per_period(grid, z.period);
            for (std::size_t k = 0; k < grid.n(); ++k) {
              double u = std::fmod(periodic_x(grid, k, per) - z.origin, z.period);
              if (u < 0.0) u += z.period;
              if (std::abs(u - 0.5 * z.period) < 0.125 * z.period) out[k] *= shift;
            }
          },
          [&](const Aperture& a) {
            if (!(a.width >= 0.0)) throw InvalidArgument("aperture: width must be non-negative");
            const double lo = a.center - 0.5 * a.width;
            const double hi = a.center + 0.5 * a.width;
            for (std::size_t k = 0; k < grid.n(); ++k) {
              const double x = grid.x(k);
              if (x < lo || x > hi) out[k] = 0.0;
            }
          },
          [&](const CompositeMask& c) {
            for (const MaskSpec& part : c.parts) sample_into(part, grid, out);
          },
          [&](const CustomMask& c) {
            if (!c.grid.matches(grid)) throw InvalidArgument("custom mask: tabulated grid differs from target grid");
            for (std::size_t k = 0; k < grid.n(); ++k) out[k] *= c.values[k];
          },
      },
      spec.kind);
}

}  // namespace

bool MaskSpec::phase_only() const {
  return std::visit(overloaded{
                        [](const SinusoidalPhase&) { return true; },
                        [](const ZernikeQuarter&) { return true; },
                        [](const Aperture&) { return false; },
                        [](const CompositeMask& c) {
                          for (const MaskSpec& p : c.parts)
                            if (!p.phase_only()) return false;
                          return true;
                        },
                        [](const CustomMask& c) {
                          for (const cplx& v : c.values)
                            if (std::abs(std::abs(v) - 1.0) > 1e-12) return false;
                          return true;
                        },
                    },
                    kind);
}

MaskSpec unit_mask() { return MaskSpec{CompositeMask{}}; }

SampledMask sample_mask(const MaskSpec& spec, const Grid& grid) {
  std::vector<cplx> values(grid.n(), cplx(1.0, 0.0));
  sample_into(spec, grid, values);
  return SampledMask{grid, std::move(values)};
}

Matrix<cplx> two_photon_mask(const MaskSpec& spec, const Grid& grid) {
  const SampledMask m = sample_mask(spec, grid);
  const std::size_t n = grid.n();
  Matrix<cplx> out(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j; k < n; ++k) {
      out(j, k) = m.values[j] * m.values[k];
      out(k, j) = out(j, k);
    }
  return out;
}

CustomMask load_custom_mask(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("custom mask: cannot open " + path.string());

  std::vector<cplx> values;
  values.reserve(grid.n());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double x = 0.0;
    double phase = 0.0;
    if (!(fields >> x)) continue;  // blank or comment-only
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::string extra;
    if (!(fields >> phase) || (fields >> extra)) throw InvalidArgument(where + ": expected two columns 'x phase'");
    const std::size_t k = values.size();
    if (k >= grid.n()) throw InvalidArgument(where + ": more rows than grid samples (" + std::to_string(grid.n()) + ")");
    // text round-off only; any real offset is a mismatch
    if (std::abs(x - grid.x(k)) > 1e-6 * grid.dx())
      throw InvalidArgument(where + ": x = " + std::to_string(x) + " does not match grid sample " + std::to_string(k) +
                            " at " + std::to_string(grid.x(k)));
    values.emplace_back(std::cos(phase), std::sin(phase));
  }
  if (values.size() != grid.n())
    throw InvalidArgument(path.string() + ": " + std::to_string(values.size()) + " rows, grid has " +
                          std::to_string(grid.n()) + " samples");
  return CustomMask{grid, std::move(values)};
}

}  // namespace fourq
