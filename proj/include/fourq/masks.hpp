#pragma once

#include <filesystem>
#include <numbers>
#include <variant>
#include <vector>

#include "fourq/field.hpp"
#include "fourq/matrix.hpp"

namespace fourq {

/// exp(i A cos(2 pi nu (x - origin))). Phase-only.
struct SinusoidalPhase {
  double amplitude;  // A_p, radians
  double frequency;  // cycles per mm
  double origin = 0.0;
};

/// Phase delta on the central quarter of each period, i.e. where
/// |mod(x - origin, period) - period/2| < period/8 (strict on both edges).
struct ZernikeQuarter {
  double delta = std::numbers::pi / 4.0;
  double period;
  double origin = 0.0;
};

/// 0/1 transmission on the closed interval [center - width/2, center + width/2].
struct Aperture {
  double center;
  double width;
};

/// Tabulated transmission on a fixed grid.
struct CustomMask {
  Grid grid;
  std::vector<cplx> values;
};

struct MaskSpec;

/// Pointwise product of its members.
struct CompositeMask {
  std::vector<MaskSpec> parts;
};

struct MaskSpec {
  std::variant<SinusoidalPhase, ZernikeQuarter, Aperture, CompositeMask, CustomMask> kind;

  bool phase_only() const;
};

MaskSpec unit_mask();

/// A transmission function evaluated on a grid.
struct SampledMask {
  Grid grid;
  std::vector<cplx> values;
};

/// Throws ResolutionError for periodic masks that span fewer than two periods
/// or have dx >= period/8, InvalidArgument for a CustomMask on another grid.
SampledMask sample_mask(const MaskSpec& spec, const Grid& grid);

/// M2_jk = M_j M_k, the mask seen by a photon pair.
Matrix<cplx> two_photon_mask(const MaskSpec& spec, const Grid& grid);

/// Reads "x phase" pairs (one per line, '#' comments) and checks every x
/// against the target grid sample by sample.
CustomMask load_custom_mask(const std::filesystem::path& path, const Grid& grid);

}  // namespace fourq
