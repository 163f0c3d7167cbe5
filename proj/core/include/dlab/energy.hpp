#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlab/charts.hpp"
#include "dlab/quadrature.hpp"

namespace dlab {

/// Convex volumetric penalty H(det Du). The default choice
/// H(t) = t^(5/4) + t^(-1/4) satisfies every integrability requirement the
/// energy computations rely on.
struct HFunction {
  std::function<double(double)> value;
  std::string name;
};

HFunction default_H();
/// t^p + t^-q penalty.
HFunction power_H(double p, double q);

struct HValidation {
  bool convex = false;
  bool superlinear = false;     // H(t)/t -> inf
  bool blows_up_at_zero = false;
  bool tail_integrable = false;     // integral of H(s) s^(-5/2)
  bool cube_integrable = false;     // integral of H(s^3) near zero
  bool square_integrable = false;   // integral of H(s^2) near zero
  bool pass() const {
    return convex && superlinear && blows_up_at_zero && tail_integrable &&
           cube_integrable && square_integrable;
  }
};

/// Numeric screen of the HFunction requirements (log-grid convexity, growth
/// sampling, Cauchy partial integrals).
HValidation validate_H(const HFunction& h);

/// Dirichlet energy of the chart's own map over the chart.
QuadResult dirichlet_energy(const RegionChart& chart, const QuadSpec& spec = {});
/// Volumetric energy of the chart's own map over the chart.
QuadResult h_energy(const RegionChart& chart, const HFunction& h, const QuadSpec& spec = {});

struct CRegionParts {
  QuadResult in_plane;    // radial + angular stretch term; limit 1/2
  QuadResult transverse;  // circumferential term; limit 1/2
  QuadResult vertical;    // axial term; limit 0
  double total() const { return in_plane.value + transverse.value + vertical.value; }
};

/// The three half-plane integrals whose sum is 1/(2 pi) times the Dirichlet
/// energy of the recovery map over the tube.
CRegionParts c_region_parts(const RecoveryMap& map, const QuadSpec& spec = {});

struct EnergyRow {
  double eps = 0, gamma = 0;
  std::string region;
  double dirichlet = 0, dirichlet_err = 0;
  double h_energy = 0, h_err = 0;
  double expected = 0;   // limit-map Dirichlet on the same chart (+2pi in the tube)
  double deviation = 0;  // dirichlet - expected
  double limit_dirichlet = 0, limit_h = 0;
};

struct EnergyTable {
  std::vector<EnergyRow> rows;
  /// Rows of one eps, including the "total" row.
  std::vector<const EnergyRow*> for_eps(double eps) const;
};

/// Per-region energies of the recovery map against the singular map on the
/// same charts, for each parameter in eps_list.
EnergyTable energy_gap_table(const std::vector<double>& eps_list, double gamma,
                             const LimitMap& limit, const HFunction& h,
                             const QuadSpec& spec = {});

}  // namespace dlab
