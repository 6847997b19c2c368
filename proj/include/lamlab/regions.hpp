#pragma once

#include "lamlab/algebra2d.hpp"
#include "lamlab/energy.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lamlab {

/// Phase-diagram cells of det-1 matrices.
enum class Region { SO2, M1, M2, A, APerp, N1capN2, N1only, N2only, OffManifold };

std::string_view to_string(Region r);

struct RegionLabel {
    Region tag = Region::OffManifold;
    /// Adjacent tags when some defining inequality is within tol of equality.
    std::vector<Region> boundary;

    bool on_boundary() const { return !boundary.empty(); }
    /// Boundary tags joined with '|'.
    std::string boundary_string() const;
};

/// Classification by |det F - 1|, |Fv_i| against 1 and the sign of Fv1.Fv2.
/// M1/M2/SO2 are the tol-bands around |Fv_i| = 1 and carry their neighbours in
/// `boundary`; an A/APerp label with |Fv1.Fv2| <= tol carries {A, APerp}.
RegionLabel classify(const Matrix2& f, const SlipSystem& s, double tol = kDefaultTol);

/// w_hom_orthogonal for orthogonal slips, w_hom_general otherwise.
HomEnergy w_hom(const Matrix2& f, const SlipSystem& s, double tol = kDefaultTol);

struct RegionCell {
    double b = 0.0;
    double c = 0.0;
    RegionLabel label;
    HomEnergy energy;
};

/// Cell-centre coordinate i of an n-cell partition of [-range, range].
double grid_center(double range, int n, int i);

/// n x n cell-centred grid over [-range, range]^2 in (b, c) coordinates.
/// Row-major: row j runs over c, column i over b.
std::vector<RegionCell> region_map(const SlipSystem& s, double range, int n, double tol = kDefaultTol);

}  // namespace lamlab
