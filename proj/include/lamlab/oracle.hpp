#pragma once

#include "lamlab/algebra2d.hpp"
#include "lamlab/energy.hpp"
#include "lamlab/laminate.hpp"
#include "lamlab/regions.hpp"

#include <optional>
#include <vector>

namespace lamlab {

struct OracleOptions {
    int n_dirs = 720;
    /// Golden-section refinement around the best grid minima.
    bool refine = true;
    double refine_width = 1e-8;
    /// Number of distinct grid local minima that get refined.
    int refine_seeds = 4;
};

struct OracleResult {
    ExtendedEnergy value = ExtendedEnergy::infinite();
    std::optional<LaminateDecomposition> best;
    int directions_scanned = 0;
    double refined_angle = 0.0;
};

/// Cheapest two-point laminate of W along the det-preserving lines F(I + t m (x) m^perp),
/// m = (cos phi, sin phi), over a uniform phi-grid on [0, pi) with optional refinement.
/// Throws OffManifold if |det F - 1| > tol, PreconditionError if n_dirs < 8.
OracleResult wlc_numeric(const Matrix2& f, const SlipSystem& s, const OracleOptions& opt = {},
                         double tol = kDefaultTol);

/// Best candidate energy along the single direction phi (+inf if the line offers none).
double wlc_direction(const Matrix2& f, const SlipSystem& s, double phi, double tol = kDefaultTol,
                     LaminateDecomposition* best = nullptr);

struct EnvelopeRow {
    double b = 0.0;
    double c = 0.0;
    Region region = Region::OffManifold;
    bool known = true;
    double closed = 0.0;       ///< Known value
    double lower = 0.0;        ///< Bounds
    double upper = 0.0;        ///< Bounds
    double oracle = 0.0;
    double discrepancy = 0.0;  ///< |oracle - closed|, Known only
    double slack_lo = 0.0;     ///< oracle - lower, Bounds only
    double slack_hi = 0.0;     ///< upper - oracle, Bounds only
};

/// Oracle against the closed forms on the cell-centred (b, c) grid. Cells whose label
/// carries a boundary set (including the M_i bands) are skipped. Row-major order.
std::vector<EnvelopeRow> envelope_scan(const SlipSystem& s, double range, int n, const OracleOptions& opt = {},
                                       double tol = kDefaultTol);

}  // namespace lamlab
