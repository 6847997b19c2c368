#include "lamlab/regions.hpp"

#include "lamlab/parallel.hpp"

#include <cmath>

namespace lamlab {

std::string_view to_string(Region r)
{
    switch (r) {
    case Region::SO2: return "SO2";
    case Region::M1: return "M1";
    case Region::M2: return "M2";
    case Region::A: return "A";
    case Region::APerp: return "APerp";
    case Region::N1capN2: return "N1capN2";
    case Region::N1only: return "N1only";
    case Region::N2only: return "N2only";
    case Region::OffManifold: return "OffManifold";
    }
    return "?";
}

std::string RegionLabel::boundary_string() const
{
    std::string out;
    for (Region r : boundary) {
        if (!out.empty()) {
            out += '|';
        }
        out += to_string(r);
    }
    return out;
}

RegionLabel classify(const Matrix2& f, const SlipSystem& s, double tol)
{
    RegionLabel label;
    if (std::abs(f.det() - 1.0) > tol) {
        return label;
    }
    const Vector2 f1 = f * s.v1();
    const Vector2 f2 = f * s.v2();
    const double n1 = norm(f1);
    const double n2 = norm(f2);
    const double d = dot(f1, f2);
    const bool on1 = std::abs(n1 - 1.0) <= tol;
    const bool on2 = std::abs(n2 - 1.0) <= tol;
    const Region open_side = d >= 0.0 ? Region::A : Region::APerp;

    if (on1 && on2) {
        label.tag = Region::SO2;
        label.boundary = {Region::M1, Region::M2};
        return label;
    }
    // On M_i the two sides are |Fv_i| < 1 and |Fv_i| > 1 with the other norm fixed.
    if (on1) {
        label.tag = Region::M1;
        label.boundary = n2 < 1.0 ? std::vector<Region>{Region::N1capN2, Region::N2only}
                                  : std::vector<Region>{Region::N1only, open_side};
        return label;
    }
    if (on2) {
        label.tag = Region::M2;
        label.boundary = n1 < 1.0 ? std::vector<Region>{Region::N1capN2, Region::N1only}
                                  : std::vector<Region>{Region::N2only, open_side};
        return label;
    }
    if (n1 < 1.0 && n2 < 1.0) {
        label.tag = Region::N1capN2;
    } else if (n1 < 1.0) {
        label.tag = Region::N1only;
    } else if (n2 < 1.0) {
        label.tag = Region::N2only;
    } else {
        label.tag = open_side;
        if (std::abs(d) <= tol) {
            label.boundary = {Region::A, Region::APerp};
        }
    }
    return label;
}

HomEnergy w_hom(const Matrix2& f, const SlipSystem& s, double tol)
{
    if (s.is_orthogonal()) {
        return HomEnergy::known(w_hom_orthogonal(f, s, tol));
    }
    return w_hom_general(f, s, tol);
}

double grid_center(double range, int n, int i)
{
    const double h = 2.0 * range / n;
    return -range + (i + 0.5) * h;
}

std::vector<RegionCell> region_map(const SlipSystem& s, double range, int n, double tol)
{
    std::vector<RegionCell> cells(static_cast<std::size_t>(n) * n);
    parallel_for(n, [&](int j) {
        const double c = grid_center(range, n, j);
        for (int i = 0; i < n; ++i) {
            const double b = grid_center(range, n, i);
            const Matrix2 f = bc_to_matrix(b, c);
            RegionCell& cell = cells[static_cast<std::size_t>(j) * n + i];
            cell.b = b;
            cell.c = c;
            cell.label = classify(f, s, tol);
            cell.energy = w_hom(f, s, tol);
        }
    });
    return cells;
}

}  // namespace lamlab
