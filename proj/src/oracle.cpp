#include "lamlab/oracle.hpp"

#include "lamlab/errors.hpp"
#include "lamlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lamlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_roots(const RankOneLine& line, const Vector2& v, std::vector<double>& out)
{
    const UnitImageRoots r = solve_unit_image_times(line, v);
    // A line lying inside M_i only offers convex |F_t|^2 - 2; F itself is then the
    // single-point candidate handled by the caller.
    if (!r.constant()) {
        out.insert(out.end(), r.roots.begin(), r.roots.end());
    }
}

double golden_section(const auto& g, double lo, double hi, double width, double& fbest)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = g(x1);
    double f2 = g(x2);
    while (hi - lo > width) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
    }
    if (f1 <= f2) {
        fbest = f1;
        return x1;
    }
    fbest = f2;
    return x2;
}

}  // namespace

double wlc_direction(const Matrix2& f, const SlipSystem& s, double phi, double tol, LaminateDecomposition* best)
{
    (void)tol;
    const Vector2 m{std::cos(phi), std::sin(phi)};
    const RankOneLine line = RankOneLine::make(f, m, perp(m));
    std::vector<double> roots;
    roots.reserve(4);
    append_roots(line, s.v1(), roots);
    append_roots(line, s.v2(), roots);

    double value = kInf;
    double best_a = 0.0;
    double best_b = 0.0;
    for (double ta : roots) {
        if (ta > 0.0) {
            continue;
        }
        const double wa = std::max(0.0, line.point(ta).frobenius_sq() - 2.0);
        for (double tb : roots) {
            if (tb < 0.0 || tb == ta) {
                continue;
            }
            const double wb = std::max(0.0, line.point(tb).frobenius_sq() - 2.0);
            const double mu = tb / (tb - ta);
            const double e = mu * wa + (1.0 - mu) * wb;
            if (e < value) {
                value = e;
                best_a = ta;
                best_b = tb;
            }
        }
    }
    if (best && std::isfinite(value)) {
        LaminateDecomposition d;
        d.kind = LaminateKind::UpperBoundOnly;
        d.t_minus = best_a;
        d.t_plus = best_b;
        d.f_minus = line.point(best_a);
        d.f_plus = line.point(best_b);
        d.mu = -best_a / (best_b - best_a);
        d.n = perp(m);
        d.a = (d.f_plus - d.f_minus) * d.n;
        d.energy = value;
        *best = d;
    }
    return value;
}

OracleResult wlc_numeric(const Matrix2& f, const SlipSystem& s, const OracleOptions& opt, double tol)
{
    if (std::abs(f.det() - 1.0) > tol) {
        throw OffManifold("oracle target has det " + std::to_string(f.det()) + " != 1");
    }
    if (opt.n_dirs < 8) {
        throw PreconditionError("oracle needs n_dirs >= 8");
    }
    const int n = opt.n_dirs;
    const double step = kPi / n;
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k) {
        grid[k] = wlc_direction(f, s, k * step, tol);
    }

    OracleResult res;
    res.directions_scanned = n;
    double best_value = kInf;
    double best_phi = 0.0;
    for (int k = 0; k < n; ++k) {
        if (grid[k] < best_value) {
            best_value = grid[k];
            best_phi = k * step;
        }
    }

    if (opt.refine && std::isfinite(best_value)) {
        // Grid local minima on the circle of directions, cheapest first.
        std::vector<int> minima;
        for (int k = 0; k < n; ++k) {
            const double left = grid[(k + n - 1) % n];
            const double right = grid[(k + 1) % n];
            if (std::isfinite(grid[k]) && grid[k] <= left && grid[k] <= right) {
                minima.push_back(k);
            }
        }
        std::stable_sort(minima.begin(), minima.end(), [&](int x, int y) { return grid[x] < grid[y]; });
        if (static_cast<int>(minima.size()) > opt.refine_seeds) {
            minima.resize(opt.refine_seeds);
        }
        auto g = [&](double phi) { return wlc_direction(f, s, phi, tol); };
        for (int k : minima) {
            double value = kInf;
            const double phi = golden_section(g, (k - 1) * step, (k + 1) * step, opt.refine_width, value);
            res.directions_scanned += 1;
            if (value < best_value) {
                best_value = value;
                best_phi = phi;
            }
        }
    }

    LaminateDecomposition best;
    if (std::isfinite(best_value)) {
        wlc_direction(f, s, best_phi, tol, &best);
        res.best = best;
    }
    res.refined_angle = best_phi;

    // F on M: the trivial laminate F = F.
    const double g1 = std::abs(norm(f * s.v1()) - 1.0);
    const double g2 = std::abs(norm(f * s.v2()) - 1.0);
    if (std::min(g1, g2) <= tol) {
        const double w = std::max(0.0, f.frobenius_sq() - 2.0);
        if (w <= best_value) {
            best_value = w;
            LaminateDecomposition d;
            d.f_plus = f;
            d.f_minus = f;
            d.energy = w;
            d.kind = LaminateKind::CaseOnManifold;
            res.best = d;
        }
    }
    if (std::isfinite(best_value)) {
        res.value = ExtendedEnergy::finite(best_value);
    }
    return res;
}

std::vector<EnvelopeRow> envelope_scan(const SlipSystem& s, double range, int n, const OracleOptions& opt, double tol)
{
    std::vector<std::vector<EnvelopeRow>> rows(n);
    parallel_for(n, [&](int j) {
        const double c = grid_center(range, n, j);
        for (int i = 0; i < n; ++i) {
            const double b = grid_center(range, n, i);
            const Matrix2 f = bc_to_matrix(b, c);
            const RegionLabel label = classify(f, s, tol);
            if (label.on_boundary() || label.tag == Region::OffManifold) {
                continue;
            }
            EnvelopeRow row;
            row.b = b;
            row.c = c;
            row.region = label.tag;
            const HomEnergy e = w_hom(f, s, tol);
            row.oracle = wlc_numeric(f, s, opt, tol).value.as_double();
            if (e.is_known()) {
                row.known = true;
                row.closed = e.value.as_double();
                row.discrepancy = std::abs(row.oracle - row.closed);
            } else {
                row.known = false;
                row.lower = e.lower;
                row.upper = e.upper;
                row.slack_lo = row.oracle - e.lower;
                row.slack_hi = e.upper - row.oracle;
            }
            rows[j].push_back(row);
        }
    });
    std::vector<EnvelopeRow> out;
    for (auto& r : rows) {
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

}  // namespace lamlab
