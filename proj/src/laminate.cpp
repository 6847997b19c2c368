#include "lamlab/laminate.hpp"

#include "lamlab/errors.hpp"
#include "lamlab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace lamlab {

std::string_view to_string(LaminateKind k)
{
    switch (k) {
    case LaminateKind::CaseA: return "CaseA";
    case LaminateKind::CaseAPerp: return "CaseAPerp";
    case LaminateKind::CaseN1: return "CaseN1";
    case LaminateKind::CaseN2: return "CaseN2";
    case LaminateKind::CaseN1capN2: return "CaseN1capN2";
    case LaminateKind::CaseOnManifold: return "CaseOnManifold";
    case LaminateKind::UpperBoundOnly: return "UpperBoundOnly";
    }
    return "?";
}

double manifold_energy(const Matrix2& f) { return std::max(0.0, f.frobenius_sq() - 2.0); }

namespace {

constexpr double kRootMerge = 1e-9;

// Real roots of a2 t^2 + a1 t + a0 with a2 > 0, ascending.
std::vector<double> quadratic_roots(double a2, double a1, double a0)
{
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    const double scale = std::max(a1 * a1, 4.0 * a2 * std::abs(a0));
    if (disc < -1e-12 * scale) {
        return {};
    }
    if (disc <= 1e-12 * scale) {
        return {-a1 / (2.0 * a2)};
    }
    const double q = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
    double r1 = q / a2;
    double r2 = q != 0.0 ? a0 / q : -r1;
    if (r1 > r2) {
        std::swap(r1, r2);
    }
    return {r1, r2};
}

std::vector<double> unit_roots(const RankOneLine& line, const Vector2& v)
{
    const UnitImageRoots r = solve_unit_image_times(line, v);
    if (r.constant()) {
        throw PreconditionError("laminate line keeps |F_t v| = 1 identically");
    }
    return r.roots;
}

LaminateDecomposition on_manifold(const Matrix2& n, const SlipSystem& s)
{
    LaminateDecomposition d;
    d.f_plus = n;
    d.f_minus = n;
    d.mu = 0.5;
    d.a = {0.0, 0.0};
    d.n = s.v1();
    d.energy = manifold_energy(n);
    d.kind = LaminateKind::CaseOnManifold;
    return d;
}

// Laminate between line.point(ta) = F- and line.point(tb) = F+, ta <= 0 <= tb.
LaminateDecomposition from_line(const RankOneLine& line, double ta, double tb, LaminateKind kind)
{
    if (!(ta <= 0.0 && tb >= 0.0)) {
        throw PreconditionError("laminate endpoints do not straddle t = 0 (" + std::to_string(ta) + ", " +
                                std::to_string(tb) + ")");
    }
    LaminateDecomposition d;
    d.kind = kind;
    d.t_minus = ta;
    d.t_plus = tb;
    d.f_minus = line.point(ta);
    d.f_plus = line.point(tb);
    d.mu = tb > ta ? -ta / (tb - ta) : 0.5;
    d.n = normalized(line.normal);
    d.a = (d.f_plus - d.f_minus) * d.n;
    d.tangency = tb - ta <= kRootMerge;
    d.energy = d.mu * manifold_energy(d.f_plus) + (1.0 - d.mu) * manifold_energy(d.f_minus);
    return d;
}

double largest_negative(const std::vector<double>& roots)
{
    double best = -std::numeric_limits<double>::infinity();
    for (double r : roots) {
        if (r < 0.0) {
            best = std::max(best, r);
        }
    }
    return best;
}

double smallest_positive(const std::vector<double>& roots)
{
    double best = std::numeric_limits<double>::infinity();
    for (double r : roots) {
        if (r > 0.0) {
            best = std::min(best, r);
        }
    }
    return best;
}

// Single-slip line: F v_i^perp is preserved, both ends on M_i.
LaminateDecomposition single_slip(const Matrix2& n, const SlipSystem& s, int i, LaminateKind kind)
{
    const Vector2 vi = s.v(i);
    const RankOneLine line = RankOneLine::make(n, perp(vi), vi);
    const std::vector<double> roots = unit_roots(line, vi);
    if (roots.empty()) {
        throw PreconditionError("single-slip line misses M" + std::to_string(i));
    }
    const double ta = std::min(0.0, roots.front());
    const double tb = std::max(0.0, roots.back());
    return from_line(line, ta, tb, kind);
}

// Component of {min |N_t v_i| > 1, phi < 0} containing t = 0 along N(I + t a (x) n),
// with phi(t) = |N_t n|^2 - |N_t a|^2 (negative at 0 by choice of a, n).
LaminateDecomposition orthogonal_two_slip(const Matrix2& nm, const SlipSystem& s, const Vector2& a,
                                          const Vector2& n, LaminateKind kind)
{
    const RankOneLine line = RankOneLine::make(nm, a, n);
    std::vector<double> roots = unit_roots(line, s.v1());
    const std::vector<double> r2 = unit_roots(line, s.v2());
    roots.insert(roots.end(), r2.begin(), r2.end());

    // N_t a = Na since a.n = 0; N_t n = Nn + t |n|^2 Na.
    const Vector2 na = nm * a;
    const Vector2 nn = nm * n;
    const double n2 = norm_sq(n);
    const std::vector<double> rphi =
        quadratic_roots(n2 * n2 * norm_sq(na), 2.0 * n2 * dot(nn, na), norm_sq(nn) - norm_sq(na));
    roots.insert(roots.end(), rphi.begin(), rphi.end());

    const double tm = largest_negative(roots);
    const double tp = smallest_positive(roots);
    if (!std::isfinite(tm) || !std::isfinite(tp)) {
        throw PreconditionError("laminate interval around t = 0 is unbounded");
    }
    return from_line(line, tm, tp, kind);
}

// Inner root of a same-sign pair: the one with the smaller |F_t|^2.
double inner_root(const RankOneLine& line, const std::vector<double>& roots, bool& tie)
{
    if (roots.size() == 1) {
        return roots.front();
    }
    const double e0 = line.point(roots[0]).frobenius_sq();
    const double e1 = line.point(roots[1]).frobenius_sq();
    if (std::abs(e0 - e1) <= 1e-9 * std::max(1.0, line.base.frobenius_sq())) {
        tie = true;
        return std::abs(roots[0]) <= std::abs(roots[1]) ? roots[0] : roots[1];
    }
    return e0 < e1 ? roots[0] : roots[1];
}

// Optimal laminate on A (line a = v3, n = v3^perp) or A^perp (a = v3^perp, n = v3).
LaminateDecomposition general_two_slip(const Matrix2& nm, const SlipSystem& s, const Vector2& a,
                                       const Vector2& n, LaminateKind kind)
{
    const RankOneLine line = RankOneLine::make(nm, a, n);
    const std::vector<double> r1 = unit_roots(line, s.v1());
    const std::vector<double> r2 = unit_roots(line, s.v2());
    if (r1.empty() || r2.empty()) {
        throw PreconditionError("laminate line misses a slip manifold");
    }
    bool tie = false;
    const double sa = inner_root(line, r1, tie);
    const double sb = inner_root(line, r2, tie);
    LaminateDecomposition d = from_line(line, std::min(sa, sb), std::max(sa, sb), kind);
    d.tie = tie;
    d.tangency = d.tangency || r1.size() == 1 || r2.size() == 1;
    return d;
}

Matrix2 rotation_taking(const Vector2& from, const Vector2& to)
{
    const double c = dot(from, to);
    const double sn = dot(perp(from), to);
    return {c, -sn, sn, c};
}

// Mixed M_i / M_j laminate on the line N(I + t a (x) n), (a, n) = (v3, v3^perp) or
// (v3^perp, v3). The M_j crossings are the images of the M_i crossings under
// xi(F) = R F R, R the reflection about v3, once N is rotated so that N a || a.
std::optional<LaminateDecomposition> mixed_slip(const Matrix2& nm, const SlipSystem& s, int i,
                                                const Vector2& a, const Vector2& n)
{
    const RankOneLine line = RankOneLine::make(nm, a, n);
    const std::vector<double> ri = unit_roots(line, s.v(i));
    if (ri.size() != 2 || !(ri[0] < 0.0 && ri[1] > 0.0)) {
        return std::nullopt;
    }
    const Vector2 image = nm * a;
    const Matrix2 u = rotation_taking(normalized(image), a);
    const Matrix2 nt = u * nm;
    const Matrix2 refl = 2.0 * outer(s.v3(), s.v3()) - Matrix2::identity();
    const Vector2 nta = nt * a;
    auto reflected_time = [&](double t) {
        const Matrix2 xi = refl * (u * line.point(t)) * refl;
        return dot((xi - nt) * n, nta) / norm_sq(nta);
    };
    const double tm = ri[0];
    const double tp = ri[1];
    const double tpm = reflected_time(tm);
    const double tpp = reflected_time(tp);
    if (tpm > 0.0 && tpp > 0.0) {
        return from_line(line, tm, std::max(tpm, tpp), LaminateKind::UpperBoundOnly);
    }
    if (tpm < 0.0 && tpp < 0.0) {
        return from_line(line, std::min(tpm, tpp), tp, LaminateKind::UpperBoundOnly);
    }
    return std::nullopt;
}

void check_det(const Matrix2& n, double tol)
{
    if (std::abs(n.det() - 1.0) > tol) {
        throw OffManifold("laminate target has det " + std::to_string(n.det()) + " != 1");
    }
}

}  // namespace

LaminateDecomposition decompose_orthogonal(const Matrix2& n, const SlipSystem& s, double tol)
{
    if (!s.is_orthogonal()) {
        throw PreconditionError("decompose_orthogonal requires orthogonal slips");
    }
    check_det(n, tol);
    const RegionLabel label = classify(n, s, tol);
    switch (label.tag) {
    case Region::SO2:
    case Region::M1:
    case Region::M2:
        return on_manifold(n, s);
    case Region::N1only:
    case Region::N1capN2:
        return single_slip(n, s, 1, LaminateKind::CaseN1);
    case Region::N2only:
        return single_slip(n, s, 2, LaminateKind::CaseN2);
    case Region::A:
        return orthogonal_two_slip(n, s, s.v1() + s.v2(), s.v1() - s.v2(), LaminateKind::CaseA);
    case Region::APerp:
        return orthogonal_two_slip(n, s, s.v1() - s.v2(), s.v1() + s.v2(), LaminateKind::CaseAPerp);
    case Region::OffManifold:
        break;
    }
    throw OffManifold("laminate target off the det-1 manifold");
}

LaminateDecomposition decompose_general(const Matrix2& n, const SlipSystem& s, double tol)
{
    if (s.theta() <= kPi / 4.0) {
        throw PreconditionError("decompose_general requires theta in (pi/4, pi/2)");
    }
    check_det(n, tol);
    const Vector2 v3 = s.v3();
    const Vector2 v3p = s.v3_perp();
    const RegionLabel label = classify(n, s, tol);
    switch (label.tag) {
    case Region::SO2:
    case Region::M1:
    case Region::M2:
        return on_manifold(n, s);
    case Region::A:
        return general_two_slip(n, s, v3, v3p, LaminateKind::CaseA);
    case Region::APerp:
        return general_two_slip(n, s, v3p, v3, LaminateKind::CaseAPerp);
    case Region::N1capN2: {
        const RankOneLine line = RankOneLine::make(n, v3, v3p);
        const double t1m = largest_negative(unit_roots(line, s.v1()));
        const double t2p = smallest_positive(unit_roots(line, s.v2()));
        if (!std::isfinite(t1m) || !std::isfinite(t2p)) {
            throw PreconditionError("N1capN2 line misses a slip manifold");
        }
        return from_line(line, t1m, t2p, LaminateKind::CaseN1capN2);
    }
    case Region::N1only:
    case Region::N2only: {
        const int i = label.tag == Region::N1only ? 1 : 2;
        LaminateDecomposition best = single_slip(n, s, i, LaminateKind::UpperBoundOnly);
        for (const auto& [a, nn] : {std::pair{v3, v3p}, std::pair{v3p, v3}}) {
            const auto cand = mixed_slip(n, s, i, a, nn);
            if (cand && cand->energy < best.energy) {
                best = *cand;
            }
        }
        return best;
    }
    case Region::OffManifold:
        break;
    }
    throw OffManifold("laminate target off the det-1 manifold");
}

LaminateDecomposition decompose(const Matrix2& n, const SlipSystem& s, double tol)
{
    return s.is_orthogonal() ? decompose_orthogonal(n, s, tol) : decompose_general(n, s, tol);
}

double DecompositionResiduals::max() const
{
    return std::max({convex_combination, rank_one, manifold, energy_equality, preserved_vector});
}

DecompositionResiduals verify_decomposition(const LaminateDecomposition& d, const Matrix2& n, const SlipSystem& s)
{
    DecompositionResiduals r;
    const Matrix2 combo = d.mu * d.f_plus + (1.0 - d.mu) * d.f_minus;
    r.convex_combination = frobenius_distance(combo, n) / std::max(1.0, n.frobenius());

    const Matrix2 jump = d.f_plus - d.f_minus;
    const double jump_sq = jump.frobenius_sq();
    r.rank_one = jump_sq > 0.0 ? std::abs(jump.det()) / jump_sq : 0.0;

    for (const Matrix2& f : {d.f_plus, d.f_minus}) {
        const double off = std::min(std::abs(norm(f * s.v1()) - 1.0), std::abs(norm(f * s.v2()) - 1.0));
        r.manifold = std::max({r.manifold, std::abs(f.det() - 1.0), off});
    }

    const double wp = manifold_energy(d.f_plus);
    const double wm = manifold_energy(d.f_minus);
    if (d.kind == LaminateKind::UpperBoundOnly) {
        r.energy_equality = std::abs(d.mu * wp + (1.0 - d.mu) * wm - d.energy);
    } else {
        r.energy_equality = std::max(std::abs(wp - d.energy), std::abs(wm - d.energy));
    }

    const Vector2 p = perp(d.n);
    r.preserved_vector = std::max(norm(n * p - d.f_plus * p), norm(n * p - d.f_minus * p));
    return r;
}

}  // namespace lamlab
