#include "lamlab/energy.hpp"

#include "lamlab/errors.hpp"
#include "lamlab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lamlab {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

std::string fmt_double(double x) { return std::to_string(x); }

}  // namespace

// ---------------------------------------------------------------------------
// SlipSystem

SlipSystem SlipSystem::from_vectors(Vector2 v1, Vector2 v2, double lambda)
{
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw InvalidSlipSystem("lambda must lie in (0, 1), got " + fmt_double(lambda));
    }
    const double n1 = norm(v1);
    const double n2 = norm(v2);
    if (!(n1 > 0.0) || !(n2 > 0.0) || !std::isfinite(n1) || !std::isfinite(n2)) {
        throw InvalidSlipSystem("slip directions must be finite and nonzero");
    }
    // Inputs within 1e-6 of unit length are renormalized; anything further is a user error.
    if (std::abs(n1 - 1.0) > 1e-6 || std::abs(n2 - 1.0) > 1e-6) {
        throw InvalidSlipSystem("slip directions must be unit vectors (|v1| = " + fmt_double(n1) +
                                ", |v2| = " + fmt_double(n2) + ")");
    }
    v1 = v1 / n1;
    v2 = v2 / n2;
    const double cross = dot(perp(v1), v2);
    if (!(cross > 0.0)) {
        throw InvalidSlipSystem("(v1, v2) must be right-handed: v1^perp . v2 > 0");
    }
    const double angle = std::atan2(cross, dot(v1, v2));  // in (0, pi)
    const double theta = 0.5 * angle;
    if (theta < kPi / 4.0 - 1e-12) {
        throw InvalidSlipSystem("angle between v1 and v2 must be at least pi/2 (theta >= pi/4)");
    }
    const Vector2 sum = v1 + v2;
    const double sum_norm = norm(sum);
    if (sum_norm < 1e-12) {
        throw InvalidSlipSystem("v1 and v2 are antiparallel (theta = pi/2)");
    }
    const Vector2 v3 = -(sum / sum_norm);
    return SlipSystem(v1, v2, v3, std::max(theta, kPi / 4.0), lambda);
}

SlipSystem SlipSystem::from_theta(double theta, double lambda)
{
    if (!(theta >= kPi / 4.0 - 1e-12 && theta < kPi / 2.0)) {
        throw InvalidSlipSystem("theta must lie in [pi/4, pi/2), got " + fmt_double(theta));
    }
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    SlipSystem s = from_vectors({st, ct}, {-st, ct}, lambda);
    // Exact bisector for the convention.
    s.v3_ = {0.0, -1.0};
    s.theta_ = std::max(theta, kPi / 4.0);
    return s;
}

SlipSystem SlipSystem::orthogonal(Vector2 v1, double lambda)
{
    const double n = norm(v1);
    if (!(n > 0.0)) {
        throw InvalidSlipSystem("slip direction must be nonzero");
    }
    v1 = v1 / n;
    return from_vectors(v1, perp(v1), lambda);
}

bool SlipSystem::is_orthogonal() const { return std::abs(theta_ - kPi / 4.0) <= 1e-12; }

// ---------------------------------------------------------------------------
// ExtendedEnergy

ExtendedEnergy ExtendedEnergy::finite(double v)
{
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("ExtendedEnergy::finite requires a finite value >= 0");
    }
    ExtendedEnergy e;
    e.finite_ = true;
    e.value_ = v;
    return e;
}

double ExtendedEnergy::value() const
{
    if (!finite_) {
        throw std::logic_error("ExtendedEnergy::value() on Infinite");
    }
    return value_;
}

// ---------------------------------------------------------------------------
// Densities

ExtendedEnergy w_condensed(const Matrix2& f, const SlipSystem& s, double tol)
{
    if (std::abs(f.det() - 1.0) > tol) {
        return ExtendedEnergy::infinite();
    }
    const double g1 = std::abs(norm(f * s.v1()) - 1.0);
    const double g2 = std::abs(norm(f * s.v2()) - 1.0);
    if (std::min(g1, g2) > tol) {
        return ExtendedEnergy::infinite();
    }
    return ExtendedEnergy::finite(pos(f.frobenius_sq() - 2.0));
}

double chi(double z)
{
    const double inner = std::sqrt(pos(2.0 * z * z - 1.0)) - 1.0;
    const double p = pos(inner);
    return p * p;
}

double h_family(double z, double theta, HKind which)
{
    if (!(theta >= kPi / 4.0 - 1e-12 && theta < kPi / 2.0)) {
        throw DomainError("h_family: theta must lie in [pi/4, pi/2)");
    }
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double z2 = z * z;

    auto root_above = [&](double floor_value, const char* name) {
        if (z < floor_value - 1e-12) {
            throw DomainError(std::string("h_family: ") + name + " evaluated below its domain floor");
        }
        return std::sqrt(pos(z2 - floor_value * floor_value));
    };

    switch (which) {
    case HKind::H: {
        const double p = pos(std::sqrt(pos(z2 / (st * st) - 1.0)) - ct / st);
        return p * p;
    }
    case HKind::HPerp: {
        const double p = pos(std::sqrt(pos(z2 / (ct * ct) - 1.0)) - st / ct);
        return p * p;
    }
    case HKind::HStar:
        return (1.0 + z2 - 2.0 * ct * root_above(st, "h_star")) / (st * st) - 2.0;
    case HKind::HPlus:
        return (1.0 + z2 + 2.0 * ct * root_above(st, "h_plus")) / (st * st) - 2.0;
    case HKind::HPerpStar:
        return (1.0 + z2 - 2.0 * st * root_above(ct, "h_perp_star")) / (ct * ct) - 2.0;
    case HKind::HPerpPlus:
        return (1.0 + z2 + 2.0 * st * root_above(ct, "h_perp_plus")) / (ct * ct) - 2.0;
    }
    throw std::logic_error("h_family: unknown kind");
}

double general_lower_bound(const Matrix2& f, const SlipSystem& s)
{
    return std::max(h_family(norm(f * s.v3()), s.theta(), HKind::H),
                    h_family(norm(f * s.v3_perp()), s.theta(), HKind::HPerp));
}

double f_majorant(const Matrix2& f, const SlipSystem& s)
{
    if (s.is_orthogonal()) {
        const double a = pos(norm_sq(f * s.v1()) - 1.0);
        const double b = pos(norm_sq(f * s.v2()) - 1.0);
        const double z = std::max(norm(f * s.v3()), norm(f * s.v3_perp()));
        return std::max({a, b, chi(z)});
    }
    return general_lower_bound(f, s);
}

ExtendedEnergy w_hom_orthogonal(const Matrix2& f, const SlipSystem& s, double tol)
{
    if (!s.is_orthogonal()) {
        throw PreconditionError("w_hom_orthogonal requires orthogonal slips (theta = pi/4)");
    }
    if (std::abs(f.det() - 1.0) > tol) {
        return ExtendedEnergy::infinite();
    }
    const double n1 = norm(f * s.v1());
    const double n2 = norm(f * s.v2());
    if (n1 <= 1.0) {
        return ExtendedEnergy::finite(pos(norm_sq(f * perp(s.v1())) - 1.0));
    }
    if (n2 <= 1.0) {
        return ExtendedEnergy::finite(pos(norm_sq(f * perp(s.v2())) - 1.0));
    }
    return ExtendedEnergy::finite(chi(std::max(norm(f * s.v3()), norm(f * s.v3_perp()))));
}

double general_upper_bound(const Matrix2& f, const SlipSystem& s)
{
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 2; ++i) {
        if (norm(f * s.v(i)) <= 1.0) {
            best = std::min(best, norm_sq(f * perp(s.v(i))) - 1.0);
        }
    }
    const double st = std::sin(s.theta());
    const double ct = std::cos(s.theta());
    const double z3 = norm(f * s.v3());
    const double z3p = norm(f * s.v3_perp());
    if (z3 >= st) {
        best = std::min(best, h_family(z3, s.theta(), HKind::HPlus));
    }
    if (z3p >= ct) {
        best = std::min(best, h_family(z3p, s.theta(), HKind::HPerpPlus));
    }
    return best;
}

namespace {

// Closed-form branch of a Known region; false for the bounded regions.
bool known_branch(Region r, const Matrix2& f, const SlipSystem& s, double& out)
{
    switch (r) {
    case Region::SO2:
        out = 0.0;
        return true;
    case Region::M1:
        out = pos(norm_sq(f * perp(s.v1())) - 1.0);
        return true;
    case Region::M2:
        out = pos(norm_sq(f * perp(s.v2())) - 1.0);
        return true;
    case Region::A:
    case Region::N1capN2:
        out = h_family(norm(f * s.v3()), s.theta(), HKind::H);
        return true;
    case Region::APerp:
        out = h_family(norm(f * s.v3_perp()), s.theta(), HKind::HPerp);
        return true;
    default:
        return false;
    }
}

}  // namespace

HomEnergy w_hom_general(const Matrix2& f, const SlipSystem& s, double tol)
{
    if (s.theta() <= kPi / 4.0) {
        throw PreconditionError("w_hom_general requires theta in (pi/4, pi/2)");
    }
    const RegionLabel label = classify(f, s, tol);
    if (label.tag == Region::OffManifold) {
        return HomEnergy::known(ExtendedEnergy::infinite());
    }
    double value = 0.0;
    if (!known_branch(label.tag, f, s, value)) {
        return HomEnergy::bounded(general_lower_bound(f, s), general_upper_bound(f, s));
    }
    const double band = 10.0 * tol * std::max(1.0, f.frobenius_sq());
    for (Region adjacent : label.boundary) {
        double other = 0.0;
        if (known_branch(adjacent, f, s, other) && std::abs(other - value) > band) {
            throw BranchDisagreement("w_hom_general: branches " + std::string(to_string(label.tag)) +
                                     " and " + std::string(to_string(adjacent)) +
                                     " disagree by " + std::to_string(std::abs(other - value)));
        }
    }
    return HomEnergy::known(ExtendedEnergy::finite(value));
}

double w_hom_scalar(double gamma, const SlipSystem& s)
{
    if (!s.is_orthogonal()) {
        throw PreconditionError("w_hom_scalar requires orthogonal slips");
    }
    const double a = s.v1().x;
    const double b = s.v1().y;
    const double lam = s.lambda();
    const double g = gamma / lam;
    const double ab = a * b;

    // v1 along a coordinate axis: N stays on one slip manifold and the density is g^2.
    if (ab == 0.0) {
        return g * g;
    }
    auto outer_branch = [&](double lin, double quad) {
        const double p = pos(std::sqrt(pos(1.0 + 2.0 * lin * g + quad * g * g)) - 1.0);
        return p * p;
    };
    if (ab > 0.0) {
        if (gamma >= 0.0 && gamma <= 2.0 * lam * b / a) {
            return 2.0 * ab * g + b * b * g * g;
        }
        if (gamma <= 0.0 && gamma >= -2.0 * lam * a / b) {
            return -2.0 * ab * g + a * a * g * g;
        }
        return outer_branch(a * a - b * b, 1.0 + 2.0 * ab);
    }
    if (gamma <= 0.0 && gamma >= 2.0 * lam * b / a) {
        return 2.0 * ab * g + b * b * g * g;
    }
    if (gamma >= 0.0 && gamma <= -2.0 * lam * a / b) {
        return -2.0 * ab * g + a * a * g * g;
    }
    return outer_branch(b * b - a * a, 1.0 - 2.0 * ab);
}

namespace {

Matrix2 rotation_taking(const Vector2& from, const Vector2& to)
{
    const double c = dot(from, to);
    const double s = dot(perp(from), to);
    return {c, -s, s, c};
}

}  // namespace

double lemma_fad_slack(const Matrix2& a, const Matrix2& d, double c, const SlipSystem& s)
{
    if (!s.is_orthogonal()) {
        throw PreconditionError("lemma_fad_check requires orthogonal slips");
    }
    const double struct_tol = 1e-10;
    const double a_scale = std::max(1.0, a.frobenius());
    const double d_scale = std::max(1.0, d.frobenius());
    if (std::abs(a.det() - 1.0) > struct_tol * a_scale * a_scale) {
        throw PreconditionError("lemma_fad_check: det A != 1");
    }

    // A = R(I + g2 p (x) q) with (p, q) = (v2, v1) or (v1, v2); then A p = R p.
    bool matched = false;
    Matrix2 rot;
    for (int variant = 0; variant < 2 && !matched; ++variant) {
        const Vector2 p = variant == 0 ? s.v2() : s.v1();
        const Vector2 q = variant == 0 ? s.v1() : s.v2();
        const Vector2 ap = a * p;
        if (std::abs(norm(ap) - 1.0) > struct_tol * a_scale) {
            continue;
        }
        const Matrix2 r = rotation_taking(p, ap / norm(ap));
        const double g2 = dot(r.transpose() * (a * q) - q, p);
        const Matrix2 rebuilt = r * (Matrix2::identity() + g2 * outer(p, q));
        if (frobenius_distance(rebuilt, a) <= struct_tol * a_scale) {
            matched = true;
            rot = r;
        }
    }
    if (!matched) {
        throw PreconditionError("lemma_fad_check: A is not of the form R(I + g v2 (x) v1) or R(I + g v1 (x) v2)");
    }
    const Vector2 re1 = rot * Vector2{1.0, 0.0};
    const double g1 = dot(d * Vector2{0.0, 1.0}, re1);
    if (frobenius_distance(d, g1 * outer(re1, Vector2{0.0, 1.0})) > struct_tol * d_scale) {
        throw PreconditionError("lemma_fad_check: D is not of the form R g e1 (x) e2 with A's rotation");
    }

    const Matrix2 f = a + d;
    const double na = a.frobenius();
    const double nd = d.frobenius();
    const double rhs = f.frobenius_sq() - 2.0 +
                       c * (std::sqrt(nd) + nd) * (std::sqrt(na) + na + std::sqrt(nd) + nd);
    return rhs - f_majorant(f, s);
}

bool lemma_fad_check(const Matrix2& a, const Matrix2& d, double c, const SlipSystem& s)
{
    const Matrix2 f = a + d;
    // Round-off allowance: at D = 0 the two sides agree exactly in exact arithmetic.
    return lemma_fad_slack(a, d, c, s) >= -1e-12 * std::max(1.0, f.frobenius_sq());
}

}  // namespace lamlab
