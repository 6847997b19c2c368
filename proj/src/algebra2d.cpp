#include "lamlab/algebra2d.hpp"

#include "lamlab/errors.hpp"

#include <cmath>

namespace lamlab {

IdentitySides identity_f1(const Matrix2& f, const Vector2& a, const Vector2& b)
{
    const Vector2 fa = f * a;
    const Vector2 fb = f * b;
    const double cross = dot(perp(a), b);
    const double inner = dot(fa, fb);
    return {norm_sq(fa) * norm_sq(fb), inner * inner + f.det() * cross * cross};
}

double identity_f2(const Matrix2& f, const Vector2& a, const Vector2& b)
{
    const double cross = dot(perp(a), b);
    if (std::abs(cross) < 1e-12) {
        throw DegenerateFrame("identity_f2: |a^perp . b| < 1e-12");
    }
    // Substituting b = (a.b) a + w turns the numerator into |Fa|^2 |w|^2 + |Fw|^2, which
    // avoids the cancellation of the literal form when a and b are nearly parallel.
    const Vector2 w = b - dot(a, b) * a;
    const Vector2 fa = f * a;
    return (norm_sq(fa) * norm_sq(w) + norm_sq(f * w)) / (cross * cross);
}

RankOneLine RankOneLine::make(const Matrix2& base, const Vector2& left, const Vector2& normal)
{
    RankOneLine line{base, left, normal, false};
    const double scale = norm(left) * norm(normal);
    line.det_preserving = std::abs(dot(left, normal)) <= 1e-12 * std::max(scale, 1e-300);
    return line;
}

namespace {

// |point(t) v|^2 - 1 evaluated from the matrix, and its t-derivative.
struct Residual {
    double value;
    double slope;
};

Residual unit_residual(const Vector2& fv, const Vector2& fa, double nv, double t)
{
    const Vector2 w = fv + (t * nv) * fa;
    return {norm_sq(w) - 1.0, 2.0 * nv * dot(fa, w)};
}

double polish(const Vector2& fv, const Vector2& fa, double nv, double t)
{
    const Residual r = unit_residual(fv, fa, nv, t);
    if (r.slope == 0.0) {
        return t;
    }
    const double next = t - r.value / r.slope;
    return std::abs(unit_residual(fv, fa, nv, next).value) <= std::abs(r.value) ? next : t;
}

}  // namespace

UnitImageRoots solve_unit_image_times(const RankOneLine& line, const Vector2& v)
{
    const Vector2 fv = line.base * v;
    const Vector2 fa = line.base * line.left;
    const double nv = dot(line.normal, v);

    const double alpha = nv * nv * norm_sq(fa);
    const double beta = 2.0 * nv * dot(fa, fv);
    const double c0 = norm_sq(fv) - 1.0;

    UnitImageRoots out;
    const double scale = scale_of(line.base);
    if (std::abs(nv) <= 1e-12 * norm(line.normal) * norm(v) || alpha == 0.0) {
        if (std::abs(c0) <= 1e-12 * scale) {
            out.kind = UnitImageRoots::Kind::DegenerateConstant;
        }
        return out;
    }

    const double disc = beta * beta - 4.0 * alpha * c0;
    const double disc_scale = std::max(beta * beta, 4.0 * alpha * std::abs(c0));
    if (std::abs(disc) <= 1e-12 * disc_scale) {
        out.roots.push_back(-beta / (2.0 * alpha));
        return out;
    }
    if (disc < 0.0) {
        return out;
    }

    const double sq = std::sqrt(disc);
    const double q = -0.5 * (beta + std::copysign(sq, beta));
    double r1 = q / alpha;
    double r2 = (q != 0.0) ? c0 / q : -r1;
    r1 = polish(fv, fa, nv, r1);
    r2 = polish(fv, fa, nv, r2);
    if (r1 > r2) {
        std::swap(r1, r2);
    }
    out.roots = {r1, r2};
    return out;
}

Matrix2 bc_to_matrix(double b, double c)
{
    const double a = std::sqrt(1.0 + b * b + c * c);
    // a - b loses digits for large positive b; det = (a+b)(a-b) - c^2 = 1 gives it exactly.
    const double apb = a + std::abs(b);
    const double amb = (1.0 + c * c) / apb;
    return b >= 0.0 ? Matrix2{apb, c, c, amb} : Matrix2{amb, c, c, apb};
}

}  // namespace lamlab
