#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace lamlab {

struct Vector2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vector2() = default;
    constexpr Vector2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vector2 operator+(const Vector2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vector2 operator-(const Vector2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vector2 operator-() const { return {-x, -y}; }
    constexpr Vector2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vector2 operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Vector2&) const = default;
};

constexpr Vector2 operator*(double s, const Vector2& v) { return v * s; }

constexpr double dot(const Vector2& a, const Vector2& b) { return a.x * b.x + a.y * b.y; }
constexpr double norm_sq(const Vector2& v) { return dot(v, v); }
inline double norm(const Vector2& v) { return std::hypot(v.x, v.y); }

/// Counterclockwise rotation by pi/2: (x, y) -> (-y, x).
constexpr Vector2 perp(const Vector2& v) { return {-v.y, v.x}; }

inline Vector2 normalized(const Vector2& v) { return v / norm(v); }

/// Row-major 2x2 matrix [[m11, m12], [m21, m22]].
struct Matrix2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m21 = 0.0;
    double m22 = 0.0;

    constexpr Matrix2() = default;
    constexpr Matrix2(double a, double b, double c, double d) : m11(a), m12(b), m21(c), m22(d) {}

    static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Matrix2 diag(double a, double d) { return {a, 0.0, 0.0, d}; }
    static Matrix2 rotation(double angle)
    {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        return {c, -s, s, c};
    }

    constexpr double det() const { return m11 * m22 - m12 * m21; }
    constexpr double frobenius_sq() const
    {
        return m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22;
    }
    double frobenius() const { return std::sqrt(frobenius_sq()); }
    constexpr Matrix2 transpose() const { return {m11, m21, m12, m22}; }
    constexpr Vector2 col(int j) const { return j == 0 ? Vector2{m11, m21} : Vector2{m12, m22}; }

    constexpr Matrix2 operator+(const Matrix2& o) const
    {
        return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
    }
    constexpr Matrix2 operator-(const Matrix2& o) const
    {
        return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
    }
    constexpr Matrix2 operator*(double s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }
    constexpr Matrix2 operator*(const Matrix2& o) const
    {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }
    constexpr Vector2 operator*(const Vector2& v) const
    {
        return {m11 * v.x + m12 * v.y, m21 * v.x + m22 * v.y};
    }
    constexpr bool operator==(const Matrix2&) const = default;
};

constexpr Matrix2 operator*(double s, const Matrix2& m) { return m * s; }

/// a (x) b, i.e. the matrix with entries a_i b_j.
constexpr Matrix2 outer(const Vector2& a, const Vector2& b)
{
    return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

inline double frobenius_distance(const Matrix2& a, const Matrix2& b) { return (a - b).frobenius(); }

/// Returns Mv.
constexpr Vector2 apply(const Matrix2& m, const Vector2& v) { return m * v; }

struct IdentitySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// |Fa|^2 |Fb|^2 against |Fa.Fb|^2 + det(F) (a^perp . b)^2. The two sides agree
/// exactly when det F = 1; both are returned so callers can test the identity.
IdentitySides identity_f1(const Matrix2& f, const Vector2& a, const Vector2& b);

/// (|Fa|^2 + |Fb|^2 - 2 (a.b)(Fa.Fb)) / (a^perp . b)^2, equal to |F|^2 for unit a, b.
/// Throws DegenerateFrame when |a^perp . b| < 1e-12.
double identity_f2(const Matrix2& f, const Vector2& a, const Vector2& b);

/// The affine family t -> base (I + t left (x) normal).
struct RankOneLine {
    Matrix2 base;
    Vector2 left;
    Vector2 normal;
    bool det_preserving = false;

    /// Sets det_preserving when left . normal vanishes (relative 1e-12).
    static RankOneLine make(const Matrix2& base, const Vector2& left, const Vector2& normal);

    Matrix2 point(double t) const { return base * (Matrix2::identity() + t * outer(left, normal)); }
    /// d/dt point(t), independent of t.
    Matrix2 velocity() const { return base * outer(left, normal); }
};

/// Solutions of |point(t) v| = 1 along a line.
struct UnitImageRoots {
    enum class Kind {
        Roots,              ///< `roots` holds 0, 1 or 2 ascending values.
        DegenerateConstant  ///< |point(t) v| = 1 for every t.
    };
    Kind kind = Kind::Roots;
    std::vector<double> roots;

    bool constant() const { return kind == Kind::DegenerateConstant; }
};

/// Roots of alpha t^2 + beta t + (|Fv|^2 - 1) with alpha = (n.v)^2 |Fa|^2 and
/// beta = 2 (n.v)(Fa.Fv), via the cancellation-free quadratic formula and one
/// Newton polish on the direct residual. Double roots are reported once.
UnitImageRoots solve_unit_image_times(const RankOneLine& line, const Vector2& v);

/// Symmetric representative [[a+b, c], [c, a-b]], a = sqrt(1+b^2+c^2), of the
/// SO(2)-orbit of det-1 matrices with stretch coordinates (b, c).
Matrix2 bc_to_matrix(double b, double c);

/// Tolerance scale max(1, |F|) used by the algebra routines.
inline double scale_of(const Matrix2& f) { return std::max(1.0, f.frobenius()); }

}  // namespace lamlab
