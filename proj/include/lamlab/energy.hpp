#pragma once

#include "lamlab/algebra2d.hpp"

#include <compare>
#include <limits>
#include <string>

namespace lamlab {

inline constexpr double kPi = 3.14159265358979323846;

/// Default membership band for the measure-zero sets M and N.
inline constexpr double kDefaultTol = 1e-9;

/// Two unit slip directions (v1, v2), right-handed, at mutual angle 2*theta
/// with theta in [pi/4, pi/2), plus the soft volume fraction lambda.
class SlipSystem {
public:
    /// Validates and normalizes; throws InvalidSlipSystem naming the violated invariant.
    static SlipSystem from_vectors(Vector2 v1, Vector2 v2, double lambda = 0.5);

    /// Convention v3 = (0, -1): v1 = (sin t, cos t), v2 = (-sin t, cos t).
    static SlipSystem from_theta(double theta, double lambda = 0.5);

    /// v2 = perp(v1).
    static SlipSystem orthogonal(Vector2 v1, double lambda = 0.5);

    const Vector2& v1() const { return v1_; }
    const Vector2& v2() const { return v2_; }
    const Vector2& v3() const { return v3_; }
    Vector2 v3_perp() const { return perp(v3_); }
    const Vector2& v(int i) const { return i == 1 ? v1_ : v2_; }
    double theta() const { return theta_; }
    double lambda() const { return lambda_; }

    /// theta == pi/4 within 1e-12.
    bool is_orthogonal() const;

private:
    SlipSystem(Vector2 v1, Vector2 v2, Vector2 v3, double theta, double lambda)
        : v1_(v1), v2_(v2), v3_(v3), theta_(theta), lambda_(lambda)
    {
    }

    Vector2 v1_;
    Vector2 v2_;
    Vector2 v3_;
    double theta_;
    double lambda_;
};

/// A value in [0, inf]. Infinite marks matrices outside the finite-energy set.
class ExtendedEnergy {
public:
    static ExtendedEnergy finite(double v);
    static ExtendedEnergy infinite() { return ExtendedEnergy(); }

    bool is_finite() const { return finite_; }
    bool is_infinite() const { return !finite_; }
    /// Throws std::logic_error on Infinite.
    double value() const;
    /// value() or +inf.
    double as_double() const { return finite_ ? value_ : std::numeric_limits<double>::infinity(); }

    std::partial_ordering operator<=>(const ExtendedEnergy& o) const
    {
        return as_double() <=> o.as_double();
    }
    bool operator==(const ExtendedEnergy& o) const { return as_double() == o.as_double(); }

private:
    ExtendedEnergy() = default;

    bool finite_ = false;
    double value_ = 0.0;
};

/// W(F) = |F|^2 - 2 on M1 u M2 (det F = 1 and |Fv_i| = 1 within tol), Infinite otherwise.
ExtendedEnergy w_condensed(const Matrix2& f, const SlipSystem& s, double tol = kDefaultTol);

/// chi(z) = ((2z^2 - 1)_+^{1/2} - 1)_+^2.
double chi(double z);

enum class HKind { H, HStar, HPerp, HPerpStar, HPlus, HPerpPlus };

/// The h-family envelopes in theta. Starred and plus variants throw DomainError
/// below their floor (sin(theta) resp. cos(theta), with 1e-12 slack).
double h_family(double z, double theta, HKind which);

/// Convex minorant of W that coincides with the relaxed density on det-1 matrices.
/// Orthogonal slips: max{(|Fv1|^2-1)_+, (|Fv2|^2-1)_+, chi(max{|Fv3|, |Fv3^perp|})};
/// otherwise max{h(|Fv3|), h^perp(|Fv3^perp|)}.
double f_majorant(const Matrix2& f, const SlipSystem& s);

/// Relaxed density for orthogonal slips. Throws PreconditionError if s is not orthogonal.
ExtendedEnergy w_hom_orthogonal(const Matrix2& f, const SlipSystem& s, double tol = kDefaultTol);

/// Closed-form value, or bounds where the relaxed density is not known.
struct HomEnergy {
    enum class Kind { Known, Bounded };
    Kind kind = Kind::Known;
    ExtendedEnergy value = ExtendedEnergy::infinite();  ///< Known only.
    double lower = 0.0;                                 ///< Bounded only.
    double upper = 0.0;                                 ///< Bounded only.

    static HomEnergy known(ExtendedEnergy v) { return {Kind::Known, v, 0.0, 0.0}; }
    static HomEnergy bounded(double lo, double hi)
    {
        return {Kind::Bounded, ExtendedEnergy::infinite(), lo, hi};
    }
    bool is_known() const { return kind == Kind::Known; }
};

/// Lemma-3.8 lower bound max{h(|Fv3|), h^perp(|Fv3^perp|)}, finite everywhere.
double general_lower_bound(const Matrix2& f, const SlipSystem& s);

/// Minimum of the applicable first-order-laminate upper bounds on N1 \ N2 and N2 \ N1.
double general_upper_bound(const Matrix2& f, const SlipSystem& s);

/// Relaxed density for general angle theta in (pi/4, pi/2). Points in a boundary band
/// are cross-checked against the adjacent closed-form branches (10*tol*max(1,|F|^2));
/// disagreement throws BranchDisagreement.
HomEnergy w_hom_general(const Matrix2& f, const SlipSystem& s, double tol = kDefaultTol);

/// W_hom(R(I + (gamma/lambda) e1 (x) e2)) in closed piecewise form, orthogonal slips.
double w_hom_scalar(double gamma, const SlipSystem& s);

/// f(A + D) <= |A + D|^2 - 2 + c (sqrt|D| + |D|)(sqrt|A| + |A| + sqrt|D| + |D|)
/// for A = R(I + g2 v2 (x) v1) or R(I + g2 v1 (x) v2) and D = R g1 e1 (x) e2.
/// Throws PreconditionError if A, D lack that structure (1e-10).
bool lemma_fad_check(const Matrix2& a, const Matrix2& d, double c, const SlipSystem& s);

/// Right-hand side slack of lemma_fad_check (rhs - lhs), for reporting.
double lemma_fad_slack(const Matrix2& a, const Matrix2& d, double c, const SlipSystem& s);

}  // namespace lamlab
