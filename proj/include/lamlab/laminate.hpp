#pragma once

#include "lamlab/algebra2d.hpp"
#include "lamlab/energy.hpp"

#include <string_view>

namespace lamlab {

enum class LaminateKind {
    CaseA,           ///< both slip norms > 1, Fv1.Fv2 > 0
    CaseAPerp,       ///< both slip norms > 1, Fv1.Fv2 < 0
    CaseN1,          ///< |Nv1| <= 1, single-slip line along v1
    CaseN2,          ///< |Nv2| <= 1, single-slip line along v2
    CaseN1capN2,
    CaseOnManifold,  ///< N itself has finite W; F+ = F- = N
    UpperBoundOnly   ///< best of the known constructions, no optimality claim
};

std::string_view to_string(LaminateKind k);

/// N = mu F+ + (1 - mu) F-, F+ - F- = a (x) n with |n| = 1.
struct LaminateDecomposition {
    Matrix2 f_plus;
    Matrix2 f_minus;
    double mu = 0.5;
    Vector2 a;
    Vector2 n{1.0, 0.0};
    double energy = 0.0;
    LaminateKind kind = LaminateKind::CaseOnManifold;
    /// Line parameters of F- and F+ (t- <= 0 <= t+).
    double t_minus = 0.0;
    double t_plus = 0.0;
    /// Two roots of a unit-image quadratic coincided (|dt| <= 1e-9).
    bool tangency = false;
    /// |F_s'| = |F_s''| within 1e-9 when selecting the inner pair.
    bool tie = false;
};

/// |F|^2 - 2 clamped at 0, the density on the slip manifolds.
double manifold_energy(const Matrix2& f);

/// Optimal first-order laminate for orthogonal slips, one of four line families
/// picked by the slip norms and the sign of Nv1.Nv2. Throws OffManifold.
LaminateDecomposition decompose_orthogonal(const Matrix2& n, const SlipSystem& s, double tol = kDefaultTol);

/// Laminates along the v3 / v3^perp lines for theta in (pi/4, pi/2). On N1 \ N2 and
/// N2 \ N1 returns the cheapest known construction as UpperBoundOnly.
/// Throws OffManifold, PreconditionError.
LaminateDecomposition decompose_general(const Matrix2& n, const SlipSystem& s, double tol = kDefaultTol);

/// decompose_orthogonal or decompose_general depending on s.
LaminateDecomposition decompose(const Matrix2& n, const SlipSystem& s, double tol = kDefaultTol);

struct DecompositionResiduals {
    double convex_combination = 0.0;  ///< |mu F+ + (1-mu) F- - N| / max(1, |N|)
    double rank_one = 0.0;            ///< |det(F+ - F-)| / |F+ - F-|^2, 0 if F+ = F-
    double manifold = 0.0;            ///< max over F+/- of |det - 1| and min_i ||F v_i| - 1|
    double energy_equality = 0.0;     ///< |W(F+/-) - energy|, or of the mu-average for UpperBoundOnly
    double preserved_vector = 0.0;    ///< max |N p - F+/- p| with p = n^perp
    double max() const;
};

DecompositionResiduals verify_decomposition(const LaminateDecomposition& d, const Matrix2& n, const SlipSystem& s);

}  // namespace lamlab
