#pragma once

#include "lamlab/algebra2d.hpp"
#include "lamlab/energy.hpp"

#include <cmath>
#include <random>

namespace lamlab::testing {

inline std::mt19937_64 make_rng(std::uint64_t salt = 0) { return std::mt19937_64(20240611ULL + salt); }

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Q * bc_to_matrix(b, c) with uniform (b, c) in [-r, r]^2 and a random rotation Q.
inline Matrix2 random_det_one(std::mt19937_64& rng, double r = 2.5)
{
    return Matrix2::rotation(uniform(rng, -kPi, kPi)) * bc_to_matrix(uniform(rng, -r, r), uniform(rng, -r, r));
}

inline Matrix2 random_matrix(std::mt19937_64& rng, double r = 3.0)
{
    return {uniform(rng, -r, r), uniform(rng, -r, r), uniform(rng, -r, r), uniform(rng, -r, r)};
}

/// Rotation times a simple shear along slip i: R (I + gamma v_i (x) v_i^perp).
inline Matrix2 on_slip(const SlipSystem& s, int i, double gamma, double angle)
{
    const Vector2 v = s.v(i);
    return Matrix2::rotation(angle) * (Matrix2::identity() + gamma * outer(v, perp(v)));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace lamlab::testing
