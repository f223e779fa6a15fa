#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "qpr/operator_core.hpp"

namespace qpr::test {

inline std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec3 unit_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(n(rng), n(rng), n(rng));
    } while (v.norm() < 1e-6);
    return v.normalized();
}

inline Vec3 ball_vector(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::cbrt(u(rng)) * unit_vector(rng);
}

/// Rodrigues rotation of r by angle about unit axis n.
inline Vec3 rodrigues(const Vec3& n, double angle, const Vec3& r) {
    return r * std::cos(angle) + n.cross(r) * std::sin(angle) + n * n.dot(r) * (1 - std::cos(angle));
}

/// Density matrix written out entrywise, independent of bloch_to_density.
inline CMatrix density_oracle(const Vec3& r) {
    CMatrix m(2, 2);
    m << Complex(1 + r.z(), 0) / 2.0, Complex(r.x(), -r.y()) / 2.0, Complex(r.x(), r.y()) / 2.0,
        Complex(1 - r.z(), 0) / 2.0;
    return m;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qpr::test
