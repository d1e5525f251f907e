// Quaternion algebra, R^4 screws, inner-automorphism rotations and the
// complexification maps onto SU(2) coordinates.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace octaframe {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Real quaternion q0 + q1 i + q2 j + q3 k.
struct Quaternion {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w, double x, double y, double z)
        : q0(w), q1(x), q2(y), q3(z) {}

    static constexpr Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    Vec3 imag() const { return {q1, q2, q3}; }
};

constexpr Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return {p.q0 + q.q0, p.q1 + q.q1, p.q2 + q.q2, p.q3 + q.q3};
}

constexpr Quaternion operator-(const Quaternion& p, const Quaternion& q) {
    return {p.q0 - q.q0, p.q1 - q.q1, p.q2 - q.q2, p.q3 - q.q3};
}

constexpr Quaternion operator-(const Quaternion& q) {
    return {-q.q0, -q.q1, -q.q2, -q.q3};
}

constexpr Quaternion operator*(double s, const Quaternion& q) {
    return {s * q.q0, s * q.q1, s * q.q2, s * q.q3};
}

constexpr Quaternion operator*(const Quaternion& q, double s) { return s * q; }

/// Non-commutative quaternion product.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.q0 * q.q0 - (p.q1 * q.q1 + p.q2 * q.q2 + p.q3 * q.q3),
            p.q0 * q.q1 + q.q0 * p.q1 + (p.q2 * q.q3 - q.q2 * p.q3),
            p.q0 * q.q2 + q.q0 * p.q2 + (p.q3 * q.q1 - q.q3 * p.q1),
            p.q0 * q.q3 + q.q0 * p.q3 + (p.q1 * q.q2 - q.q1 * p.q2)};
}

constexpr Quaternion conjugate(const Quaternion& q) {
    return {q.q0, -q.q1, -q.q2, -q.q3};
}

constexpr double norm2(const Quaternion& q) {
    return q.q0 * q.q0 + q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3;
}

inline double norm(const Quaternion& q) { return std::sqrt(norm2(q)); }

/// R^4 euclidean inner product of the component quadruplets.
constexpr double dot(const Quaternion& p, const Quaternion& q) {
    return p.q0 * q.q0 + p.q1 * q.q1 + p.q2 * q.q2 + p.q3 * q.q3;
}

inline Quaternion inverse(const Quaternion& q) {
    const double n2 = norm2(q);
    if (n2 == 0.0)
        throw std::invalid_argument("quaternion inverse: zero quaternion");
    return (1.0 / n2) * conjugate(q);
}

inline bool is_unit(const Quaternion& q, double tol = 1e-9) {
    return std::abs(norm2(q) - 1.0) <= tol;
}

/// Rotation of angle `angle` (SO(3) convention) about a unit axis; the stored
/// quaternion carries the half angle.
inline Quaternion from_axis_angle(const Vec3& axis, double angle) {
    if (std::abs(norm(axis) - 1.0) > 1e-9)
        throw std::invalid_argument("from_axis_angle: axis must be unit");
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return {c, s * axis[0], s * axis[1], s * axis[2]};
}

/// Euler angles about k, j, k, in that order. Stored unreduced.
struct EulerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// + branch of the quaternion quadruplet equivalent to the k-j-k rotation
/// matrix; q = qz(alpha) * qy(beta) * qz(gamma).
inline Quaternion from_euler_kjk(const EulerAngles& e) {
    const double cb = std::cos(e.beta / 2.0);
    const double sb = std::sin(e.beta / 2.0);
    const double sum = (e.alpha + e.gamma) / 2.0;
    const double dif = (e.gamma - e.alpha) / 2.0;
    return {cb * std::cos(sum), sb * std::sin(dif), sb * std::cos(dif),
            cb * std::sin(sum)};
}

/// Inner automorphism p -> r p r^-1 restricted to the imaginary prime: the
/// SO(3) rotation carried by r (and by -r).
inline Vec3 rotate_vector(const Quaternion& r, const Vec3& x) {
    const double n2 = norm2(r);
    if (n2 == 0.0)
        throw std::invalid_argument("rotate_vector: zero quaternion");
    const Quaternion p{0.0, x[0], x[1], x[2]};
    const Quaternion y = r * p * ((1.0 / n2) * conjugate(r));
    return {y.q1, y.q2, y.q3};
}

/// Column-major 3x3 rotation matrix of a unit quaternion; columns are the
/// rotated cartesian axes.
inline std::array<Vec3, 3> rotation_columns(const Quaternion& r) {
    return {rotate_vector(r, {1.0, 0.0, 0.0}),
            rotate_vector(r, {0.0, 1.0, 0.0}),
            rotate_vector(r, {0.0, 0.0, 1.0})};
}

enum class ScrewKind {
    Right,      ///< p -> r p
    LeftPrime,  ///< p -> p r^-1 (the corrected, automorphism-compatible form)
};

/// Norm- and angle-preserving compound rotation of R^4.
inline Quaternion screw_apply(ScrewKind kind, const Quaternion& r,
                              const Quaternion& p) {
    if (!is_unit(r))
        throw std::invalid_argument("screw_apply: screw quaternion must be unit");
    return kind == ScrewKind::Right ? r * p : p * conjugate(r);
}

/// Complex pair (u, v) carrying a quaternion; |u|^2 + |v|^2 = |q|^2.
struct SU2Coord {
    cplx u{0.0, 0.0};
    cplx v{0.0, 0.0};
};

inline double norm2(const SU2Coord& c) { return std::norm(c.u) + std::norm(c.v); }

/// Product-covariant complexification: u = q0 + q3 i, v = -(q2 + q1 i).
/// Under this map the quaternionic-matrix product [of p] applied to the
/// coordinates [of q] yields the coordinates of p*q.
inline SU2Coord to_su2_q2c(const Quaternion& q) {
    return {cplx{q.q0, q.q3}, cplx{-q.q2, -q.q1}};
}

/// Matrix-vector form of a right screw in SU(2) coordinates: the quaternionic
/// matrix of p applied to the coordinate pair of q. Equals to_su2_q2c(p*q).
inline SU2Coord su2_apply(const SU2Coord& p, const SU2Coord& q) {
    return {p.u * q.u - std::conj(p.v) * q.v,
            p.v * q.u + std::conj(p.u) * q.v};
}

enum class FrameMap {
    Standard,  ///< u = q0 - q3 i, v = q2 + q1 i (q2c of the conjugate)
    IPairing,  ///< u = q0 - q1 i, v = q2 + q3 i (pairs (q0,q1) and (q2,q3))
};

/// Frame coordinates of a quaternion: the complexification of q* whose
/// octahedral forms are invariant under right multiplication q -> q*o.
/// FrameMap::IPairing selects the alternate pairing convention, which is NOT
/// consistent with axis_su2 and is provided for comparison only.
inline SU2Coord to_su2_frame(const Quaternion& q,
                             FrameMap map = FrameMap::Standard) {
    if (map == FrameMap::IPairing)
        return {cplx{q.q0, -q.q1}, cplx{q.q2, q.q3}};
    return {cplx{q.q0, -q.q3}, cplx{q.q2, q.q1}};
}

/// Inverse of to_su2_frame (Standard map): q = (Re u, Im v, Re v, -Im u).
inline Quaternion from_su2(const SU2Coord& c) {
    return {c.u.real(), c.v.imag(), c.v.real(), -c.u.imag()};
}

}  // namespace octaframe
