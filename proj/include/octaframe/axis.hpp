// Closed-form surface coordinates of frames sharing a direction with a unit
// vector n: the w/a simplification, the h0-h1 linear relation and the
// ellipse loci of the normalized components.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "octaframe/forms.hpp"
#include "octaframe/quaternion.hpp"

namespace octaframe {

namespace detail {
inline void require_unit_direction(const Vec3& n) {
    if (std::abs(norm(n) - 1.0) > 1e-9)
        throw std::invalid_argument("axis direction must be a unit vector");
}
}  // namespace detail

/// Chart data for directions with n_z > -1. The products a^4 w^4 and
/// a^4 w^-4 are kept fused so n_z -> 1 stays regular (no 0 * inf).
struct AxisContext {
    Vec3 n;
    cplx a;        ///< (n_x - i n_y) / 2
    double theta;  ///< arg(n_x - i n_y), two-argument form
    double m2;     ///< (1 - n_z) / (1 + n_z), squared modulus of w at alpha = 0
    double p;      ///< m2^2, the ellipse parameter
};

inline AxisContext make_axis_context(const Vec3& n) {
    detail::require_unit_direction(n);
    if (n[2] <= -1.0 + 1e-9)
        throw std::invalid_argument("axis chart: antipodal singularity (n_z = -1)");
    AxisContext ctx;
    ctx.n = n;
    ctx.a = cplx{n[0], -n[1]} / 2.0;
    ctx.theta = std::atan2(-n[1], n[0]);
    ctx.m2 = (1.0 - n[2]) / (1.0 + n[2]);
    ctx.p = ctx.m2 * ctx.m2;
    return ctx;
}

/// Unit quaternion rotating k onto n; errors at the antipodal singularity.
inline Quaternion align_z_to_n(const Vec3& n) {
    detail::require_unit_direction(n);
    if (n[2] <= -1.0 + 1e-9)
        throw std::invalid_argument("align_z_to_n: antipodal singularity");
    const double root = std::sqrt(1.0 + n[2]);
    const double inv = 1.0 / root;
    const double s = 1.0 / std::numbers::sqrt2;
    return {s * root, s * inv * -n[1], s * inv * n[0], 0.0};
}

/// Frame coordinates of the rotation "alpha about n after aligning k to n":
/// u = sqrt((1+n_z)/2) e^{-i alpha/2}, v = (n_x - i n_y) e^{i alpha/2} /
/// sqrt(2 (1+n_z)). Equals to_su2_frame(align_z_to_n(n) * q_z(alpha)).
inline SU2Coord axis_su2(const Vec3& n, double alpha) {
    detail::require_unit_direction(n);
    if (n[2] <= -1.0 + 1e-9)
        throw std::invalid_argument("axis_su2: antipodal singularity");
    const cplx half{std::cos(alpha / 2.0), std::sin(alpha / 2.0)};
    const double root = std::sqrt((1.0 + n[2]) / 2.0);
    return {root * std::conj(half),
            cplx{n[0], -n[1]} / std::sqrt(2.0 * (1.0 + n[2])) * half};
}

/// Surface point of the n-axis family evaluated through the fused products
///   A4 = a^4 w^4  = ((n_x - i n_y)^2 / (2(n_z+1)))^4 e^{4 i alpha}
///   B4 = a^4 w^-4 = ((n_z + 1) / 2)^4 e^{-4 i alpha}
/// so that h0 = A4 + B4 + 14 a^4, h1 = a^2 h0 - 16 a^6 and
/// h2 = -a (A4 - B4)(A4 + B4 - 34 a^4).
inline SurfacePoint axis_forms(const Vec3& n, double alpha) {
    detail::require_unit_direction(n);
    if (n[2] <= -1.0 + 1e-9)
        throw std::invalid_argument("axis_forms: antipodal singularity");
    const cplx nm{n[0], -n[1]};
    const cplx e4{std::cos(4.0 * alpha), std::sin(4.0 * alpha)};
    const cplx fwd = nm * nm / (2.0 * (n[2] + 1.0));
    const cplx bwd = (n[2] + 1.0) / 2.0;
    const cplx fwd2 = fwd * fwd, bwd2 = bwd * bwd;
    const cplx A4 = fwd2 * fwd2 * e4;
    const cplx B4 = bwd2 * bwd2 * std::conj(e4);
    const cplx a = nm / 2.0;
    const cplx a2 = a * a;
    const cplx a4 = a2 * a2;
    const cplx h0 = A4 + B4 + 14.0 * a4;
    const cplx h1 = a2 * (A4 + B4 - 2.0 * a4);
    const cplx h2 = -a * (A4 - B4) * (A4 + B4 - 34.0 * a4);
    return {h0, h1, h2};
}

/// Parameters of the loci H0 = h0/a^4 and H1 = h1/a^6: ellipses
/// p e^{it} + (1/p) e^{-it} + {14, -2} with t = 4 (alpha + theta) and
/// semi-axes p + 1/p and |p - 1/p|.
struct EllipseParams {
    double p;
    double theta;
    cplx center0{14.0, 0.0};
    cplx center1{-2.0, 0.0};
    cplx scale0;  ///< a^4, scaling H0 back to h0
    cplx scale1;  ///< a^6
};

inline EllipseParams ellipse_params(const Vec3& n) {
    detail::require_unit_direction(n);
    if (std::abs(n[2]) >= 1.0 - 1e-9)
        throw std::invalid_argument(
            "ellipse_params: degenerate chart, h0/a^4 undefined");
    const AxisContext ctx = make_axis_context(n);
    EllipseParams e;
    e.p = ctx.p;
    e.theta = ctx.theta;
    const cplx a2 = ctx.a * ctx.a;
    e.scale0 = a2 * a2;
    e.scale1 = e.scale0 * a2;
    return e;
}

/// Normalized pair (H0, H1) at a given rotation angle.
inline std::pair<cplx, cplx> axis_H(const Vec3& n, double alpha) {
    const EllipseParams e = ellipse_params(n);
    const SurfacePoint h = axis_forms(n, alpha);
    return {h.h0 / e.scale0, h.h1 / e.scale1};
}

}  // namespace octaframe
