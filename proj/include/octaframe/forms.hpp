// Invariant forms of the vierer, binary tetrahedral and binary octahedral
// groups, their model-surface residuals and the sign-flip transformation.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "octaframe/quaternion.hpp"

namespace octaframe {

/// Vierer triple: f2^2 = f0 (f1^2 - 4 f0^2).
struct ViererForms {
    cplx f0, f1, f2;
};

/// Binary tetrahedral triple: g2^2 = g1^3 - 108 g0^4.
struct TetraForms {
    cplx g0, g1, g2;
};

/// Octahedral model-surface coordinate: h2^2 = h1 (h0^3 - 108 h1^2).
/// Homogeneous of degrees (8, 12, 18) in (u, v).
struct SurfacePoint {
    cplx h0, h1, h2;
};

/// f0 = (uv)^2, f1 = u^4 + v^4, f2 = uv(u^4 - v^4).
inline ViererForms vierer_forms(const SU2Coord& c) {
    const cplx uv = c.u * c.v;
    const cplx u2 = c.u * c.u, v2 = c.v * c.v;
    const cplx u4 = u2 * u2, v4 = v2 * v2;
    return {uv * uv, u4 + v4, uv * (u4 - v4)};
}

/// f0, f1 recombined so the tetrahedral action is diagonal:
/// ft0 = f1 + 2 sqrt3 i f0, ft1 = f1 - 2 sqrt3 i f0. Needed by the
/// groupset recovery as well.
inline std::pair<cplx, cplx> tilde_pair(const ViererForms& f) {
    const cplx t = cplx{0.0, 2.0 * std::sqrt(3.0)} * f.f0;
    return {f.f1 + t, f.f1 - t};
}

/// g0 = uv(u^4-v^4), g1 = u^8 + v^8 + 14 (uv)^4,
/// g2 = u^12 + v^12 - 33 (uv)^4 (u^4 + v^4).
inline TetraForms tetra_forms(const SU2Coord& c) {
    const cplx uv = c.u * c.v;
    const cplx u2 = c.u * c.u, v2 = c.v * c.v;
    const cplx u4 = u2 * u2, v4 = v2 * v2;
    const cplx uv4 = (uv * uv) * (uv * uv);
    const cplx u8 = u4 * u4, v8 = v4 * v4;
    return {uv * (u4 - v4),
            u8 + v8 + 14.0 * uv4,
            u8 * u4 + v8 * v4 - 33.0 * uv4 * (u4 + v4)};
}

/// h0 = g1, h1 = g0^2, h2 = g0 g2.
inline SurfacePoint octa_forms(const SU2Coord& c) {
    const TetraForms g = tetra_forms(c);
    return {g.g1, g.g0 * g.g0, g.g0 * g.g2};
}

inline constexpr double kResidualFloor = 1e-30;

/// Residuals are normalized by the dominant homogeneous magnitude so one
/// tolerance serves non-unit quaternions as well.
inline double surface_residual(const ViererForms& f) {
    const double a0 = std::abs(f.f0), a1 = std::abs(f.f1), a2 = std::abs(f.f2);
    const double raw = std::abs(f.f2 * f.f2 - f.f0 * (f.f1 * f.f1 - 4.0 * f.f0 * f.f0));
    const double scale = std::max({a2 * a2, a0 * a1 * a1, 4.0 * a0 * a0 * a0,
                                   kResidualFloor});
    return raw / scale;
}

inline double surface_residual(const TetraForms& g) {
    const double a0 = std::abs(g.g0), a1 = std::abs(g.g1), a2 = std::abs(g.g2);
    const double raw = std::abs(g.g2 * g.g2 - g.g1 * g.g1 * g.g1 +
                                108.0 * g.g0 * g.g0 * g.g0 * g.g0);
    const double scale = std::max({a2 * a2, a1 * a1 * a1, 108.0 * a0 * a0 * a0 * a0,
                                   kResidualFloor});
    return raw / scale;
}

inline double surface_residual(const SurfacePoint& p) {
    const double a0 = std::abs(p.h0), a1 = std::abs(p.h1), a2 = std::abs(p.h2);
    const double raw = std::abs(p.h2 * p.h2 -
                                p.h1 * (p.h0 * p.h0 * p.h0 - 108.0 * p.h1 * p.h1));
    const double scale = std::max({a2 * a2, a1 * a0 * a0 * a0, 108.0 * a1 * a1 * a1,
                                   kResidualFloor});
    return raw / scale;
}

/// (u, v) -> (e^{i pi/4} u, -e^{-i pi/4} v): fixes h0, h1 and flips the sign
/// of h2. Its square is a vierer element, so frames are preserved.
inline SU2Coord sign_flip(const SU2Coord& c) {
    const double s = std::numbers::sqrt2 / 2.0;
    return {cplx{s, s} * c.u, cplx{-s, s} * c.v};
}

/// Values and holomorphic u/v partials of (h0, h1, h2) up to second order;
/// first order feeds the recovery polish and the metric Jacobian, second
/// order the collocation Hessian.
struct FormPartials {
    cplx h[3], hu[3], hv[3], huu[3], huv[3], hvv[3];
};

inline FormPartials form_partials(const cplx& u, const cplx& v) {
    const cplx u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
    const cplx v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
    const cplx u5 = u4 * u, v5 = v4 * v;
    const cplx u6 = u4 * u2, v6 = v4 * v2, u7 = u4 * u3, v7 = v4 * v3;
    const cplx u8 = u4 * u4, v8 = v4 * v4;
    const cplx u10 = u8 * u2, v10 = v8 * v2, u11 = u8 * u3, v11 = v8 * v3;

    const cplx g0 = u5 * v - u * v5;
    const cplx g0u = 5.0 * u4 * v - v5;
    const cplx g0v = u5 - 5.0 * u * v4;
    const cplx g0uu = 20.0 * u3 * v;
    const cplx g0uv = 5.0 * (u4 - v4);
    const cplx g0vv = -20.0 * u * v3;

    const cplx g2 = u8 * u4 + v8 * v4 - 33.0 * (u8 * v4 + u4 * v8);
    const cplx g2u = 12.0 * u11 - 264.0 * u7 * v4 - 132.0 * u3 * v8;
    const cplx g2v = 12.0 * v11 - 132.0 * u8 * v3 - 264.0 * u4 * v7;
    const cplx g2uu = 132.0 * u10 - 1848.0 * u6 * v4 - 396.0 * u2 * v8;
    const cplx g2uv = -1056.0 * (u7 * v3 + u3 * v7);
    const cplx g2vv = 132.0 * v10 - 396.0 * u8 * v2 - 1848.0 * u4 * v6;

    FormPartials p;
    p.h[0] = u8 + v8 + 14.0 * u4 * v4;
    p.hu[0] = 8.0 * u7 + 56.0 * u3 * v4;
    p.hv[0] = 8.0 * v7 + 56.0 * u4 * v3;
    p.huu[0] = 56.0 * u6 + 168.0 * u2 * v4;
    p.huv[0] = 224.0 * u3 * v3;
    p.hvv[0] = 56.0 * v6 + 168.0 * u4 * v2;

    p.h[1] = g0 * g0;
    p.hu[1] = 2.0 * g0 * g0u;
    p.hv[1] = 2.0 * g0 * g0v;
    p.huu[1] = 2.0 * (g0u * g0u + g0 * g0uu);
    p.huv[1] = 2.0 * (g0u * g0v + g0 * g0uv);
    p.hvv[1] = 2.0 * (g0v * g0v + g0 * g0vv);

    p.h[2] = g0 * g2;
    p.hu[2] = g0u * g2 + g0 * g2u;
    p.hv[2] = g0v * g2 + g0 * g2v;
    p.huu[2] = g0uu * g2 + 2.0 * g0u * g2u + g0 * g2uu;
    p.huv[2] = g0uv * g2 + g0u * g2v + g0v * g2u + g0 * g2uv;
    p.hvv[2] = g0vv * g2 + 2.0 * g0v * g2v + g0 * g2vv;
    return p;
}

}  // namespace octaframe
