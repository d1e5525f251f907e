// Inversion of the octahedral forms: enumerate the groupset of (u, v) pairs
// behind a model-surface coordinate, and read the quaternion norm straight
// off the coordinate.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "octaframe/forms.hpp"
#include "octaframe/quaternion.hpp"

namespace octaframe {

namespace detail {

inline cplx csqrt(const cplx& z) { return std::abs(z) == 0.0 ? cplx{} : std::sqrt(z); }

inline cplx croot(const cplx& z, double inv_order) {
    return std::abs(z) == 0.0 ? cplx{} : std::pow(z, inv_order);
}

inline cplx ccbrt(const cplx& z) { return croot(z, 1.0 / 3.0); }
inline cplx cqrt4(const cplx& z) { return croot(z, 0.25); }

/// Guarded Gauss-Newton on (h0,h1,h2)(u,v) = target. The branch enumeration
/// is exact except through the quadratic's double roots, which only resolve
/// (u,v) to ~sqrt(eps); two polish steps restore full precision there.
inline void polish_candidate(SU2Coord& c, const SurfacePoint& target) {
    auto residual2 = [&](const FormPartials& p) {
        return std::norm(p.h[0] - target.h0) + std::norm(p.h[1] - target.h1) +
               std::norm(p.h[2] - target.h2);
    };
    FormPartials p = form_partials(c.u, c.v);
    double r2 = residual2(p);
    for (int iter = 0; iter < 3 && r2 > 0.0; ++iter) {
        // normal equations of the 3x2 holomorphic least-squares step
        cplx a00{}, a01{}, a11{}, b0{}, b1{};
        const cplx f[3] = {p.h[0] - target.h0, p.h[1] - target.h1,
                           p.h[2] - target.h2};
        for (int i = 0; i < 3; ++i) {
            a00 += std::conj(p.hu[i]) * p.hu[i];
            a01 += std::conj(p.hu[i]) * p.hv[i];
            a11 += std::conj(p.hv[i]) * p.hv[i];
            b0 += std::conj(p.hu[i]) * f[i];
            b1 += std::conj(p.hv[i]) * f[i];
        }
        const cplx det = a00 * a11 - a01 * std::conj(a01);
        if (std::abs(det) < 1e-30) return;
        const SU2Coord next{c.u - (a11 * b0 - a01 * b1) / det,
                            c.v - (a00 * b1 - std::conj(a01) * b0) / det};
        const FormPartials pn = form_partials(next.u, next.v);
        const double r2n = residual2(pn);
        if (!(r2n < r2)) return;
        c = next;
        p = pn;
        r2 = r2n;
    }
}

}  // namespace detail

/// The three roots of 16 x^3 - h0 x + h1 = 0 (Cardano with a polishing
/// Newton step; the cubic is already depressed).
inline std::array<cplx, 3> cubic_roots_16(const cplx& h0, const cplx& h1) {
    const cplx p = -h0 / 16.0;
    const cplx q = h1 / 16.0;
    std::array<cplx, 3> roots;
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        roots.fill(cplx{});
        return roots;
    }
    const cplx s = detail::csqrt(q * q / 4.0 + p * p * p / 27.0);
    // Pick the branch with the larger magnitude to dodge cancellation.
    cplx acube = -q / 2.0 + s;
    if (std::abs(-q / 2.0 - s) > std::abs(acube)) acube = -q / 2.0 - s;
    const cplx a = detail::ccbrt(acube);
    const cplx b = std::abs(a) == 0.0 ? cplx{} : -p / (3.0 * a);
    const cplx omega{-0.5, std::sqrt(3.0) / 2.0};
    roots[0] = a + b;
    roots[1] = omega * a + std::conj(omega) * b;
    roots[2] = std::conj(omega) * a + omega * b;
    for (cplx& x : roots) {
        // One Newton step on 16x^3 - h0 x + h1.
        const cplx d = 48.0 * x * x - h0;
        if (std::abs(d) > 0.0) x -= (16.0 * x * x * x - h0 * x + h1) / d;
    }
    return roots;
}

/// |u|^2 + |v|^2 recovered from one cubic root x* = (uv)^2 and the quadratic
/// y^2 - (h0 - 14 x*^2) y + x*^4 = 0 whose roots are u^8, v^8.
inline double norm_from_root(const cplx& h0, const cplx& xstar) {
    const cplx b = h0 - 14.0 * xstar * xstar;
    const cplx x4 = xstar * xstar * xstar * xstar;
    const cplx delta = detail::csqrt(b * b - 4.0 * x4);
    // Larger root first; the smaller one from the product to avoid
    // cancellation when delta is close to b.
    cplx y_big = (b + delta) / 2.0;
    if (std::abs(b - delta) > std::abs(b + delta)) y_big = (b - delta) / 2.0;
    const cplx y_small = std::abs(y_big) == 0.0 ? cplx{} : x4 / y_big;
    return std::pow(std::abs(y_big), 0.25) + std::pow(std::abs(y_small), 0.25);
}

/// Quaternion norm squared |u|^2 + |v|^2 of any groupset member of p;
/// independent of the cubic/quadratic root choices.
inline double norm_from_surface(const SurfacePoint& p) {
    return norm_from_root(p.h0, cubic_roots_16(p.h0, p.h1)[0]);
}

/// True iff p sits on the model surface and corresponds to SU(2) members.
inline bool is_unit_surface_point(const SurfacePoint& p, double tol = 1e-9) {
    return std::abs(norm_from_surface(p) - 1.0) <= tol &&
           surface_residual(p) <= tol;
}

/// Groupset of SU(2)/C^2 coordinates recovered from one surface point.
struct RecoverySet {
    std::vector<SU2Coord> candidates;  ///< deduplicated, form-matched
    SurfacePoint source;
    int raw_count = 0;      ///< branch enumeration size before filtering
    int matched = 0;        ///< raw candidates matching (h0,h1,h2)
    int flipped = 0;        ///< raw candidates matching (h0,h1,-h2), remapped
    bool degenerate_zero = false;

    bool contains(const SU2Coord& c, double tol = 1e-9) const {
        for (const SU2Coord& d : candidates)
            if (std::abs(d.u - c.u) <= tol && std::abs(d.v - c.v) <= tol)
                return true;
        return false;
    }
};

struct RecoverOptions {
    double surface_tol = 1e-8;  ///< admissible normalized residual of the input
    double filter_tol = 1e-8;   ///< form-match tolerance, relative to scale
    double dedup_tol = 1e-9;
};

/// Rewinds h -> g -> (ft0, ft1) -> (u, v) over the branch indices
/// k0 in {0,1} (sign of sqrt(h1)), k1 in {0,1,2} (cube root), then either the
/// quadratic branch k2 in {0,1}, k3 in {0..3}, k4 in {0,1} with
/// u = (-1)^k4 sqrt(x*)/v, or the uv = 0 branch with a fourth root of
/// (ft0+ft1)/2. Wrong-sign candidates (they reproduce (h0,h1,-h2)) are mapped
/// back through sign_flip; the result always deduplicates to the 48-element
/// groupset.
inline RecoverySet recover_groupset(const SurfacePoint& p,
                                    const RecoverOptions& opt = {}) {
    RecoverySet out;
    out.source = p;
    if (std::abs(p.h0) == 0.0 && std::abs(p.h1) == 0.0 && std::abs(p.h2) == 0.0) {
        out.degenerate_zero = true;
        out.candidates.push_back(SU2Coord{});
        return out;
    }
    if (surface_residual(p) > opt.surface_tol)
        throw std::invalid_argument("recover_groupset: not on model surface");

    const double s2 = norm_from_surface(p);   // |u|^2 + |v|^2, shared by all
    const double s = std::sqrt(s2);
    const double s4 = s2 * s2;
    const auto pow_scale = [&](int deg) { return std::pow(s, deg); };
    const double h1_zero = 1e-12 * pow_scale(12);

    const cplx sqrt_h1 = detail::csqrt(p.h1);
    const bool h1_is_zero = std::abs(p.h1) <= h1_zero;
    const cplx sqrt3i{0.0, std::sqrt(3.0)};
    const cplx omega{-0.5, std::sqrt(3.0) / 2.0};

    std::vector<SU2Coord> raw;
    raw.reserve(96);
    for (int k0 = 0; k0 < 2; ++k0) {
        const double sgn = k0 == 0 ? 1.0 : -1.0;
        const cplx g0 = sgn * sqrt_h1;
        const cplx g2 = h1_is_zero
                            ? sgn * detail::csqrt(p.h0 * p.h0 * p.h0)
                            : sgn * (p.h2 / sqrt_h1);
        const cplx ft0_base = detail::ccbrt(g2 + 6.0 * sqrt3i * g0 * g0);
        for (int k1 = 0; k1 < 3; ++k1) {
            cplx rot{1.0, 0.0};
            for (int t = 0; t < k1; ++t) rot *= omega;
            const cplx ft0 = rot * ft0_base;
            const cplx ft1 = std::abs(ft0) > 1e-14 * s4
                                 ? p.h0 / ft0
                                 : rot * detail::ccbrt(g2 - 6.0 * sqrt3i * g0 * g0);
            if (std::abs(ft0 - ft1) <= 1e-10 * s4) {
                // uv = 0: u or v is a fourth root of (ft0+ft1)/2.
                const cplx r = detail::cqrt4((ft0 + ft1) / 2.0);
                cplx ik{1.0, 0.0};
                for (int k3 = 0; k3 < 4; ++k3) {
                    raw.push_back({ik * r, cplx{}});
                    raw.push_back({cplx{}, ik * r});
                    ik *= cplx{0.0, 1.0};
                }
                continue;
            }
            const cplx xstar = (ft0 - ft1) / (4.0 * sqrt3i);
            const cplx sqrt_x = detail::csqrt(xstar);
            const cplx disc = std::sqrt(3.0) / 6.0 *
                              detail::csqrt(ft0 * ft0 + ft0 * ft1 + ft1 * ft1);
            const cplx mid = (ft0 + ft1) / 4.0;
            std::array<cplx, 2> v4{mid + disc, mid - disc};
            // Replace the cancellation-prone root via the product
            // v4[0]*v4[1] = -(ft0-ft1)^2/48.
            const cplx prod = -(ft0 - ft1) * (ft0 - ft1) / 48.0;
            if (std::abs(v4[0]) > std::abs(v4[1]))
                v4[1] = prod / v4[0];
            else if (std::abs(v4[1]) > 0.0)
                v4[0] = prod / v4[1];
            for (int k2 = 0; k2 < 2; ++k2) {
                const cplx v_base = detail::cqrt4(v4[k2]);
                if (std::abs(v_base) == 0.0) continue;
                cplx ik{1.0, 0.0};
                for (int k3 = 0; k3 < 4; ++k3) {
                    const cplx v = ik * v_base;
                    const cplx u = sqrt_x / v;
                    raw.push_back({u, v});
                    raw.push_back({-u, v});
                    ik *= cplx{0.0, 1.0};
                }
            }
        }
    }
    out.raw_count = static_cast<int>(raw.size());

    // Filter: keep matches of (h0,h1,h2); map (h0,h1,-h2) matches through the
    // sign flip; drop the (numerically impossible) rest.
    const double tol0 = opt.filter_tol * std::max(pow_scale(8), 1e-30) * 8.0;
    const double tol1 = opt.filter_tol * std::max(pow_scale(12), 1e-30) * 8.0;
    const double tol2 = opt.filter_tol * std::max(pow_scale(18), 1e-30) * 8.0;
    std::vector<SU2Coord> kept;
    kept.reserve(raw.size());
    for (SU2Coord c : raw) {
        SurfacePoint f = octa_forms(c);
        // polish against the sign branch this candidate actually sits on
        const bool wrong_sign = std::abs(f.h2 + p.h2) < std::abs(f.h2 - p.h2);
        const SurfacePoint target{p.h0, p.h1, wrong_sign ? -p.h2 : p.h2};
        detail::polish_candidate(c, target);
        f = octa_forms(c);
        if (std::abs(f.h0 - p.h0) > tol0 || std::abs(f.h1 - p.h1) > tol1)
            continue;
        if (std::abs(f.h2 - p.h2) <= tol2) {
            kept.push_back(c);
            ++out.matched;
        } else if (std::abs(f.h2 + p.h2) <= tol2) {
            kept.push_back(sign_flip(c));
            ++out.flipped;
        }
    }

    const double dtol = opt.dedup_tol * std::max(1.0, s);
    for (const SU2Coord& c : kept) {
        bool dup = false;
        for (const SU2Coord& d : out.candidates)
            if (std::abs(d.u - c.u) <= dtol && std::abs(d.v - c.v) <= dtol) {
                dup = true;
                break;
            }
        if (!dup) out.candidates.push_back(c);
    }
    return out;
}

}  // namespace octaframe
