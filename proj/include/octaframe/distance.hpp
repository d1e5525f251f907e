// Candidate frame distances (euclidean C^3 on surface coordinates, shortest
// R^4 over the groupset, and a symmetry-polynomial oracle) plus the two
// experiments showing the C^3 distance is inconsistent.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "octaframe/forms.hpp"
#include "octaframe/groups.hpp"
#include "octaframe/quaternion.hpp"
#include "octaframe/random.hpp"

namespace octaframe {

/// sqrt(sum |dh_i|^2) between two surface coordinates.
inline double c3_distance(const SurfacePoint& a, const SurfacePoint& b) {
    return std::sqrt(std::norm(a.h0 - b.h0) + std::norm(a.h1 - b.h1) +
                     std::norm(a.h2 - b.h2));
}

/// Shortest R^4 euclidean distance from qa to the 48 quaternions qb*o of the
/// frame of qb. Symmetric, zero iff the frames are equal; -1 is in the group,
/// so both quaternion signs are covered by the minimum.
inline double r4_frame_distance(const Quaternion& qa, const Quaternion& qb) {
    if (!is_unit(qa) || !is_unit(qb))
        throw std::invalid_argument("r4_frame_distance: inputs must be unit");
    const Groupset& oct = binary_octahedral();
    double best = std::numeric_limits<double>::infinity();
    for (const Quaternion& o : oct.elements) {
        const Quaternion d = qb * o - qa;
        best = std::min(best, norm2(d));
    }
    return std::sqrt(best);
}

namespace detail {

/// Fixed symmetric design on S^2: the once-subdivided icosahedron's 42
/// vertices, 120 edge midpoints and 80 face centroids, normalized (242 pts).
inline const std::vector<Vec3>& oracle_points() {
    static const std::vector<Vec3> pts = [] {
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        std::vector<Vec3> verts = {
            {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
            {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
            {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
        std::vector<std::array<int, 3>> faces = {
            {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
            {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
            {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
            {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
        auto normalize = [](Vec3 v) {
            const double n = norm(v);
            return Vec3{v[0] / n, v[1] / n, v[2] / n};
        };
        auto midpoint = [&](const Vec3& a, const Vec3& b) {
            return normalize({a[0] + b[0], a[1] + b[1], a[2] + b[2]});
        };
        for (Vec3& v : verts) v = normalize(v);
        // One 4-way subdivision: 42 vertices, 80 faces, 120 edges.
        std::vector<std::array<int, 3>> fine;
        std::vector<std::pair<std::pair<int, int>, int>> edge_cache;
        auto mid_index = [&](int a, int b) {
            const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            for (const auto& [k, idx] : edge_cache)
                if (k == key) return idx;
            verts.push_back(midpoint(verts[a], verts[b]));
            const int idx = static_cast<int>(verts.size()) - 1;
            edge_cache.push_back({key, idx});
            return idx;
        };
        for (const auto& f : faces) {
            const int ab = mid_index(f[0], f[1]);
            const int bc = mid_index(f[1], f[2]);
            const int ca = mid_index(f[2], f[0]);
            fine.push_back({f[0], ab, ca});
            fine.push_back({f[1], bc, ab});
            fine.push_back({f[2], ca, bc});
            fine.push_back({ab, bc, ca});
        }
        std::vector<Vec3> pts = verts;
        std::vector<std::pair<int, int>> seen;
        for (const auto& f : fine) {
            const Vec3 &a = verts[f[0]], &b = verts[f[1]], &c = verts[f[2]];
            pts.push_back(normalize(
                {a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]}));
            for (int e = 0; e < 3; ++e) {
                const int x = f[e], y = f[(e + 1) % 3];
                const std::pair<int, int> key{std::min(x, y), std::max(x, y)};
                if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                    seen.push_back(key);
                    pts.push_back(midpoint(verts[x], verts[y]));
                }
            }
        }
        return pts;
    }();
    return pts;
}

}  // namespace detail

/// L^2 mismatch of x^4 + y^4 + z^4 between the two frames over a fixed
/// 242-point design; zero iff the frames are equal. Oracle-grade: it shares
/// no code path with the invariant forms.
inline double poly_frame_distance(const Quaternion& qa, const Quaternion& qb) {
    if (!is_unit(qa) || !is_unit(qb))
        throw std::invalid_argument("poly_frame_distance: inputs must be unit");
    const auto& pts = detail::oracle_points();
    const auto ca = rotation_columns(conjugate(qa));
    const auto cb = rotation_columns(conjugate(qb));
    auto value = [](const std::array<Vec3, 3>& cols, const Vec3& x) {
        double f = 0.0;
        for (int r = 0; r < 3; ++r) {
            const double c = cols[0][r] * x[0] + cols[1][r] * x[1] + cols[2][r] * x[2];
            const double c2 = c * c;
            f += c2 * c2;
        }
        return f;
    };
    double acc = 0.0;
    for (const Vec3& x : pts) {
        const double d = value(ca, x) - value(cb, x);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(pts.size()));
}

struct DistanceRecord {
    double alpha = 0.0;  ///< sweep angle, or the sample index in random runs
    double d_c3 = 0.0;
    double d_r4 = 0.0;
};

enum class SweepAxis { I, J, K };

/// Frames rotated by alpha in [0, pi/2] about a cartesian axis, measured
/// against the cartesian frame in both metrics.
inline std::vector<DistanceRecord> axis_sweep(SweepAxis axis, int samples) {
    if (samples < 2) throw std::invalid_argument("axis_sweep: samples >= 2");
    Vec3 v{0.0, 0.0, 0.0};
    v[static_cast<int>(axis)] = 1.0;
    const SurfacePoint cartesian{cplx{1.0, 0.0}, cplx{}, cplx{}};
    std::vector<DistanceRecord> records;
    records.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        const double alpha =
            std::numbers::pi / 2.0 * s / static_cast<double>(samples - 1);
        const Quaternion q = from_axis_angle(v, alpha);
        records.push_back({alpha,
                           c3_distance(octa_forms(to_su2_frame(q)), cartesian),
                           r4_frame_distance(q, Quaternion::identity())});
    }
    return records;
}

/// Distances of `count` uniformly random frames to the cartesian frame.
inline std::vector<DistanceRecord> random_study(int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("random_study: count >= 1");
    Rng rng(seed);
    const SurfacePoint cartesian{cplx{1.0, 0.0}, cplx{}, cplx{}};
    std::vector<DistanceRecord> records;
    records.reserve(count);
    for (int s = 0; s < count; ++s) {
        const Quaternion q = rng.unit_quaternion();
        records.push_back({static_cast<double>(s),
                           c3_distance(octa_forms(to_su2_frame(q)), cartesian),
                           r4_frame_distance(q, Quaternion::identity())});
    }
    return records;
}

/// Spearman rank correlation (average ranks on ties).
inline double spearman(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("spearman: need two same-length series");
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(xs), ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace octaframe
