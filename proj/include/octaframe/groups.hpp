// The vierer, binary tetrahedral and binary octahedral quaternion groups:
// canonical (p;q;2) generators, presentation checks and closure.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "octaframe/quaternion.hpp"

namespace octaframe {

enum class GroupKind { Vierer, BinaryTetrahedral, BinaryOctahedral };

/// (p, q) of the (p;q;2) presentation triplet.
constexpr std::pair<int, int> presentation_exponents(GroupKind kind) {
    switch (kind) {
        case GroupKind::Vierer: return {2, 2};
        case GroupKind::BinaryTetrahedral: return {3, 3};
        default: return {4, 3};
    }
}

/// Quaternion element count (rotations are half as many).
constexpr int group_order(GroupKind kind) {
    switch (kind) {
        case GroupKind::Vierer: return 8;
        case GroupKind::BinaryTetrahedral: return 24;
        default: return 48;
    }
}

struct GeneratorTriple {
    Quaternion a, b, c;
};

/// Canonical generators a = cos(pi/p) + sin(pi/p) a_axis, etc., with
/// c a half turn. The octahedral c-axis is (i+k)/sqrt2, the unique
/// pure-imaginary completion of a, b satisfying a*b*c = -1.
inline GeneratorTriple generators(GroupKind kind) {
    const double s3 = 1.0 / std::sqrt(3.0);
    const double s2 = 1.0 / std::sqrt(2.0);
    const auto [p, q] = presentation_exponents(kind);
    Vec3 a_axis, b_axis, c_axis;
    switch (kind) {
        case GroupKind::Vierer:
            a_axis = {1, 0, 0}; b_axis = {0, 1, 0}; c_axis = {0, 0, 1};
            break;
        case GroupKind::BinaryTetrahedral:
            a_axis = {s3, s3, s3}; b_axis = {-s3, s3, s3}; c_axis = {0, 0, 1};
            break;
        default:
            a_axis = {1, 0, 0}; b_axis = {s3, s3, s3}; c_axis = {s2, 0, s2};
            break;
    }
    const double pi = std::numbers::pi;
    return {from_axis_angle(a_axis, 2.0 * pi / p),
            from_axis_angle(b_axis, 2.0 * pi / q),
            from_axis_angle(c_axis, pi)};
}

inline Quaternion quaternion_pow(Quaternion q, int n) {
    Quaternion r = Quaternion::identity();
    for (int i = 0; i < n; ++i) r = r * q;
    return r;
}

inline bool approx_equal(const Quaternion& a, const Quaternion& b, double tol) {
    return std::abs(a.q0 - b.q0) <= tol && std::abs(a.q1 - b.q1) <= tol &&
           std::abs(a.q2 - b.q2) <= tol && std::abs(a.q3 - b.q3) <= tol;
}

/// True iff a^p = b^q = c^2 = a*b*c = -1, each componentwise within tol.
inline bool verify_presentation(const Quaternion& a, const Quaternion& b,
                                const Quaternion& c, int p, int q,
                                double tol = 1e-10) {
    const Quaternion minus_one{-1.0, 0.0, 0.0, 0.0};
    return approx_equal(quaternion_pow(a, p), minus_one, tol) &&
           approx_equal(quaternion_pow(b, q), minus_one, tol) &&
           approx_equal(quaternion_pow(c, 2), minus_one, tol) &&
           approx_equal(a * b * c, minus_one, tol);
}

/// Immutable group closure, lexicographically sorted for deterministic output.
struct Groupset {
    std::vector<Quaternion> elements;
    GroupKind kind;

    /// Index of the element matching q within tol, or -1.
    int find(const Quaternion& q, double tol = 1e-9) const {
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (approx_equal(elements[i], q, tol)) return static_cast<int>(i);
        return -1;
    }

    bool contains(const Quaternion& q, double tol = 1e-9) const {
        return find(q, tol) >= 0;
    }
};

/// Closure of the canonical generators under multiplication, deduplicated by
/// nearest match at dedup_tol (radicals 1/sqrt2, 1/2 are machine-exact, so
/// tolerance dedup is robust here).
inline Groupset elements(GroupKind kind, double dedup_tol = 1e-9) {
    const GeneratorTriple g = generators(kind);
    std::vector<Quaternion> elems{Quaternion::identity(), g.a, g.b, g.c};
    auto add_unique = [&](const Quaternion& q) {
        for (const Quaternion& e : elems)
            if (approx_equal(e, q, dedup_tol)) return false;
        elems.push_back(q);
        return true;
    };
    bool grew = true;
    while (grew) {
        grew = false;
        const std::size_t n = elems.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (add_unique(elems[i] * elems[j])) grew = true;
    }
    auto key = [](double x) { return std::round(x * 1e12); };
    std::sort(elems.begin(), elems.end(),
              [&](const Quaternion& a, const Quaternion& b) {
                  if (key(a.q0) != key(b.q0)) return key(a.q0) < key(b.q0);
                  if (key(a.q1) != key(b.q1)) return key(a.q1) < key(b.q1);
                  if (key(a.q2) != key(b.q2)) return key(a.q2) < key(b.q2);
                  return key(a.q3) < key(b.q3);
              });
    return {std::move(elems), kind};
}

/// Cached binary octahedral groupset (shared, immutable after construction).
inline const Groupset& binary_octahedral() {
    static const Groupset g = elements(GroupKind::BinaryOctahedral);
    return g;
}

}  // namespace octaframe
