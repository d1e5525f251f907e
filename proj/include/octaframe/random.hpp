// Seeded randomness for the experiments: 64-bit Mersenne Twister uniforms
// and Box-Muller normals, so identical seeds reproduce identical streams.
#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "octaframe/quaternion.hpp"

namespace octaframe {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return std::ldexp(static_cast<double>(engine_() >> 11), -53);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; one spare value cached.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Uniform on S^3: four independent normals, normalized.
    Quaternion unit_quaternion() {
        while (true) {
            const Quaternion q{gauss(), gauss(), gauss(), gauss()};
            const double n = norm(q);
            if (n > 1e-8) return (1.0 / n) * q;
        }
    }

    /// Uniform direction on S^2.
    Vec3 unit_vector() {
        while (true) {
            const Vec3 v{gauss(), gauss(), gauss()};
            const double n = norm(v);
            if (n > 1e-8) return {v[0] / n, v[1] / n, v[2] / n};
        }
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace octaframe
