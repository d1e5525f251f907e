#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "octaframe/distance.hpp"

using namespace octaframe;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kPi = std::numbers::pi;
const SurfacePoint kCartesian{cplx{1, 0}, {}, {}};
}  // namespace

TEST_CASE("c3 distance closed forms", "[dist]") {
    CHECK(c3_distance(kCartesian, kCartesian) == 0.0);
    CHECK_THAT(c3_distance(kCartesian, {cplx{-1, 0}, {}, {}}),
               WithinAbs(2.0, 1e-15));
    CHECK_THAT(c3_distance(kCartesian, {cplx{0.75, 0}, cplx{-1.0 / 16, 0}, {}}),
               WithinAbs(std::sqrt(17.0) / 16.0, 1e-15));
}

TEST_CASE("r4 frame distance", "[dist]") {
    const Quaternion one = Quaternion::identity();
    CHECK(r4_frame_distance(one, one) == 0.0);
    const double s = std::numbers::sqrt2 / 2.0;
    CHECK_THAT(r4_frame_distance(one, Quaternion{s, 0, 0, s}),
               WithinAbs(0.0, 1e-12));
    const Quaternion q{std::cos(kPi / 8), 0, 0, std::sin(kPi / 8)};
    CHECK_THAT(r4_frame_distance(one, q),
               WithinAbs(2.0 * std::sin(kPi / 16), 1e-12));
    CHECK_THROWS_AS(r4_frame_distance(one, Quaternion{1, 1, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("polynomial oracle distance", "[dist]") {
    const Quaternion one = Quaternion::identity();
    CHECK(poly_frame_distance(one, one) == 0.0);
    for (const Quaternion& o : binary_octahedral().elements)
        CHECK_THAT(poly_frame_distance(one, o), WithinAbs(0.0, 1e-12));
    const Quaternion q{std::cos(kPi / 8), 0, 0, std::sin(kPi / 8)};
    CHECK(poly_frame_distance(one, q) > 1e-3);
}

TEST_CASE("r4 and the oracle agree on frame equality", "[dist]") {
    Rng rng(97);
    const Groupset& oct = binary_octahedral();
    for (int t = 0; t < 200; ++t) {
        const Quaternion qa = rng.unit_quaternion();
        const Quaternion qb = rng.unit_quaternion();
        const double r4 = r4_frame_distance(qa, qb);
        const double dp = poly_frame_distance(qa, qb);
        CHECK((r4 <= 1e-9) == (dp <= 1e-9));
        // symmetry pairs are exactly at zero
        const Quaternion& o = oct.elements[t % oct.elements.size()];
        CHECK(r4_frame_distance(qa, qa * o) <= 1e-12);
        CHECK(poly_frame_distance(qa, qa * o) <= 1e-10);
    }
}

TEST_CASE("r4 symmetry-invariance is exact", "[dist]") {
    Rng rng(101);
    const Groupset& oct = binary_octahedral();
    for (int t = 0; t < 100; ++t) {
        const Quaternion qa = rng.unit_quaternion();
        const Quaternion qb = rng.unit_quaternion();
        const double d = r4_frame_distance(qa, qb);
        const Quaternion& o = oct.elements[t % oct.elements.size()];
        // multiplying qb by a group element permutes the candidate set; the
        // minimum only moves by roundoff of the reassociated products
        CHECK_THAT(r4_frame_distance(qa, qb * o), WithinAbs(d, 1e-13));
        CHECK_THAT(r4_frame_distance(qb, qa), WithinAbs(d, 1e-13));
    }
}

TEST_CASE("triangle inequality for c3", "[dist]") {
    Rng rng(103);
    for (int t = 0; t < 2000; ++t) {
        const SurfacePoint a = octa_forms(to_su2_frame(rng.unit_quaternion()));
        const SurfacePoint b = octa_forms(to_su2_frame(rng.unit_quaternion()));
        const SurfacePoint c = octa_forms(to_su2_frame(rng.unit_quaternion()));
        CHECK(c3_distance(a, c) <=
              c3_distance(a, b) + c3_distance(b, c) + 1e-12);
    }
}

TEST_CASE("c3 is invariant over groupset companions", "[dist]") {
    Rng rng(107);
    const Groupset& oct = binary_octahedral();
    for (int t = 0; t < 200; ++t) {
        const Quaternion q = rng.unit_quaternion();
        const Quaternion& o = oct.elements[t % oct.elements.size()];
        const double a = c3_distance(octa_forms(to_su2_frame(q)), kCartesian);
        const double b =
            c3_distance(octa_forms(to_su2_frame(q * o)), kCartesian);
        CHECK_THAT(a, WithinAbs(b, 1e-10));
    }
}

TEST_CASE("axis sweeps: endpoints, maxima and coincidence", "[dist]") {
    const int samples = 9;  // includes pi/4 at index 4
    const auto si = axis_sweep(SweepAxis::I, samples);
    const auto sj = axis_sweep(SweepAxis::J, samples);
    const auto sk = axis_sweep(SweepAxis::K, samples);
    for (const auto& sweep : {si, sj, sk}) {
        CHECK_THAT(sweep.front().d_c3, WithinAbs(0.0, 1e-12));
        CHECK_THAT(sweep.back().d_c3, WithinAbs(0.0, 1e-12));
        CHECK_THAT(sweep.front().d_r4, WithinAbs(0.0, 1e-12));
        CHECK_THAT(sweep.back().d_r4, WithinAbs(0.0, 1e-12));
    }
    for (int s = 0; s < samples; ++s) {
        CHECK_THAT(si[s].d_c3, WithinAbs(sj[s].d_c3, 1e-12));       // i and j coincide
        CHECK_THAT(si[s].d_r4, WithinAbs(sk[s].d_r4, 1e-12));       // r4 is isotropic
        CHECK_THAT(sj[s].d_r4, WithinAbs(sk[s].d_r4, 1e-12));
    }
    CHECK_THAT(si[4].d_c3, WithinAbs(std::sqrt(17.0) / 16.0, 1e-12));
    CHECK_THAT(sk[4].d_c3, WithinAbs(2.0, 1e-12));
}

TEST_CASE("random study basics", "[dist]") {
    const auto a = random_study(200, 42);
    const auto b = random_study(200, 42);
    REQUIRE(a.size() == 200);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].d_c3 == b[i].d_c3);  // deterministic given the seed
        CHECK(a[i].d_r4 == b[i].d_r4);
        CHECK(a[i].d_c3 >= 0.0);
        CHECK(a[i].d_r4 >= 0.0);
        CHECK(a[i].d_r4 <= 2.0);
    }
    std::vector<double> xs, ys;
    for (const auto& r : a) {
        xs.push_back(r.d_c3);
        ys.push_back(r.d_r4);
    }
    const double rho = spearman(xs, ys);
    CHECK(rho >= -1.0);
    CHECK(rho <= 1.0);
}

TEST_CASE("spearman sanity", "[dist]") {
    CHECK_THAT(spearman({1, 2, 3, 4}, {2, 4, 6, 8}), WithinAbs(1.0, 1e-12));
    CHECK_THAT(spearman({1, 2, 3, 4}, {8, 6, 4, 2}), WithinAbs(-1.0, 1e-12));
}
