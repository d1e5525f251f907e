#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "octaframe/fem.hpp"
#include "octaframe/random.hpp"
#include "octaframe/recover.hpp"

using namespace octaframe;
using namespace octaframe::fem;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<EulerAngles> random_states(std::size_t n, Rng& rng, double amp = 1.0) {
    std::vector<EulerAngles> states(n);
    for (auto& e : states) {
        e.alpha = rng.uniform(-amp, amp);
        e.beta = rng.uniform(-amp, amp);
        e.gamma = rng.uniform(-amp, amp);
    }
    return states;
}

Eigen::VectorXd fd_gradient(CollocationProblem& prob, double step = 1e-6) {
    const Eigen::VectorXd x0 = prob.dof_vector();
    Eigen::VectorXd g(x0.size());
    for (int i = 0; i < x0.size(); ++i) {
        Eigen::VectorXd xp = x0, xm = x0;
        xp(i) += step;
        xm(i) -= step;
        prob.set_dof_vector(xp);
        const double ep = prob.energy();
        prob.set_dof_vector(xm);
        const double em = prob.energy();
        g(i) = (ep - em) / (2.0 * step);
    }
    prob.set_dof_vector(x0);
    return g;
}

Eigen::MatrixXd fd_hessian(CollocationProblem& prob, double step = 1e-6) {
    const Eigen::VectorXd x0 = prob.dof_vector();
    Eigen::MatrixXd h(x0.size(), x0.size());
    for (int i = 0; i < x0.size(); ++i) {
        Eigen::VectorXd xp = x0, xm = x0;
        xp(i) += step;
        xm(i) -= step;
        prob.set_dof_vector(xp);
        const Eigen::VectorXd gp = prob.gradient();
        prob.set_dof_vector(xm);
        const Eigen::VectorXd gm = prob.gradient();
        h.col(i) = (gp - gm) / (2.0 * step);
    }
    prob.set_dof_vector(x0);
    return h;
}

}  // namespace

TEST_CASE("stiffness matrix basics", "[fem]") {
    const TetMesh ref = make_single_tet();
    const SpMat s = assemble_stiffness(ref);
    // vertex 0 of the reference tet: grad phi0 = (-1,-1,-1), V = 1/6
    CHECK_THAT(s.coeff(0, 0), WithinAbs(0.5, 1e-14));
    for (const TetMesh& mesh :
         {ref, make_unit_box(), make_box_grid(2, 2, 2, 1.0, 0.15, 3)}) {
        const SpMat k = assemble_stiffness(mesh);
        const Eigen::MatrixXd dense = Eigen::MatrixXd(k);
        CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(dense.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("stiffness assembly is additive over elements", "[fem]") {
    const TetMesh two = make_two_tets();
    TetMesh a = two, b = two;
    a.tets = {two.tets[0]};
    b.tets = {two.tets[1]};
    finalize_mesh(a);
    finalize_mesh(b);
    const Eigen::MatrixXd sum = Eigen::MatrixXd(assemble_stiffness(a)) +
                                Eigen::MatrixXd(assemble_stiffness(b));
    const Eigen::MatrixXd whole = Eigen::MatrixXd(assemble_stiffness(two));
    CHECK((sum - whole).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("degenerate tets are rejected", "[fem]") {
    TetMesh flat;
    flat.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    flat.tets = {{0, 1, 2, 3}};
    CHECK_THROWS_AS(finalize_mesh(flat), std::invalid_argument);
}

TEST_CASE("boundary euler angles align the third column", "[fem]") {
    auto [a0, b0] = boundary_euler_angles({0, 0, 1});
    CHECK(a0 == 0.0);
    CHECK(b0 == 0.0);
    auto [a1, b1] = boundary_euler_angles({1, 0, 0});
    CHECK_THAT(a1, WithinAbs(0.0, 1e-15));
    CHECK_THAT(b1, WithinAbs(std::numbers::pi / 2, 1e-15));
    auto [a2, b2] = boundary_euler_angles({0, 1, 0});
    CHECK_THAT(a2, WithinAbs(std::numbers::pi / 2, 1e-15));
    CHECK_THAT(b2, WithinAbs(std::numbers::pi / 2, 1e-15));

    Rng rng(113);
    for (int t = 0; t < 300; ++t) {
        const Vec3 n = rng.unit_vector();
        const auto [al, be] = boundary_euler_angles(n);
        const double ga = rng.uniform(-3.0, 3.0);  // any gamma
        const Vec3 col =
            rotate_vector(from_euler_kjk({al, be, ga}), {0, 0, 1});
        CHECK_THAT(col[0], WithinAbs(n[0], 1e-10));
        CHECK_THAT(col[1], WithinAbs(n[1], 1e-10));
        CHECK_THAT(col[2], WithinAbs(n[2], 1e-10));
    }
}

TEST_CASE("solve_linear: constant boundary is reproduced exactly", "[fem]") {
    const TetMesh mesh = make_box_grid(2, 2, 2);
    std::vector<std::optional<SurfacePoint>> bc(mesh.vertex_count());
    const SurfacePoint cart{cplx{1, 0}, {}, {}};
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.on_boundary[v]) bc[v] = cart;
    const FrameField field = solve_linear(mesh, bc);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        CHECK_THAT(std::abs(field.points[v].h0 - cart.h0), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(field.points[v].h1), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(field.points[v].h2), WithinAbs(0.0, 1e-12));
    }
    CHECK_THAT(field.energy, WithinAbs(0.0, 1e-12));
}

TEST_CASE("solve_linear: single interior vertex is the weighted average",
          "[fem]") {
    const TetMesh mesh = make_box_grid(2, 2, 2);
    REQUIRE(mesh.interior_count() == 1);
    int center = -1;
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.on_boundary[v]) center = static_cast<int>(v);
    Rng rng(127);
    std::vector<std::optional<SurfacePoint>> bc(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.on_boundary[v])
            bc[v] = SurfacePoint{cplx{rng.gauss(), rng.gauss()},
                                 cplx{rng.gauss(), rng.gauss()},
                                 cplx{rng.gauss(), rng.gauss()}};
    const FrameField field = solve_linear(mesh, bc);
    const SpMat s = assemble_stiffness(mesh);
    cplx expected{};
    double diag = 0.0;
    for (SpMat::InnerIterator it(s, center); it; ++it) {
        if (it.row() == center)
            diag = it.value();
        else
            expected -= it.value() * bc[it.row()]->h0;
    }
    expected /= diag;
    CHECK_THAT(std::abs(field.points[center].h0 - expected),
               WithinAbs(0.0, 1e-12));
}

TEST_CASE("solve_linear minimizes the Dirichlet energy", "[fem]") {
    Rng rng(131);
    for (int rep = 0; rep < 10; ++rep) {
        const TetMesh mesh =
            make_box_grid(2, 2, 2, 1.0, 0.18, 1000 + rep);
        std::vector<std::optional<SurfacePoint>> bc(mesh.vertex_count());
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
            if (mesh.on_boundary[v])
                bc[v] = octa_forms(to_su2_frame(rng.unit_quaternion()));
        const FrameField field = solve_linear(mesh, bc);
        const SpMat s = assemble_stiffness(mesh);
        auto energy_of = [&](const std::vector<SurfacePoint>& pts) {
            double e = 0.0;
            for (int col = 0; col < s.outerSize(); ++col)
                for (SpMat::InnerIterator it(s, col); it; ++it) {
                    e += it.value() *
                         (pts[it.row()].h0 * std::conj(pts[col].h0)).real();
                    e += it.value() *
                         (pts[it.row()].h1 * std::conj(pts[col].h1)).real();
                    e += it.value() *
                         (pts[it.row()].h2 * std::conj(pts[col].h2)).real();
                }
            return e;
        };
        CHECK_THAT(energy_of(field.points), WithinAbs(field.energy, 1e-9));
        // zero interior extension has at least this energy
        std::vector<SurfacePoint> zeroed = field.points;
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
            if (!mesh.on_boundary[v]) zeroed[v] = SurfacePoint{};
        CHECK(field.energy <= energy_of(zeroed) + 1e-10);
        for (int pert = 0; pert < 10; ++pert) {
            std::vector<SurfacePoint> moved = field.points;
            for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
                if (!mesh.on_boundary[v]) {
                    moved[v].h0 += 0.1 * cplx{rng.gauss(), rng.gauss()};
                    moved[v].h1 += 0.1 * cplx{rng.gauss(), rng.gauss()};
                    moved[v].h2 += 0.1 * cplx{rng.gauss(), rng.gauss()};
                }
            CHECK(field.energy <= energy_of(moved) + 1e-10);
        }
    }
}

TEST_CASE("solve_linear obeys the discrete maximum principle", "[fem]") {
    Rng rng(137);
    const TetMesh mesh = make_box_grid(3, 3, 3);
    std::vector<std::optional<SurfacePoint>> bc(mesh.vertex_count());
    double bmax = 0.0;
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.on_boundary[v]) {
            bc[v] = octa_forms(to_su2_frame(rng.unit_quaternion()));
            bmax = std::max({bmax, std::abs(bc[v]->h0), std::abs(bc[v]->h1),
                             std::abs(bc[v]->h2)});
        }
    const FrameField field = solve_linear(mesh, bc);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        CHECK(std::abs(field.points[v].h0) <= bmax + 1e-10);
        CHECK(std::abs(field.points[v].h1) <= bmax + 1e-10);
        CHECK(std::abs(field.points[v].h2) <= bmax + 1e-10);
    }
}

TEST_CASE("solve_linear error paths", "[fem]") {
    const TetMesh torus = make_solid_torus(8);
    std::vector<std::optional<SurfacePoint>> bc(torus.vertex_count());
    CHECK_THROWS_AS(solve_linear(torus, bc), std::invalid_argument);

    const TetMesh box = make_unit_box();
    std::vector<std::optional<SurfacePoint>> partial(box.vertex_count());
    CHECK_THROWS_AS(solve_linear(box, partial), std::invalid_argument);
}

TEST_CASE("collocation jets match finite differences", "[fem]") {
    Rng rng(139);
    const TetMesh two = make_two_tets();
    for (int rep = 0; rep < 5; ++rep) {
        CollocationProblem prob(two, random_states(two.vertex_count(), rng));
        const Eigen::VectorXd ga = prob.gradient();
        const Eigen::VectorXd gf = fd_gradient(prob);
        const double gscale = std::max(1e-12, gf.cwiseAbs().maxCoeff());
        CHECK((ga - gf).cwiseAbs().maxCoeff() / gscale <= 1e-5);

        const Eigen::MatrixXd ha = Eigen::MatrixXd(prob.hessian());
        const Eigen::MatrixXd hf = fd_hessian(prob);
        const double hscale = std::max(1e-12, hf.cwiseAbs().maxCoeff());
        CHECK((ha - hf).cwiseAbs().maxCoeff() / hscale <= 1e-4);
        CHECK((ha - ha.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("constrained gradient matches finite differences", "[fem]") {
    // boundary vertices only expose gamma; interior all three angles
    Rng rng(149);
    const TetMesh mesh = make_box_grid(2, 2, 2);
    auto bc = derive_boundary_angles(mesh);
    CollocationProblem prob(mesh, bc);
    Eigen::VectorXd x = prob.dof_vector();
    for (int i = 0; i < x.size(); ++i) x(i) += rng.uniform(-0.5, 0.5);
    prob.set_dof_vector(x);
    const Eigen::VectorXd ga = prob.gradient();
    const Eigen::VectorXd gf = fd_gradient(prob);
    const double gscale = std::max(1e-12, gf.cwiseAbs().maxCoeff());
    CHECK((ga - gf).cwiseAbs().maxCoeff() / gscale <= 1e-5);
}

TEST_CASE("collocation: constant cartesian boundary stays put", "[fem]") {
    const TetMesh mesh = make_box_grid(2, 2, 2);
    std::vector<std::optional<std::pair<double, double>>> bc(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.on_boundary[v]) bc[v] = std::make_pair(0.0, 0.0);
    const FrameField field = solve_collocation(mesh, bc);
    CHECK(field.converged);
    CHECK_THAT(field.energy, WithinAbs(0.0, 1e-12));
    for (const EulerAngles& e : field.angles) {
        CHECK_THAT(e.alpha, WithinAbs(0.0, 1e-10));
        CHECK_THAT(e.beta, WithinAbs(0.0, 1e-10));
        CHECK_THAT(e.gamma, WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("collocation solve: monotone trace, on-surface states", "[fem]") {
    const TetMesh mesh = make_box_grid(2, 2, 2);
    const auto bc = derive_boundary_angles(mesh);
    const FrameField field = solve_collocation(mesh, bc);
    REQUIRE(!field.trace.empty());
    for (std::size_t i = 1; i < field.trace.size(); ++i)
        CHECK(field.trace[i].energy <= field.trace[i - 1].energy + 1e-12);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        CHECK(is_unit_surface_point(field.points[v], 1e-8));
        CHECK(field.residuals[v] <= 1e-10);
    }
    // boundary normal alignment is pinned: third column stays on the normal
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        if (!mesh.on_boundary[v]) continue;
        const Vec3 col = rotate_vector(from_euler_kjk(field.angles[v]), {0, 0, 1});
        CHECK_THAT(dot(col, mesh.vertex_normals[v]), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("metric_at hand-derived values", "[fem]") {
    const MetricAt m = metric_at({cplx{1, 0}, cplx{0, 0}});
    CHECK_THAT(std::abs(m.J(0, 0) - cplx{8, 0}), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(m.J(0, 1)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(m.J(1, 0)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(m.J(1, 1)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(m.J(2, 0)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(m.J(2, 1) - cplx{1, 0}), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(m.M(0, 0) - cplx{1.0 / 64, 0}), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(m.M(1, 1) - cplx{1, 0}), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(m.M(0, 1)), WithinAbs(0.0, 1e-12));

    CHECK_THROWS_AS(metric_at({cplx{}, cplx{}}), std::invalid_argument);

    Rng rng(151);
    for (int t = 0; t < 200; ++t) {
        const MetricAt mm = metric_at(to_su2_frame(rng.unit_quaternion()));
        CHECK((mm.M - mm.M.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(mm.M);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("identity metric reproduces the collocation objective", "[fem]") {
    Rng rng(157);
    const TetMesh two = make_two_tets();
    const auto states = random_states(two.vertex_count(), rng);
    CollocationProblem plain(two, states);
    CollocationProblem weighted(two, states);
    std::vector<Eigen::Matrix3cd> w(two.vertex_count(),
                                    Eigen::Matrix3cd::Identity());
    weighted.set_weights(w);
    CHECK_THAT(weighted.energy(), WithinAbs(plain.energy(), 1e-10));
    const Eigen::VectorXd ga = plain.gradient(), gb = weighted.gradient();
    CHECK((ga - gb).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("weighted gradient and hessian match finite differences", "[fem]") {
    Rng rng(163);
    const TetMesh two = make_two_tets();
    CollocationProblem prob(two, random_states(two.vertex_count(), rng));
    std::vector<Eigen::Matrix3cd> w;
    for (std::size_t v = 0; v < two.vertex_count(); ++v)
        w.push_back(component_metric(prob.su2_state(static_cast<int>(v))));
    prob.set_weights(w);
    const Eigen::VectorXd ga = prob.gradient();
    const Eigen::VectorXd gf = fd_gradient(prob);
    const double gscale = std::max(1e-12, gf.cwiseAbs().maxCoeff());
    CHECK((ga - gf).cwiseAbs().maxCoeff() / gscale <= 1e-5);
    const Eigen::MatrixXd ha = Eigen::MatrixXd(prob.hessian());
    const Eigen::MatrixXd hf = fd_hessian(prob);
    const double hscale = std::max(1e-12, hf.cwiseAbs().maxCoeff());
    CHECK((ha - hf).cwiseAbs().maxCoeff() / hscale <= 1e-4);
}

TEST_CASE("metric solve runs and reports a monotone per-stage trace", "[fem]") {
    const TetMesh mesh = make_box_grid(2, 2, 2);
    const auto bc = derive_boundary_angles(mesh);
    SolveOptions opt;
    opt.outer_iterations = 4;
    const FrameField field = solve_metric(mesh, bc, opt);
    REQUIRE(!field.trace.empty());
    // within each frozen-metric stage the energy is non-increasing
    for (std::size_t i = 1; i < field.trace.size(); ++i)
        if (field.trace[i].iter == field.trace[i - 1].iter + 1)
            CHECK(field.trace[i].energy <= field.trace[i - 1].energy + 1e-12);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        CHECK(is_unit_surface_point(field.points[v], 1e-8));

    // identity override equals plain collocation end to end
    SolveOptions id;
    id.identity_metric = true;
    const FrameField a = solve_metric(mesh, bc, id);
    const FrameField b = solve_collocation(mesh, bc);
    CHECK_THAT(a.energy, WithinAbs(b.energy, 1e-10));
}
