// P1 tetrahedral discretization and the three attempted frame-field schemes:
// the linear complex Laplace solve on h, Euler-angle collocation driven by a
// damped Newton method with analytic Wirtinger jets, and the metric-weighted
// variant with a lagged pseudo-inverse metric.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "octaframe/forms.hpp"
#include "octaframe/mesh.hpp"
#include "octaframe/quaternion.hpp"

namespace octaframe {
namespace fem {

using SpMat = Eigen::SparseMatrix<double>;

/// Standard P1 stiffness: K[j][k] = integral of grad phi_j . grad phi_k.
/// Symmetric, zero row sums, positive semidefinite.
inline SpMat assemble_stiffness(const TetMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.tets.size() * 16);
    for (std::size_t ti = 0; ti < mesh.tets.size(); ++ti) {
        const auto& t = mesh.tets[ti];
        const double vol = tet_volume(mesh, t);
        if (vol <= 0.0)
            throw std::invalid_argument("assemble_stiffness: degenerate tet #" +
                                        std::to_string(ti));
        const Vec3& p0 = mesh.vertices[t[0]];
        Eigen::Matrix3d m;
        for (int c = 0; c < 3; ++c) {
            const Vec3& pc = mesh.vertices[t[c + 1]];
            for (int r = 0; r < 3; ++r) m(r, c) = pc[r] - p0[r];
        }
        const Eigen::Matrix3d minv_t = m.inverse().transpose();
        Eigen::Matrix<double, 3, 4> grads;
        grads.col(1) = minv_t.col(0);
        grads.col(2) = minv_t.col(1);
        grads.col(3) = minv_t.col(2);
        grads.col(0) = -grads.col(1) - grads.col(2) - grads.col(3);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                trips.emplace_back(t[a], t[b],
                                   vol * grads.col(a).dot(grads.col(b)));
    }
    SpMat s(static_cast<int>(mesh.vertex_count()),
            static_cast<int>(mesh.vertex_count()));
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

/// (alpha, beta) making the third k-j-k column equal to n, for any gamma.
inline std::pair<double, double> boundary_euler_angles(const Vec3& n) {
    if (std::abs(norm(n) - 1.0) > 1e-9)
        throw std::invalid_argument("boundary_euler_angles: non-unit normal");
    const double rho = std::hypot(n[0], n[1]);
    const double alpha = rho == 0.0 ? 0.0 : std::atan2(n[1], n[0]);
    return {alpha, std::atan2(rho, n[2])};
}

struct TraceRow {
    int iter;
    double energy;
    double grad_norm;  ///< infinity norm
};

/// Per-vertex result of any of the three schemes.
struct FrameField {
    std::vector<EulerAngles> angles;  ///< empty for the linear scheme
    std::vector<SurfacePoint> points;
    std::vector<double> residuals;
    double energy = 0.0;
    bool converged = true;
    std::vector<TraceRow> trace;
};

// ---------------------------------------------------------------------------
// Wirtinger jets

/// u = cos(b/2) e^{-i(a+c)/2}, v = sin(b/2) e^{i(c-a)/2} and their angle
/// derivatives; index order (alpha, beta, gamma).
struct UVJet {
    cplx u, v;
    cplx du[3], dv[3];
    cplx d2u[3][3], d2v[3][3];
};

inline UVJet uv_jet(const EulerAngles& e) {
    const double cb = std::cos(e.beta / 2.0), sb = std::sin(e.beta / 2.0);
    const double sum = (e.alpha + e.gamma) / 2.0, dif = (e.gamma - e.alpha) / 2.0;
    const cplx eu{std::cos(sum), -std::sin(sum)};
    const cplx ev{std::cos(dif), std::sin(dif)};
    const cplx ih{0.0, 0.5};
    const cplx iq{0.0, 0.25};
    UVJet j;
    j.u = cb * eu;
    j.v = sb * ev;
    j.du[0] = -ih * j.u;
    j.du[1] = -0.5 * sb * eu;
    j.du[2] = -ih * j.u;
    j.dv[0] = -ih * j.v;
    j.dv[1] = 0.5 * cb * ev;
    j.dv[2] = ih * j.v;
    const cplx uq = 0.25 * j.u, vq = 0.25 * j.v;
    j.d2u[0][0] = -uq;
    j.d2u[0][1] = j.d2u[1][0] = iq * sb * eu;
    j.d2u[0][2] = j.d2u[2][0] = -uq;
    j.d2u[1][1] = -uq;
    j.d2u[1][2] = j.d2u[2][1] = iq * sb * eu;
    j.d2u[2][2] = -uq;
    j.d2v[0][0] = -vq;
    j.d2v[0][1] = j.d2v[1][0] = -iq * cb * ev;
    j.d2v[0][2] = j.d2v[2][0] = vq;
    j.d2v[1][1] = -vq;
    j.d2v[1][2] = j.d2v[2][1] = iq * cb * ev;
    j.d2v[2][2] = -vq;
    return j;
}

/// h components with first and second angle derivatives at one vertex state.
struct HJet {
    cplx h[3];
    cplx dh[3][3];        ///< [component][angle]
    cplx d2h[3][3][3];    ///< [component][angle][angle]
};

inline HJet h_jet(const EulerAngles& e) {
    const UVJet j = uv_jet(e);
    const FormPartials p = form_partials(j.u, j.v);
    HJet out;
    for (int c = 0; c < 3; ++c) {
        out.h[c] = p.h[c];
        for (int a = 0; a < 3; ++a)
            out.dh[c][a] = p.hu[c] * j.du[a] + p.hv[c] * j.dv[a];
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                const cplx val = p.huu[c] * j.du[a] * j.du[b] +
                                 p.hvv[c] * j.dv[a] * j.dv[b] +
                                 p.huv[c] * (j.du[a] * j.dv[b] + j.dv[a] * j.du[b]) +
                                 p.hu[c] * j.d2u[a][b] + p.hv[c] * j.d2v[a][b];
                out.d2h[c][a][b] = val;
                out.d2h[c][b][a] = val;
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metric

struct MetricAt {
    Eigen::Matrix<cplx, 3, 2> J;  ///< holomorphic Jacobian d h_i / d(u, v)
    Eigen::Matrix2cd M;           ///< J+ (J+)^H, hermitian PSD
};

namespace detail {

inline Eigen::Matrix<cplx, 2, 3> pseudo_inverse(const Eigen::Matrix<cplx, 3, 2>& J) {
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 3, 2>> svd(
        J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Matrix<cplx, 2, 3> splus = Eigen::Matrix<cplx, 2, 3>::Zero();
    const double cutoff = 1e-10 * sv(0);
    for (int i = 0; i < 2; ++i)
        if (sv(i) > cutoff) splus(i, i) = 1.0 / sv(i);
    return svd.matrixV() * splus * svd.matrixU().adjoint();
}

}  // namespace detail

inline Eigen::Matrix<cplx, 3, 2> form_jacobian(const SU2Coord& c) {
    const FormPartials p = form_partials(c.u, c.v);
    Eigen::Matrix<cplx, 3, 2> J;
    for (int i = 0; i < 3; ++i) {
        J(i, 0) = p.hu[i];
        J(i, 1) = p.hv[i];
    }
    return J;
}

inline MetricAt metric_at(const SU2Coord& c) {
    if (std::abs(c.u) == 0.0 && std::abs(c.v) == 0.0)
        throw std::invalid_argument("metric_at: zero point");
    MetricAt m;
    m.J = form_jacobian(c);
    const auto jp = detail::pseudo_inverse(m.J);
    m.M = jp * jp.adjoint();
    return m;
}

/// Component-space pullback (J+)^H J+ contracting 3-component gradients;
/// this is the weight the metric scheme puts between h components.
inline Eigen::Matrix3cd component_metric(const SU2Coord& c) {
    if (std::abs(c.u) == 0.0 && std::abs(c.v) == 0.0)
        throw std::invalid_argument("component_metric: zero point");
    const auto jp = detail::pseudo_inverse(form_jacobian(c));
    return jp.adjoint() * jp;
}

// ---------------------------------------------------------------------------
// Linear scheme

/// Three decoupled complex Laplace solves with Dirichlet rows; the solution
/// is not projected onto the model surface, so per-vertex residuals are an
/// output, not an error.
inline FrameField solve_linear(
    const TetMesh& mesh, const std::vector<std::optional<SurfacePoint>>& bc) {
    const int n = static_cast<int>(mesh.vertex_count());
    if (static_cast<int>(bc.size()) != n)
        throw std::invalid_argument("solve_linear: one bc slot per vertex");
    std::vector<int> interior;
    for (int v = 0; v < n; ++v) {
        if (mesh.on_boundary[v]) {
            if (!bc[v])
                throw std::invalid_argument(
                    "solve_linear: unconstrained boundary vertex");
        } else {
            interior.push_back(v);
        }
    }
    const bool has_bc = interior.size() < static_cast<std::size_t>(n);
    if (!has_bc)
        throw std::invalid_argument("solve_linear: no boundary vertices");

    const SpMat S = assemble_stiffness(mesh);
    std::vector<int> pos(n, -1);
    for (std::size_t i = 0; i < interior.size(); ++i) pos[interior[i]] = static_cast<int>(i);

    const int ni = static_cast<int>(interior.size());
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ni, 6);
    auto bc_val = [&](int v, int comp) -> cplx {
        const SurfacePoint& h = *bc[v];
        return comp == 0 ? h.h0 : comp == 1 ? h.h1 : h.h2;
    };
    for (int col = 0; col < S.outerSize(); ++col)
        for (SpMat::InnerIterator it(S, col); it; ++it) {
            const int j = static_cast<int>(it.row()), k = col;
            if (pos[j] < 0) continue;
            if (pos[k] >= 0) {
                trips.emplace_back(pos[j], pos[k], it.value());
            } else {
                for (int c = 0; c < 3; ++c) {
                    const cplx g = bc_val(k, c);
                    rhs(pos[j], 2 * c) -= it.value() * g.real();
                    rhs(pos[j], 2 * c + 1) -= it.value() * g.imag();
                }
            }
        }
    Eigen::MatrixXd sol(ni, 6);
    if (ni > 0) {
        SpMat aii(ni, ni);
        aii.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLDLT<SpMat> ldlt(aii);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("solve_linear: factorization failed");
        sol = ldlt.solve(rhs);
    }

    FrameField field;
    field.points.resize(n);
    field.residuals.resize(n);
    std::vector<std::array<cplx, 3>> h(n);
    for (int v = 0; v < n; ++v) {
        if (pos[v] < 0) {
            h[v] = {bc_val(v, 0), bc_val(v, 1), bc_val(v, 2)};
        } else {
            for (int c = 0; c < 3; ++c)
                h[v][c] = cplx{sol(pos[v], 2 * c), sol(pos[v], 2 * c + 1)};
        }
        field.points[v] = {h[v][0], h[v][1], h[v][2]};
        field.residuals[v] = surface_residual(field.points[v]);
    }
    double energy = 0.0;
    for (int col = 0; col < S.outerSize(); ++col)
        for (SpMat::InnerIterator it(S, col); it; ++it)
            for (int c = 0; c < 3; ++c)
                energy += it.value() *
                          (h[it.row()][c] * std::conj(h[col][c])).real();
    field.energy = energy;
    field.trace.push_back({0, energy, 0.0});
    return field;
}

// ---------------------------------------------------------------------------
// Collocation / metric schemes

struct SolveOptions {
    double grad_tol = 1e-8;
    int max_iterations = 200;
    int outer_iterations = 8;      ///< metric scheme only
    bool identity_metric = false;  ///< metric scheme: unit weight everywhere
};

/// Shared machinery of the two angle-based schemes: the energy
///   E = sum_jk S_jk sum_ab W_jk(a,b) h_a(j) conj(h_b(k))
/// with W = I for plain collocation, and its analytic gradient and Hessian
/// over the free angles (all three at interior vertices, gamma only at
/// constrained boundary vertices).
class CollocationProblem {
  public:
    CollocationProblem(const TetMesh& mesh,
                       const std::vector<std::optional<std::pair<double, double>>>& bc)
        : nverts_(static_cast<int>(mesh.vertex_count())),
          S_(assemble_stiffness(mesh)),
          states_(mesh.vertex_count()),
          free_(mesh.vertex_count(), {true, true, true}) {
        for (int v = 0; v < nverts_; ++v) {
            if (mesh.on_boundary[v]) {
                if (!bc[v])
                    throw std::invalid_argument(
                        "collocation: unconstrained boundary vertex");
                states_[v].alpha = bc[v]->first;
                states_[v].beta = bc[v]->second;
                free_[v] = {false, false, true};
            }
        }
        index_dofs();
        refresh_jets();
    }

    /// Unconstrained variant used by the derivative tests: every angle free.
    CollocationProblem(const TetMesh& mesh, const std::vector<EulerAngles>& init)
        : nverts_(static_cast<int>(mesh.vertex_count())),
          S_(assemble_stiffness(mesh)),
          states_(init),
          free_(mesh.vertex_count(), {true, true, true}) {
        index_dofs();
        refresh_jets();
    }

    int dof_count() const { return static_cast<int>(dofs_.size()); }
    const std::vector<EulerAngles>& states() const { return states_; }

    void set_weights(std::vector<Eigen::Matrix3cd> w) { weights_ = std::move(w); }
    void clear_weights() { weights_.clear(); }

    Eigen::VectorXd dof_vector() const {
        Eigen::VectorXd x(dof_count());
        for (std::size_t i = 0; i < dofs_.size(); ++i)
            x(static_cast<int>(i)) = angle_of(dofs_[i]);
        return x;
    }

    void set_dof_vector(const Eigen::VectorXd& x) {
        for (std::size_t i = 0; i < dofs_.size(); ++i)
            angle_of(dofs_[i]) = x(static_cast<int>(i));
        refresh_values();  // derivatives recomputed on demand
    }

    double energy() const {
        cplx acc{};
        for (int col = 0; col < S_.outerSize(); ++col)
            for (SpMat::InnerIterator it(S_, col); it; ++it) {
                const int j = static_cast<int>(it.row()), k = col;
                acc += it.value() * pair_energy(j, k);
            }
        if (!std::isfinite(acc.real()))
            throw std::runtime_error("collocation: non-finite energy");
        return acc.real();
    }

    Eigen::VectorXd gradient() const {
        ensure_jets();
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dof_count());
        for (std::size_t i = 0; i < dofs_.size(); ++i) {
            const auto [l, t] = dofs_[i];
            const std::array<cplx, 3> c = weighted_neighbor_sum(l);
            cplx acc{};
            for (int a = 0; a < 3; ++a) acc += jets_[l].dh[a][t] * c[a];
            g(static_cast<int>(i)) = 2.0 * acc.real();
        }
        return g;
    }

    SpMat hessian() const {
        ensure_jets();
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(S_.nonZeros()) * 9 +
                      dofs_.size() * 3);
        for (int col = 0; col < S_.outerSize(); ++col)
            for (SpMat::InnerIterator it(S_, col); it; ++it) {
                const int l = static_cast<int>(it.row()), k = col;
                const Eigen::Matrix3cd* w = edge_weight(l, k);
                for (int t = 0; t < 3; ++t) {
                    if (dof_of(l, t) < 0) continue;
                    for (int s = 0; s < 3; ++s) {
                        if (dof_of(k, s) < 0) continue;
                        cplx acc{};
                        if (!w) {
                            for (int a = 0; a < 3; ++a)
                                acc += jets_[l].dh[a][t] *
                                       std::conj(jets_[k].dh[a][s]);
                        } else {
                            for (int a = 0; a < 3; ++a)
                                for (int b = 0; b < 3; ++b)
                                    acc += (*w)(a, b) * jets_[l].dh[a][t] *
                                           std::conj(jets_[k].dh[b][s]);
                        }
                        trips.emplace_back(dof_of(l, t), dof_of(k, s),
                                           2.0 * (it.value() * acc).real());
                    }
                }
            }
        // Same-vertex second-derivative block.
        for (int l = 0; l < nverts_; ++l) {
            const std::array<cplx, 3> c = weighted_neighbor_sum(l);
            for (int t = 0; t < 3; ++t) {
                if (dof_of(l, t) < 0) continue;
                for (int s = 0; s < 3; ++s) {
                    if (dof_of(l, s) < 0) continue;
                    cplx acc{};
                    for (int a = 0; a < 3; ++a) acc += jets_[l].d2h[a][t][s] * c[a];
                    trips.emplace_back(dof_of(l, t), dof_of(l, s), 2.0 * acc.real());
                }
            }
        }
        SpMat h(dof_count(), dof_count());
        h.setFromTriplets(trips.begin(), trips.end());
        return h;
    }

    /// Damped Newton: Hessian shift mu*I grown x10 until the step is a
    /// descent direction, then halving line search (<= 30 halvings). The
    /// energy trace is non-increasing by construction.
    void minimize(const SolveOptions& opt, FrameField& field, int iter_offset = 0) {
        double e = energy();
        Eigen::VectorXd g = gradient();
        double gnorm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        field.trace.push_back({iter_offset, e, gnorm});
        field.converged = gnorm <= opt.grad_tol;
        Eigen::SimplicialLDLT<SpMat> ldlt;
        bool analyzed = false;
        SpMat ident(dof_count(), dof_count());
        ident.setIdentity();
        double mu_warm = 0.0;  // carried across iterations to skip the climb
        for (int iter = 1; iter <= opt.max_iterations && !field.converged; ++iter) {
            const SpMat h = hessian();
            const double mu_floor =
                1e-8 * std::max(1.0, h.coeffs().abs().maxCoeff());
            Eigen::VectorXd step;
            double mu = mu_warm;
            while (true) {
                const SpMat shifted = mu > 0.0 ? SpMat(h + mu * ident) : h;
                if (!analyzed) {
                    ldlt.analyzePattern(shifted);
                    analyzed = true;
                }
                ldlt.factorize(shifted);
                if (ldlt.info() == Eigen::Success) {
                    step = ldlt.solve(-g);
                    if (step.allFinite() && step.dot(g) < 0.0) break;
                }
                mu = mu == 0.0 ? mu_floor : mu * 10.0;
                if (mu > 1e16) {  // hopeless curvature; fall back to steepest descent
                    step = -g;
                    break;
                }
            }
            const Eigen::VectorXd x0 = dof_vector();
            double t = 1.0;
            bool accepted = false;
            for (int half = 0; half <= 30; ++half) {
                set_dof_vector(x0 + t * step);
                const double e_new = energy();
                if (e_new <= e) {
                    e = e_new;
                    accepted = true;
                    break;
                }
                t /= 2.0;
            }
            if (!accepted) {
                set_dof_vector(x0);
                field.converged = false;
                break;
            }
            mu_warm = (t == 1.0) ? (mu / 10.0 < mu_floor ? 0.0 : mu / 10.0) : mu;
            g = gradient();
            gnorm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
            field.trace.push_back({iter_offset + iter, e, gnorm});
            if (gnorm <= opt.grad_tol) {
                field.converged = true;
                break;
            }
            if (t * step.cwiseAbs().maxCoeff() < 1e-15) break;  // stalled
        }
        field.energy = e;
    }

    void fill_field(FrameField& field) const {
        field.angles = states_;
        field.points.resize(nverts_);
        field.residuals.resize(nverts_);
        for (int v = 0; v < nverts_; ++v) {
            field.points[v] = {jets_[v].h[0], jets_[v].h[1], jets_[v].h[2]};
            field.residuals[v] = surface_residual(field.points[v]);
        }
    }

    SU2Coord su2_state(int v) const {
        const UVJet j = uv_jet(states_[v]);
        return {j.u, j.v};
    }

  private:
    using Dof = std::pair<int, int>;  // (vertex, angle index)

    void index_dofs() {
        dof_index_.assign(nverts_ * 3, -1);
        for (int v = 0; v < nverts_; ++v)
            for (int t = 0; t < 3; ++t)
                if (free_[v][t]) {
                    dof_index_[v * 3 + t] = static_cast<int>(dofs_.size());
                    dofs_.emplace_back(v, t);
                }
    }

    int dof_of(int v, int t) const { return dof_index_[v * 3 + t]; }

    double& angle_of(const Dof& d) {
        EulerAngles& e = states_[d.first];
        return d.second == 0 ? e.alpha : d.second == 1 ? e.beta : e.gamma;
    }
    double angle_of(const Dof& d) const {
        const EulerAngles& e = states_[d.first];
        return d.second == 0 ? e.alpha : d.second == 1 ? e.beta : e.gamma;
    }

    /// Values only: enough for energy evaluations inside the line search.
    void refresh_values() {
        jets_.resize(nverts_);
        for (int v = 0; v < nverts_; ++v) {
            const UVJet j = uv_jet(states_[v]);
            const SurfacePoint h = octa_forms({j.u, j.v});
            jets_[v].h[0] = h.h0;
            jets_[v].h[1] = h.h1;
            jets_[v].h[2] = h.h2;
        }
        jets_fresh_ = false;
    }

    void refresh_jets() {
        jets_.resize(nverts_);
        for (int v = 0; v < nverts_; ++v) jets_[v] = h_jet(states_[v]);
        jets_fresh_ = true;
    }

    void ensure_jets() const {
        if (!jets_fresh_) const_cast<CollocationProblem*>(this)->refresh_jets();
    }

    /// Averaged edge weight, or nullptr for the identity.
    const Eigen::Matrix3cd* edge_weight(int j, int k) const {
        if (weights_.empty()) return nullptr;
        scratch_ = 0.5 * (weights_[j] + weights_[k]);
        return &scratch_;
    }

    cplx pair_energy(int j, int k) const {
        const Eigen::Matrix3cd* w = edge_weight(j, k);
        cplx acc{};
        if (!w) {
            for (int a = 0; a < 3; ++a)
                acc += jets_[j].h[a] * std::conj(jets_[k].h[a]);
        } else {
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    acc += (*w)(a, b) * jets_[j].h[a] * std::conj(jets_[k].h[b]);
        }
        return acc;
    }

    /// c_a(l) = sum_k S_lk sum_b W_lk(a,b) conj(h_b(k)); the gradient and the
    /// diagonal Hessian blocks both contract against it.
    std::array<cplx, 3> weighted_neighbor_sum(int l) const {
        std::array<cplx, 3> c{};
        for (SpMat::InnerIterator it(S_, l); it; ++it) {
            const int k = static_cast<int>(it.row());
            const Eigen::Matrix3cd* w = edge_weight(l, k);
            for (int a = 0; a < 3; ++a) {
                cplx term{};
                if (!w) {
                    term = std::conj(jets_[k].h[a]);
                } else {
                    for (int b = 0; b < 3; ++b)
                        term += (*w)(a, b) * std::conj(jets_[k].h[b]);
                }
                c[a] += it.value() * term;
            }
        }
        return c;
    }

    int nverts_;
    SpMat S_;
    std::vector<EulerAngles> states_;
    std::vector<std::array<bool, 3>> free_;
    std::vector<Dof> dofs_;
    std::vector<int> dof_index_;
    std::vector<HJet> jets_;
    bool jets_fresh_ = false;
    std::vector<Eigen::Matrix3cd> weights_;
    mutable Eigen::Matrix3cd scratch_;
};

/// Per-boundary-vertex (alpha, beta) derived from the averaged outward
/// vertex normals; interior slots stay empty.
inline std::vector<std::optional<std::pair<double, double>>>
derive_boundary_angles(const TetMesh& mesh) {
    std::vector<std::optional<std::pair<double, double>>> bc(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        if (!mesh.on_boundary[v]) continue;
        Vec3 n = mesh.vertex_normals[v];
        const double len = norm(n);
        if (len < 1e-12) {
            bc[v] = std::make_pair(0.0, 0.0);
            continue;
        }
        n = {n[0] / len, n[1] / len, n[2] / len};
        bc[v] = boundary_euler_angles(n);
    }
    return bc;
}

inline FrameField solve_collocation(
    const TetMesh& mesh,
    const std::vector<std::optional<std::pair<double, double>>>& bc,
    const SolveOptions& opt = {}) {
    CollocationProblem prob(mesh, bc);
    FrameField field;
    prob.minimize(opt, field);
    prob.fill_field(field);
    return field;
}

/// Lagged-coefficient minimization of the metric-weighted energy: the
/// component metric is recomputed from the current states between inner
/// Newton runs and held fixed inside them.
inline FrameField solve_metric(
    const TetMesh& mesh,
    const std::vector<std::optional<std::pair<double, double>>>& bc,
    const SolveOptions& opt = {}) {
    CollocationProblem prob(mesh, bc);
    FrameField field;
    const int nv = static_cast<int>(mesh.vertex_count());
    Eigen::VectorXd prev = prob.dof_vector();
    int iter_offset = 0;
    for (int outer = 0; outer < opt.outer_iterations; ++outer) {
        std::vector<Eigen::Matrix3cd> w(nv);
        for (int v = 0; v < nv; ++v)
            w[v] = opt.identity_metric ? Eigen::Matrix3cd::Identity()
                                       : component_metric(prob.su2_state(v));
        prob.set_weights(std::move(w));
        FrameField inner;
        prob.minimize(opt, inner, iter_offset);
        // gap of 2 marks the stage boundary: the objective changes with W
        iter_offset = inner.trace.back().iter + 2;
        field.trace.insert(field.trace.end(), inner.trace.begin(),
                           inner.trace.end());
        field.energy = inner.energy;
        field.converged = inner.converged;
        const Eigen::VectorXd cur = prob.dof_vector();
        const double change =
            cur.size() ? (cur - prev).cwiseAbs().maxCoeff() : 0.0;
        prev = cur;
        if (opt.identity_metric) break;  // weight never changes
        if (outer > 0 && change <= 1e-10 && field.converged) break;
    }
    prob.fill_field(field);
    return field;
}

}  // namespace fem
}  // namespace octaframe
