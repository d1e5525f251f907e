// Tetrahedral meshes: the MSH ASCII v2.2 subset reader/writer, derived
// boundary structure, and the generated fixtures used across the project.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "octaframe/quaternion.hpp"

namespace octaframe {

struct BoundaryTri {
    std::array<int, 3> v;
    Vec3 normal;  ///< outward unit normal
};

/// P1 discretization substrate. Boundary triangles and vertex classification
/// are always derived from the tets, never trusted from input files.
struct TetMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;
    std::vector<BoundaryTri> boundary_tris;
    std::vector<bool> on_boundary;
    std::vector<Vec3> vertex_normals;  ///< area-weighted, zero off-boundary

    std::size_t vertex_count() const { return vertices.size(); }
    int interior_count() const {
        int n = 0;
        for (bool b : on_boundary)
            if (!b) ++n;
        return n;
    }
};

inline double tet_volume(const TetMesh& mesh, const std::array<int, 4>& t) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const Vec3& d = mesh.vertices[t[3]];
    const Vec3 ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const Vec3 ac{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const Vec3 ad{d[0] - a[0], d[1] - a[1], d[2] - a[2]};
    return dot(ab, cross(ac, ad)) / 6.0;
}

/// Derives boundary triangles (faces owned by exactly one tet), outward
/// normals, vertex classification and averaged vertex normals. Throws on
/// inverted tets and on faces shared by more than two tets.
inline void finalize_mesh(TetMesh& mesh) {
    if (mesh.tets.empty())
        throw std::invalid_argument("mesh has no tetrahedra");
    for (std::size_t i = 0; i < mesh.tets.size(); ++i)
        if (tet_volume(mesh, mesh.tets[i]) <= 0.0)
            throw std::invalid_argument("inverted or degenerate tet #" +
                                        std::to_string(i));
    // Count face multiplicity over sorted vertex triples.
    std::map<std::array<int, 3>, std::pair<int, std::array<int, 4>>> faces;
    constexpr int kFace[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    for (const auto& t : mesh.tets) {
        for (const auto& f : kFace) {
            std::array<int, 3> key{t[f[0]], t[f[1]], t[f[2]]};
            std::sort(key.begin(), key.end());
            auto it = faces.find(key);
            if (it == faces.end())
                faces.emplace(key, std::make_pair(1, t));
            else if (++it->second.first > 2)
                throw std::invalid_argument("non-manifold face in mesh");
        }
    }
    mesh.boundary_tris.clear();
    mesh.on_boundary.assign(mesh.vertices.size(), false);
    mesh.vertex_normals.assign(mesh.vertices.size(), Vec3{0.0, 0.0, 0.0});
    for (const auto& [key, owner] : faces) {
        if (owner.first != 1) continue;
        const auto& t = owner.second;
        int opposite = -1;
        for (int vi : t)
            if (vi != key[0] && vi != key[1] && vi != key[2]) opposite = vi;
        const Vec3& a = mesh.vertices[key[0]];
        const Vec3& b = mesh.vertices[key[1]];
        const Vec3& c = mesh.vertices[key[2]];
        Vec3 n = cross({b[0] - a[0], b[1] - a[1], b[2] - a[2]},
                       {c[0] - a[0], c[1] - a[1], c[2] - a[2]});
        const Vec3& d = mesh.vertices[opposite];
        if (dot(n, {d[0] - a[0], d[1] - a[1], d[2] - a[2]}) > 0.0)
            n = {-n[0], -n[1], -n[2]};
        const double area2 = norm(n);  // twice the area, used as the weight
        const Vec3 unit{n[0] / area2, n[1] / area2, n[2] / area2};
        mesh.boundary_tris.push_back({key, unit});
        for (int vi : key) {
            mesh.on_boundary[vi] = true;
            for (int d3 = 0; d3 < 3; ++d3) mesh.vertex_normals[vi][d3] += n[d3];
        }
    }
    for (std::size_t vi = 0; vi < mesh.vertices.size(); ++vi) {
        if (!mesh.on_boundary[vi]) continue;
        const double len = norm(mesh.vertex_normals[vi]);
        if (len > 1e-12)
            for (int d3 = 0; d3 < 3; ++d3) mesh.vertex_normals[vi][d3] /= len;
    }
}

namespace detail {

struct MshCursor {
    std::istream& in;
    int line = 0;
    std::string next_line() {
        std::string s;
        if (!std::getline(in, s))
            throw std::runtime_error("msh parse error at line " +
                                     std::to_string(line + 1) +
                                     ": unexpected end of file");
        ++line;
        return s;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("msh parse error at line " +
                                 std::to_string(line) + ": " + msg);
    }
};

}  // namespace detail

/// Reads the MSH ASCII v2.2 subset: $MeshFormat "2.2 0 8", $Nodes, and
/// $Elements with types 2 (triangle, ignored; the boundary is re-derived)
/// and 4 (tetrahedron). Unknown sections and element types are skipped.
inline TetMesh load_msh22(std::istream& in) {
    detail::MshCursor cur{in};
    TetMesh mesh;
    std::map<long long, int> node_index;
    bool saw_format = false, saw_nodes = false, saw_elements = false;
    std::string line;
    while (std::getline(cur.in, line)) {
        ++cur.line;
        if (line.empty() || line[0] != '$') continue;
        if (line.rfind("$End", 0) == 0) continue;
        const std::string section = line;
        if (section == "$MeshFormat") {
            std::istringstream hs(cur.next_line());
            double version = 0.0;
            int file_type = -1, data_size = -1;
            hs >> version >> file_type >> data_size;
            if (!hs || std::abs(version - 2.2) > 1e-9 || file_type != 0)
                cur.fail("expected ASCII format header '2.2 0 8'");
            saw_format = true;
        } else if (section == "$Nodes") {
            std::istringstream cs(cur.next_line());
            long long count = -1;
            cs >> count;
            if (!cs || count < 0) cur.fail("bad node count");
            for (long long k = 0; k < count; ++k) {
                std::istringstream ns(cur.next_line());
                long long id;
                double x, y, z;
                ns >> id >> x >> y >> z;
                if (!ns) cur.fail("bad node line");
                node_index[id] = static_cast<int>(mesh.vertices.size());
                mesh.vertices.push_back({x, y, z});
            }
            saw_nodes = true;
        } else if (section == "$Elements") {
            if (!saw_nodes) cur.fail("$Elements before $Nodes");
            std::istringstream cs(cur.next_line());
            long long count = -1;
            cs >> count;
            if (!cs || count < 0) cur.fail("bad element count");
            for (long long k = 0; k < count; ++k) {
                std::istringstream es(cur.next_line());
                long long id;
                int type, ntags;
                es >> id >> type >> ntags;
                if (!es) cur.fail("bad element line");
                long long tag;
                for (int t = 0; t < ntags; ++t) es >> tag;
                const int nodes_needed = type == 4 ? 4 : (type == 2 ? 3 : 0);
                if (nodes_needed == 0) continue;  // skip other element types
                std::array<int, 4> conn{0, 0, 0, 0};
                for (int t = 0; t < nodes_needed; ++t) {
                    long long nid;
                    es >> nid;
                    if (!es) cur.fail("truncated element connectivity");
                    auto it = node_index.find(nid);
                    if (it == node_index.end()) cur.fail("unknown node id");
                    conn[t] = it->second;
                }
                if (type == 4) mesh.tets.push_back(conn);
            }
            saw_elements = true;
        }
        // other sections: fall through, their lines are skipped by the
        // leading-'$' filter above
    }
    if (!saw_format) throw std::runtime_error("msh parse error: missing $MeshFormat");
    if (!saw_nodes) throw std::runtime_error("msh parse error: missing $Nodes");
    if (!saw_elements)
        throw std::runtime_error("msh parse error: missing $Elements");
    finalize_mesh(mesh);
    return mesh;
}

inline TetMesh load_msh22(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    return load_msh22(in);
}

inline void write_msh22(const TetMesh& mesh, std::ostream& out) {
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n"
        << mesh.vertices.size() << "\n";
    char buf[160];
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        std::snprintf(buf, sizeof buf, "%zu %.17g %.17g %.17g\n", i + 1, v[0],
                      v[1], v[2]);
        out << buf;
    }
    out << "$EndNodes\n$Elements\n" << mesh.tets.size() << "\n";
    for (std::size_t i = 0; i < mesh.tets.size(); ++i) {
        const auto& t = mesh.tets[i];
        out << (i + 1) << " 4 0 " << (t[0] + 1) << ' ' << (t[1] + 1) << ' '
            << (t[2] + 1) << ' ' << (t[3] + 1) << "\n";
    }
    out << "$EndElements\n";
}

inline void write_msh22(const TetMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write mesh file: " + path);
    write_msh22(mesh, out);
}

// ---------------------------------------------------------------------------
// Generated fixtures

inline TetMesh make_single_tet() {
    TetMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.tets = {{0, 1, 2, 3}};
    finalize_mesh(m);
    return m;
}

inline TetMesh make_two_tets() {
    TetMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    m.tets = {{0, 1, 2, 3}, {1, 2, 3, 4}};
    if (tet_volume(m, m.tets[1]) < 0.0) std::swap(m.tets[1][0], m.tets[1][1]);
    finalize_mesh(m);
    return m;
}

/// nx x ny x nz axis-aligned grid of unit cells, each split into the six
/// Kuhn tets around the main diagonal; face diagonals match between
/// neighboring cells. Optional interior jitter keeps volumes positive for
/// amplitudes below ~0.25 of the cell size.
inline TetMesh make_box_grid(int nx, int ny, int nz, double cell = 1.0,
                             double jitter = 0.0, std::uint64_t seed = 0) {
    TetMesh m;
    auto vid = [&](int x, int y, int z) {
        return (z * (ny + 1) + y) * (nx + 1) + x;
    };
    for (int z = 0; z <= nz; ++z)
        for (int y = 0; y <= ny; ++y)
            for (int x = 0; x <= nx; ++x)
                m.vertices.push_back({cell * x, cell * y, cell * z});
    if (jitter > 0.0) {
        std::mt19937_64 eng(seed);
        auto u = [&] {
            return (std::ldexp(static_cast<double>(eng() >> 11), -53) - 0.5) *
                   2.0 * jitter * cell;
        };
        for (int z = 1; z < nz; ++z)
            for (int y = 1; y < ny; ++y)
                for (int x = 1; x < nx; ++x) {
                    Vec3& v = m.vertices[vid(x, y, z)];
                    v = {v[0] + u(), v[1] + u(), v[2] + u()};
                }
    }
    // Kuhn subdivision: tets follow the permutations of the path 000 -> 111.
    constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                for (const auto& perm : kPerm) {
                    std::array<int, 3> corner{x, y, z};
                    std::array<int, 4> tet;
                    tet[0] = vid(corner[0], corner[1], corner[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++corner[perm[s]];
                        tet[s + 1] = vid(corner[0], corner[1], corner[2]);
                    }
                    if (tet_volume(m, tet) < 0.0) std::swap(tet[1], tet[2]);
                    m.tets.push_back(tet);
                }
    finalize_mesh(m);
    return m;
}

inline TetMesh make_unit_box() { return make_box_grid(1, 1, 1); }

/// Solid torus: a triangulated square cross-section swept around a loop of
/// `segments` stations; each prism splits into three tets with quad-face
/// diagonals through the smallest global index, which is always consistent.
inline TetMesh make_solid_torus(int segments = 12, double major = 2.0,
                                double minor = 0.5) {
    if (segments < 3) throw std::invalid_argument("torus needs >= 3 segments");
    TetMesh m;
    // Square cross-section corners in the (radial, vertical) plane.
    const double c[4][2] = {{-minor, -minor}, {minor, -minor},
                            {minor, minor},  {-minor, minor}};
    for (int s = 0; s < segments; ++s) {
        const double phi = 2.0 * std::numbers::pi * s / segments;
        for (const auto& cc : c)
            m.vertices.push_back({(major + cc[0]) * std::cos(phi),
                                  (major + cc[0]) * std::sin(phi), cc[1]});
    }
    auto vid = [&](int station, int corner) {
        return 4 * (station % segments) + corner;
    };
    auto add_prism = [&](std::array<int, 3> bot, std::array<int, 3> top) {
        // Every quad face is cut along the diagonal through its smallest
        // global index, so neighboring prisms always agree. Bring the prism
        // minimum to bot[0]; its two quad faces then cut through it.
        int where = 0;
        bool flip = false;
        int best = bot[0];
        for (int i = 0; i < 3; ++i) {
            if (bot[i] < best) { best = bot[i]; where = i; flip = false; }
            if (top[i] < best) { best = top[i]; where = i; flip = true; }
        }
        if (flip) std::swap(bot, top);
        const std::array<int, 3> b{bot[where], bot[(where + 1) % 3],
                                   bot[(where + 2) % 3]};
        const std::array<int, 3> t{top[where], top[(where + 1) % 3],
                                   top[(where + 2) % 3]};
        auto push = [&](int p0, int p1, int p2, int p3) {
            std::array<int, 4> tet{p0, p1, p2, p3};
            if (tet_volume(m, tet) < 0.0) std::swap(tet[1], tet[2]);
            m.tets.push_back(tet);
        };
        if (std::min(b[1], t[2]) < std::min(b[2], t[1])) {
            push(b[0], b[1], b[2], t[2]);
            push(b[0], b[1], t[2], t[1]);
            push(b[0], t[1], t[2], t[0]);
        } else {
            push(b[0], b[1], b[2], t[1]);
            push(b[0], t[1], b[2], t[2]);
            push(b[0], t[1], t[2], t[0]);
        }
    };
    for (int s = 0; s < segments; ++s) {
        const std::array<int, 4> bot{vid(s, 0), vid(s, 1), vid(s, 2), vid(s, 3)};
        const std::array<int, 4> top{vid(s + 1, 0), vid(s + 1, 1), vid(s + 1, 2),
                                     vid(s + 1, 3)};
        // Cross-section square split along the 0-2 diagonal.
        add_prism({bot[0], bot[1], bot[2]}, {top[0], top[1], top[2]});
        add_prism({bot[0], bot[2], bot[3]}, {top[0], top[2], top[3]});
    }
    finalize_mesh(m);
    return m;
}

}  // namespace octaframe
