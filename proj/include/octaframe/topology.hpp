// Euler-characteristic arithmetic for cell complexes and the counting
// identities of regular hexahedrizations. All integer, no floating point.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "octaframe/mesh.hpp"

namespace octaframe {
namespace topo {

using count_t = long long;

/// Cell counts of a 3-complex; boundary counts and the singular-loop data
/// (k loops of L edges each) are optional extras for the hex identities.
struct CellComplexCounts {
    count_t N = 0;    ///< vertices
    count_t N_E = 0;  ///< edges
    count_t N_F = 0;  ///< facets
    count_t N_C = 0;  ///< cells
    count_t n = 0;    ///< boundary vertices
    count_t n_e = 0;  ///< boundary edges
    count_t n_f = 0;  ///< boundary facets
    count_t k = 0;    ///< inner singular loops
    count_t L = 0;    ///< edges per loop
};

inline count_t euler_3d(const CellComplexCounts& c) {
    if (c.N < 0 || c.N_E < 0 || c.N_F < 0 || c.N_C < 0)
        throw std::invalid_argument("euler_3d: negative counts");
    if (c.n > c.N || c.n_e > c.N_E || c.n_f > c.N_F)
        throw std::invalid_argument("euler_3d: boundary counts exceed volume counts");
    return c.N - c.N_E + c.N_F - c.N_C;
}

namespace detail {

inline std::set<std::array<int, 2>> tet_edges(const TetMesh& mesh) {
    std::set<std::array<int, 2>> edges;
    for (const auto& t : mesh.tets)
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                edges.insert({std::min(t[a], t[b]), std::max(t[a], t[b])});
    return edges;
}

inline std::map<std::array<int, 3>, int> tet_faces(const TetMesh& mesh) {
    std::map<std::array<int, 3>, int> faces;
    constexpr int kFace[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    for (const auto& t : mesh.tets)
        for (const auto& f : kFace) {
            std::array<int, 3> key{t[f[0]], t[f[1]], t[f[2]]};
            std::sort(key.begin(), key.end());
            ++faces[key];
        }
    return faces;
}

}  // namespace detail

/// Counts derived from the tets alone; edges and faces are enumerated by
/// deduplicating sorted vertex tuples, independent of any file content.
inline CellComplexCounts derive_counts(const TetMesh& mesh) {
    CellComplexCounts c;
    std::set<int> used;
    for (const auto& t : mesh.tets) used.insert(t.begin(), t.end());
    c.N = static_cast<count_t>(used.size());
    const auto edges = detail::tet_edges(mesh);
    const auto faces = detail::tet_faces(mesh);
    c.N_E = static_cast<count_t>(edges.size());
    c.N_F = static_cast<count_t>(faces.size());
    c.N_C = static_cast<count_t>(mesh.tets.size());

    std::set<int> bverts;
    std::set<std::array<int, 2>> bedges;
    for (const auto& [key, mult] : faces) {
        if (mult > 2) throw std::invalid_argument("non-manifold face");
        if (mult != 1) continue;
        ++c.n_f;
        for (int i = 0; i < 3; ++i) {
            bverts.insert(key[i]);
            const int a = key[i], b = key[(i + 1) % 3];
            bedges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    c.n = static_cast<count_t>(bverts.size());
    c.n_e = static_cast<count_t>(bedges.size());
    return c;
}

inline count_t euler_3d(const TetMesh& mesh) { return euler_3d(derive_counts(mesh)); }

struct BoundaryRelation {
    count_t chi_volume = 0;
    count_t chi_boundary = 0;
    bool consistent = false;  ///< chi(R) == chi(boundary R) / 2
};

/// Checks chi(R) = chi(dR)/2 with the boundary complex re-derived from the
/// faces owned by exactly one tet. Throws on non-manifold boundaries (an
/// edge of the boundary complex must sit in exactly two boundary faces).
inline BoundaryRelation boundary_euler_relation(const TetMesh& mesh) {
    const CellComplexCounts c = derive_counts(mesh);
    // Manifoldness of the boundary: every boundary edge in two boundary faces.
    std::map<std::array<int, 2>, int> edge_mult;
    for (const auto& [key, mult] : detail::tet_faces(mesh)) {
        if (mult != 1) continue;
        for (int i = 0; i < 3; ++i) {
            const int a = key[i], b = key[(i + 1) % 3];
            ++edge_mult[{std::min(a, b), std::max(a, b)}];
        }
    }
    for (const auto& [e, mult] : edge_mult)
        if (mult != 2)
            throw std::invalid_argument("non-manifold boundary edge");
    BoundaryRelation rel;
    rel.chi_volume = euler_3d(c);
    rel.chi_boundary = c.n - c.n_e + c.n_f;
    rel.consistent = 2 * rel.chi_volume == rel.chi_boundary;
    return rel;
}

struct HexRegularity {
    count_t chi_times_8 = 0;      ///< 8 chi with the identities substituted
    bool regular_consistent = false;
};

/// Substitutes the regular-hexahedrization incidence identities
///   8 N_V = 8(N - n - kL) + 4n + 6kL
///   2 N_E = 6(N - n - kL) + 5n + 5kL
///   4 N_F = 12(N - n - kL) + 8n + 9kL
/// (k = L = 0 recovers the loop-free identities) into the alternating sum,
/// kept x8 so everything stays in exact integers. N_V is the hexahedron
/// count N_C. regular_consistent additionally requires provided N_E/N_F/N_C
/// to satisfy the identities exactly and the substituted 8 chi to vanish.
inline HexRegularity hex_regularity_check(const CellComplexCounts& c,
                                          bool counts_provided = true) {
    if (c.N < 0 || c.n < 0 || c.k < 0 || c.L < 0 || c.n > c.N ||
        c.k * c.L > c.N - c.n)
        throw std::invalid_argument("hex_regularity_check: invalid counts");
    const count_t kl = c.k * c.L;
    const count_t inner = c.N - c.n - kl;
    const count_t nv8 = 8 * inner + 4 * c.n + 6 * kl;   // = 8 N_V
    const count_t ne2 = 6 * inner + 5 * c.n + 5 * kl;   // = 2 N_E
    const count_t nf4 = 12 * inner + 8 * c.n + 9 * kl;  // = 4 N_F
    HexRegularity out;
    out.chi_times_8 = 8 * c.N - 4 * ne2 + 2 * nf4 - nv8;
    out.regular_consistent = out.chi_times_8 == 0;
    if (counts_provided)
        out.regular_consistent = out.regular_consistent &&
                                 2 * c.N_E == ne2 && 4 * c.N_F == nf4 &&
                                 8 * c.N_C == nv8;
    return out;
}

/// Hexahedral cells as 8-tuples ordered like a Gmsh hexahedron: bottom quad
/// 0-1-2-3, top quad 4-5-6-7 stacked above it.
struct HexMesh {
    count_t vertex_count = 0;
    std::vector<std::array<int, 8>> cells;
};

/// Derives full complex counts from explicit hexahedra (quad faces and edges
/// deduplicated by sorted tuples; boundary = quad faces used once).
inline CellComplexCounts derive_counts(const HexMesh& mesh) {
    constexpr int kEdge[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                  {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                  {0, 4}, {1, 5}, {2, 6}, {3, 7}};
    constexpr int kQuad[6][4] = {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                 {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
    std::set<std::array<int, 2>> edges;
    std::map<std::array<int, 4>, int> faces;
    std::set<int> used;
    for (const auto& cell : mesh.cells) {
        used.insert(cell.begin(), cell.end());
        for (const auto& e : kEdge)
            edges.insert({std::min(cell[e[0]], cell[e[1]]),
                          std::max(cell[e[0]], cell[e[1]])});
        for (const auto& f : kQuad) {
            std::array<int, 4> key{cell[f[0]], cell[f[1]], cell[f[2]],
                                   cell[f[3]]};
            std::sort(key.begin(), key.end());
            ++faces[key];
        }
    }
    CellComplexCounts c;
    c.N = static_cast<count_t>(used.size());
    c.N_E = static_cast<count_t>(edges.size());
    c.N_F = static_cast<count_t>(faces.size());
    c.N_C = static_cast<count_t>(mesh.cells.size());
    std::set<int> bverts;
    for (const auto& [key, mult] : faces)
        if (mult == 1) {
            ++c.n_f;
            bverts.insert(key.begin(), key.end());
        }
    c.n = static_cast<count_t>(bverts.size());
    return c;
}

/// Fully periodic n x n x n hex grid (a 3-torus): N = N_C = n^3 and
/// N_E = N_F = 3 n^3, with no boundary. n >= 3 keeps distinct torus edges on
/// distinct vertex pairs.
inline HexMesh make_periodic_hex_grid(int n) {
    if (n < 3) throw std::invalid_argument("periodic grid needs n >= 3");
    HexMesh mesh;
    mesh.vertex_count = static_cast<count_t>(n) * n * n;
    auto vid = [&](int x, int y, int z) {
        return ((z % n) * n + (y % n)) * n + (x % n);
    };
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                mesh.cells.push_back({vid(x, y, z), vid(x + 1, y, z),
                                      vid(x + 1, y + 1, z), vid(x, y + 1, z),
                                      vid(x, y, z + 1), vid(x + 1, y, z + 1),
                                      vid(x + 1, y + 1, z + 1),
                                      vid(x, y + 1, z + 1)});
    return mesh;
}

}  // namespace topo
}  // namespace octaframe
