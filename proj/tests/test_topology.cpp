#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "octaframe/mesh.hpp"
#include "octaframe/topology.hpp"

using namespace octaframe;
using namespace octaframe::topo;

TEST_CASE("euler characteristic of balls", "[topo]") {
    CHECK(euler_3d(make_single_tet()) == 1);
    CHECK(euler_3d(make_two_tets()) == 1);
    CHECK(euler_3d(make_unit_box()) == 1);
    CHECK(euler_3d(make_box_grid(3, 2, 2)) == 1);
    // explicit counts for the shared-face pair: N=5, E=9, F=7, C=2
    const auto counts = derive_counts(make_two_tets());
    CHECK(counts.N == 5);
    CHECK(counts.N_E == 9);
    CHECK(counts.N_F == 7);
    CHECK(counts.N_C == 2);
}

TEST_CASE("euler characteristic from counts validates input", "[topo]") {
    CellComplexCounts c;
    c.N = 4;
    c.N_E = 6;
    c.N_F = 4;
    c.N_C = 1;
    CHECK(euler_3d(c) == 1);
    c.n = 10;  // boundary exceeding volume counts
    CHECK_THROWS_AS(euler_3d(c), std::invalid_argument);
}

TEST_CASE("solid torus has chi zero", "[topo]") {
    const TetMesh torus = make_solid_torus(16);
    CHECK(euler_3d(torus) == 0);
    const auto rel = boundary_euler_relation(torus);
    CHECK(rel.chi_volume == 0);
    CHECK(rel.chi_boundary == 0);
    CHECK(rel.consistent);
}

TEST_CASE("boundary relation chi(R) = chi(dR)/2", "[topo]") {
    for (const TetMesh& mesh :
         {make_single_tet(), make_two_tets(), make_unit_box(),
          make_box_grid(2, 3, 4), make_solid_torus(8), make_solid_torus(23)}) {
        const auto rel = boundary_euler_relation(mesh);
        CHECK(rel.consistent);
        CHECK(2 * rel.chi_volume == rel.chi_boundary);
    }
    const auto rel = boundary_euler_relation(make_single_tet());
    CHECK(rel.chi_volume == 1);
    CHECK(rel.chi_boundary == 2);
}

TEST_CASE("edge/face extraction is self-consistent on random meshes", "[topo]") {
    // random sub-complexes of a structured grid, re-counted independently
    std::mt19937_64 eng(12345);
    const TetMesh grid = make_box_grid(3, 3, 3);
    for (int rep = 0; rep < 100; ++rep) {
        TetMesh sub;
        sub.vertices = grid.vertices;
        for (const auto& t : grid.tets)
            if ((eng() & 3u) != 0u) sub.tets.push_back(t);  // keep ~3/4
        if (sub.tets.empty()) continue;
        const auto counts = derive_counts(sub);
        // independent re-enumeration with plain sorted vectors
        std::vector<std::array<int, 2>> edges;
        std::vector<std::array<int, 3>> faces;
        for (const auto& t : sub.tets) {
            const int idx[4] = {t[0], t[1], t[2], t[3]};
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    edges.push_back({std::min(idx[a], idx[b]),
                                     std::max(idx[a], idx[b])});
                    for (int c = b + 1; c < 4; ++c) {
                        std::array<int, 3> f{idx[a], idx[b], idx[c]};
                        std::sort(f.begin(), f.end());
                        faces.push_back(f);
                    }
                }
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        std::sort(faces.begin(), faces.end());
        faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
        CHECK(counts.N_E == static_cast<count_t>(edges.size()));
        CHECK(counts.N_F == static_cast<count_t>(faces.size()));
        CHECK(euler_3d(sub) == counts.N - counts.N_E + counts.N_F - counts.N_C);
    }
}

TEST_CASE("hex regularity identities cancel exactly", "[topo]") {
    // Substitution of the incidence identities into the alternating sum gives
    // 8 chi = 0 identically, with and without singular loops.
    for (count_t N : {8, 27, 1000, 123456}) {
        for (count_t n : {0, 2, 10, 26}) {
            for (count_t k : {0, 1, 3}) {
                for (count_t L : {0, 4, 7}) {
                    if (k * L > N - n) continue;
                    CellComplexCounts c;
                    c.N = N;
                    c.n = n;
                    c.k = k;
                    c.L = L;
                    const auto out = hex_regularity_check(c, false);
                    CHECK(out.chi_times_8 == 0);
                    CHECK(out.regular_consistent);
                }
            }
        }
    }
}

TEST_CASE("periodic hex grid satisfies the loop-free identities", "[topo]") {
    for (int n : {3, 4, 5}) {
        const HexMesh grid = make_periodic_hex_grid(n);
        CellComplexCounts c = derive_counts(grid);
        const count_t n3 = static_cast<count_t>(n) * n * n;
        CHECK(c.N == n3);
        CHECK(c.N_E == 3 * n3);
        CHECK(c.N_F == 3 * n3);
        CHECK(c.N_C == n3);
        CHECK(c.n == 0);
        CHECK(euler_3d(c) == 0);
        const auto out = hex_regularity_check(c, true);
        CHECK(out.chi_times_8 == 0);
        CHECK(out.regular_consistent);

        // the same grid reinterpreted with one singular loop of L = n edges
        c.k = 1;
        c.L = n;
        const auto loop = hex_regularity_check(c, false);
        CHECK(loop.chi_times_8 == 0);
    }
}

TEST_CASE("violated identities are flagged, not an error", "[topo]") {
    CellComplexCounts c;
    c.N = 27;
    c.N_E = 80;  // a regular ball grid would need 2 N_E = 6(N-n) + 5n
    c.N_F = 81;
    c.N_C = 27;
    c.n = 26;
    const auto out = hex_regularity_check(c, true);
    CHECK_FALSE(out.regular_consistent);
}
