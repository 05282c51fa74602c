// Regenerates the shipped triangulations in data/.
#include <cmath>
#include <cstdio>
#include <string>

#include "hypstruct/angles.hpp"
#include "hypstruct/twobridge.hpp"

using namespace hyp;

namespace {

Triangulation figure8() {
    // SnapPea census m004
    Triangulation t;
    t.name = "figure8";
    t.tets.resize(2);
    const Perm p0[4] = {{0, 1, 3, 2}, {1, 2, 3, 0}, {2, 3, 1, 0}, {2, 1, 0, 3}};
    const Perm p1[4] = {{0, 1, 3, 2}, {3, 2, 0, 1}, {3, 0, 1, 2}, {2, 1, 0, 3}};
    for (int f = 0; f < 4; ++f) {
        t.tets[0].gluings[f] = {1, p0[f]};
        t.tets[1].gluings[f] = {0, p1[f]};
    }
    // meridian and longitude carried over from the 2-bridge build
    const auto tb = build(CFCode{{2, 2}});
    const auto iso = find_isomorphism(tb.tri, t);
    if (!iso) throw std::runtime_error("figure-8 census data does not match K[2,2]");
    const auto cs = cusps(t);
    for (const auto& pc : tb.tri.peripheral) {
        PeripheralCurves q;
        q.meridian = transport(*iso, pc.meridian, cs);
        q.longitude = transport(*iso, pc.longitude, cs);
        q.cusp = q.meridian.cusp;
        t.peripheral.push_back(q);
    }
    return t;
}

Triangulation flattened(const Triangulation& oct) {
    // 2-3 move across a face one of whose edges has dihedral sum pi in the
    // two adjacent tets at the complete structure: one new tet is flat.
    const auto pol = polytope(oct);
    const auto mx = maximize(feasible_point(pol), pol);
    for (int a = 0; a < oct.size(); ++a) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = oct.tets[a].gluings[f];
            if (g.tet == a) continue;
            for (int x = 0; x < 4; ++x) {
                for (int y = x + 1; y < 4; ++y) {
                    if (x == f || y == f) continue;
                    const double s = mx.point[3 * a + angle_slot(edge_index(x, y))] +
                                     mx.point[3 * g.tet + angle_slot(edge_index(g.perm[x], g.perm[y]))];
                    if (std::abs(s - kPi) > 1e-9) continue;
                    auto moved = two_three_move(oct, a, f);
                    if (!moved) continue;
                    Triangulation out = oriented(*moved);
                    out.name = "whitehead-flat";
                    return out;
                }
            }
        }
    }
    throw std::runtime_error("no face with a straight edge");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    const auto f8 = figure8();
    save(f8, dir + "/figure8.tri");
    auto oct = build(CFCode{{2, 1, 2}}).tri;
    oct.name = "whitehead-octahedron";
    save(oct, dir + "/octahedron.tri");
    save(flattened(oct), dir + "/whitehead_flat.tri");
    std::printf("wrote fixtures to %s\n", dir.c_str());
}
