#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypstruct/common.hpp"

namespace hyp {

using Perm = std::array<int, 4>;

Perm perm_inverse(const Perm& p);
// (a * b)[i] = a[b[i]]
Perm perm_compose(const Perm& a, const Perm& b);
// 0 even, 1 odd
int perm_parity(const Perm& p);
bool perm_valid(const Perm& p);

// Edges 0..5 are 01,02,03,12,13,23; the opposite of e is 5-e.
int edge_index(int a, int b);
std::pair<int, int> edge_vertices(int e);
// 0 for 01/23, 1 for 02/13, 2 for 03/12
int angle_slot(int e);

// Which companion invariant sits on an edge: 01/23 carry z, 02/13 carry
// z'' = (z-1)/z, 03/12 carry z' = 1/(1-z).
enum class Companion { Z, ZPrime, ZDoublePrime };
Companion edge_companion(int e);

struct Gluing {
    int tet = -1;
    Perm perm{0, 1, 2, 3};
};

struct Tetrahedron {
    std::array<Gluing, 4> gluings;
};

// One triangle visited by a normal curve: the corner triangle at `vertex` of
// `tet`, the corner cut off, and eps = +1 when that corner is on the left.
struct CurveStep {
    int tet = 0;
    int vertex = 0;
    int corner = 0;
    int eps = 1;
    bool operator==(const CurveStep&) const = default;
};

struct NormalCurve {
    int cusp = 0;
    std::vector<CurveStep> steps;
};

struct PeripheralCurves {
    int cusp = 0;
    NormalCurve meridian;
    NormalCurve longitude;
};

struct Triangulation {
    std::string name;
    std::vector<Tetrahedron> tets;
    std::vector<PeripheralCurves> peripheral;

    int size() const { return static_cast<int>(tets.size()); }
};

std::vector<std::string> validate(const Triangulation& t);
bool is_orientable(const Triangulation& t);

struct EdgeSide {
    int tet = 0;
    int edge = 0;
    int sign = 1;
};

struct EdgeClass {
    int id = 0;
    std::vector<EdgeSide> sides;
    int valence() const { return static_cast<int>(sides.size()); }
};

std::vector<EdgeClass> edge_classes(const Triangulation& t);
// [tet][edge] -> class id
std::vector<std::array<int, 6>> edge_class_table(const std::vector<EdgeClass>& classes, int ntets);

struct CornerTriangle {
    int tet = 0;
    int vertex = 0;
};

// Sides and corners of a corner triangle are both indexed by the tet vertex
// label w != vertex: corner w sits on edge (vertex, w) and the side opposite
// corner w lies on face w.
struct CuspTriangulation {
    int id = 0;
    std::vector<CornerTriangle> triangles;
    std::vector<std::array<int, 4>> nbr;
    std::vector<std::array<int, 4>> nbr_side;
    // vertex relabelling across side w (the face gluing permutation)
    std::vector<std::array<Perm, 4>> nbr_perm;
    std::vector<std::array<int, 4>> corner_edge;
    std::vector<std::array<int, 4>> corner_vertex;
    // primal edge id of each side; sides glued together share an id
    std::vector<std::array<int, 4>> side_edge;
    int num_vertices = 0;
    int num_edges = 0;
    // 4 * tet + vertex -> local triangle index, -1 when on another cusp
    std::vector<int> index_of;

    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int euler_characteristic() const { return num_vertices - num_edges + num_triangles(); }
    int local_index(int tet, int vertex) const;
};

// Also reports cusps with chi != 0 unless require_torus is set, in which case
// CuspNotTorus is thrown.
std::vector<CuspTriangulation> cusps(const Triangulation& t, bool require_torus = true);

// Counter-clockwise (viewed from the cusp) order of corners in the corner
// triangle at vertex v.
int ccw_next(int v, int w);
int ccw_prev(int v, int w);

// Step entering through face in_face and leaving through face out_face.
CurveStep make_step(int tet, int vertex, int in_face, int out_face);
int step_in_face(const CurveStep& s);
int step_out_face(const CurveStep& s);

std::vector<std::string> validate_curve(const Triangulation& t, const CuspTriangulation& c,
                                        const NormalCurve& curve);
NormalCurve reversed(const NormalCurve& curve);

// A closed walk in the dual graph of a cusp: crossing k leaves triangle
// tri[k] through side out[k]; the next triangle is its neighbour.
struct DualWalk {
    std::vector<int> tri;
    std::vector<int> out;
};

DualWalk walk_of(const CuspTriangulation& c, const NormalCurve& curve);
// Cancels immediate backtracks cyclically; may return an empty walk.
DualWalk reduce(const CuspTriangulation& c, DualWalk w);
NormalCurve curve_of(const CuspTriangulation& c, const DualWalk& w);
DualWalk concat(const DualWalk& a, const DualWalk& b);
DualWalk inverse(const CuspTriangulation& c, const DualWalk& w);

// Closed path along cusp edges. Edge k is side side[k] of triangle tri[k],
// traversed in the counter-clockwise direction of that triangle.
struct PrimalPath {
    std::vector<int> tri;
    std::vector<int> side;
};

PrimalPath reduce(const CuspTriangulation& c, PrimalPath p);
// Normal curve running parallel to p on its left.
NormalCurve push_off(const CuspTriangulation& c, const PrimalPath& p);
// Signed count of crossings of the walk over the path.
int intersection(const CuspTriangulation& c, const DualWalk& w, const PrimalPath& p);

// Homology of a torus cusp from a tree/cotree decomposition.
class CuspHomology {
public:
    explicit CuspHomology(const CuspTriangulation& c);

    // Generators from the dual spanning tree; intersection a.b = +1.
    const NormalCurve& a() const { return a_; }
    const NormalCurve& b() const { return b_; }
    const DualWalk& a_walk() const { return aw_; }
    const DualWalk& b_walk() const { return bw_; }

    // Coordinates (x, y) with [curve] = x [a] + y [b].
    std::array<long, 2> coords(const NormalCurve& curve) const;
    std::array<long, 2> coords(const DualWalk& w) const;
    std::array<long, 2> coords(const PrimalPath& p) const;
    long intersection(const NormalCurve& u, const NormalCurve& v) const;
    // Turning number of the curve in the Euclidean structure of the torus.
    long turning(const NormalCurve& curve) const;
    // Closed walk representing x a + y b.
    DualWalk walk(long x, long y) const;

private:
    const CuspTriangulation* c_;
    DualWalk aw_, bw_;
    NormalCurve a_, b_;
    PrimalPath q_[2];
    int qsign_[2] = {1, 1};
    std::vector<double> flat_angle_;  // per (triangle, corner)
};

std::pair<NormalCurve, NormalCurve> peripheral_basis(const CuspTriangulation& c);

// First homology of the manifold: invariant factors (>1) and free rank.
struct ManifoldHomology {
    std::vector<long> torsion;
    int rank = 0;
};
ManifoldHomology homology(const Triangulation& t);
// Image of a cusp curve in the free part of H_1 (coordinates w.r.t. a fixed
// but arbitrary basis of the free part).
std::vector<long> homology_image(const Triangulation& t, const NormalCurve& curve);
std::vector<std::vector<long>> homology_images(const Triangulation& t,
                                               const std::vector<NormalCurve>& curves);

// Relabel tetrahedra so every gluing reverses orientation. Peripheral curves
// are carried along. Throws ValidationError when not orientable.
Triangulation oriented(const Triangulation& t);
Triangulation mirrored(const Triangulation& t);
// Per-tet relabelling used by oriented(): identity or the swap of 0 and 1.
std::vector<Perm> orienting_relabel(const Triangulation& t);
// Vertex v of tet i becomes sigma[i][v]; curves are carried along.
Triangulation relabeled(const Triangulation& t, const std::vector<Perm>& sigma);

// Combinatorial isomorphism a -> b: tet map and per-tet vertex relabelling.
struct Isomorphism {
    std::vector<int> tet;
    std::vector<Perm> perm;
};
std::optional<Isomorphism> find_isomorphism(const Triangulation& a, const Triangulation& b,
                                            bool orientation_preserving = true);
NormalCurve transport(const Isomorphism& iso, const NormalCurve& curve,
                      const std::vector<CuspTriangulation>& target_cusps);

// Peripheral curves with longitude chosen homologically: lambda has zero
// coefficient on its own meridian in H_1(M; Q) and meets mu once.
std::vector<PeripheralCurves> standard_peripheral(const Triangulation& t,
                                                  const std::vector<NormalCurve>& meridians);

Triangulation parse(const std::string& text);
std::string serialize(const Triangulation& t);
Triangulation load(const std::string& path);
void save(const Triangulation& t, const std::string& path);

// 2-3 move across face `face` of tet `tet`; nullopt when the face is glued
// to the same tet. The two old tets are removed and three new ones appended.
// Peripheral curves are dropped.
std::optional<Triangulation> two_three_move(const Triangulation& t, int tet, int face);

// Disjoint union (used for multi-cusp fixtures in tests).
Triangulation disjoint_union(const Triangulation& a, const Triangulation& b);

std::string cusp_svg(const Triangulation& t, const CuspTriangulation& c,
                     const std::vector<cplx>* shapes = nullptr);

}  // namespace hyp
