#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hypstruct/shapes.hpp"
#include "hypstruct/triangulation.hpp"
#include "hypstruct/twobridge.hpp"

using namespace hyp;

namespace {

std::string data(const std::string& name) { return std::string(HYPSTRUCT_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Perm, ComposeInverseParity) {
    const Perm p{1, 2, 3, 0}, q{0, 1, 3, 2};
    EXPECT_EQ(perm_compose(p, perm_inverse(p)), (Perm{0, 1, 2, 3}));
    EXPECT_EQ(perm_compose(p, q), (Perm{1, 2, 0, 3}));
    EXPECT_EQ(perm_parity(p), 1);
    EXPECT_EQ(perm_parity(q), 1);
    EXPECT_EQ(perm_parity(perm_compose(p, q)), 0);
    EXPECT_FALSE(perm_valid(Perm{0, 0, 1, 2}));
}

TEST(Edges, IndexAndSlots) {
    for (int e = 0; e < 6; ++e) {
        auto [a, b] = edge_vertices(e);
        EXPECT_EQ(edge_index(b, a), e);
        EXPECT_EQ(angle_slot(e), angle_slot(5 - e));
        // opposite edges are disjoint
        auto [c, d] = edge_vertices(5 - e);
        EXPECT_TRUE(a != c && a != d && b != c && b != d);
    }
    EXPECT_EQ(edge_companion(0), Companion::Z);
    EXPECT_EQ(edge_companion(4), Companion::ZDoublePrime);
    EXPECT_EQ(edge_companion(3), Companion::ZPrime);
}

TEST(Validate, Figure8Fixture) {
    const auto t = load(data("figure8.tri"));
    EXPECT_EQ(t.size(), 2);
    EXPECT_TRUE(validate(t).empty());
    EXPECT_TRUE(is_orientable(t));
    for (const auto& tet : t.tets)
        for (const auto& g : tet.gluings) EXPECT_EQ(perm_parity(g.perm), 1);
}

TEST(Validate, ReportsBrokenGluings) {
    auto t = load(data("figure8.tri"));
    t.tets[0].gluings[2].tet = -1;
    EXPECT_TRUE(contains(validate(t), "tet 0 face 2: face unmatched"));

    t = load(data("figure8.tri"));
    t.tets[0].gluings[0].perm = Perm{0, 1, 2, 3};
    auto v = validate(t);
    EXPECT_TRUE(contains(v, "non-involutive"));

    Triangulation self;
    self.tets.resize(1);
    for (int f = 0; f < 4; ++f) self.tets[0].gluings[f] = {0, Perm{0, 1, 2, 3}};
    EXPECT_TRUE(contains(validate(self), "self-identical"));
}

TEST(Validate, ParseRejectsInvalid) {
    std::string text = slurp(data("figure8.tri"));
    EXPECT_THROW(parse(text.substr(0, text.size() / 2)), ParseError);
    EXPECT_THROW(parse("{\"name\": \"x\"}"), ParseError);
    try {
        parse("{\"name\": \"x\"}");
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("tets"), std::string::npos);
    }
    // unglued face
    auto t = load(data("figure8.tri"));
    t.tets[1].gluings[3].tet = -1;
    t.peripheral.clear();
    EXPECT_THROW(parse(serialize(t)), ValidationError);
}

TEST(Serialize, RoundTripIsByteIdentical) {
    for (const char* name : {"figure8.tri", "octahedron.tri", "whitehead_flat.tri"}) {
        const std::string text = slurp(data(name));
        EXPECT_EQ(serialize(parse(text)), text) << name;
    }
    for (auto code : std::vector<std::vector<long>>{{2, 3}, {3, 3}, {2, 2, 2}, {-2, -4}}) {
        const auto t = build(CFCode{code}).tri;
        const std::string s = serialize(t);
        EXPECT_EQ(serialize(parse(s)), s);
    }
}

TEST(EdgeClasses, Figure8) {
    const auto t = load(data("figure8.tri"));
    const auto classes = edge_classes(t);
    ASSERT_EQ(classes.size(), 2u);
    for (const auto& c : classes) EXPECT_EQ(c.valence(), 6);
    // every tet edge appears in exactly one class
    const auto table = edge_class_table(classes, t.size());
    int count[2] = {0, 0};
    for (const auto& row : table)
        for (int id : row) ++count[id];
    EXPECT_EQ(count[0] + count[1], 12);
}

TEST(EdgeClasses, ValenceSumIsSixPerTet) {
    for (auto code : std::vector<std::vector<long>>{{2, 3}, {3, 3}, {2, 1, 2}, {4, 1, 3}}) {
        const auto t = build(CFCode{code}).tri;
        int total = 0;
        for (const auto& c : edge_classes(t)) total += c.valence();
        EXPECT_EQ(total, 6 * t.size());
        EXPECT_EQ(edge_classes(t).size(), static_cast<size_t>(t.size()));
    }
}

TEST(Cusps, TorusCrossSections) {
    const auto t = load(data("figure8.tri"));
    const auto cs = cusps(t);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].num_triangles(), 8);
    EXPECT_EQ(cs[0].euler_characteristic(), 0);
    // neighbours are symmetric
    const auto& c = cs[0];
    for (int i = 0; i < c.num_triangles(); ++i)
        for (int s = 0; s < 4; ++s) {
            if (s == c.triangles[i].vertex) continue;
            const int j = c.nbr[i][s], s2 = c.nbr_side[i][s];
            EXPECT_EQ(c.nbr[j][s2], i);
            EXPECT_EQ(c.nbr_side[j][s2], s);
        }
}

TEST(Cusps, DisjointUnionHasTwoCusps) {
    const auto t = load(data("figure8.tri"));
    const auto u = disjoint_union(t, t);
    EXPECT_TRUE(validate(u).empty());
    EXPECT_EQ(cusps(u).size(), 2u);
    EXPECT_EQ(u.peripheral.size(), 2u);
}

TEST(Curves, ShippedCurvesAreValid) {
    const auto t = load(data("figure8.tri"));
    const auto cs = cusps(t);
    ASSERT_EQ(t.peripheral.size(), 1u);
    const auto& pc = t.peripheral[0];
    EXPECT_TRUE(validate_curve(t, cs[0], pc.meridian).empty());
    EXPECT_TRUE(validate_curve(t, cs[0], pc.longitude).empty());
    EXPECT_TRUE(validate_curve(t, cs[0], reversed(pc.meridian)).empty());
    CuspHomology h(cs[0]);
    EXPECT_EQ(std::abs(h.intersection(pc.meridian, pc.longitude)), 1);
    EXPECT_EQ(h.intersection(pc.meridian, reversed(pc.longitude)), -h.intersection(pc.meridian, pc.longitude));
}

TEST(Curves, BrokenCurveIsReported) {
    const auto t = load(data("figure8.tri"));
    const auto cs = cusps(t);
    auto mu = t.peripheral[0].meridian;
    mu.steps[0].corner = mu.steps[0].vertex;
    EXPECT_FALSE(validate_curve(t, cs[0], mu).empty());
    mu = t.peripheral[0].meridian;
    mu.steps.pop_back();
    EXPECT_FALSE(validate_curve(t, cs[0], mu).empty());
}

TEST(CuspHomology, BasisAndCoordinates) {
    for (const char* name : {"figure8.tri", "octahedron.tri"}) {
        const auto t = load(data(name));
        for (const auto& c : cusps(t)) {
            CuspHomology h(c);
            EXPECT_TRUE(validate_curve(t, c, h.a()).empty());
            EXPECT_TRUE(validate_curve(t, c, h.b()).empty());
            EXPECT_EQ(h.intersection(h.a(), h.b()), 1);
            EXPECT_EQ(h.coords(h.a()), (std::array<long, 2>{1, 0}));
            EXPECT_EQ(h.coords(h.b()), (std::array<long, 2>{0, 1}));
            // a walk for x a + y b has those coordinates
            const auto w = h.walk(2, -3);
            EXPECT_EQ(h.coords(w), (std::array<long, 2>{2, -3}));
            EXPECT_EQ(h.turning(h.a()), 0);
        }
    }
}

TEST(Homology, KnotAndLinkComplements) {
    auto h = homology(load(data("figure8.tri")));
    EXPECT_EQ(h.rank, 1);
    EXPECT_TRUE(h.torsion.empty());
    h = homology(load(data("octahedron.tri")));
    EXPECT_EQ(h.rank, 2);
    EXPECT_TRUE(h.torsion.empty());
}

TEST(Homology, PeripheralPairsAreStandard) {
    // the longitude is null-homologous in a knot complement
    const auto t = load(data("figure8.tri"));
    const auto img = homology_image(t, t.peripheral[0].longitude);
    for (long x : img) EXPECT_EQ(x, 0);
    const auto m = homology_image(t, t.peripheral[0].meridian);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(std::abs(m[0]), 1);
}

TEST(Isomorphism, Figure8FixtureMatchesBuilder) {
    const auto f8 = load(data("figure8.tri"));
    EXPECT_TRUE(find_isomorphism(build(CFCode{{2, 2}}).tri, f8).has_value());
    EXPECT_FALSE(find_isomorphism(build(CFCode{{2, 3}}).tri, f8).has_value());
    // the figure-8 complement is amphichiral
    EXPECT_TRUE(find_isomorphism(mirrored(f8), f8).has_value());
    // 5_2 is not
    const auto k52 = build(CFCode{{2, 3}}).tri;
    EXPECT_FALSE(find_isomorphism(mirrored(k52), k52).has_value());
    EXPECT_TRUE(find_isomorphism(mirrored(k52), k52, false).has_value());
}

TEST(Orientation, OrientedFixesParity) {
    auto t = load(data("figure8.tri"));
    std::vector<Perm> sigma{Perm{1, 0, 2, 3}, Perm{0, 1, 2, 3}};
    auto scrambled = relabeled(t, sigma);
    EXPECT_FALSE(validate(scrambled).empty());
    const auto fixed = oriented(scrambled);
    EXPECT_TRUE(validate(fixed).empty());
    EXPECT_TRUE(find_isomorphism(fixed, t).has_value() || find_isomorphism(fixed, mirrored(t)).has_value());
}

TEST(TwoThree, PreservesTheManifold) {
    const auto t = build(CFCode{{2, 3}}).tri;
    int done = 0;
    for (int a = 0; a < t.size() && done < 3; ++a) {
        auto moved = two_three_move(t, a, 0);
        if (!moved) continue;
        const auto m = oriented(*moved);
        EXPECT_EQ(m.size(), t.size() + 1);
        EXPECT_TRUE(validate(m).empty());
        EXPECT_EQ(edge_classes(m).size(), edge_classes(t).size() + 1);
        const auto h = homology(m);
        EXPECT_EQ(h.rank, 1);
        EXPECT_TRUE(h.torsion.empty());
        ++done;
    }
    EXPECT_GT(done, 0);
}

TEST(CuspSvg, DrawsEveryTriangle) {
    const auto t = load(data("figure8.tri"));
    const auto cs = cusps(t);
    const std::string svg = cusp_svg(t, cs[0]);
    size_t count = 0;
    for (size_t pos = svg.find("class=\"triangle\""); pos != std::string::npos;
         pos = svg.find("class=\"triangle\"", pos + 1))
        ++count;
    EXPECT_EQ(count, 8u);
    const std::vector<cplx> flat{cplx(2, 0), cplx(2, 0)};
    EXPECT_THROW(cusp_svg(t, cs[0], &flat), DegenerateShape);
}
