#include <random>

#include <gtest/gtest.h>

#include "hypstruct/ford.hpp"

using namespace hyp;

namespace {

const cplx kOmega(0.5, std::sqrt(3.0) / 2);

size_t count(const std::string& s, const std::string& needle) {
    size_t n = 0;
    for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

Moebius random_matrix(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    cplx a(nd(rng), nd(rng)), b(nd(rng), nd(rng)), c(nd(rng), nd(rng)), d(nd(rng), nd(rng));
    return Moebius::normalized(a, b, c, d);
}

// Reduce a center to the fundamental parallelogram of the lattice <4, omega>.
cplx reduce(cplx z) {
    const double v = z.imag() / kOmega.imag();
    double u = z.real() - v * kOmega.real();
    const double vr = v - std::floor(v + 1e-9);
    u = u - 4 * std::floor((u + 1e-9) / 4);
    return cplx(u, 0) + vr * kOmega;
}

}  // namespace

TEST(Moebius, NormalisedAndSign) {
    const auto m = Moebius::normalized(2, 0, 0, 8);
    EXPECT_NEAR(std::abs(m.a * m.d - m.b * m.c - 1.0), 0, 1e-15);
    const auto n = Moebius::normalized(-2, 0, 0, -8);
    EXPECT_TRUE(m.same(n));
    EXPECT_NEAR(m.a.real(), 0.5, 1e-15);
    EXPECT_TRUE((m * m.inverse()).same(Moebius{}));
}

TEST(IsometricSphere, FigureEightGenerators) {
    const auto p = figure8_preset();
    const auto& D = p.gens[2].m;
    auto s = isometric_sphere(D);
    EXPECT_NEAR(std::abs(s.center - 2.0), 0, 1e-14);
    EXPECT_NEAR(s.radius, 1, 1e-14);
    s = isometric_sphere(D.inverse());
    EXPECT_NEAR(std::abs(s.center), 0, 1e-14);
    const auto& B = p.gens[0].m;
    EXPECT_NEAR(std::abs(isometric_sphere(B).center - 1.0), 0, 1e-14);
    EXPECT_NEAR(std::abs(isometric_sphere(B.inverse()).center - kOmega * kOmega), 0, 1e-14);
    EXPECT_NEAR(isometric_sphere(B).radius, 1, 1e-14);
    EXPECT_THROW(isometric_sphere(Moebius{}), FixesInfinity);
    EXPECT_THROW(isometric_sphere(p.gens[1].m), FixesInfinity);
}

TEST(IsometricSphere, EquidistantFromHoroballs) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const auto g = random_matrix(rng);
        // the hemisphere for g is centred at g^-1(inf) = -d/c with radius 1/|c|
        const cplx xi = -g.d / g.c;
        const double r = 1 / std::abs(g.c);
        // distance to the height-1 horoball vs distance to the horoball at xi
        // of Euclidean diameter 1/|c|^2, at points of the hemisphere below height 1
        const double diam = 1 / std::norm(g.c);
        for (double frac : {0.1, 0.5, 0.9}) {
            const double t = std::min(r, 0.99) * frac;
            const cplx z = xi + std::sqrt(r * r - t * t) * std::polar(1.0, 2.0 * frac);
            const double d_inf = std::log(1 / t);
            const double d_xi = std::log((std::norm(z - xi) + t * t) / (diam * t));
            EXPECT_NEAR(d_inf, d_xi, 1e-10);
        }
        // and the sphere returned for g is the image, centred at g(inf)
        const auto s = isometric_sphere(g);
        EXPECT_NEAR(std::abs(s.center - g.a / g.c), 0, 1e-10);
        EXPECT_NEAR(s.radius, r, 1e-12);
    }
}

TEST(IsometricSphere, HeightsPreserved) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 20; ++k) {
        const auto g = random_matrix(rng);
        const cplx xi = -g.d / g.c;
        const double r = 1 / std::abs(g.c);
        for (int j = 0; j < 5; ++j) {
            const double phi = 2 * M_PI * u(rng), theta = 0.5 * M_PI * u(rng) * 0.99;
            const cplx z = xi + r * std::cos(theta) * std::polar(1.0, phi);
            const double t = r * std::sin(theta);
            // quaternion action by hand: height t / (|cz + d|^2 + |c|^2 t^2)
            const double h = t / (std::norm(g.c * z + g.d) + std::norm(g.c) * t * t);
            EXPECT_NEAR(h, t, 1e-10);
            const auto [w, hw] = g.apply(z, t);
            EXPECT_NEAR(hw, t, 1e-10);
            // image lies on the sphere returned by isometric_sphere(g)
            const auto s = isometric_sphere(g);
            EXPECT_NEAR(std::norm(w - s.center) + hw * hw, s.radius * s.radius, 1e-9);
        }
    }
}

TEST(Enumerate, EmptyAndMonotone) {
    const auto p = figure8_preset();
    EXPECT_TRUE(enumerate(p.gens, p.lattice, 0, p.window).empty());
    const auto a = enumerate(p.gens, p.lattice, 2, p.window), b = enumerate(p.gens, p.lattice, 3, p.window);
    EXPECT_GE(b.size(), a.size());
    for (const auto& s : a) {
        bool found = false;
        for (const auto& t : b)
            if (std::abs(s.center - t.center) < 1e-10 && std::abs(s.radius - t.radius) < 1e-10) found = true;
        EXPECT_TRUE(found);
    }
    for (size_t k = 1; k < b.size(); ++k) EXPECT_GE(b[k - 1].radius, b[k].radius - 1e-12);
    for (const auto& s : b) EXPECT_TRUE(p.window.contains(s.center));
}

TEST(Visible, Figure8TenSpheres) {
    const auto p = figure8_preset();
    const auto all = enumerate(p.gens, p.lattice, 3, p.window);
    const auto vis = visible(all, p.lattice, p.window, 256);
    ASSERT_EQ(vis.size(), 10u);
    std::vector<cplx> expected;
    for (int k = 0; k <= 4; ++k) {
        expected.push_back(double(k));
        expected.push_back(double(k) + kOmega);
    }
    for (const auto& s : vis) {
        EXPECT_NEAR(s.radius, 1, 1e-10);
        bool found = false;
        for (cplx e : expected)
            if (std::abs(s.center - e) < 1e-10) found = true;
        EXPECT_TRUE(found) << s.center;
        EXPECT_FALSE(s.apex_covered);
    }
    // modulo the lattice the centres are 0, 1, 2, 3 and their omega translates
    std::vector<cplx> reduced;
    for (const auto& s : vis) {
        cplx r = reduce(s.center);
        bool dup = false;
        for (cplx q : reduced) dup = dup || std::abs(q - r) < 1e-9;
        if (!dup) reduced.push_back(r);
    }
    EXPECT_EQ(reduced.size(), 4u);
}

TEST(Visible, StableUnderRefinement) {
    const auto p = figure8_preset();
    const auto all = enumerate(p.gens, p.lattice, 3, p.window);
    const auto a = visible(all, p.lattice, p.window, 256), b = visible(all, p.lattice, p.window, 512);
    ASSERT_EQ(a.size(), b.size());
    for (size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(std::abs(a[k].center - b[k].center), 0, 1e-12);
}

TEST(Visible, LatticeEquivariant) {
    const auto p = figure8_preset();
    Window shifted = p.window;
    shifted.origin += p.lattice.t2;
    const auto a = visible(enumerate(p.gens, p.lattice, 3, p.window), p.lattice, p.window, 256);
    const auto b = visible(enumerate(p.gens, p.lattice, 3, shifted), p.lattice, shifted, 256);
    ASSERT_EQ(a.size(), b.size());
    for (const auto& s : a) {
        bool found = false;
        for (const auto& t : b) found = found || std::abs(s.center + p.lattice.t2 - t.center) < 1e-9;
        EXPECT_TRUE(found);
    }
}

TEST(Visible, SmallSphereUnderLargeIsRemoved) {
    const CuspLattice L{100, cplx(0, 100)};
    const Window W{cplx(-2, -2), 4, cplx(0, 4)};
    IsometricSphere big, small;
    big.radius = 1;
    small.center = 0.2;
    small.radius = 0.1;
    EXPECT_EQ(visible({big, small}, L, W, 128).size(), 1u);
    EXPECT_EQ(visible({small}, L, W, 128).size(), 1u);
}

TEST(DualEdges, CoveredApex) {
    const CuspLattice L{100, cplx(0, 100)};
    const Window W{cplx(-2, -2), 4, cplx(0, 4)};
    IsometricSphere a, b;
    a.radius = 1;
    b.center = 0.6;
    b.radius = 0.75;
    const auto vis = visible({a, b}, L, W, 256);
    ASSERT_EQ(vis.size(), 2u);
    const auto edges = dual_edges(vis);
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_FALSE(edges[0].covered);
    EXPECT_TRUE(edges[1].covered);
    EXPECT_TRUE(dual_edges({}).empty());
}

TEST(FordSvg, Contents) {
    const auto p = figure8_preset();
    const auto vis = visible(enumerate(p.gens, p.lattice, 3, p.window), p.lattice, p.window, 256);
    const std::string svg = ford_svg(vis, p.lattice, p.window);
    EXPECT_EQ(count(svg, "class=\"isometric-sphere\""), 10u);
    EXPECT_EQ(count(svg, "class=\"fundamental-domain\""), 1u);
    EXPECT_EQ(count(svg, "class=\"dual-edge"), 10u);
    EXPECT_GT(count(svg, "class=\"face-edge\""), 0u);
    const std::string empty = ford_svg({}, p.lattice, p.window);
    EXPECT_EQ(count(empty, "<circle"), 0u);
    EXPECT_EQ(count(empty, "<polygon"), 1u);
    const std::string one = ford_svg({vis[0]}, p.lattice, p.window);
    EXPECT_EQ(count(one, "class=\"isometric-sphere\""), 1u);
    EXPECT_EQ(count(one, "face-edge"), 0u);
    EXPECT_EQ(ford_svg(vis, p.lattice, p.window), svg);
}
