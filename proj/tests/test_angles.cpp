#include <random>

#include <gtest/gtest.h>

#include "hypstruct/angles.hpp"
#include "hypstruct/lobachevsky.hpp"
#include "hypstruct/twobridge.hpp"
#include "oracles.hpp"

using namespace hyp;

namespace {

std::string data(const std::string& name) { return std::string(HYPSTRUCT_DATA_DIR) + "/" + name; }

AnglePoint regular(int n) { return AnglePoint::Constant(3 * n, kPi / 3); }

}  // namespace

TEST(Polytope, DimensionIsNullity) {
    for (const char* name : {"figure8.tri", "octahedron.tri", "whitehead_flat.tri"}) {
        const auto t = load(data(name));
        const auto pol = polytope(t);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(pol.E);
        EXPECT_EQ(pol.dimension(), 3 * t.size() - static_cast<int>(lu.rank()));
        EXPECT_LT((pol.E * pol.N).norm(), 1e-12);
        // rows count corners: entries are small nonnegative integers
        for (int i = 0; i < pol.E.rows(); ++i)
            for (int j = 0; j < pol.E.cols(); ++j) EXPECT_EQ(pol.E(i, j), std::round(pol.E(i, j)));
    }
}

TEST(Polytope, Figure8Parametrisation) {
    // two angles of each tet minus one independent edge equation
    const auto pol = polytope(load(data("figure8.tri")));
    EXPECT_EQ(pol.dimension(), 3);
    EXPECT_TRUE(is_interior(pol, regular(2)));
    // any triple for tet 0 extends to a solution
    const Eigen::Vector3d first(0.9, 1.3, kPi - 2.2);
    const Eigen::MatrixXd rest = pol.E.rightCols(3);
    const Eigen::VectorXd rhs = pol.b - pol.E.leftCols(3) * first;
    const Eigen::Vector3d second = rest.completeOrthogonalDecomposition().solve(rhs);
    AnglePoint p(6);
    p << first, second;
    EXPECT_LT(equality_residual(pol, p), 1e-12);
}

TEST(FeasiblePoint, DominatesKnownPoints) {
    const auto pol = polytope(load(data("figure8.tri")));
    const auto p = feasible_point(pol);
    EXPECT_TRUE(is_interior(pol, p));
    EXPECT_GE(min_slack(p), kPi / 3 - 1e-12);
    for (auto code : std::vector<std::vector<long>>{{2, 3}, {3, 3}, {2, 2, 2}, {4, 1, 3}}) {
        const auto tb = build(CFCode{code});
        const auto pol2 = polytope(tb.tri);
        const auto q = feasible_point(pol2);
        EXPECT_TRUE(is_interior(pol2, q));
        EXPECT_GE(min_slack(q), min_slack(initial_angles(tb)) - 1e-12);
    }
}

TEST(FeasiblePoint, Deterministic) {
    const auto pol = polytope(build(CFCode{{3, 2, 3}}).tri);
    EXPECT_EQ(feasible_point(pol), feasible_point(pol));
}

TEST(FeasiblePoint, ValenceOneEdgeIsInfeasible) {
    auto pol = polytope(load(data("figure8.tri")));
    // an edge of valence one: a single corner would need angle 2 pi
    pol.E.conservativeResize(pol.E.rows() + 1, Eigen::NoChange);
    pol.E.row(pol.E.rows() - 1).setZero();
    pol.E(pol.E.rows() - 1, 0) = 1;
    pol.b.conservativeResize(pol.b.size() + 1);
    pol.b[pol.b.size() - 1] = 2 * kPi;
    EXPECT_THROW(feasible_point(pol), Infeasible);
}

TEST(Volume, RegularAndFlat) {
    EXPECT_NEAR(volume(regular(2)), 6 * oracle::lobachevsky_quadrature(kPi / 3), 1e-12);
    AnglePoint flat(3);
    flat << 0, 0, kPi;
    EXPECT_EQ(volume(flat), 0);
    EXPECT_FALSE(gradient(flat).bounded);
    EXPECT_TRUE(gradient(regular(1)).bounded);
}

TEST(Volume, GradientAlongTangents) {
    const auto t = load(data("octahedron.tri"));
    const auto pol = polytope(t);
    const auto p0 = feasible_point(pol);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 10; ++k) {
        const auto p = random_interior(pol, p0, rng());
        Eigen::VectorXd c(pol.dimension());
        for (int j = 0; j < c.size(); ++j) c[j] = nd(rng);
        const Eigen::VectorXd w = pol.N * c;
        const double h = 1e-5;
        const double fd = (volume(p + h * w) - volume(p - h * w)) / (2 * h);
        double analytic = 0;
        for (int i = 0; i < p.size(); ++i) analytic += -w[i] * std::log(std::sin(p[i]));
        EXPECT_NEAR(fd, analytic, 1e-6);
        EXPECT_NEAR(gradient(p).g.dot(w), analytic, 1e-10);
    }
}

TEST(Volume, StrictlyConcave) {
    const auto t = build(CFCode{{2, 2, 2}}).tri;
    const auto pol = polytope(t);
    const auto p0 = feasible_point(pol);
    for (unsigned long s = 0; s < 10; ++s) {
        const auto p = random_interior(pol, p0, 100 + s), q = random_interior(pol, p0, 200 + s);
        for (double lam : {0.25, 0.5, 0.75})
            EXPECT_GT(volume(lam * p + (1 - lam) * q), lam * volume(p) + (1 - lam) * volume(q) - 1e-12);
    }
}

TEST(LeadingTrailing, TangentToPolytope) {
    for (const char* name : {"figure8.tri", "octahedron.tri"}) {
        const auto t = load(data(name));
        const auto pol = polytope(t);
        for (const auto& pc : peripheral_curves(t)) {
            for (const auto* c : {&pc.meridian, &pc.longitude}) {
                const auto w = leading_trailing(t.size(), *c);
                EXPECT_LT((pol.E * w).lpNorm<Eigen::Infinity>(), 1e-12);
                // each step adds +1 and -1 inside one tet
                for (int i = 0; i < t.size(); ++i) EXPECT_EQ(w.segment<3>(3 * i).sum(), 0.0);
            }
        }
    }
}

TEST(LeadingTrailing, DerivativeIsRealPartOfLogHolonomy) {
    for (const char* name : {"figure8.tri", "octahedron.tri", "whitehead_flat.tri"}) {
        const auto t = load(data(name));
        const auto pol = polytope(t);
        const auto p0 = feasible_point(pol);
        for (unsigned long s = 0; s < 10; ++s) {
            const auto p = random_interior(pol, p0, s);
            const auto sh = shapes_from_angles(p);
            for (const auto& pc : peripheral_curves(t)) {
                for (const auto* c : {&pc.meridian, &pc.longitude}) {
                    const auto w = leading_trailing(t.size(), *c);
                    const double h = 1e-6;
                    const double fd = (volume(p + h * w) - volume(p - h * w)) / (2 * h);
                    EXPECT_NEAR(fd, log_holonomy(*c, sh).real(), 1e-8);
                }
            }
        }
    }
}

TEST(ShapesFromAngles, Formula) {
    const auto s = shapes_from_angles(regular(1));
    EXPECT_NEAR(std::abs(s.z[0] - std::polar(1.0, kPi / 3)), 0, 1e-15);
    AnglePoint p(3);
    p << 0.4, 1.1, kPi - 1.5;
    const auto s2 = shapes_from_angles(p);
    EXPECT_NEAR(std::arg(s2.z[0]), 0.4, 1e-15);
    EXPECT_NEAR(std::arg((s2.z[0] - 1.0) / s2.z[0]), 1.1, 1e-14);
    EXPECT_NEAR(std::arg(1.0 / (1.0 - s2.z[0])), kPi - 1.5, 1e-14);
    AnglePoint flat(3);
    flat << kPi, 0, 0;
    EXPECT_THROW(shapes_from_angles(flat), DegenerateShape);
}

TEST(Maximize, Figure8Regular) {
    const auto t = load(data("figure8.tri"));
    const auto pol = polytope(t);
    const auto mx = maximize(random_interior(pol, regular(2), 9), pol);
    EXPECT_EQ(mx.report.status, MaxStatus::InteriorMax);
    EXPECT_LT((mx.point - regular(2)).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_NEAR(mx.report.volume, 2.029883212819307, 1e-12);
    ASSERT_TRUE(mx.report.shapes.has_value());
    // at the maximum the shapes solve the gluing equations
    const auto r = residual(edge_rows(t), *mx.report.shapes);
    EXPECT_LT(r.lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(Maximize, UniqueFromDifferentStarts) {
    const auto t = build(CFCode{{3, 1, 2}}).tri;
    const auto pol = polytope(t);
    const auto p0 = feasible_point(pol);
    const auto a = maximize(random_interior(pol, p0, 1), pol);
    const auto b = maximize(random_interior(pol, p0, 2), pol);
    EXPECT_LT((a.point - b.point).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Maximize, CertifiedByNewton) {
    for (auto code : std::vector<std::vector<long>>{{2, 3}, {3, 3}, {2, 2, 2}}) {
        const auto t = build(CFCode{code}).tri;
        const auto pol = polytope(t);
        const auto mx = maximize(feasible_point(pol), pol);
        ASSERT_EQ(mx.report.status, MaxStatus::InteriorMax);
        const auto sol = newton_solve(complete_system(t), *mx.report.shapes);
        EXPECT_TRUE(sol.report.geometric);
        EXPECT_NEAR(sol.report.volume, mx.report.volume, 1e-8);
    }
}

TEST(Maximize, BoundaryMaximum) {
    const auto t = load(data("whitehead_flat.tri"));
    const auto pol = polytope(t);
    const auto mx = maximize(feasible_point(pol), pol);
    EXPECT_EQ(mx.report.status, MaxStatus::BoundaryMax);
    EXPECT_FALSE(mx.report.shapes.has_value());
    ASSERT_EQ(mx.report.flat.size(), 1u);
    const auto [tet, big] = mx.report.flat[0];
    for (int s = 0; s < 3; ++s) EXPECT_NEAR(mx.point[3 * tet + s], s == big ? kPi : 0.0, 1e-6);
    EXPECT_NEAR(mx.report.volume, 8 * oracle::lobachevsky_quadrature(kPi / 4), 1e-8);
}

TEST(Maximize, RejectsExteriorStart) {
    const auto pol = polytope(load(data("figure8.tri")));
    AnglePoint p(6);
    p << kPi, 0, 0, kPi, 0, 0;
    EXPECT_THROW(maximize(p, pol), NotInterior);
    EXPECT_THROW(maximize(AnglePoint::Constant(6, 1.0), pol), NotInterior);
}

TEST(Maximize, MultistartIsDeterministic) {
    const auto pol = polytope(build(CFCode{{2, 3}}).tri);
    const auto p0 = feasible_point(pol);
    const auto a = maximize_multistart(pol, p0, 3, 42), b = maximize_multistart(pol, p0, 3, 42);
    EXPECT_EQ(a.point, b.point);
}
