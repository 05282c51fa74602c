#include "hypstruct/angles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hypstruct/lobachevsky.hpp"

namespace hyp {

namespace {

struct LPResult {
    bool feasible = false;
    Eigen::VectorXd x;
};

// max c.x subject to A x = b, x >= 0, b >= 0. Two phases, Bland's rule.
LPResult simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    const int m = static_cast<int>(A.rows()), k = static_cast<int>(A.cols());
    const int cols = k + m;
    const double eps = 1e-10;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, cols + 1);
    T.leftCols(k) = A;
    T.block(0, k, m, m).setIdentity();
    T.col(cols) = b;
    std::vector<int> basis(m);
    for (int r = 0; r < m; ++r) basis[r] = k + r;

    auto pivot = [&](int r, int j) {
        T.row(r) /= T(r, j);
        for (int i = 0; i < m; ++i)
            if (i != r && T(i, j) != 0) T.row(i) -= T(i, j) * T.row(r);
        basis[r] = j;
    };
    auto run = [&](const Eigen::VectorXd& cost, int allowed) {
        for (int guard = 0; guard < 100000; ++guard) {
            int enter = -1;
            for (int j = 0; j < allowed && enter < 0; ++j) {
                double d = cost[j];
                for (int r = 0; r < m; ++r) d -= cost[basis[r]] * T(r, j);
                if (d > eps) enter = j;
            }
            if (enter < 0) return;
            int leave = -1;
            double best = 0;
            for (int r = 0; r < m; ++r) {
                if (T(r, enter) <= eps) continue;
                double ratio = T(r, cols) / T(r, enter);
                if (leave < 0 || ratio < best - 1e-12 ||
                    (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0) throw std::logic_error("unbounded linear program");
            pivot(leave, enter);
        }
        throw std::logic_error("simplex iteration limit");
    };

    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    phase1.tail(m).setConstant(-1);
    run(phase1, cols);
    double art = 0;
    for (int r = 0; r < m; ++r)
        if (basis[r] >= k) art += T(r, cols);
    LPResult out;
    if (art > 1e-9) return out;
    for (int r = 0; r < m; ++r) {
        if (basis[r] < k) continue;
        for (int j = 0; j < k; ++j)
            if (std::abs(T(r, j)) > 1e-9) {
                pivot(r, j);
                break;
            }
    }
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
    phase2.head(k) = c;
    run(phase2, k);
    out.feasible = true;
    out.x = Eigen::VectorXd::Zero(k);
    for (int r = 0; r < m; ++r)
        if (basis[r] < k) out.x[basis[r]] = T(r, cols);
    return out;
}

}  // namespace

AnglePolytope polytope(const Triangulation& t) {
    AnglePolytope pol;
    const int n = t.size();
    pol.n = n;
    const auto classes = edge_classes(t);
    const int rows = n + static_cast<int>(classes.size());
    pol.E = Eigen::MatrixXd::Zero(rows, 3 * n);
    pol.b = Eigen::VectorXd::Zero(rows);
    for (int i = 0; i < n; ++i) {
        pol.E.block(i, 3 * i, 1, 3).setOnes();
        pol.b[i] = kPi;
    }
    for (const auto& ec : classes) {
        for (const auto& s : ec.sides) pol.E(n + ec.id, 3 * s.tet + angle_slot(s.edge)) += 1;
        pol.b[n + ec.id] = 2 * kPi;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pol.E, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    int r = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv[k] > cut) ++r;
    pol.rank = r;
    pol.N = svd.matrixV().rightCols(3 * n - r);
    return pol;
}

double equality_residual(const AnglePolytope& pol, const AnglePoint& p) {
    return (pol.E * p - pol.b).lpNorm<Eigen::Infinity>();
}

double min_slack(const AnglePoint& p) { return p.size() ? p.minCoeff() : 0.0; }

bool is_interior(const AnglePolytope& pol, const AnglePoint& p, double tol) {
    if (p.size() != 3 * pol.n) return false;
    return p.minCoeff() > 0 && p.maxCoeff() < kPi && equality_residual(pol, p) < tol;
}

AnglePoint feasible_point(const AnglePolytope& pol) {
    const int k = 3 * pol.n;
    // variables (t, s): angles are s + t, objective t
    Eigen::MatrixXd A(pol.E.rows(), k + 1);
    A.col(0) = pol.E.rowwise().sum();
    A.rightCols(k) = pol.E;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k + 1);
    c[0] = 1;
    auto lp = simplex(A, pol.b, c);
    if (!lp.feasible) throw Infeasible("the angle equations have no nonnegative solution");
    const double t = lp.x[0];
    if (t <= 1e-9) throw Infeasible("no angle structure with all angles positive");
    AnglePoint a = lp.x.tail(k).array() + t;
    // polish onto the affine subspace
    Eigen::VectorXd r = pol.E * a - pol.b;
    a -= pol.E.completeOrthogonalDecomposition().solve(r);
    return a;
}

double volume(const AnglePoint& p) {
    double v = 0;
    for (int i = 0; i < p.size(); ++i) v += lob(p[i]);
    return v;
}

Gradient gradient(const AnglePoint& p) {
    Gradient g;
    g.g.resize(p.size());
    for (int i = 0; i < p.size(); ++i) {
        const double s = std::sin(p[i]);
        if (!(p[i] > 0 && p[i] < kPi) || s <= 0) {
            g.bounded = false;
            g.g[i] = std::numeric_limits<double>::infinity();
        } else {
            g.g[i] = -std::log(2 * s);
        }
    }
    return g;
}

TangentVector leading_trailing(int ntets, const NormalCurve& curve) {
    TangentVector w = TangentVector::Zero(3 * ntets);
    for (const auto& s : curve.steps) {
        w[3 * s.tet + angle_slot(edge_index(s.vertex, step_in_face(s)))] += 1;
        w[3 * s.tet + angle_slot(edge_index(s.vertex, step_out_face(s)))] -= 1;
    }
    return w;
}

ShapeAssignment shapes_from_angles(const AnglePoint& p) {
    std::vector<cplx> z(p.size() / 3);
    for (size_t i = 0; i < z.size(); ++i) {
        const double a = p[3 * i], b = p[3 * i + 1], g = p[3 * i + 2];
        if (!(a > 0 && b > 0 && g > 0 && a < kPi && b < kPi && g < kPi))
            throw DegenerateShape("tet " + std::to_string(i) + " has an angle equal to 0 or pi");
        z[i] = std::sin(g) / std::sin(b) * std::polar(1.0, a);
    }
    return ShapeAssignment::from_shapes(z);
}

const char* to_string(MaxStatus s) { return s == MaxStatus::InteriorMax ? "INTERIOR_MAX" : "BOUNDARY_MAX"; }

MaxResult maximize(const AnglePoint& p0, const AnglePolytope& pol, double tol) {
    if (!is_interior(pol, p0)) throw NotInterior("starting point is not in the open angle polytope");
    const Eigen::MatrixXd& N = pol.N;
    MaxResult res;
    AnglePoint x = p0;
    double V = volume(x);
    const double boundary = 1e-7;
    auto inside = [](const AnglePoint& a) { return a.minCoeff() > 0 && a.maxCoeff() < kPi; };
    int it = 0;
    double gn = 0;
    bool at_boundary = false;
    for (; it < 5000; ++it) {
        if (N.cols() == 0) break;
        const Eigen::VectorXd g = gradient(x).g;
        const Eigen::VectorXd r = N.transpose() * g;
        gn = r.norm();
        if (gn <= tol) break;
        if (x.minCoeff() < boundary) {
            at_boundary = true;
            break;
        }
        Eigen::VectorXd negcot(x.size());
        for (int i = 0; i < x.size(); ++i) negcot[i] = 1.0 / std::tan(x[i]);  // -Hessian diagonal
        const Eigen::MatrixXd H = N.transpose() * negcot.asDiagonal() * N;
        Eigen::LLT<Eigen::MatrixXd> llt(H);
        std::vector<Eigen::VectorXd> dirs;
        if (llt.info() == Eigen::Success) {
            Eigen::VectorXd d = llt.solve(r);
            if (d.allFinite() && d.dot(r) > 0) dirs.push_back(d);
        }
        dirs.push_back(r);
        bool moved = false;
        for (const auto& d : dirs) {
            const Eigen::VectorXd dir = N * d;
            double lam = 1;
            for (int h = 0; h < 80; ++h, lam *= 0.5) {
                AnglePoint xn = x + lam * dir;
                if (!inside(xn)) continue;
                double Vn = volume(xn);
                if (Vn >= V - 1e-14) {
                    x = xn;
                    V = Vn;
                    moved = true;
                    break;
                }
            }
            if (moved) break;
        }
        if (!moved) break;
    }
    res.point = x;
    res.report.iterations = it;
    res.report.grad_norm = gn;
    res.report.volume = V;
    if (at_boundary || (gn > tol && x.minCoeff() < 1e-5)) {
        res.report.status = MaxStatus::BoundaryMax;
        for (int t = 0; t < pol.n; ++t) {
            const Eigen::Vector3d a = x.segment<3>(3 * t);
            if (a.minCoeff() < 1e-5) {
                int big;
                a.maxCoeff(&big);
                res.report.flat.push_back({t, big});
            }
        }
    } else if (gn > tol * 100) {
        throw NoConvergence("volume maximisation stalled with gradient norm " + std::to_string(gn));
    } else {
        res.report.status = MaxStatus::InteriorMax;
        res.report.shapes = shapes_from_angles(x);
    }
    return res;
}

AnglePoint random_interior(const AnglePolytope& pol, const AnglePoint& p0, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.2, 0.8);
    AnglePoint x = p0;
    if (pol.N.cols() == 0) return x;
    for (int rep = 0; rep < 3; ++rep) {
        Eigen::VectorXd c(pol.N.cols());
        for (int k = 0; k < c.size(); ++k) c[k] = normal(rng);
        const Eigen::VectorXd d = pol.N * c;
        double tmax = std::numeric_limits<double>::infinity();
        for (int i = 0; i < x.size(); ++i) {
            if (d[i] < 0) tmax = std::min(tmax, -x[i] / d[i]);
            if (d[i] > 0) tmax = std::min(tmax, (kPi - x[i]) / d[i]);
        }
        if (std::isfinite(tmax)) x += unif(rng) * tmax * d;
    }
    return x;
}

MaxResult maximize_multistart(const AnglePolytope& pol, const AnglePoint& p0, int starts, unsigned long seed,
                              double tol) {
    MaxResult best = maximize(p0, pol, tol);
    for (int s = 0; s < starts; ++s) {
        MaxResult r = maximize(random_interior(pol, p0, seed + s), pol, tol);
        const double dv = r.report.volume - best.report.volume;
        bool better = dv > 1e-12;
        if (!better && std::abs(dv) <= 1e-12)
            better = std::lexicographical_compare(r.point.data(), r.point.data() + r.point.size(), best.point.data(),
                                                  best.point.data() + best.point.size());
        if (better) best = std::move(r);
    }
    return best;
}

}  // namespace hyp
