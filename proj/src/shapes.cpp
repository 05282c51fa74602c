#include "hypstruct/shapes.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hypstruct/lobachevsky.hpp"

namespace hyp {

namespace {

const cplx kI(0, 1);

cplx near_branch(cplx fresh, cplx old) {
    const double k = std::round((old.imag() - fresh.imag()) / (2 * kPi));
    return fresh + cplx(0, 2 * kPi * k);
}

void check_nondegenerate(const ShapeAssignment& s) {
    for (int i = 0; i < s.size(); ++i) {
        const cplx z = s.z[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == 0.0 || z == 1.0)
            throw DegenerateShape(fmt::format("tet {} has shape {}{:+}i", i, z.real(), z.imag()));
    }
}

// Adds the log of the companion invariant on edge e of tet i, times k.
void add_corner(LogForm& f, int i, int e, int k) {
    switch (edge_companion(e)) {
        case Companion::Z: f.A[i] += k; break;
        case Companion::ZPrime: f.B[i] -= k; break;
        case Companion::ZDoublePrime:
            f.B[i] += k;
            f.A[i] -= k;
            f.C += k;
            break;
    }
}

EquationRow row_from(const LogForm& f, RowKind kind, int index, int curve, long target) {
    EquationRow r;
    r.kind = kind;
    r.index = index;
    r.curve = curve;
    r.A = f.A;
    r.B = f.B;
    r.target = target;
    return r;
}

struct CuspRows {
    LogForm form[2];
    long tn[2];
};

std::vector<CuspRows> cusp_rows(const Triangulation& t, const std::vector<CuspTriangulation>& cs) {
    const auto per = peripheral_curves(t);
    std::vector<CuspRows> out(cs.size());
    for (const auto& pc : per) {
        CuspHomology h(cs[pc.cusp]);
        const NormalCurve* cv[2] = {&pc.meridian, &pc.longitude};
        for (int k = 0; k < 2; ++k) {
            out[pc.cusp].form[k] = curve_form(t.size(), *cv[k]);
            out[pc.cusp].tn[k] = h.turning(*cv[k]);
        }
    }
    return out;
}

// Drop one edge row per cusp: the lowest unused edge id with an end on it.
std::vector<int> dropped_edges(const Triangulation& t, const std::vector<CuspTriangulation>& cs, int nedges) {
    std::vector<int> dropped;
    std::vector<char> used(nedges, 0);
    for (const auto& c : cs) {
        int best = -1;
        for (int i = 0; i < c.num_triangles(); ++i)
            for (int w = 0; w < 4; ++w) {
                int e = c.corner_edge[i][w];
                if (e >= 0 && !used[e] && (best < 0 || e < best)) best = e;
            }
        if (best >= 0) {
            used[best] = 1;
            dropped.push_back(best);
        }
    }
    (void)t;
    return dropped;
}

EquationSystem build_system(const Triangulation& t, const std::vector<Slope>& slopes) {
    const auto cs = cusps(t);
    if (slopes.size() != cs.size())
        throw BadSlope(fmt::format("expected {} slope entries, got {}", cs.size(), slopes.size()));
    for (const auto& s : slopes) {
        if (!s) continue;
        if (std::gcd(std::labs(s->first), std::labs(s->second)) != 1)
            throw BadSlope(fmt::format("({}, {}) is not a pair of coprime integers", s->first, s->second));
    }
    EquationSystem sys = edge_rows(t);
    const int nedges = static_cast<int>(sys.rows.size());
    const auto drop = dropped_edges(t, cs, nedges);
    for (int e = 0; e < nedges; ++e)
        if (std::find(drop.begin(), drop.end(), e) == drop.end()) sys.square.push_back(e);
    const auto rows = cusp_rows(t, cs);
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto& cr = rows[k];
        if (!slopes[k]) {
            for (int j = 0; j < 2; ++j) {
                if (j == 0) sys.square.push_back(static_cast<int>(sys.rows.size()));
                sys.rows.push_back(row_from(cr.form[j], RowKind::Completeness, static_cast<int>(k), j,
                                            2 * cr.tn[j] - cr.form[j].C));
            }
        } else {
            const long p = slopes[k]->first, q = slopes[k]->second;
            LogForm f;
            f.A.assign(t.size(), 0);
            f.B.assign(t.size(), 0);
            for (int i = 0; i < t.size(); ++i) {
                f.A[i] = static_cast<int>(p * cr.form[0].A[i] + q * cr.form[1].A[i]);
                f.B[i] = static_cast<int>(p * cr.form[0].B[i] + q * cr.form[1].B[i]);
            }
            long target = 2 + p * (2 * cr.tn[0] - cr.form[0].C) + q * (2 * cr.tn[1] - cr.form[1].C);
            sys.square.push_back(static_cast<int>(sys.rows.size()));
            sys.rows.push_back(row_from(f, RowKind::Filling, static_cast<int>(k), 0, target));
        }
    }
    return sys;
}

double inf_norm(const Eigen::VectorXcd& r) {
    double m = 0;
    for (int i = 0; i < r.size(); ++i) m = std::max(m, std::abs(r[i]));
    return m;
}

}  // namespace

ShapeAssignment ShapeAssignment::from_shapes(const std::vector<cplx>& z) {
    ShapeAssignment s;
    s.z = z;
    for (const cplx& w : z) {
        s.logz.push_back(std::log(w));
        s.log1mz.push_back(std::log(1.0 - w));
    }
    return s;
}

cplx ShapeAssignment::edge_invariant(int tet, int e) const {
    switch (edge_companion(e)) {
        case Companion::Z: return z[tet];
        case Companion::ZPrime: return z_prime(tet);
        default: return z_double_prime(tet);
    }
}

cplx ShapeAssignment::edge_log(int tet, int e) const {
    switch (edge_companion(e)) {
        case Companion::Z: return logz[tet];
        case Companion::ZPrime: return -log1mz[tet];
        default: return log1mz[tet] - logz[tet] + kI * kPi;
    }
}

Orientation classify(cplx z) {
    const double eps = 1e-10 * std::max(1.0, std::abs(z));
    if (z.imag() > eps) return Orientation::Positive;
    if (z.imag() < -eps) return Orientation::Negative;
    return Orientation::Flat;
}

const char* to_string(Orientation o) {
    switch (o) {
        case Orientation::Positive: return "positive";
        case Orientation::Negative: return "negative";
        default: return "flat";
    }
}

LogForm curve_form(int n, const NormalCurve& curve) {
    LogForm f;
    f.A.assign(n, 0);
    f.B.assign(n, 0);
    for (const auto& s : curve.steps) add_corner(f, s.tet, edge_index(s.vertex, s.corner), s.eps);
    return f;
}

cplx log_holonomy(const NormalCurve& curve, const ShapeAssignment& s) {
    check_nondegenerate(s);
    const LogForm f = curve_form(s.size(), curve);
    cplx v = kI * kPi * static_cast<double>(f.C);
    for (int i = 0; i < s.size(); ++i) v += static_cast<double>(f.A[i]) * s.logz[i] + static_cast<double>(f.B[i]) * s.log1mz[i];
    return v;
}

cplx holonomy_H(const NormalCurve& curve, const ShapeAssignment& s) {
    check_nondegenerate(s);
    cplx h = 1;
    for (const auto& st : curve.steps) {
        cplx w = s.edge_invariant(st.tet, edge_index(st.vertex, st.corner));
        h *= st.eps > 0 ? w : 1.0 / w;
    }
    return h;
}

std::vector<PeripheralCurves> peripheral_curves(const Triangulation& t) {
    const auto cs = cusps(t);
    std::vector<PeripheralCurves> out(cs.size());
    std::vector<char> have(cs.size(), 0);
    for (const auto& pc : t.peripheral) {
        if (pc.cusp < 0 || pc.cusp >= static_cast<int>(cs.size())) continue;
        out[pc.cusp] = pc;
        have[pc.cusp] = 1;
    }
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (have[k]) continue;
        auto [a, b] = peripheral_basis(cs[k]);
        out[k].cusp = static_cast<int>(k);
        out[k].meridian = a;
        out[k].longitude = b;
    }
    return out;
}

EquationSystem edge_rows(const Triangulation& t) {
    EquationSystem sys;
    sys.n = t.size();
    for (const auto& ec : edge_classes(t)) {
        LogForm f;
        f.A.assign(sys.n, 0);
        f.B.assign(sys.n, 0);
        for (const auto& s : ec.sides) add_corner(f, s.tet, s.edge, 1);
        sys.rows.push_back(row_from(f, RowKind::Edge, ec.id, 0, 2 - f.C));
    }
    for (int k = 0; k < static_cast<int>(sys.rows.size()); ++k) sys.square.push_back(k);
    return sys;
}

EquationSystem complete_system(const Triangulation& t) {
    return build_system(t, std::vector<Slope>(cusps(t).size()));
}

EquationSystem filling_system(const Triangulation& t, const std::vector<Slope>& slopes) {
    return build_system(t, slopes);
}

Eigen::VectorXcd residual(const EquationSystem& sys, const ShapeAssignment& s) {
    check_nondegenerate(s);
    Eigen::VectorXcd r(sys.rows.size());
    for (std::size_t k = 0; k < sys.rows.size(); ++k) {
        const auto& row = sys.rows[k];
        cplx v = -kI * kPi * static_cast<double>(row.target);
        for (int i = 0; i < sys.n; ++i)
            v += static_cast<double>(row.A[i]) * s.logz[i] + static_cast<double>(row.B[i]) * s.log1mz[i];
        r[k] = v;
    }
    return r;
}

Eigen::MatrixXcd jacobian(const EquationSystem& sys, const ShapeAssignment& s) {
    check_nondegenerate(s);
    Eigen::MatrixXcd J(sys.rows.size(), sys.n);
    for (std::size_t k = 0; k < sys.rows.size(); ++k)
        for (int i = 0; i < sys.n; ++i)
            J(k, i) = static_cast<double>(sys.rows[k].A[i]) / s.z[i] -
                      static_cast<double>(sys.rows[k].B[i]) / (1.0 - s.z[i]);
    return J;
}

ShapeAssignment default_start(int n) { return ShapeAssignment::from_shapes(std::vector<cplx>(n, kI)); }

Solution newton_solve(const EquationSystem& sys, const ShapeAssignment& start, const SolveOptions& opt) {
    if (start.size() != sys.n) throw std::invalid_argument("start has the wrong number of shapes");
    check_nondegenerate(start);
    ShapeAssignment s = start;
    const int m = static_cast<int>(sys.square.size());

    auto moved = [&](const ShapeAssignment& from, const Eigen::VectorXcd& dz, double lambda) {
        ShapeAssignment t = from;
        for (int i = 0; i < sys.n; ++i) {
            t.z[i] = from.z[i] + lambda * dz[i];
            if (t.z[i] != 0.0 && t.z[i] != 1.0) {
                t.logz[i] = near_branch(std::log(t.z[i]), from.logz[i]);
                t.log1mz[i] = near_branch(std::log(1.0 - t.z[i]), from.log1mz[i]);
            }
        }
        return t;
    };
    auto near_degenerate = [](const ShapeAssignment& t) {
        for (const cplx& z : t.z)
            if (std::abs(z) < 1e-9 || std::abs(1.0 - z) < 1e-9 || std::abs(z) > 1e9 || !std::isfinite(std::abs(z)))
                return true;
        return false;
    };

    Solution out;
    for (int iter = 0;; ++iter) {
        const Eigen::VectorXcd r = residual(sys, s);
        const double rn = inf_norm(r);
        if (rn <= opt.tol) {
            out.report.converged = true;
            out.report.iterations = iter;
            out.report.residual = rn;
            break;
        }
        if (iter >= opt.max_iter)
            throw NoConvergence(fmt::format("residual {:.3e} after {} iterations", rn, opt.max_iter));
        const Eigen::MatrixXcd J = jacobian(sys, s);
        Eigen::MatrixXcd Js(m, sys.n);
        Eigen::VectorXcd rs(m);
        for (int k = 0; k < m; ++k) {
            Js.row(k) = J.row(sys.square[k]);
            rs[k] = r[sys.square[k]];
        }
        std::vector<Eigen::VectorXcd> dirs;
        if (m == sys.n) {
            Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Js);
            Eigen::VectorXcd dz = lu.solve(-rs);
            if (dz.allFinite() && (Js * dz + rs).norm() <= 1e-8 * (1.0 + rs.norm())) dirs.push_back(dz);
        }
        {
            Eigen::MatrixXcd N = Js.adjoint() * Js;
            N.diagonal().array() += 1e-14;
            Eigen::VectorXcd dz = N.ldlt().solve(-Js.adjoint() * rs);
            if (dz.allFinite()) dirs.push_back(dz);
        }
        const double r2 = r.norm();
        bool accepted = false;
        for (const auto& dz : dirs) {
            double lambda = 1.0;
            for (int h = 0; h <= 30; ++h, lambda *= 0.5) {
                ShapeAssignment trial = moved(s, dz, lambda);
                bool bad = false;
                for (const cplx& z : trial.z)
                    if (z == 0.0 || z == 1.0 || !std::isfinite(std::abs(z))) bad = true;
                if (bad) continue;
                if (residual(sys, trial).norm() < r2) {
                    s = trial;
                    accepted = true;
                    break;
                }
            }
            if (accepted) break;
        }
        if (!accepted) throw SingularJacobian(fmt::format("line search stalled at residual {:.3e}", rn));
        if (near_degenerate(s)) throw DegenerateApproach("a shape approached 0, 1 or infinity");
    }
    out.shapes = s;
    out.report.geometric = true;
    for (const cplx& z : s.z) {
        out.report.classes.push_back(classify(z));
        if (classify(z) != Orientation::Positive) out.report.geometric = false;
    }
    out.report.volume = total_volume(s);
    return out;
}

}  // namespace hyp
