#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "hypstruct/triangulation.hpp"

namespace hyp {

namespace {

std::array<int, 3> ccw_order(int v) {
    std::array<int, 3> o{};
    int k = 0;
    for (int w = 0; w < 4; ++w)
        if (w != v) o[k++] = w;
    if (v % 2 == 0) std::swap(o[1], o[2]);
    return o;
}

bool backtrack(const CuspTriangulation& c, int i, int s, int j, int s2) {
    return c.nbr[i][s] == j && c.nbr_side[i][s] == s2;
}

template <class Seq>
Seq reduce_seq(const CuspTriangulation& c, const Seq& in, std::vector<int> Seq::*a, std::vector<int> Seq::*b) {
    std::vector<std::pair<int, int>> st;
    const auto& A = in.*a;
    const auto& B = in.*b;
    for (std::size_t k = 0; k < A.size(); ++k) {
        if (!st.empty() && backtrack(c, st.back().first, st.back().second, A[k], B[k]))
            st.pop_back();
        else
            st.emplace_back(A[k], B[k]);
    }
    std::size_t lo = 0;
    while (st.size() - lo >= 2 && backtrack(c, st.back().first, st.back().second, st[lo].first, st[lo].second)) {
        st.pop_back();
        ++lo;
    }
    Seq out;
    for (std::size_t k = lo; k < st.size(); ++k) {
        (out.*a).push_back(st[k].first);
        (out.*b).push_back(st[k].second);
    }
    return out;
}

std::pair<int, int> partner(const CuspTriangulation& c, int i, int s) { return {c.nbr[i][s], c.nbr_side[i][s]}; }

long gcd_l(long a, long b) { return std::gcd(std::labs(a), std::labs(b)); }

}  // namespace

int ccw_next(int v, int w) {
    auto o = ccw_order(v);
    for (int k = 0; k < 3; ++k)
        if (o[k] == w) return o[(k + 1) % 3];
    throw std::invalid_argument("corner equals cusp vertex");
}

int ccw_prev(int v, int w) {
    auto o = ccw_order(v);
    for (int k = 0; k < 3; ++k)
        if (o[k] == w) return o[(k + 2) % 3];
    throw std::invalid_argument("corner equals cusp vertex");
}

CurveStep make_step(int tet, int vertex, int in_face, int out_face) {
    if (in_face == out_face || in_face == vertex || out_face == vertex)
        throw std::invalid_argument("normal arc must join two distinct sides");
    CurveStep s;
    s.tet = tet;
    s.vertex = vertex;
    s.corner = 6 - vertex - in_face - out_face;
    s.eps = out_face == ccw_next(vertex, s.corner) ? 1 : -1;
    return s;
}

int step_in_face(const CurveStep& s) {
    return s.eps > 0 ? ccw_prev(s.vertex, s.corner) : ccw_next(s.vertex, s.corner);
}

int step_out_face(const CurveStep& s) {
    return s.eps > 0 ? ccw_next(s.vertex, s.corner) : ccw_prev(s.vertex, s.corner);
}

std::vector<std::string> validate_curve(const Triangulation& t, const CuspTriangulation& c,
                                        const NormalCurve& curve) {
    std::vector<std::string> out;
    const auto& st = curve.steps;
    if (st.empty()) {
        out.push_back("curve has no steps");
        return out;
    }
    for (std::size_t k = 0; k < st.size(); ++k) {
        const auto& s = st[k];
        if (s.tet < 0 || s.tet >= t.size() || s.vertex < 0 || s.vertex > 3 || s.corner < 0 || s.corner > 3 ||
            s.corner == s.vertex || (s.eps != 1 && s.eps != -1)) {
            out.push_back(fmt::format("step {}: malformed [{}, {}, {}, {}]", k, s.tet, s.vertex, s.corner, s.eps));
            return out;
        }
        if (c.local_index(s.tet, s.vertex) < 0) {
            out.push_back(fmt::format("step {}: triangle ({}, {}) is not on cusp {}", k, s.tet, s.vertex, c.id));
            return out;
        }
    }
    for (std::size_t k = 0; k < st.size(); ++k) {
        const auto& s = st[k];
        const auto& nx = st[(k + 1) % st.size()];
        int i = c.local_index(s.tet, s.vertex);
        int out_face = step_out_face(s);
        int j = c.nbr[i][out_face];
        if (c.local_index(nx.tet, nx.vertex) != j || step_in_face(nx) != c.nbr_side[i][out_face])
            out.push_back(fmt::format("step {} -> {}: consecutive steps do not cross a matched side", k,
                                      (k + 1) % st.size()));
    }
    return out;
}

NormalCurve reversed(const NormalCurve& curve) {
    NormalCurve r;
    r.cusp = curve.cusp;
    for (auto it = curve.steps.rbegin(); it != curve.steps.rend(); ++it) {
        CurveStep s = *it;
        s.eps = -s.eps;
        r.steps.push_back(s);
    }
    return r;
}

DualWalk walk_of(const CuspTriangulation& c, const NormalCurve& curve) {
    DualWalk w;
    for (const auto& s : curve.steps) {
        w.tri.push_back(c.local_index(s.tet, s.vertex));
        w.out.push_back(step_out_face(s));
    }
    return w;
}

DualWalk reduce(const CuspTriangulation& c, DualWalk w) { return reduce_seq(c, w, &DualWalk::tri, &DualWalk::out); }

PrimalPath reduce(const CuspTriangulation& c, PrimalPath p) {
    return reduce_seq(c, p, &PrimalPath::tri, &PrimalPath::side);
}

NormalCurve curve_of(const CuspTriangulation& c, const DualWalk& w) {
    NormalCurve out;
    out.cusp = c.id;
    const std::size_t n = w.tri.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t prev = (k + n - 1) % n;
        if (c.nbr[w.tri[prev]][w.out[prev]] != w.tri[k]) throw std::logic_error("dual walk is not connected");
        int in = c.nbr_side[w.tri[prev]][w.out[prev]];
        const auto& tr = c.triangles[w.tri[k]];
        out.steps.push_back(make_step(tr.tet, tr.vertex, in, w.out[k]));
    }
    return out;
}

DualWalk concat(const DualWalk& a, const DualWalk& b) {
    DualWalk r = a;
    r.tri.insert(r.tri.end(), b.tri.begin(), b.tri.end());
    r.out.insert(r.out.end(), b.out.begin(), b.out.end());
    return r;
}

DualWalk inverse(const CuspTriangulation& c, const DualWalk& w) {
    DualWalk r;
    for (std::size_t k = w.tri.size(); k-- > 0;) {
        auto [j, s] = partner(c, w.tri[k], w.out[k]);
        r.tri.push_back(j);
        r.out.push_back(s);
    }
    return r;
}

NormalCurve push_off(const CuspTriangulation& c, const PrimalPath& p) {
    NormalCurve out;
    out.cusp = c.id;
    const std::size_t m = p.tri.size();
    if (m == 0) return out;
    auto vert = [&](int i) { return c.triangles[i].vertex; };
    auto along = [&](int i, int s) {
        int x = ccw_next(vert(i), s);
        int y = ccw_next(vert(i), x);
        return make_step(c.triangles[i].tet, vert(i), y, x);
    };
    out.steps.push_back(along(p.tri[0], p.side[0]));
    for (std::size_t k = 0; k < m; ++k) {
        const int i = p.tri[k], s = p.side[k];
        const int x = ccw_next(vert(i), s);
        const int y = ccw_next(vert(i), x);
        int T = c.nbr[i][x], A = c.nbr_side[i][x], cc = c.nbr_perm[i][x][y];
        const std::size_t kn = (k + 1) % m;
        for (int guard = 0;; ++guard) {
            if (guard > 3 * c.num_triangles()) throw std::logic_error("push-off does not close up");
            const int vT = vert(T);
            const int B = 6 - vT - cc - A;
            if (T == p.tri[kn] && B == p.side[kn] && cc == ccw_next(vT, B)) {
                if (kn != 0) out.steps.push_back(along(T, B));
                break;
            }
            out.steps.push_back(make_step(c.triangles[T].tet, vT, A, B));
            const int nT = c.nbr[T][B], nA = c.nbr_side[T][B], ncc = c.nbr_perm[T][B][cc];
            T = nT;
            A = nA;
            cc = ncc;
        }
    }
    return out;
}

int intersection(const CuspTriangulation& c, const DualWalk& w, const PrimalPath& p) {
    int total = 0;
    for (std::size_t k = 0; k < w.tri.size(); ++k) {
        const int e = c.side_edge[w.tri[k]][w.out[k]];
        for (std::size_t l = 0; l < p.tri.size(); ++l) {
            if (c.side_edge[p.tri[l]][p.side[l]] != e) continue;
            total += (p.tri[l] == w.tri[k] && p.side[l] == w.out[k]) ? 1 : -1;
        }
    }
    return total;
}

CuspHomology::CuspHomology(const CuspTriangulation& c) : c_(&c) {
    const int T = c.num_triangles();
    const int E = c.num_edges;
    const int V = c.num_vertices;
    if (c.euler_characteristic() != 0)
        throw CuspNotTorus(fmt::format("cusp {} has Euler characteristic {}", c.id, c.euler_characteristic()));

    // dual spanning tree
    std::vector<int> parent(T, -1), up_side(T, -1);
    std::vector<std::pair<int, int>> down(T, {-1, -1});
    std::vector<char> seen(T, 0), dual_tree(E, 0);
    seen[0] = 1;
    std::deque<int> q{0};
    while (!q.empty()) {
        int i = q.front();
        q.pop_front();
        for (int w = 0; w < 4; ++w) {
            if (w == c.triangles[i].vertex) continue;
            int j = c.nbr[i][w];
            if (seen[j]) continue;
            seen[j] = 1;
            parent[j] = i;
            up_side[j] = c.nbr_side[i][w];
            down[j] = {i, w};
            dual_tree[c.side_edge[i][w]] = 1;
            q.push_back(j);
        }
    }

    // primal edges with their counter-clockwise direction in the owning side
    std::vector<int> otri(E, -1), oside(E, -1), tail(E, -1), head(E, -1);
    for (int i = 0; i < T; ++i) {
        const int v = c.triangles[i].vertex;
        for (int w = 0; w < 4; ++w) {
            if (w == v) continue;
            int e = c.side_edge[i][w];
            if (otri[e] >= 0) continue;
            otri[e] = i;
            oside[e] = w;
            int x = ccw_next(v, w), y = ccw_next(v, x);
            tail[e] = c.corner_vertex[i][x];
            head[e] = c.corner_vertex[i][y];
        }
    }

    // primal spanning tree avoiding the dual tree
    std::vector<std::vector<int>> adj(V);
    for (int e = 0; e < E; ++e) {
        if (dual_tree[e]) continue;
        adj[tail[e]].push_back(e);
        if (head[e] != tail[e]) adj[head[e]].push_back(e);
    }
    std::vector<int> vpar(V, -1);
    std::vector<char> vseen(V, 0), cotree(E, 0);
    vseen[0] = 1;
    q.assign(1, 0);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int e : adj[u]) {
            int o = tail[e] == u ? head[e] : tail[e];
            if (vseen[o]) continue;
            vseen[o] = 1;
            vpar[o] = e;
            cotree[e] = 1;
            q.push_back(o);
        }
    }
    std::vector<int> left;
    for (int e = 0; e < E; ++e)
        if (!dual_tree[e] && !cotree[e]) left.push_back(e);
    if (left.size() != 2) throw CuspNotTorus(fmt::format("cusp {}: tree/cotree leaves {} edges", c.id, left.size()));

    auto to_root = [&](int u) {
        PrimalPath p;
        while (u != 0) {
            int e = vpar[u];
            int pv = tail[e] == u ? head[e] : tail[e];
            if (tail[e] == u) {
                p.tri.push_back(otri[e]);
                p.side.push_back(oside[e]);
            } else {
                auto [j, s] = partner(c, otri[e], oside[e]);
                p.tri.push_back(j);
                p.side.push_back(s);
            }
            u = pv;
        }
        return p;
    };
    auto reverse_path = [&](const PrimalPath& p) {
        PrimalPath r;
        for (std::size_t k = p.tri.size(); k-- > 0;) {
            auto [j, s] = partner(c, p.tri[k], p.side[k]);
            r.tri.push_back(j);
            r.side.push_back(s);
        }
        return r;
    };
    auto down_path = [&](int t) {
        DualWalk w;
        while (t != 0) {
            w.tri.push_back(down[t].first);
            w.out.push_back(down[t].second);
            t = parent[t];
        }
        std::reverse(w.tri.begin(), w.tri.end());
        std::reverse(w.out.begin(), w.out.end());
        return w;
    };
    auto up_path = [&](int t) {
        DualWalk w;
        while (t != 0) {
            w.tri.push_back(t);
            w.out.push_back(up_side[t]);
            t = parent[t];
        }
        return w;
    };

    DualWalk cw[2];
    int s[2];
    for (int k = 0; k < 2; ++k) {
        const int e = left[k];
        PrimalPath path;
        path.tri.push_back(otri[e]);
        path.side.push_back(oside[e]);
        PrimalPath back = to_root(head[e]);
        PrimalPath fwd = reverse_path(to_root(tail[e]));
        path.tri.insert(path.tri.end(), back.tri.begin(), back.tri.end());
        path.side.insert(path.side.end(), back.side.begin(), back.side.end());
        path.tri.insert(path.tri.end(), fwd.tri.begin(), fwd.tri.end());
        path.side.insert(path.side.end(), fwd.side.begin(), fwd.side.end());
        q_[k] = reduce(c, path);

        DualWalk w = down_path(otri[e]);
        w.tri.push_back(otri[e]);
        w.out.push_back(oside[e]);
        w = concat(w, up_path(c.nbr[otri[e]][oside[e]]));
        cw[k] = w;
        s[k] = hyp::intersection(c, w, q_[k]);
        if (std::abs(s[k]) != 1) throw std::logic_error("dual cycle does not meet its primal cycle once");
    }
    // <c1, c2> from the left push-off of q1: [q1] = x c1 + y c2 with y = <P(q1), q2> / s2.
    const int y1 = hyp::intersection(c, walk_of(c, push_off(c, q_[0])), q_[1]) * s[1];
    if (std::abs(y1) != 1) throw std::logic_error("primal cycles do not form a basis");
    const int form = s[0] * y1;
    aw_ = cw[0];
    qsign_[0] = s[0];
    if (form > 0) {
        bw_ = cw[1];
        qsign_[1] = s[1];
    } else {
        bw_ = inverse(c, cw[1]);
        qsign_[1] = -s[1];
    }
    a_ = curve_of(c, reduce(c, aw_));
    b_ = curve_of(c, reduce(c, bw_));

    // Flat corner angles with trivial rotation along a and b.
    const int nrows = T + V + 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nrows, 4 * T);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nrows);
    for (int i = 0; i < T; ++i) {
        for (int w = 0; w < 4; ++w) {
            if (w == c.triangles[i].vertex) continue;
            A(i, 4 * i + w) = 1;
            A(T + c.corner_vertex[i][w], 4 * i + w) = 1;
        }
        rhs(i) = kPi;
    }
    for (int u = 0; u < V; ++u) rhs(T + u) = 2 * kPi;
    int r = T + V;
    for (const NormalCurve* cv : {&a_, &b_}) {
        for (const auto& st : cv->steps) A(r, 4 * c.local_index(st.tet, st.vertex) + st.corner) += st.eps;
        ++r;
    }
    Eigen::VectorXd theta = A.completeOrthogonalDecomposition().solve(rhs);
    if ((A * theta - rhs).norm() > 1e-8) throw std::logic_error("no flat angle assignment for cusp");
    flat_angle_.assign(theta.data(), theta.data() + theta.size());
}

std::array<long, 2> CuspHomology::coords(const DualWalk& w) const {
    return {static_cast<long>(hyp::intersection(*c_, w, q_[0]) * qsign_[0]),
            static_cast<long>(hyp::intersection(*c_, w, q_[1]) * qsign_[1])};
}

std::array<long, 2> CuspHomology::coords(const NormalCurve& curve) const { return coords(walk_of(*c_, curve)); }

std::array<long, 2> CuspHomology::coords(const PrimalPath& p) const { return coords(push_off(*c_, p)); }

long CuspHomology::intersection(const NormalCurve& u, const NormalCurve& v) const {
    auto a = coords(u), b = coords(v);
    return a[0] * b[1] - a[1] * b[0];
}

long CuspHomology::turning(const NormalCurve& curve) const {
    double sum = 0;
    for (const auto& st : curve.steps)
        sum += st.eps * flat_angle_[4 * c_->local_index(st.tet, st.vertex) + st.corner];
    const double tn = sum / (2 * kPi);
    const long r = std::lround(tn);
    if (std::abs(tn - r) > 1e-6) throw std::logic_error("non-integral turning number");
    return r;
}

DualWalk CuspHomology::walk(long x, long y) const {
    DualWalk w;
    const DualWalk ai = inverse(*c_, aw_), bi = inverse(*c_, bw_);
    for (long k = 0; k < std::labs(x); ++k) w = concat(w, x > 0 ? aw_ : ai);
    for (long k = 0; k < std::labs(y); ++k) w = concat(w, y > 0 ? bw_ : bi);
    return w;
}

std::pair<NormalCurve, NormalCurve> peripheral_basis(const CuspTriangulation& c) {
    CuspHomology h(c);
    return {h.a(), h.b()};
}

// ---- first homology of the manifold ----

namespace {

struct FaceGenerators {
    std::vector<std::array<int, 4>> gen;
    std::vector<std::array<int, 4>> sign;
    int count = 0;
};

FaceGenerators face_generators(const Triangulation& t) {
    const int n = t.size();
    FaceGenerators fg;
    fg.gen.assign(n, {-2, -2, -2, -2});
    fg.sign.assign(n, {0, 0, 0, 0});
    std::vector<char> seen(n, 0);
    std::vector<std::array<char, 4>> tree(n, {0, 0, 0, 0});
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        std::deque<int> q{root};
        while (!q.empty()) {
            int i = q.front();
            q.pop_front();
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = t.tets[i].gluings[f];
                if (seen[g.tet]) continue;
                seen[g.tet] = 1;
                tree[i][f] = 1;
                tree[g.tet][g.perm[f]] = 1;
                q.push_back(g.tet);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int f = 0; f < 4; ++f) {
            if (fg.gen[i][f] != -2) continue;
            const Gluing& g = t.tets[i].gluings[f];
            int id = tree[i][f] ? -1 : fg.count++;
            fg.gen[i][f] = id;
            fg.sign[i][f] = 1;
            fg.gen[g.tet][g.perm[f]] = id;
            fg.sign[g.tet][g.perm[f]] = -1;
        }
    }
    return fg;
}

struct Smith {
    std::vector<long> diag;
    std::vector<std::vector<long>> V;  // column operations
    int rank = 0;
    int cols = 0;
};

Smith smith(std::vector<std::vector<long>> R, int cols) {
    Smith s;
    s.cols = cols;
    s.V.assign(cols, std::vector<long>(cols, 0));
    for (int i = 0; i < cols; ++i) s.V[i][i] = 1;
    const int rows = static_cast<int>(R.size());
    auto col_add = [&](int dst, int src, long k) {  // col dst += k col src
        for (auto& row : R) row[dst] += k * row[src];
        for (auto& row : s.V) row[dst] += k * row[src];
    };
    auto col_swap = [&](int a, int b) {
        for (auto& row : R) std::swap(row[a], row[b]);
        for (auto& row : s.V) std::swap(row[a], row[b]);
    };
    int k = 0;
    for (; k < std::min(rows, cols); ++k) {
        for (;;) {
            int pr = -1, pc = -1;
            long best = 0;
            for (int i = k; i < rows; ++i)
                for (int j = k; j < cols; ++j)
                    if (R[i][j] != 0 && (best == 0 || std::labs(R[i][j]) < best)) {
                        best = std::labs(R[i][j]);
                        pr = i;
                        pc = j;
                    }
            if (pr < 0) goto done;
            std::swap(R[k], R[pr]);
            col_swap(k, pc);
            bool clean = true;
            for (int i = k + 1; i < rows; ++i) {
                long qt = R[i][k] / R[k][k];
                if (qt)
                    for (int j = k; j < cols; ++j) R[i][j] -= qt * R[k][j];
                if (R[i][k]) clean = false;
            }
            for (int j = k + 1; j < cols; ++j) {
                long qt = R[k][j] / R[k][k];
                if (qt) col_add(j, k, -qt);
                if (R[k][j]) clean = false;
            }
            if (clean) break;
        }
        s.diag.push_back(std::labs(R[k][k]));
    }
done:
    s.rank = static_cast<int>(s.diag.size());
    for (std::size_t i = 0; i < s.diag.size(); ++i)
        for (std::size_t j = i + 1; j < s.diag.size(); ++j) {
            long g = gcd_l(s.diag[i], s.diag[j]);
            long l = s.diag[i] / g * s.diag[j];
            s.diag[i] = g;
            s.diag[j] = l;
        }
    return s;
}

struct H1Data {
    FaceGenerators fg;
    Smith snf;
};

H1Data h1_data(const Triangulation& t) {
    H1Data d;
    d.fg = face_generators(t);
    std::vector<std::vector<long>> R;
    for (const auto& ec : edge_classes(t)) {
        std::vector<long> row(d.fg.count, 0);
        // the crossing out of each side is through the face opposite the next
        // side's "c" vertex; recover it by walking again
        const auto& s0 = ec.sides[0];
        auto [a, b] = edge_vertices(s0.edge);
        auto [c, dd] = edge_vertices(5 - s0.edge);
        int tet = s0.tet;
        for (std::size_t k = 0; k < ec.sides.size(); ++k) {
            int g = d.fg.gen[tet][dd];
            if (g >= 0) row[g] += d.fg.sign[tet][dd];
            const Gluing& gl = t.tets[tet].gluings[dd];
            int na = gl.perm[a], nb = gl.perm[b], nc = gl.perm[dd], nd = gl.perm[c];
            tet = gl.tet;
            a = na;
            b = nb;
            c = nc;
            dd = nd;
        }
        R.push_back(row);
    }
    d.snf = smith(R, d.fg.count);
    return d;
}

std::vector<long> image_in(const H1Data& d, const NormalCurve& curve) {
    std::vector<long> x(d.fg.count, 0);
    for (const auto& s : curve.steps) {
        int f = step_out_face(s);
        int g = d.fg.gen[s.tet][f];
        if (g >= 0) x[g] += d.fg.sign[s.tet][f];
    }
    std::vector<long> out;
    for (int j = d.snf.rank; j < d.fg.count; ++j) {
        long v = 0;
        for (int i = 0; i < d.fg.count; ++i) v += x[i] * d.snf.V[i][j];
        out.push_back(v);
    }
    return out;
}

// Exact determinant (Bareiss).
long det_exact(std::vector<std::vector<long>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    __int128 prev = 1;
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m[i][j];
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * static_cast<long>(a[n - 1][n - 1]);
}

}  // namespace

ManifoldHomology homology(const Triangulation& t) {
    H1Data d = h1_data(t);
    ManifoldHomology h;
    for (long x : d.snf.diag)
        if (x > 1) h.torsion.push_back(x);
    h.rank = d.fg.count - d.snf.rank;
    return h;
}

std::vector<long> homology_image(const Triangulation& t, const NormalCurve& curve) {
    return image_in(h1_data(t), curve);
}

std::vector<std::vector<long>> homology_images(const Triangulation& t, const std::vector<NormalCurve>& curves) {
    H1Data d = h1_data(t);
    std::vector<std::vector<long>> out;
    for (const auto& c : curves) out.push_back(image_in(d, c));
    return out;
}

std::vector<PeripheralCurves> standard_peripheral(const Triangulation& t, const std::vector<NormalCurve>& meridians) {
    const auto cs = cusps(t);
    const int k = static_cast<int>(cs.size());
    if (static_cast<int>(meridians.size()) != k)
        throw ValidationError(fmt::format("expected {} meridians, got {}", k, meridians.size()));
    H1Data d = h1_data(t);
    const int r = d.fg.count - d.snf.rank;
    if (r != k) throw ValidationError("meridians do not span the free part of H_1");
    std::vector<std::vector<long>> M(r, std::vector<long>(k));
    for (int j = 0; j < k; ++j) {
        auto im = image_in(d, meridians[j]);
        for (int i = 0; i < r; ++i) M[i][j] = im[i];
    }
    if (det_exact(M) == 0) throw ValidationError("meridians do not span the free part of H_1");
    std::vector<PeripheralCurves> out;
    for (int j = 0; j < k; ++j) {
        const auto& c = cs[meridians[j].cusp];
        CuspHomology h(c);
        auto replaced = [&](const std::vector<long>& v) {
            auto m = M;
            for (int i = 0; i < r; ++i) m[i][j] = v[i];
            return det_exact(m);
        };
        long x = replaced(image_in(d, h.b()));
        long y = -replaced(image_in(d, h.a()));
        const auto mu = h.coords(meridians[j]);
        if (x == 0 && y == 0) {
            // fall back to any curve dual to the meridian
            x = mu[1] == 0 ? 0 : 1;
            y = mu[1] == 0 ? 1 : 0;
        }
        long g = gcd_l(x, y);
        x /= g;
        y /= g;
        if (mu[0] * y - mu[1] * x < 0) {
            x = -x;
            y = -y;
        }
        PeripheralCurves pc;
        pc.cusp = c.id;
        pc.meridian = meridians[j];
        pc.longitude = curve_of(c, reduce(c, h.walk(x, y)));
        out.push_back(pc);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.cusp < b.cusp; });
    return out;
}

}  // namespace hyp
