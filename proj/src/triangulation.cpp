#include "hypstruct/triangulation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include <fmt/format.h>

namespace hyp {

namespace {

constexpr int kEdgeA[6] = {0, 0, 0, 1, 1, 2};
constexpr int kEdgeB[6] = {1, 2, 3, 2, 3, 3};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<Perm> all_perms() {
    std::vector<Perm> out;
    Perm p{0, 1, 2, 3};
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Relabel a curve step through per-tet label maps, keeping its path.
CurveStep relabel_step(const CurveStep& s, int new_tet, const Perm& sigma) {
    return make_step(new_tet, sigma[s.vertex], sigma[step_in_face(s)], sigma[step_out_face(s)]);
}

// Cusp id of each curve recomputed from its first step.
void renumber_cusps(Triangulation& t) {
    if (t.peripheral.empty()) return;
    auto cs = cusps(t, false);
    for (auto& pc : t.peripheral) {
        const auto& s = pc.meridian.steps.empty() ? pc.longitude.steps : pc.meridian.steps;
        if (s.empty()) continue;
        for (const auto& c : cs) {
            if (c.index_of[4 * s[0].tet + s[0].vertex] >= 0) {
                pc.cusp = c.id;
                break;
            }
        }
        pc.meridian.cusp = pc.cusp;
        pc.longitude.cusp = pc.cusp;
    }
    std::stable_sort(t.peripheral.begin(), t.peripheral.end(),
                     [](const PeripheralCurves& a, const PeripheralCurves& b) { return a.cusp < b.cusp; });
}

}  // namespace

Triangulation relabeled(const Triangulation& t, const std::vector<Perm>& sigma) {
    Triangulation out;
    out.name = t.name;
    out.tets.resize(t.tets.size());
    for (int i = 0; i < t.size(); ++i) {
        const Perm inv = perm_inverse(sigma[i]);
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = t.tets[i].gluings[f];
            Gluing& ng = out.tets[i].gluings[sigma[i][f]];
            ng.tet = g.tet;
            ng.perm = perm_compose(sigma[g.tet], perm_compose(g.perm, inv));
        }
    }
    for (const auto& pc : t.peripheral) {
        PeripheralCurves q = pc;
        for (auto* c : {&q.meridian, &q.longitude})
            for (auto& s : c->steps) s = relabel_step(s, s.tet, sigma[s.tet]);
        out.peripheral.push_back(q);
    }
    renumber_cusps(out);
    return out;
}

Perm perm_inverse(const Perm& p) {
    Perm q{};
    for (int i = 0; i < 4; ++i) q[p[i]] = i;
    return q;
}

Perm perm_compose(const Perm& a, const Perm& b) {
    Perm r{};
    for (int i = 0; i < 4; ++i) r[i] = a[b[i]];
    return r;
}

int perm_parity(const Perm& p) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) ++inv;
    return inv & 1;
}

bool perm_valid(const Perm& p) {
    int seen = 0;
    for (int x : p) {
        if (x < 0 || x > 3) return false;
        seen |= 1 << x;
    }
    return seen == 15;
}

int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int e = 0; e < 6; ++e)
        if (kEdgeA[e] == a && kEdgeB[e] == b) return e;
    throw std::invalid_argument(fmt::format("no edge between vertices {} and {}", a, b));
}

std::pair<int, int> edge_vertices(int e) { return {kEdgeA[e], kEdgeB[e]}; }

int angle_slot(int e) { return std::min(e, 5 - e); }

Companion edge_companion(int e) {
    switch (angle_slot(e)) {
        case 0: return Companion::Z;
        case 1: return Companion::ZDoublePrime;
        default: return Companion::ZPrime;
    }
}

std::vector<std::string> validate(const Triangulation& t) {
    std::vector<std::string> out;
    const int n = t.size();
    if (n == 0) out.push_back("triangulation has no tetrahedra");
    for (int i = 0; i < n; ++i) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = t.tets[i].gluings[f];
            const std::string where = fmt::format("tet {} face {}", i, f);
            if (g.tet < 0 || g.tet >= n) {
                out.push_back(where + ": face unmatched");
                continue;
            }
            if (!perm_valid(g.perm)) {
                out.push_back(where + ": gluing is not a permutation of {0,1,2,3}");
                continue;
            }
            const int f2 = g.perm[f];
            if (g.tet == i && f2 == f) {
                out.push_back(where + ": non-involutive/self-identical gluing (face glued to itself)");
                continue;
            }
            const Gluing& back = t.tets[g.tet].gluings[f2];
            if (back.tet != i || back.perm != perm_inverse(g.perm)) {
                out.push_back(fmt::format("{}: non-involutive gluing (tet {} face {} does not glue back)", where,
                                          g.tet, f2));
                continue;
            }
            if (perm_parity(g.perm) == 0)
                out.push_back(where + ": gluing is orientation-preserving (even permutation)");
        }
    }
    return out;
}

bool is_orientable(const Triangulation& t) {
    const int n = t.size();
    std::vector<int> sign(n, 0);
    for (int root = 0; root < n; ++root) {
        if (sign[root]) continue;
        sign[root] = 1;
        std::deque<int> q{root};
        while (!q.empty()) {
            int i = q.front();
            q.pop_front();
            for (const auto& g : t.tets[i].gluings) {
                if (g.tet < 0) continue;
                int s = perm_parity(g.perm) ? sign[i] : -sign[i];
                if (!sign[g.tet]) {
                    sign[g.tet] = s;
                    q.push_back(g.tet);
                } else if (sign[g.tet] != s) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<EdgeClass> edge_classes(const Triangulation& t) {
    const int n = t.size();
    std::vector<std::array<bool, 6>> seen(n);
    for (auto& s : seen) s.fill(false);
    std::vector<EdgeClass> out;
    for (int t0 = 0; t0 < n; ++t0) {
        for (int e0 = 0; e0 < 6; ++e0) {
            if (seen[t0][e0]) continue;
            EdgeClass ec;
            ec.id = static_cast<int>(out.size());
            int a = kEdgeA[e0], b = kEdgeB[e0];
            int c = kEdgeA[5 - e0], d = kEdgeB[5 - e0];
            int tet = t0;
            const int start[5] = {t0, a, b, c, d};
            for (int guard = 0; guard <= 6 * n; ++guard) {
                int e = edge_index(a, b);
                if (seen[tet][e]) break;
                seen[tet][e] = true;
                ec.sides.push_back({tet, e, a < b ? 1 : -1});
                const Gluing& g = t.tets[tet].gluings[d];
                const Perm& p = g.perm;
                int na = p[a], nb = p[b], nc = p[d], nd = p[c];
                tet = g.tet;
                a = na;
                b = nb;
                c = nc;
                d = nd;
                if (tet == start[0] && a == start[1] && b == start[2] && c == start[3] && d == start[4]) break;
            }
            out.push_back(std::move(ec));
        }
    }
    return out;
}

std::vector<std::array<int, 6>> edge_class_table(const std::vector<EdgeClass>& classes, int ntets) {
    std::vector<std::array<int, 6>> tab(ntets);
    for (auto& r : tab) r.fill(-1);
    for (const auto& ec : classes)
        for (const auto& s : ec.sides) tab[s.tet][s.edge] = ec.id;
    return tab;
}

int CuspTriangulation::local_index(int tet, int vertex) const {
    const std::size_t k = 4 * static_cast<std::size_t>(tet) + vertex;
    return k < index_of.size() ? index_of[k] : -1;
}

std::vector<CuspTriangulation> cusps(const Triangulation& t, bool require_torus) {
    const int n = t.size();
    const auto table = edge_class_table(edge_classes(t), n);
    std::vector<int> comp(4 * n, -1);
    std::vector<CuspTriangulation> out;
    for (int start = 0; start < 4 * n; ++start) {
        if (comp[start] >= 0) continue;
        const int id = static_cast<int>(out.size());
        std::vector<int> members;
        std::deque<int> q{start};
        comp[start] = id;
        while (!q.empty()) {
            int k = q.front();
            q.pop_front();
            members.push_back(k);
            int tet = k / 4, v = k % 4;
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                const Gluing& g = t.tets[tet].gluings[f];
                int k2 = 4 * g.tet + g.perm[v];
                if (comp[k2] < 0) {
                    comp[k2] = id;
                    q.push_back(k2);
                }
            }
        }
        std::sort(members.begin(), members.end());

        CuspTriangulation c;
        c.id = id;
        c.index_of.assign(4 * n, -1);
        for (std::size_t i = 0; i < members.size(); ++i) {
            c.index_of[members[i]] = static_cast<int>(i);
            c.triangles.push_back({members[i] / 4, members[i] % 4});
        }
        const int T = c.num_triangles();
        c.nbr.resize(T);
        c.nbr_side.resize(T);
        c.nbr_perm.resize(T);
        c.corner_edge.resize(T);
        c.corner_vertex.resize(T);
        c.side_edge.resize(T);
        for (int i = 0; i < T; ++i) {
            const auto [tet, v] = c.triangles[i];
            c.nbr[i].fill(-1);
            c.nbr_side[i].fill(-1);
            c.corner_edge[i].fill(-1);
            c.corner_vertex[i].fill(-1);
            c.side_edge[i].fill(-1);
            c.nbr_perm[i].fill(Perm{0, 1, 2, 3});
            for (int w = 0; w < 4; ++w) {
                if (w == v) continue;
                const Gluing& g = t.tets[tet].gluings[w];
                c.nbr[i][w] = c.index_of[4 * g.tet + g.perm[v]];
                c.nbr_side[i][w] = g.perm[w];
                c.nbr_perm[i][w] = g.perm;
                c.corner_edge[i][w] = table[tet][edge_index(v, w)];
            }
        }
        UnionFind uf(4 * T);
        for (int i = 0; i < T; ++i) {
            const int v = c.triangles[i].vertex;
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                const int j = c.nbr[i][f];
                const Perm& p = c.nbr_perm[i][f];
                for (int x = 0; x < 4; ++x)
                    if (x != v && x != f) uf.unite(4 * i + x, 4 * j + p[x]);
            }
        }
        std::vector<int> vid(4 * T, -1);
        for (int i = 0; i < T; ++i) {
            for (int w = 0; w < 4; ++w) {
                if (w == c.triangles[i].vertex) continue;
                int r = uf.find(4 * i + w);
                if (vid[r] < 0) vid[r] = c.num_vertices++;
                c.corner_vertex[i][w] = vid[r];
            }
        }
        for (int i = 0; i < T; ++i) {
            for (int w = 0; w < 4; ++w) {
                if (w == c.triangles[i].vertex || c.side_edge[i][w] >= 0) continue;
                c.side_edge[i][w] = c.num_edges;
                c.side_edge[c.nbr[i][w]][c.nbr_side[i][w]] = c.num_edges;
                ++c.num_edges;
            }
        }
        if (require_torus && c.euler_characteristic() != 0)
            throw CuspNotTorus(fmt::format("cusp {} has Euler characteristic {}", id, c.euler_characteristic()));
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Perm> orienting_relabel(const Triangulation& t) {
    const int n = t.size();
    std::vector<int> sign(n, 0);
    for (int root = 0; root < n; ++root) {
        if (sign[root]) continue;
        sign[root] = 1;
        std::deque<int> q{root};
        while (!q.empty()) {
            int i = q.front();
            q.pop_front();
            for (const auto& g : t.tets[i].gluings) {
                int s = perm_parity(g.perm) ? sign[i] : -sign[i];
                if (!sign[g.tet]) {
                    sign[g.tet] = s;
                    q.push_back(g.tet);
                } else if (sign[g.tet] != s) {
                    throw ValidationError("triangulation is not orientable");
                }
            }
        }
    }
    std::vector<Perm> sigma(n, Perm{0, 1, 2, 3});
    for (int i = 0; i < n; ++i)
        if (sign[i] < 0) sigma[i] = Perm{1, 0, 2, 3};
    return sigma;
}

Triangulation oriented(const Triangulation& t) { return relabeled(t, orienting_relabel(t)); }

Triangulation mirrored(const Triangulation& t) {
    return relabeled(t, std::vector<Perm>(t.size(), Perm{1, 0, 2, 3}));
}

std::optional<Isomorphism> find_isomorphism(const Triangulation& a, const Triangulation& b,
                                            bool orientation_preserving) {
    const int n = a.size();
    if (b.size() != n || n == 0) return std::nullopt;
    for (int j = 0; j < n; ++j) {
        for (const Perm& pi : all_perms()) {
            if (orientation_preserving && perm_parity(pi)) continue;
            Isomorphism iso;
            iso.tet.assign(n, -1);
            iso.perm.assign(n, Perm{0, 1, 2, 3});
            std::vector<bool> used(n, false);
            iso.tet[0] = j;
            iso.perm[0] = pi;
            used[j] = true;
            std::deque<int> q{0};
            bool ok = true;
            while (ok && !q.empty()) {
                int i = q.front();
                q.pop_front();
                for (int f = 0; f < 4 && ok; ++f) {
                    const Gluing& ga = a.tets[i].gluings[f];
                    const Gluing& gb = b.tets[iso.tet[i]].gluings[iso.perm[i][f]];
                    // pi_{t'} o p = q o pi_t
                    Perm want = perm_compose(gb.perm, perm_compose(iso.perm[i], perm_inverse(ga.perm)));
                    if (iso.tet[ga.tet] < 0) {
                        if (used[gb.tet]) {
                            ok = false;
                            break;
                        }
                        iso.tet[ga.tet] = gb.tet;
                        iso.perm[ga.tet] = want;
                        used[gb.tet] = true;
                        q.push_back(ga.tet);
                    } else if (iso.tet[ga.tet] != gb.tet || iso.perm[ga.tet] != want) {
                        ok = false;
                    }
                }
            }
            if (ok && std::find(iso.tet.begin(), iso.tet.end(), -1) == iso.tet.end()) return iso;
        }
    }
    return std::nullopt;
}

NormalCurve transport(const Isomorphism& iso, const NormalCurve& curve,
                      const std::vector<CuspTriangulation>& target_cusps) {
    NormalCurve out;
    for (const auto& s : curve.steps) out.steps.push_back(relabel_step(s, iso.tet[s.tet], iso.perm[s.tet]));
    if (!out.steps.empty()) {
        for (const auto& c : target_cusps)
            if (c.local_index(out.steps[0].tet, out.steps[0].vertex) >= 0) out.cusp = c.id;
    }
    return out;
}

Triangulation disjoint_union(const Triangulation& a, const Triangulation& b) {
    Triangulation out = a;
    out.name = a.name + "+" + b.name;
    const int off = a.size();
    for (const auto& tet : b.tets) {
        Tetrahedron nt = tet;
        for (auto& g : nt.gluings) g.tet += off;
        out.tets.push_back(nt);
    }
    for (auto pc : b.peripheral) {
        for (auto* c : {&pc.meridian, &pc.longitude})
            for (auto& s : c->steps) s.tet += off;
        out.peripheral.push_back(pc);
    }
    renumber_cusps(out);
    return out;
}

}  // namespace hyp

namespace hyp {

std::optional<Triangulation> two_three_move(const Triangulation& t, int A, int f) {
    const Gluing& gab = t.tets[A].gluings[f];
    const int B = gab.tet;
    if (B == A || B < 0) return std::nullopt;
    const Perm& p = gab.perm;
    int u[3], k0 = 0;
    for (int v = 0; v < 4; ++v)
        if (v != f) u[k0++] = v;
    // N_k labels: 0 apex of A, 1 apex of B, 2 u_{k+1}, 3 u_{k+2}
    std::array<Perm, 3> phi, psi;  // N_k label -> A label, N_k label -> B label
    for (int k = 0; k < 3; ++k) {
        phi[k] = Perm{f, u[k], u[(k + 1) % 3], u[(k + 2) % 3]};
        psi[k] = Perm{p[u[k]], p[f], p[u[(k + 1) % 3]], p[u[(k + 2) % 3]]};
    }
    const int n = t.size();
    std::vector<int> newidx(n, -1);
    int m = 0;
    for (int i = 0; i < n; ++i)
        if (i != A && i != B) newidx[i] = m++;
    const int base = m;
    Triangulation out;
    out.name = t.name;
    out.tets.resize(m + 3);
    // where a face of A or B went: (new tet, old label -> new label)
    auto moved = [&](int old, int face) -> std::pair<int, Perm> {
        for (int k = 0; k < 3; ++k) {
            if (old == A && face == u[k]) return {base + k, perm_inverse(phi[k])};
            if (old == B && face == p[u[k]]) return {base + k, perm_inverse(psi[k])};
        }
        throw std::logic_error("face not on the boundary of the bipyramid");
    };
    for (int i = 0; i < n; ++i) {
        if (newidx[i] < 0) continue;
        for (int h = 0; h < 4; ++h) {
            Gluing g = t.tets[i].gluings[h];
            if (g.tet == A || g.tet == B) {
                auto [nt, lab] = moved(g.tet, g.perm[h]);
                g = {nt, perm_compose(lab, g.perm)};
            } else if (g.tet >= 0) {
                g.tet = newidx[g.tet];
            }
            out.tets[newidx[i]].gluings[h] = g;
        }
    }
    for (int k = 0; k < 3; ++k) {
        auto& N = out.tets[base + k].gluings;
        for (int side = 0; side < 2; ++side) {
            const int old = side == 0 ? A : B;
            const Perm& map = side == 0 ? phi[k] : psi[k];
            const int oldface = map[side == 0 ? 1 : 0];
            const Gluing& g = t.tets[old].gluings[oldface];
            Gluing ng;
            if (g.tet == A || g.tet == B) {
                auto [nt, lab] = moved(g.tet, g.perm[oldface]);
                ng = {nt, perm_compose(lab, perm_compose(g.perm, map))};
            } else {
                ng = {newidx[g.tet], perm_compose(g.perm, map)};
            }
            N[side == 0 ? 1 : 0] = ng;
        }
        N[3] = {base + (k + 2) % 3, Perm{0, 1, 3, 2}};
        N[2] = {base + (k + 1) % 3, Perm{0, 1, 3, 2}};
    }
    return out;
}

}  // namespace hyp
