#include "hypstruct/twobridge.hpp"

#include <cstdlib>
#include <numeric>

#include <fmt/format.h>

namespace hyp {

namespace {

// Puncture pairs of each diagonal class, as (a, b, c, d) with edges ab and cd.
constexpr int kClass[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};

int third(int f, int g) { return 3 - f - g; }

void glue(Triangulation& t, int t1, int f1, int t2, const Perm& p) {
    t.tets[t1].gluings[f1] = {t2, p};
    t.tets[t2].gluings[p[f1]] = {t1, perm_inverse(p)};
}

Perm transposition(int a, int b) {
    Perm p{0, 1, 2, 3};
    std::swap(p[a], p[b]);
    return p;
}

int slot_of_class(const Perm& label, int k) {
    return angle_slot(edge_index(label[kClass[k][0]], label[kClass[k][1]]));
}

}  // namespace

std::pair<long, long> cf_value(const std::vector<long>& a) {
    if (a.empty()) return {1, 0};
    long num = a.back(), den = 1;
    for (int k = static_cast<int>(a.size()) - 2; k >= 0; --k) {
        long nn = a[k] * num + den;
        den = num;
        num = nn;
        long g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return {num, den};
}

CFCode normalize_cf(const std::vector<long>& raw) {
    auto [p, q] = cf_value(raw);
    if (q == 0 || p == 0) throw NotHyperbolic("code encodes 0 or infinity");
    if (std::labs(p) < q) {
        // reading the diagram from the other end gives the same link
        std::vector<long> rev(raw.rbegin(), raw.rend());
        std::tie(p, q) = cf_value(rev);
        if (q == 0 || p == 0 || std::labs(p) < q)
            throw NotHyperbolic("code reduces to fewer than two twist regions");
    }
    const long sign = p < 0 ? -1 : 1;
    p = std::labs(p);
    std::vector<long> out;
    while (q != 0) {
        out.push_back(p / q);
        long r = p % q;
        p = q;
        q = r;
    }
    // a single leading crossing joins the next twist region
    if (out.size() >= 2 && out.front() == 1) {
        out.erase(out.begin());
        out.front() += 1;
    }
    if (out.size() < 2) throw NotHyperbolic("code reduces to fewer than two twist regions");
    for (auto& x : out) x *= sign;
    return CFCode{out};
}

RLWord rl_word(const CFCode& cf) {
    const int m = static_cast<int>(cf.a.size());
    const int n = m + 1;
    RLWord w;
    for (int j = 1; j <= m; ++j) {
        long aj = std::labs(cf.a[m - j]);
        long count = (j == 1 || j == m) ? aj - 1 : aj;
        char letter = ((j + n) % 2 == 1) ? 'L' : 'R';
        w.letters.append(static_cast<size_t>(count), letter);
    }
    for (int k = 0; k + 1 < static_cast<int>(w.letters.size()); ++k)
        if (w.letters[k] != w.letters[k + 1]) w.hinges.push_back(k + 2);
    return w;
}

TwoBridge build(const CFCode& cf) {
    if (cf.a.size() < 2) throw NotHyperbolic("code needs at least two twist regions");
    const long sign = cf.a.front() < 0 ? -1 : 1;
    long C = 0;
    for (long x : cf.a) {
        if (x == 0 || (x < 0 ? -1 : 1) != sign)
            throw NotHyperbolic("code entries must be nonzero and of one sign");
        C += std::labs(x);
    }
    if (std::labs(cf.a.front()) < 2 || std::labs(cf.a.back()) < 2)
        throw NotHyperbolic("end entries must have absolute value at least 2");

    TwoBridge tb;
    tb.cf = cf;
    tb.crossings = static_cast<int>(C);
    tb.word = rl_word(cf);
    const std::string& w = tb.word.letters;
    auto letter = [&](int i) { return w[i - 2]; };  // w_i, i = 2..C-1

    // flips[i-1] = f_i
    tb.flips.assign(C - 1, 0);
    tb.flips[0] = 1;
    tb.flips[1] = 0;
    for (int i = 2; i <= C - 2; ++i)
        tb.flips[i] = letter(i) == letter(i + 1) ? tb.flips[i - 2] : third(tb.flips[i - 2], tb.flips[i - 1]);

    const int layers = static_cast<int>(C) - 3;
    Triangulation raw;
    std::string code;
    for (size_t k = 0; k < cf.a.size(); ++k) code += (k ? "," : "") + std::to_string(cf.a[k]);
    raw.name = "2bridge[" + code + "]";
    raw.tets.resize(2 * layers);
    tb.layer.resize(2 * layers);
    tb.copy.resize(2 * layers);
    // owners of the triangle omitting puncture k below and above layer i
    std::vector<std::array<int, 4>> bottom(layers), top(layers);
    for (int i = 2; i <= C - 2; ++i) {
        const int X = 2 * (i - 2), Y = X + 1;
        const int* k = kClass[tb.flips[i - 1]];
        tb.layer[X] = tb.layer[Y] = i;
        tb.copy[X] = 1;
        tb.copy[Y] = 2;
        auto& bo = bottom[i - 2];
        auto& to = top[i - 2];
        bo[k[2]] = bo[k[3]] = X;
        bo[k[0]] = bo[k[1]] = Y;
        to[k[0]] = to[k[1]] = X;
        to[k[2]] = to[k[3]] = Y;
    }
    for (int l = 0; l + 1 < layers; ++l)
        for (int k = 0; k < 4; ++k) glue(raw, top[l][k], k, bottom[l + 1][k], Perm{0, 1, 2, 3});
    auto fold = [&](const std::array<int, 4>& owner, int cls) {
        const int* k = kClass[cls];
        glue(raw, owner[k[2]], k[2], owner[k[3]], transposition(k[2], k[3]));
        glue(raw, owner[k[0]], k[0], owner[k[1]], transposition(k[0], k[1]));
    };
    fold(bottom.front(), tb.flips.front());
    fold(top.back(), tb.flips.back());

    if (sign < 0) raw = relabeled(raw, std::vector<Perm>(raw.size(), Perm{1, 0, 2, 3}));
    const auto sigma = orienting_relabel(raw);
    tb.tri = relabeled(raw, sigma);
    tb.label.resize(raw.size());
    for (int t = 0; t < raw.size(); ++t)
        tb.label[t] = sign < 0 ? perm_compose(sigma[t], Perm{1, 0, 2, 3}) : sigma[t];

    // meridians: loop around a puncture in a level sphere
    const auto cs = cusps(tb.tri);
    auto cusp_of = [&](int tet, int v) {
        for (const auto& c : cs)
            if (c.index_of[4 * tet + v] >= 0) return c.id;
        throw std::logic_error("corner triangle without cusp");
    };
    std::vector<NormalCurve> meridians(cs.size());
    std::vector<bool> have(cs.size(), false);
    tb.meridian_segments.assign(cs.size(), 0);
    for (int p = 0; p < 4; ++p) {
        const int q0 = p == 0 ? 1 : 0;
        const int cid = cusp_of(bottom[0][q0], tb.label[bottom[0][q0]][p]);
        if (have[cid]) continue;
        const auto& c = cs[cid];
        int qs[3], nq = 0;
        for (int q = 0; q < 4; ++q)
            if (q != p) qs[nq++] = q;
        bool done = false;
        for (int level = 0; level < 2 && !done; ++level) {
            const auto& owner = level == 0 ? bottom[0] : top[0];
            PrimalPath path;
            for (int s = 0; s < 3; ++s) {
                const int omit = qs[s], from = qs[(s + 1) % 3];
                const int T = owner[omit];
                const Perm& L = tb.label[T];
                const int tri = c.local_index(T, L[p]);
                const int side = L[omit];
                if (ccw_next(L[p], side) == L[from]) {
                    path.tri.push_back(tri);
                    path.side.push_back(side);
                } else {
                    path.tri.push_back(c.nbr[tri][side]);
                    path.side.push_back(c.nbr_side[tri][side]);
                }
            }
            path = reduce(c, path);
            if (path.tri.empty()) continue;
            NormalCurve mu = push_off(c, path);
            if (!validate_curve(tb.tri, c, mu).empty()) continue;
            CuspHomology h(c);
            auto xy = h.coords(mu);
            if (std::gcd(std::labs(xy[0]), std::labs(xy[1])) != 1) continue;
            meridians[cid] = mu;
            tb.meridian_segments[cid] = static_cast<int>(path.tri.size());
            done = true;
        }
        if (!done) throw std::logic_error(fmt::format("no meridian found for cusp {}", cid));
        have[cid] = true;
    }
    tb.tri.peripheral = standard_peripheral(tb.tri, meridians);
    return tb;
}

std::vector<double> z_sequence(const RLWord& w, int C) {
    std::vector<double> z(C - 1, 0.0);  // z[i-1] = z_i
    const auto& h = w.hinges;
    if (h.empty()) throw std::logic_error("word without hinges");
    for (int j : h) z[j - 1] = kPi / 3;
    for (size_t m = 0; m + 1 < h.size(); ++m) {
        const double j = h[m], k = h[m + 1];
        for (int i = h[m] + 1; i < h[m + 1]; ++i)
            z[i - 1] = kPi / 3 - 2.0 * (i - j) * (k - i) / ((k - j) * (k - j));
    }
    auto fan = [](double t) { return kPi / 3 * t - kPi / 6 * t * (1 - t); };
    for (int i = 2; i < h.front(); ++i) z[i - 1] = fan(double(i - 1) / (h.front() - 1));
    for (int i = h.back() + 1; i < C - 1; ++i) z[i - 1] = fan(double(C - 1 - i) / (C - 1 - h.back()));
    return z;
}

AnglePoint initial_angles(const CFCode& cf) { return initial_angles(build(cf)); }

AnglePoint initial_angles(const TwoBridge& tb) {
    const int C = tb.crossings;
    const std::string& w = tb.word.letters;
    auto letter = [&](int i) { return w[i - 2]; };
    const auto z = z_sequence(tb.word, C);
    auto zi = [&](int i) { return z[i - 1]; };
    const int n = tb.tri.size();
    const auto pol = polytope(tb.tri);
    const int nh = static_cast<int>(tb.word.hinges.size());
    if (nh > 20) throw std::logic_error("too many hinges");

    // (x, y) of layer i from the letter table
    auto xy = [&](int i) -> std::pair<double, double> {
        const char a = letter(i), b = letter(i + 1);
        const double zm = zi(i - 1), z0 = zi(i), zp = zi(i + 1);
        if (a == 'L' && b == 'L') return {0.5 * (2 * kPi - zm - zp), 0.5 * (zm - 2 * z0 + zp)};
        if (a == 'R' && b == 'R') return {0.5 * (zm - 2 * z0 + zp), 0.5 * (2 * kPi - zm - zp)};
        const double x = 0.5 * (kPi - zm - z0 + zp), y = 0.5 * (kPi + zm - z0 - zp);
        if (a == 'L') return {x, y};
        return {y, x};
    };

    // Which of the two non-diagonal classes takes x is fixed by the level
    // letters away from hinges; try both readings and keep the valid one.
    for (int swap = 0; swap < 2; ++swap) {
        for (long bits = 0; bits < (1L << nh); ++bits) {
            AnglePoint a(3 * n);
            for (int t = 0; t < n; ++t) {
                const int i = tb.layer[t];
                const int fd = tb.flips[i - 1], fprev = tb.flips[i - 2], piv = third(fd, fprev);
                char l = letter(i);
                for (int h = 0; h < nh; ++h)
                    if (tb.word.hinges[h] == i && ((bits >> h) & 1)) l = letter(i + 1);
                if (swap) l = l == 'L' ? 'R' : 'L';
                auto [x, y] = xy(i);
                const Perm& L = tb.label[t];
                a[3 * t + slot_of_class(L, fd)] = zi(i);
                a[3 * t + slot_of_class(L, piv)] = l == 'L' ? y : x;
                a[3 * t + slot_of_class(L, fprev)] = l == 'L' ? x : y;
            }
            if (equality_residual(pol, a) < 1e-12 && a.minCoeff() > 0) return a;
        }
    }
    throw std::logic_error("angle table gave no point of the polytope");
}

}  // namespace hyp
