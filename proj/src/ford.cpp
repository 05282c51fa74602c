#include "hypstruct/ford.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

namespace hyp {

Moebius Moebius::normalized(cplx a, cplx b, cplx c, cplx d) {
    cplx det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw std::invalid_argument("singular matrix");
    cplx s = std::sqrt(det);
    Moebius m{a / s, b / s, c / s, d / s};
    for (cplx x : {m.a, m.b, m.c, m.d}) {
        if (std::abs(x) < 1e-14) continue;
        double arg = std::arg(x);
        if (arg < -1e-12 || arg >= kPi - 1e-12) {
            m.a = -m.a;
            m.b = -m.b;
            m.c = -m.c;
            m.d = -m.d;
        }
        break;
    }
    return m;
}

Moebius Moebius::operator*(const Moebius& o) const {
    return normalized(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

Moebius Moebius::inverse() const { return normalized(d, -b, -c, a); }

cplx Moebius::apply(cplx z) const { return (a * z + b) / (c * z + d); }

std::pair<cplx, double> Moebius::apply(cplx z, double t) const {
    // quaternion formula for (z + t j)
    const cplx cz = c * z + d;
    const double den = std::norm(cz) + std::norm(c) * t * t;
    const cplx w = ((a * z + b) * std::conj(cz) + a * std::conj(c) * t * t) / den;
    return {w, t / den};
}

bool Moebius::same(const Moebius& o, double tol) const {
    auto close = [&](double s) {
        return std::abs(a - s * o.a) < tol && std::abs(b - s * o.b) < tol && std::abs(c - s * o.c) < tol &&
               std::abs(d - s * o.d) < tol;
    };
    return close(1) || close(-1);
}

bool Window::contains(cplx z, double tol) const {
    // coordinates in the (e1, e2) basis
    const cplx w = z - origin;
    const double det = e1.real() * e2.imag() - e1.imag() * e2.real();
    const double s = (w.real() * e2.imag() - w.imag() * e2.real()) / det;
    const double t = (e1.real() * w.imag() - e1.imag() * w.real()) / det;
    return s > -tol && s < 1 + tol && t > -tol && t < 1 + tol;
}

IsometricSphere isometric_sphere(const Moebius& g) {
    if (std::abs(g.c) < 1e-14) throw FixesInfinity("matrix fixes infinity (c = 0)");
    IsometricSphere s;
    s.center = g.a / g.c;
    s.radius = 1.0 / std::abs(g.c);
    s.matrix = g;
    return s;
}

namespace {

std::pair<double, double> lattice_coords(const CuspLattice& L, cplx z) {
    const double det = L.t1.real() * L.t2.imag() - L.t1.imag() * L.t2.real();
    return {(z.real() * L.t2.imag() - z.imag() * L.t2.real()) / det,
            (L.t1.real() * z.imag() - L.t1.imag() * z.real()) / det};
}

// Lattice translates of center lying in the window.
std::vector<std::pair<long, long>> translates_into(const CuspLattice& L, const Window& W, cplx center) {
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (cplx corner : {W.at(0, 0), W.at(1, 0), W.at(0, 1), W.at(1, 1)}) {
        auto [u, v] = lattice_coords(L, corner - center);
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    std::vector<std::pair<long, long>> out;
    for (long m = static_cast<long>(std::floor(umin)) - 1; m <= static_cast<long>(std::ceil(umax)) + 1; ++m)
        for (long n = static_cast<long>(std::floor(vmin)) - 1; n <= static_cast<long>(std::ceil(vmax)) + 1; ++n)
            if (W.contains(center + double(m) * L.t1 + double(n) * L.t2)) out.push_back({m, n});
    return out;
}

bool same_sphere(const IsometricSphere& a, const IsometricSphere& b) {
    return std::abs(a.center - b.center) < 1e-10 && std::abs(a.radius - b.radius) < 1e-10;
}

double height(const IsometricSphere& s, cplx p) {
    const double h2 = s.radius * s.radius - std::norm(p - s.center);
    return h2 > 0 ? std::sqrt(h2) : -1.0;
}

std::string fmt6(double x) {
    std::string s = fmt::format("{:.6f}", x);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

}  // namespace

std::vector<IsometricSphere> enumerate(const std::vector<Generator>& gens, const CuspLattice& lattice, int max_len,
                                       const Window& window) {
    std::vector<IsometricSphere> out;
    if (max_len <= 0) return out;
    struct Letter {
        std::string name;
        Moebius m;
        int gen, sign;
    };
    std::vector<Letter> letters;
    for (size_t k = 0; k < gens.size(); ++k) {
        letters.push_back({gens[k].name, gens[k].m, static_cast<int>(k), 1});
        letters.push_back({gens[k].name + "^-1", gens[k].m.inverse(), static_cast<int>(k), -1});
    }
    struct Word {
        std::vector<int> idx;
        Moebius m;
    };
    std::vector<Word> level{{{}, Moebius{}}};
    auto add = [&](const Word& w) {
        if (std::abs(w.m.c) < 1e-12) return;
        IsometricSphere s = isometric_sphere(w.m);
        std::string name;
        for (size_t k = 0; k < w.idx.size(); ++k) name += (k ? " " : "") + letters[w.idx[k]].name;
        s.word = name;
        for (auto [m, n] : translates_into(lattice, window, s.center)) {
            const cplx tau = double(m) * lattice.t1 + double(n) * lattice.t2;
            IsometricSphere t = s;
            t.center += tau;
            t.matrix = Moebius::normalized(1, tau, 0, 1) * s.matrix;
            if (m || n) t.word = fmt::format("T({},{}) {}", m, n, name);
            bool dup = false;
            for (const auto& o : out)
                if (same_sphere(o, t)) {
                    dup = true;
                    break;
                }
            if (!dup) out.push_back(t);
        }
    };
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : level) {
            for (int l = 0; l < static_cast<int>(letters.size()); ++l) {
                if (!w.idx.empty()) {
                    const auto& last = letters[w.idx.back()];
                    if (last.gen == letters[l].gen && last.sign == -letters[l].sign) continue;
                }
                Word nw{w.idx, w.m * letters[l].m};
                nw.idx.push_back(l);
                next.push_back(nw);
            }
        }
        for (const auto& w : next) add(w);
        level = std::move(next);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const IsometricSphere& a, const IsometricSphere& b) { return a.radius > b.radius + 1e-12; });
    return out;
}

std::vector<IsometricSphere> visible(const std::vector<IsometricSphere>& spheres, const CuspLattice& lattice,
                                     const Window& window, int grid) {
    // occluders: every sphere with its neighbouring lattice translates
    std::vector<IsometricSphere> occ;
    for (const auto& s : spheres)
        for (int m = -1; m <= 1; ++m)
            for (int n = -1; n <= 1; ++n) {
                IsometricSphere t = s;
                t.center += double(m) * lattice.t1 + double(n) * lattice.t2;
                occ.push_back(t);
            }
    std::vector<char> keep(spheres.size(), 0);
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
            const cplx p = window.at(double(i) / grid, double(j) / grid);
            for (size_t k = 0; k < spheres.size(); ++k) {
                if (keep[k]) continue;
                const double h = height(spheres[k], p);
                if (h <= 0) continue;
                bool top = true;
                for (const auto& o : occ) {
                    if (same_sphere(o, spheres[k])) continue;
                    if (height(o, p) >= h - 1e-9) {
                        top = false;
                        break;
                    }
                }
                if (top) keep[k] = 1;
            }
        }
    }
    std::vector<IsometricSphere> out;
    for (size_t k = 0; k < spheres.size(); ++k) {
        if (!keep[k]) continue;
        IsometricSphere s = spheres[k];
        s.apex_covered = false;
        for (const auto& o : occ)
            if (!same_sphere(o, s) && height(o, s.center) > s.radius + 1e-9) s.apex_covered = true;
        out.push_back(s);
    }
    return out;
}

std::vector<DualEdge> dual_edges(const std::vector<IsometricSphere>& vis) {
    std::vector<DualEdge> out;
    for (const auto& s : vis) {
        bool merged = false;
        for (auto& e : out)
            if (std::abs(e.center - s.center) < 1e-10) {
                ++e.multiplicity;
                merged = true;
            }
        if (!merged) out.push_back({s.center, 1, s.apex_covered});
    }
    return out;
}

std::string ford_svg(const std::vector<IsometricSphere>& vis, const CuspLattice&, const Window& window) {
    const double scale = 100;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto grow = [&](cplx z, double r) {
        xmin = std::min(xmin, z.real() - r);
        xmax = std::max(xmax, z.real() + r);
        ymin = std::min(ymin, z.imag() - r);
        ymax = std::max(ymax, z.imag() + r);
    };
    for (cplx c : {window.at(0, 0), window.at(1, 0), window.at(0, 1), window.at(1, 1)}) grow(c, 0.1);
    for (const auto& s : vis) grow(s.center, s.radius);
    auto X = [&](cplx z) { return fmt6((z.real() - xmin) * scale); };
    auto Y = [&](cplx z) { return fmt6((ymax - z.imag()) * scale); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt6((xmax - xmin) * scale) << "\" height=\""
       << fmt6((ymax - ymin) * scale) << "\">\n";
    os << "  <polygon class=\"fundamental-domain\" fill=\"none\" stroke=\"black\" points=\"";
    bool first = true;
    for (cplx c : {window.at(0, 0), window.at(1, 0), window.at(1, 1), window.at(0, 1)}) {
        os << (first ? "" : " ") << X(c) << "," << Y(c);
        first = false;
    }
    os << "\"/>\n";
    for (const auto& s : vis)
        os << "  <circle class=\"isometric-sphere\" cx=\"" << X(s.center) << "\" cy=\"" << Y(s.center) << "\" r=\""
           << fmt6(s.radius * scale) << "\" fill=\"none\" stroke=\"blue\"/>\n";
    // face boundaries: chords where two spheres are equally high and on top
    auto top_height = [&](cplx p) {
        double h = -1;
        for (const auto& s : vis) h = std::max(h, height(s, p));
        return h;
    };
    for (size_t i = 0; i < vis.size(); ++i) {
        for (size_t j = i + 1; j < vis.size(); ++j) {
            const auto& A = vis[i];
            const auto& B = vis[j];
            const double dist = std::abs(B.center - A.center);
            if (dist < 1e-12 || dist >= A.radius + B.radius || dist <= std::abs(A.radius - B.radius)) continue;
            const cplx u = (B.center - A.center) / dist;
            const double x = (dist * dist + A.radius * A.radius - B.radius * B.radius) / (2 * dist);
            const double half = std::sqrt(A.radius * A.radius - x * x);
            const cplx mid = A.center + x * u, v = u * cplx(0, 1);
            const int samples = 200;
            int lo = -1, hi = -1;
            for (int k = 0; k <= samples; ++k) {
                const cplx p = mid + (-half + 2 * half * k / samples) * v;
                if (height(A, p) >= top_height(p) - 1e-9) {
                    if (lo < 0) lo = k;
                    hi = k;
                }
            }
            if (lo < 0 || hi <= lo) continue;
            const cplx p0 = mid + (-half + 2 * half * lo / samples) * v;
            const cplx p1 = mid + (-half + 2 * half * hi / samples) * v;
            os << "  <line class=\"face-edge\" x1=\"" << X(p0) << "\" y1=\"" << Y(p0) << "\" x2=\"" << X(p1)
               << "\" y2=\"" << Y(p1) << "\" stroke=\"red\"/>\n";
        }
    }
    for (const auto& e : dual_edges(vis))
        os << "  <circle class=\"dual-edge" << (e.covered ? " covered" : "") << "\" cx=\"" << X(e.center)
           << "\" cy=\"" << Y(e.center) << "\" r=\"3.000000\" fill=\"black\"/>\n";
    os << "</svg>\n";
    return os.str();
}

FordPreset figure8_preset() {
    const cplx w(0.5, std::sqrt(3.0) / 2);
    const cplx s = cplx(0, 1) / std::sqrt(w);
    FordPreset p;
    p.gens = {{"B", Moebius::normalized(s, s, s, -s * w * w)},
              {"C", Moebius::normalized(1, w, 0, 1)},
              {"D", Moebius::normalized(2, -1, 1, 0)}};
    p.lattice = {4, w};
    p.window = {0, 4, w};
    return p;
}

FordPreset load_generators(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    auto num = [](const nlohmann::json& v) {
        if (v.is_array()) return cplx(v.at(0).get<double>(), v.at(1).get<double>());
        return cplx(v.get<double>(), 0);
    };
    FordPreset p;
    try {
        int k = 0;
        for (const auto& g : j.at("generators")) {
            const auto& m = g.contains("matrix") ? g.at("matrix") : g;
            std::string name = g.contains("name") ? g.at("name").get<std::string>() : "g" + std::to_string(k);
            p.gens.push_back({name, Moebius::normalized(num(m.at(0).at(0)), num(m.at(0).at(1)), num(m.at(1).at(0)),
                                                        num(m.at(1).at(1)))});
            ++k;
        }
        const auto& L = j.at("lattice");
        p.lattice = {num(L.at(0)), num(L.at(1))};
        if (j.contains("window")) {
            const auto& W = j.at("window");
            p.window = {num(W.at(0)), num(W.at(1)), num(W.at(2))};
        } else {
            p.window = {0, p.lattice.t1, p.lattice.t2};
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("generator file: ") + e.what());
    }
    if (std::abs((p.lattice.t2 / p.lattice.t1).imag()) < 1e-12) throw ParseError("lattice has rank < 2");
    return p;
}

}  // namespace hyp
