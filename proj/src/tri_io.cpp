#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "hypstruct/lobachevsky.hpp"
#include "hypstruct/triangulation.hpp"
#include "json.hpp"

namespace hyp {

using nlohmann::json;

namespace {

// Tracks where a SAX parse was when it failed.
class PathTracker : public nlohmann::json_sax<json> {
public:
    std::string path() const {
        std::string s;
        for (const auto& f : stack_) {
            if (f.array)
                s += fmt::format("[{}]", f.index);
            else if (!f.key.empty())
                s += (s.empty() ? "" : ".") + f.key;
        }
        return s;
    }
    std::set<std::string> top_keys;
    std::string message;

    bool null() override { return value(); }
    bool boolean(bool) override { return value(); }
    bool number_integer(number_integer_t) override { return value(); }
    bool number_unsigned(number_unsigned_t) override { return value(); }
    bool number_float(number_float_t, const string_t&) override { return value(); }
    bool string(string_t&) override { return value(); }
    bool binary(binary_t&) override { return value(); }
    bool start_object(std::size_t) override {
        stack_.push_back({false, -1, ""});
        return true;
    }
    bool key(string_t& k) override {
        stack_.back().key = k;
        if (stack_.size() == 1) top_keys.insert(k);
        return true;
    }
    bool end_object() override {
        stack_.pop_back();
        return value();
    }
    bool start_array(std::size_t) override {
        stack_.push_back({true, 0, ""});
        return true;
    }
    bool end_array() override {
        stack_.pop_back();
        return value();
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
        message = ex.what();
        return false;
    }

private:
    struct Frame {
        bool array;
        int index;
        std::string key;
    };
    std::vector<Frame> stack_;
    bool value() {
        if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
        return true;
    }
};

std::string describe_syntax_error(const std::string& text, std::size_t byte) {
    PathTracker tr;
    json::sax_parse(text, &tr);
    byte = std::min(byte, text.size());
    const std::size_t before = byte > 0 ? byte - 1 : 0;
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + before, '\n'));
    std::string msg = fmt::format("line {}: malformed JSON", line);
    if (byte >= text.size()) msg = fmt::format("line {}: unexpected end of input", line);
    const std::string where = tr.path();
    if (!where.empty()) msg += fmt::format(" while reading field '{}'", where);
    for (const char* req : {"name", "tets"})
        if (!tr.top_keys.count(req)) msg += fmt::format("; missing field '{}'", req);
    return msg;
}

const json& field(const json& obj, const char* key, const std::string& path) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!obj.is_object()) throw ParseError(fmt::format("field '{}' must be an object", path));
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(fmt::format("missing field '{}'", full));
    return *it;
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(fmt::format("field '{}' must be an integer", path));
    return v.get<int>();
}

NormalCurve parse_steps(const json& v, const std::string& path, int cusp) {
    if (!v.is_array()) throw ParseError(fmt::format("field '{}' must be a list of steps", path));
    NormalCurve c;
    c.cusp = cusp;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::string p = fmt::format("{}[{}]", path, k);
        if (!v[k].is_array() || v[k].size() != 4)
            throw ParseError(fmt::format("field '{}' must be [tet, vertex, corner, eps]", p));
        c.steps.push_back({as_int(v[k][0], p), as_int(v[k][1], p), as_int(v[k][2], p), as_int(v[k][3], p)});
    }
    return c;
}

std::string steps_text(const NormalCurve& c) {
    std::string s = "[";
    for (std::size_t k = 0; k < c.steps.size(); ++k) {
        const auto& st = c.steps[k];
        s += fmt::format("{}[{}, {}, {}, {}]", k ? ", " : "", st.tet, st.vertex, st.corner, st.eps);
    }
    return s + "]";
}

}  // namespace

Triangulation parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(describe_syntax_error(text, e.byte));
    }
    if (!j.is_object()) throw ParseError("line 1: top level must be an object");
    Triangulation t;
    const json& name = field(j, "name", "");
    if (!name.is_string()) throw ParseError("field 'name' must be a string");
    t.name = name.get<std::string>();
    const json& tets = field(j, "tets", "");
    if (!tets.is_array()) throw ParseError("field 'tets' must be a list");
    for (std::size_t i = 0; i < tets.size(); ++i) {
        const std::string p = fmt::format("tets[{}]", i);
        const json& gl = field(tets[i], "gluings", p);
        if (!gl.is_array() || gl.size() != 4)
            throw ParseError(fmt::format("field '{}.gluings' must have 4 entries", p));
        Tetrahedron tet;
        for (int f = 0; f < 4; ++f) {
            const std::string pf = fmt::format("{}.gluings[{}]", p, f);
            const json& g = gl[f];
            if (g.is_null()) continue;  // unglued face, reported by validate
            if (!g.is_array() || g.size() != 2 || !g[1].is_array() || g[1].size() != 4)
                throw ParseError(fmt::format("field '{}' must be [target, [p0, p1, p2, p3]]", pf));
            tet.gluings[f].tet = as_int(g[0], pf);
            for (int k = 0; k < 4; ++k) tet.gluings[f].perm[k] = as_int(g[1][k], pf);
        }
        t.tets.push_back(tet);
    }
    if (j.contains("peripheral")) {
        const json& per = j["peripheral"];
        if (!per.is_array()) throw ParseError("field 'peripheral' must be a list");
        for (std::size_t k = 0; k < per.size(); ++k) {
            const std::string p = fmt::format("peripheral[{}]", k);
            PeripheralCurves pc;
            pc.cusp = as_int(field(per[k], "cusp", p), p + ".cusp");
            pc.meridian = parse_steps(field(per[k], "meridian", p), p + ".meridian", pc.cusp);
            pc.longitude = parse_steps(field(per[k], "longitude", p), p + ".longitude", pc.cusp);
            t.peripheral.push_back(pc);
        }
    }
    auto bad = validate(t);
    if (!bad.empty()) {
        std::string msg;
        for (const auto& b : bad) msg += (msg.empty() ? "" : "; ") + b;
        throw ValidationError(msg);
    }
    if (!t.peripheral.empty()) {
        const auto cs = cusps(t, false);
        std::set<int> seen;
        for (const auto& pc : t.peripheral) {
            if (pc.cusp < 0 || pc.cusp >= static_cast<int>(cs.size()) || !seen.insert(pc.cusp).second)
                throw ValidationError(fmt::format("peripheral curves name invalid cusp {}", pc.cusp));
            for (const auto* cv : {&pc.meridian, &pc.longitude}) {
                auto errs = validate_curve(t, cs[pc.cusp], *cv);
                if (!errs.empty())
                    throw ValidationError(fmt::format("cusp {} {}: {}", pc.cusp,
                                                      cv == &pc.meridian ? "meridian" : "longitude", errs[0]));
            }
        }
    }
    return t;
}

std::string serialize(const Triangulation& t) {
    std::string o = "{\n  \"name\": " + json(t.name).dump() + ",\n  \"tets\": [\n";
    for (int i = 0; i < t.size(); ++i) {
        o += "    {\"gluings\": [";
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = t.tets[i].gluings[f];
            if (f) o += ", ";
            if (g.tet < 0)
                o += "null";
            else
                o += fmt::format("[{}, [{}, {}, {}, {}]]", g.tet, g.perm[0], g.perm[1], g.perm[2], g.perm[3]);
        }
        o += i + 1 < t.size() ? "]},\n" : "]}\n";
    }
    o += "  ]";
    if (!t.peripheral.empty()) {
        o += ",\n  \"peripheral\": [\n";
        for (std::size_t k = 0; k < t.peripheral.size(); ++k) {
            const auto& pc = t.peripheral[k];
            o += fmt::format("    {{\n      \"cusp\": {},\n      \"meridian\": {},\n      \"longitude\": {}\n    }}",
                             pc.cusp, steps_text(pc.meridian), steps_text(pc.longitude));
            o += k + 1 < t.peripheral.size() ? ",\n" : "\n";
        }
        o += "  ]";
    }
    o += "\n}\n";
    return o;
}

Triangulation load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot read '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void save(const Triangulation& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
    out << serialize(t);
}

std::string cusp_svg(const Triangulation& t, const CuspTriangulation& c, const std::vector<cplx>* shapes) {
    const int T = c.num_triangles();
    auto angle = [&](int i, int w) {
        if (!shapes) return kPi / 3;
        const auto& tr = c.triangles[i];
        const AngleTriple a = angles_of_shape((*shapes).at(tr.tet));
        const double ang[3] = {a.alpha, a.beta, a.gamma};
        return ang[angle_slot(edge_index(tr.vertex, w))];
    };
    if (shapes) {
        for (int i = 0; i < T; ++i)
            for (int w = 0; w < 4; ++w)
                if (w != c.triangles[i].vertex && !(angle(i, w) > 0))
                    throw DegenerateShape(fmt::format("tet {} has a corner angle <= 0", c.triangles[i].tet));
    }
    // third corner w of triangle i from its other two corners
    auto apex = [&](int i, int w, std::array<cplx, 4>& P) {
        const int v = c.triangles[i].vertex;
        const int x = ccw_next(v, w), y = ccw_next(v, x);
        P[w] = P[x] + (P[y] - P[x]) * (std::sin(angle(i, y)) / std::sin(angle(i, w))) * std::polar(1.0, angle(i, x));
    };
    std::vector<std::array<cplx, 4>> pos(T);
    std::vector<char> placed(T, 0);
    {
        const int v = c.triangles[0].vertex;
        const int a = v == 0 ? 1 : 0;
        const int b = ccw_next(v, a);
        pos[0][a] = 0;
        pos[0][b] = 1;
        apex(0, ccw_next(v, b), pos[0]);
        placed[0] = 1;
    }
    std::deque<int> q{0};
    while (!q.empty()) {
        int i = q.front();
        q.pop_front();
        const int v = c.triangles[i].vertex;
        for (int f = 0; f < 4; ++f) {
            if (f == v) continue;
            const int j = c.nbr[i][f];
            if (placed[j]) continue;
            const Perm& p = c.nbr_perm[i][f];
            for (int x = 0; x < 4; ++x)
                if (x != v && x != f) pos[j][p[x]] = pos[i][x];
            apex(j, c.nbr_side[i][f], pos[j]);
            placed[j] = 1;
            q.push_back(j);
        }
    }
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int i = 0; i < T; ++i)
        for (int w = 0; w < 4; ++w) {
            if (w == c.triangles[i].vertex) continue;
            xmin = std::min(xmin, pos[i][w].real());
            xmax = std::max(xmax, pos[i][w].real());
            ymin = std::min(ymin, pos[i][w].imag());
            ymax = std::max(ymax, pos[i][w].imag());
        }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double scale = 700.0 / span, margin = 50.0;
    auto px = [&](cplx z) { return margin + (z.real() - xmin) * scale; };
    auto py = [&](cplx z) { return margin + (ymax - z.imag()) * scale; };
    const double W = 2 * margin + (xmax - xmin) * scale, H = 2 * margin + (ymax - ymin) * scale;

    std::string o = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.6f}\" height=\"{:.6f}\" "
        "viewBox=\"0 0 {:.6f} {:.6f}\">\n",
        W, H, W, H);
    o += fmt::format("<title>cusp {} of {}{}</title>\n", c.id, t.name, shapes ? " (developed)" : " (combinatorial)");
    o += "<g id=\"triangles\" fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n";
    for (int i = 0; i < T; ++i) {
        const int v = c.triangles[i].vertex;
        const int a = v == 0 ? 1 : 0, b = ccw_next(v, a), d = ccw_next(v, b);
        o += fmt::format("<polygon class=\"triangle\" data-tet=\"{}\" data-vertex=\"{}\" points=\"", c.triangles[i].tet,
                         v);
        for (int w : {a, b, d}) o += fmt::format("{:.6f},{:.6f} ", px(pos[i][w]), py(pos[i][w]));
        o.back() = '"';
        o += "/>\n";
    }
    o += "</g>\n<g id=\"labels\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n";
    for (int i = 0; i < T; ++i) {
        const int v = c.triangles[i].vertex;
        cplx centre = 0;
        for (int w = 0; w < 4; ++w)
            if (w != v) centre += pos[i][w] / 3.0;
        o += fmt::format("<text class=\"triangle-label\" x=\"{:.6f}\" y=\"{:.6f}\">{}.{}</text>\n", px(centre),
                         py(centre), c.triangles[i].tet, v);
        for (int w = 0; w < 4; ++w) {
            if (w == v) continue;
            cplx at = pos[i][w] + 0.3 * (centre - pos[i][w]);
            o += fmt::format("<text class=\"edge-label\" x=\"{:.6f}\" y=\"{:.6f}\" fill=\"blue\">e{}</text>\n", px(at),
                             py(at), c.corner_edge[i][w]);
        }
    }
    o += "</g>\n</svg>\n";
    return o;
}

}  // namespace hyp
