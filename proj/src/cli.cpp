#include "hypstruct/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "hypstruct/angles.hpp"
#include "hypstruct/ford.hpp"
#include "hypstruct/lobachevsky.hpp"
#include "hypstruct/shapes.hpp"
#include "hypstruct/twobridge.hpp"
#include "json.hpp"

namespace hyp::cli {

namespace {

using json = nlohmann::ordered_json;

struct Config {
    std::string kind, code, file, action, out, preset, gens, window;
    double tol = 1e-12;
    int max_iter = 100;
    std::vector<std::string> slopes;
    int grid = 256;
    int max_len = 3;
    int cusp = 0;
    int starts = 4;
    bool shapes = false;
};

// Data goes to --out when given, else stdout; the summary goes to whichever
// stream is left.
struct Sink {
    const Config& cfg;
    std::ostream& out;
    std::ostream& err;
    void data(const std::string& text) const {
        if (cfg.out.empty()) {
            out << text;
            return;
        }
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw ParseError("cannot write " + cfg.out);
        f << text;
    }
    std::ostream& summary() const { return cfg.out.empty() ? err : out; }
};

unsigned long seed() {
    const char* s = std::getenv("HYPSTRUCT_SEED");
    if (s && *s) return std::strtoul(s, nullptr, 10);
    return 20240607UL;
}

std::vector<long> parse_code(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stol(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("bad continued fraction entry '" + item + "'");
        }
    }
    if (out.empty()) throw ParseError("empty continued fraction code");
    return out;
}

Slope parse_slope(const std::string& text) {
    if (text == "complete" || text == "-") return std::nullopt;
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(text);
        size_t a = 0, b = 0;
        const std::string ps = text.substr(0, comma), qs = text.substr(comma + 1);
        long p = std::stol(ps, &a), q = std::stol(qs, &b);
        if (a != ps.size() || b != qs.size()) throw std::invalid_argument(text);
        return std::make_pair(p, q);
    } catch (const std::invalid_argument&) {
        throw BadSlope("cannot read slope '" + text + "' (expected p,q)");
    } catch (const std::out_of_range&) {
        throw BadSlope("slope out of range '" + text + "'");
    }
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ParseError("bad number '" + item + "'");
        }
    }
    return out;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json solution_json(const Solution& sol) {
    json j;
    j["converged"] = sol.report.converged;
    j["iterations"] = sol.report.iterations;
    j["residual"] = sol.report.residual;
    j["geometric"] = sol.report.geometric;
    j["volume"] = sol.report.volume;
    json shapes = json::array(), classes = json::array();
    for (cplx z : sol.shapes.z) shapes.push_back(cjson(z));
    for (auto c : sol.report.classes) classes.push_back(to_string(c));
    j["shapes"] = shapes;
    j["classes"] = classes;
    return j;
}

// Newton from z = i, then from the angle-structure maximiser if that fails.
Solution solve_complete(const Triangulation& t, const SolveOptions& opt, std::string* start_used = nullptr) {
    const auto sys = complete_system(t);
    try {
        if (start_used) *start_used = "i";
        return newton_solve(sys, default_start(t.size()), opt);
    } catch (const Error&) {
        const auto pol = polytope(t);
        const auto mx = maximize(feasible_point(pol), pol);
        if (!mx.report.shapes) throw;
        if (start_used) *start_used = "angles";
        return newton_solve(sys, *mx.report.shapes, opt);
    }
}

int cmd_build(const Config& cfg, const Sink& sink) {
    if (cfg.kind != "2bridge") throw ParseError("unknown build kind '" + cfg.kind + "' (expected 2bridge)");
    const auto tb = build(normalize_cf(parse_code(cfg.code)));
    const auto v = validate(tb.tri);
    if (!v.empty()) throw ValidationError(v.front());
    sink.data(serialize(tb.tri));
    sink.summary() << fmt::format("{}: {} tets, {} edge classes, {} cusps, word {}\n", tb.tri.name, tb.tri.size(),
                                  edge_classes(tb.tri).size(), cusps(tb.tri).size(), tb.word.letters);
    return kOk;
}

int cmd_solve(const Config& cfg, const Sink& sink) {
    const auto t = load(cfg.file);
    SolveOptions opt{cfg.tol, cfg.max_iter};
    std::string start;
    const auto sol = solve_complete(t, opt, &start);
    json j = solution_json(sol);
    j["start"] = start;
    sink.data(j.dump(2) + "\n");
    sink.summary() << fmt::format("converged in {} iterations, residual {:.3e}, volume {:.12f}\n",
                                  sol.report.iterations, sol.report.residual, sol.report.volume);
    return kOk;
}

int cmd_fill(const Config& cfg, const Sink& sink) {
    const auto t = load(cfg.file);
    std::vector<Slope> slopes;
    for (const auto& s : cfg.slopes) slopes.push_back(parse_slope(s));
    const auto sys = filling_system(t, slopes);
    SolveOptions opt{cfg.tol, cfg.max_iter};
    const auto complete = solve_complete(t, opt);
    const auto sol = newton_solve(sys, complete.shapes, opt);
    json j = solution_json(sol);
    json sj = json::array();
    for (const auto& s : slopes) sj.push_back(s ? json::array({s->first, s->second}) : json(nullptr));
    j["slopes"] = sj;
    j["complete_volume"] = complete.report.volume;
    sink.data(j.dump(2) + "\n");
    sink.summary() << fmt::format("filled volume {:.12f} (complete {:.12f})\n", sol.report.volume,
                                  complete.report.volume);
    return kOk;
}

int cmd_volume(const Config& cfg, const Sink& sink) {
    const auto t = load(cfg.file);
    const auto sol = solve_complete(t, SolveOptions{cfg.tol, cfg.max_iter});
    json j;
    j["volume"] = sol.report.volume;
    j["geometric"] = sol.report.geometric;
    sink.data(j.dump(2) + "\n");
    sink.summary() << fmt::format("volume {:.12f}\n", sol.report.volume);
    return kOk;
}

int cmd_angles(const Config& cfg, const Sink& sink) {
    const auto t = load(cfg.file);
    const auto pol = polytope(t);
    const auto p0 = feasible_point(pol);
    json j;
    j["dimension"] = pol.dimension();
    if (cfg.action == "feasible") {
        j["point"] = std::vector<double>(p0.data(), p0.data() + p0.size());
        j["min_angle"] = min_slack(p0);
        sink.data(j.dump(2) + "\n");
        sink.summary() << fmt::format("feasible point, smallest angle {:.6f}\n", min_slack(p0));
        return kOk;
    }
    if (cfg.action != "max") throw ParseError("unknown angles action '" + cfg.action + "' (expected max or feasible)");
    const auto mx = maximize_multistart(pol, p0, cfg.starts, seed());
    j["status"] = to_string(mx.report.status);
    j["volume"] = mx.report.volume;
    j["iterations"] = mx.report.iterations;
    j["grad_norm"] = mx.report.grad_norm;
    j["maximizer"] = std::vector<double>(mx.point.data(), mx.point.data() + mx.point.size());
    json flat = json::array();
    for (auto [tet, slot] : mx.report.flat) flat.push_back(json::array({tet, slot}));
    j["flat"] = flat;
    bool certified = false;
    if (mx.report.shapes) {
        json shapes = json::array();
        for (cplx z : mx.report.shapes->z) shapes.push_back(cjson(z));
        j["shapes"] = shapes;
        try {
            const auto sol = newton_solve(complete_system(t), *mx.report.shapes, SolveOptions{cfg.tol, cfg.max_iter});
            certified = sol.report.geometric && std::abs(sol.report.volume - mx.report.volume) < 1e-8;
            j["solution_volume"] = sol.report.volume;
        } catch (const Error&) {
        }
    }
    j["certified"] = certified;
    sink.data(j.dump(2) + "\n");
    sink.summary() << fmt::format("{} V = {:.12f}\n", to_string(mx.report.status), mx.report.volume);
    return kOk;
}

int cmd_cusp_svg(const Config& cfg, const Sink& sink) {
    const auto t = load(cfg.file);
    const auto cs = cusps(t, false);
    if (cfg.cusp < 0 || cfg.cusp >= static_cast<int>(cs.size()))
        throw ParseError(fmt::format("no cusp {} (triangulation has {})", cfg.cusp, cs.size()));
    std::string svg;
    if (cfg.shapes) {
        const auto sol = solve_complete(t, SolveOptions{cfg.tol, cfg.max_iter});
        svg = cusp_svg(t, cs[cfg.cusp], &sol.shapes.z);
    } else {
        svg = cusp_svg(t, cs[cfg.cusp]);
    }
    sink.data(svg);
    sink.summary() << fmt::format("cusp {}: {} triangles\n", cfg.cusp, cs[cfg.cusp].num_triangles());
    return kOk;
}

int cmd_ford_svg(const Config& cfg, const Sink& sink) {
    FordPreset p;
    if (!cfg.gens.empty()) {
        p = load_generators(cfg.gens);
    } else if (cfg.preset.empty() || cfg.preset == "figure8") {
        p = figure8_preset();
    } else {
        throw ParseError("unknown preset '" + cfg.preset + "'");
    }
    if (!cfg.window.empty()) {
        const auto w = parse_numbers(cfg.window);
        if (w.size() == 4)
            p.window = {cplx(w[0], w[1]), cplx(w[2] - w[0], 0), cplx(0, w[3] - w[1])};
        else if (w.size() == 6)
            p.window = {cplx(w[0], w[1]), cplx(w[2], w[3]), cplx(w[4], w[5])};
        else
            throw ParseError("--window takes xmin,ymin,xmax,ymax or ox,oy,e1x,e1y,e2x,e2y");
    }
    if (cfg.grid < 64) throw ParseError("--grid must be at least 64");
    const auto vis = visible(enumerate(p.gens, p.lattice, cfg.max_len, p.window), p.lattice, p.window, cfg.grid);
    bool stable = false;
    if (cfg.max_len > 1) {
        const auto prev =
            visible(enumerate(p.gens, p.lattice, cfg.max_len - 1, p.window), p.lattice, p.window, cfg.grid);
        stable = prev.size() == vis.size();
        for (size_t k = 0; stable && k < vis.size(); ++k) {
            bool found = false;
            for (const auto& s : prev)
                if (std::abs(s.center - vis[k].center) < 1e-10 && std::abs(s.radius - vis[k].radius) < 1e-10)
                    found = true;
            stable = found;
        }
    }
    sink.data(ford_svg(vis, p.lattice, p.window));
    sink.summary() << fmt::format("{} visible spheres, {} dual edges; {} between word lengths {} and {}\n",
                                  vis.size(), dual_edges(vis).size(), stable ? "stable" : "not stable",
                                  cfg.max_len - 1, cfg.max_len);
    return kOk;
}

int cmd_check(const Config& cfg, std::ostream& out) {
    std::ifstream in(cfg.file, std::ios::binary);
    if (!in) throw ParseError("cannot open " + cfg.file);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto t = parse(buf.str());
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) out << ": " << detail;
        out << "\n";
        if (!ok) ++failures;
    };
    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            report(name, false, e.what());
        }
    };

    const auto v = validate(t);
    report("gluings valid", v.empty(), v.empty() ? "" : v.front());
    report("orientable", is_orientable(t));
    const auto classes = edge_classes(t);
    report("edge classes equal tets", static_cast<int>(classes.size()) == t.size(),
           fmt::format("{} classes, {} tets", classes.size(), t.size()));
    const auto cs = cusps(t, false);
    bool tori = true;
    for (const auto& c : cs) tori = tori && c.euler_characteristic() == 0;
    report("cusps are tori", tori);
    const std::string canon = serialize(t);
    report("serialize round trip", serialize(parse(canon)) == canon);

    guarded("peripheral curves", [&] {
        const auto pcs = peripheral_curves(t);
        bool ok = pcs.size() == cs.size();
        std::string detail;
        for (const auto& pc : pcs) {
            const auto& c = cs[pc.cusp];
            auto e1 = validate_curve(t, c, pc.meridian), e2 = validate_curve(t, c, pc.longitude);
            if (!e1.empty() || !e2.empty()) {
                ok = false;
                detail = !e1.empty() ? e1.front() : e2.front();
                continue;
            }
            const long i = CuspHomology(c).intersection(pc.meridian, pc.longitude);
            if (std::abs(i) != 1) {
                ok = false;
                detail = fmt::format("cusp {}: meridian meets longitude {} times", pc.cusp, i);
            }
        }
        report("peripheral curves", ok, detail);
    });
    guarded("homology rank", [&] {
        const auto h = homology(t);
        report("homology rank", h.rank >= static_cast<int>(cs.size()),
               fmt::format("rank {}, {} cusps", h.rank, cs.size()));
    });

    Solution sol;
    bool solved = false;
    guarded("complete structure", [&] {
        sol = solve_complete(t, SolveOptions{cfg.tol, cfg.max_iter});
        solved = true;
        report("complete structure", sol.report.converged,
               fmt::format("volume {:.12f}, residual {:.2e}", sol.report.volume, sol.report.residual));
    });
    guarded("angle structure maximum", [&] {
        const auto pol = polytope(t);
        const auto mx = maximize(feasible_point(pol), pol);
        const bool ok = solved && std::abs(mx.report.volume - sol.report.volume) < 1e-8;
        report("angle structure maximum", ok,
               fmt::format("{} V = {:.12f}", to_string(mx.report.status), mx.report.volume));
    });
    guarded("volume derivative", [&] {
        const auto pol = polytope(t);
        const auto p0 = feasible_point(pol);
        const auto pcs = peripheral_curves(t);
        double worst = 0;
        std::mt19937_64 rng(seed());
        for (int k = 0; k < 5; ++k) {
            const auto p = random_interior(pol, p0, rng());
            const auto sh = shapes_from_angles(p);
            for (const auto& pc : pcs) {
                for (const auto* curve : {&pc.meridian, &pc.longitude}) {
                    const auto w = leading_trailing(t.size(), *curve);
                    double h = 1e-6;
                    while ((p + h * w).minCoeff() <= 0 || (p - h * w).minCoeff() <= 0) h /= 2;
                    const double fd = (volume(p + h * w) - volume(p - h * w)) / (2 * h);
                    worst = std::max(worst, std::abs(fd - log_holonomy(*curve, sh).real()));
                }
            }
        }
        report("volume derivative", worst < 1e-6, fmt::format("max deviation {:.2e}", worst));
    });
    return failures ? kFailure : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Hyperbolic structures on ideal triangulations", "hypstruct"};
    app.require_subcommand(1);
    auto common = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "Newton tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", cfg.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "output file");
    };
    auto* build_cmd = app.add_subcommand("build", "build a triangulation");
    build_cmd->add_option("kind", cfg.kind, "2bridge")->required();
    build_cmd->add_option("code", cfg.code, "continued fraction a_{n-1},...,a_1")->required();
    common(build_cmd);
    auto* solve_cmd = app.add_subcommand("solve", "complete hyperbolic structure");
    solve_cmd->add_option("file", cfg.file)->required();
    common(solve_cmd);
    auto* fill_cmd = app.add_subcommand("fill", "Dehn filling");
    fill_cmd->add_option("file", cfg.file)->required();
    fill_cmd->add_option("--slope", cfg.slopes, "p,q per cusp, or 'complete'")->required();
    common(fill_cmd);
    auto* volume_cmd = app.add_subcommand("volume", "volume of the complete structure");
    volume_cmd->add_option("file", cfg.file)->required();
    common(volume_cmd);
    auto* angles_cmd = app.add_subcommand("angles", "angle structures");
    angles_cmd->add_option("action", cfg.action, "max or feasible")->required();
    angles_cmd->add_option("file", cfg.file)->required();
    angles_cmd->add_option("--starts", cfg.starts, "extra random starts")->check(CLI::NonNegativeNumber);
    common(angles_cmd);
    auto* cusp_cmd = app.add_subcommand("cusp-svg", "draw a cusp triangulation");
    cusp_cmd->add_option("file", cfg.file)->required();
    cusp_cmd->add_option("--cusp", cfg.cusp);
    cusp_cmd->add_flag("--shapes", cfg.shapes, "use the solved shapes");
    common(cusp_cmd);
    auto* ford_cmd = app.add_subcommand("ford-svg", "Ford domain cross-section");
    ford_cmd->add_option("--preset", cfg.preset, "figure8");
    ford_cmd->add_option("--gens", cfg.gens, "generator JSON file");
    ford_cmd->add_option("--max-len", cfg.max_len)->check(CLI::NonNegativeNumber);
    ford_cmd->add_option("--grid", cfg.grid);
    ford_cmd->add_option("--window", cfg.window);
    common(ford_cmd);
    auto* check_cmd = app.add_subcommand("check", "run the invariant suite");
    check_cmd->add_option("file", cfg.file)->required();
    common(check_cmd);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    const Sink sink{cfg, out, err};
    try {
        if (build_cmd->parsed()) return cmd_build(cfg, sink);
        if (solve_cmd->parsed()) return cmd_solve(cfg, sink);
        if (fill_cmd->parsed()) return cmd_fill(cfg, sink);
        if (volume_cmd->parsed()) return cmd_volume(cfg, sink);
        if (angles_cmd->parsed()) return cmd_angles(cfg, sink);
        if (cusp_cmd->parsed()) return cmd_cusp_svg(cfg, sink);
        if (ford_cmd->parsed()) return cmd_ford_svg(cfg, sink);
        if (check_cmd->parsed()) return cmd_check(cfg, out);
    } catch (const BadSlope& e) {
        err << e.what() << "\n";
        return kBadSlope;
    } catch (const NoConvergence& e) {
        err << e.what() << "\n";
        return kNoConvergence;
    } catch (const SingularJacobian& e) {
        err << e.what() << "\n";
        return kNoConvergence;
    } catch (const DegenerateApproach& e) {
        err << e.what() << "\n";
        return kNoConvergence;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return kInputError;
    } catch (const NotHyperbolic& e) {
        err << e.what() << "\n";
        return kInputError;
    } catch (const CuspNotTorus& e) {
        err << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace hyp::cli
