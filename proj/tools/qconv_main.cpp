// qconv command-line tool: grid problems are described in a flat
// key-value-with-sections spec file; subcommands run the library and emit
// structured-text reports (byte-identical for identical inputs) plus optional
// CSV.
//
// Exit codes: 0 ok, 2 parse/validation failure, 3 verification failure,
// 4 hypothesis rejection, 5 internal inconsistency.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "qconv/qconv.hpp"

using namespace qconv;

namespace {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Spec files: [section] headers, "key = value" lines, '#' comments.

class SpecFile {
public:
    static SpecFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw SpecError("cannot open spec file: " + path);
        SpecFile sf;
        std::string line, section = "problem";
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = strip(line);
            if (t.empty() || t[0] == '#') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw SpecError("spec line " + std::to_string(lineno) + ": malformed section header");
                section = strip(t.substr(1, t.size() - 2));
                sf.sections_[section];
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw SpecError("spec line " + std::to_string(lineno) + ": expected key = value");
            std::string key = strip(t.substr(0, eq));
            std::string val = strip(t.substr(eq + 1));
            if (key.empty()) throw SpecError("spec line " + std::to_string(lineno) + ": empty key");
            auto& sec = sf.sections_[section];
            if (sec.count(key))
                throw SpecError("spec line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            sec[key] = val;
        }
        return sf;
    }

    // every key in a section the command read must have been consumed; spec
    // files may carry sections for other commands untouched
    void check_consumed() const {
        for (const auto& [sec, kv] : sections_) {
            if (!touched_.count(sec)) continue;
            for (const auto& [k, v] : kv)
                if (!consumed_.count(sec + "." + k))
                    throw SpecError("unknown key '" + k + "' in section [" + sec + "]");
        }
    }

    std::optional<std::string> get(const std::string& sec, const std::string& key) const {
        consumed_.insert(sec + "." + key);
        touched_.insert(sec);
        auto s = sections_.find(sec);
        if (s == sections_.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    }

    std::string require(const std::string& sec, const std::string& key) const {
        auto v = get(sec, key);
        if (!v) throw SpecError("missing key '" + key + "' in section [" + sec + "]");
        return *v;
    }

private:
    static std::string strip(const std::string& s) {
        size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::map<std::string, std::string>> sections_;
    mutable std::set<std::string> consumed_;
    mutable std::set<std::string> touched_;
};

double parse_real(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw SpecError("cannot parse " + what + ": '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

std::vector<double> parse_reals(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_real(p, what));
    return out;
}

std::string resolve_catalog(const std::string& text) {
    if (text.empty() || text[0] != '@') return text;
    const auto& cat = expression_catalog();
    auto it = cat.find(text.substr(1));
    if (it == cat.end()) throw SpecError("unknown catalog entry '" + text + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Resolved problem setup

struct Problem {
    int dim = 1;
    std::array<double, 2> lo{0, 0}, hi{0, 0}, h{0, 0};
    Grid grid;
    std::optional<std::string> f_text, g_text, a_text;
    std::optional<GridFunction> f, g;
    double ylo = 0, yhi = 0, yh = 0;
    uint64_t seed = 0;
    std::ostringstream config;  // resolved key-value echo

    template <class T>
    void echo(const std::string& key, const T& value) {
        config << "config." << key << ": " << value << "\n";
    }
};

Problem load_problem(const SpecFile& sf, uint64_t seed_flag, bool need_saddle) {
    Problem p;
    p.dim = static_cast<int>(parse_real(sf.get("problem", "dim").value_or("1"), "dim"));
    if (p.dim != 1 && p.dim != 2) throw SpecError("dim must be 1 or 2");

    std::string box = sf.require("problem", "box");
    auto axes = split(box, ',');
    if (static_cast<int>(axes.size()) != p.dim) throw SpecError("box must list one lo:hi range per axis");
    for (int i = 0; i < p.dim; ++i) {
        auto parts = split(axes[static_cast<size_t>(i)], ':');
        if (parts.size() != 2) throw SpecError("box axis must be lo:hi");
        p.lo[static_cast<size_t>(i)] = parse_real(parts[0], "box lo");
        p.hi[static_cast<size_t>(i)] = parse_real(parts[1], "box hi");
    }
    auto hs = parse_reals(sf.require("problem", "h"), "h");
    if (static_cast<int>(hs.size()) == 1 && p.dim == 2) hs.push_back(hs[0]);
    if (static_cast<int>(hs.size()) != p.dim) throw SpecError("h must list one spacing per axis");
    for (int i = 0; i < p.dim; ++i) p.h[static_cast<size_t>(i)] = hs[static_cast<size_t>(i)];
    p.grid = Grid::make(p.dim, p.lo, p.hi, p.h);

    if (auto f = sf.get("problem", "f")) p.f_text = resolve_catalog(*f);
    if (auto g = sf.get("problem", "g")) p.g_text = resolve_catalog(*g);
    if (auto a = sf.get("problem", "a")) p.a_text = resolve_catalog(*a);
    if (p.f_text) p.f = sample(parse_expression(*p.f_text, p.dim), p.grid);
    if (p.g_text) p.g = sample(parse_expression(*p.g_text, p.dim), p.grid);

    if (need_saddle) {
        if (!p.a_text) throw SpecError("missing key 'a' in section [problem]");
        auto yb = split(sf.require("problem", "ybox"), ':');
        if (yb.size() != 2) throw SpecError("ybox must be lo:hi");
        p.ylo = parse_real(yb[0], "ybox lo");
        p.yhi = parse_real(yb[1], "ybox hi");
        p.yh = parse_real(sf.require("problem", "yh"), "yh");
    } else {
        sf.get("problem", "ybox");
        sf.get("problem", "yh");
        sf.get("problem", "a");
    }

    p.seed = seed_flag;
    if (auto s = sf.get("problem", "seed"); s && seed_flag == 0)
        p.seed = static_cast<uint64_t>(parse_real(*s, "seed"));

    p.echo("dim", p.dim);
    for (int i = 0; i < p.dim; ++i) {
        p.echo("box" + std::to_string(i),
               fmt_double(p.lo[static_cast<size_t>(i)]) + ":" + fmt_double(p.hi[static_cast<size_t>(i)]));
        p.echo("h" + std::to_string(i), fmt_double(p.h[static_cast<size_t>(i)]));
        p.echo("nodes" + std::to_string(i), p.grid.axis(i).count);
    }
    if (p.f_text) p.echo("f", *p.f_text);
    if (p.g_text) p.echo("g", *p.g_text);
    if (p.a_text) p.echo("a", *p.a_text);
    p.echo("seed", p.seed);
    return p;
}

CurvatureSchedule schedule_from(const SpecFile& sf, const std::string& sec,
                                const GridFunction& f, Problem& p) {
    std::optional<CurvatureSchedule> sched;
    if (auto s = sf.get(sec, "schedule")) sched = CurvatureSchedule(parse_reals(*s, "schedule"));
    if (!sched) sched = CurvatureSchedule::default_for(f);
    std::string echo;
    for (double a : sched->values()) {
        if (!echo.empty()) echo += ",";
        echo += fmt_double(a);
    }
    p.echo("schedule", echo);
    return *sched;
}

QuadraticMinorant parse_minorant(const std::string& s, int dim) {
    auto vals = parse_reals(s, "minorant");
    if (static_cast<int>(vals.size()) != dim + 2)
        throw SpecError("minorant must be a,v...,c with one slope entry per axis");
    Vec v{};
    v.dim = dim;
    for (int i = 0; i < dim; ++i) v[i] = vals[static_cast<size_t>(i) + 1];
    return QuadraticMinorant(vals[0], v, vals.back());
}

Vec parse_point(const std::string& s, int dim) {
    auto vals = parse_reals(s, "point");
    if (static_cast<int>(vals.size()) != dim) throw SpecError("point has wrong dimension");
    Vec v{};
    v.dim = dim;
    for (int i = 0; i < dim; ++i) v[i] = vals[static_cast<size_t>(i)];
    return v;
}

// ---------------------------------------------------------------------------
// Output plumbing

struct Output {
    std::string out_dir;
    bool csv = false;

    void emit_report(const std::string& command, const std::string& text) const {
        std::cout << text;
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            std::ofstream f(out_dir + "/" + command + "_report.txt");
            f << text;
        }
    }
    void emit_csv(const std::string& command, const std::string& text) const {
        if (!csv) return;
        if (out_dir.empty()) throw SpecError("--csv requires --out <dir>");
        std::filesystem::create_directories(out_dir);
        std::ofstream f(out_dir + "/" + command + ".csv");
        f << text;
    }
};

const GridFunction& require_f(const Problem& p) {
    if (!p.f) throw SpecError("missing key 'f' in section [problem]");
    return *p.f;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_hull(const SpecFile& sf, Problem& p, const Output& out, double tol_flag,
             const std::string& name) {
    const GridFunction& f = require_f(p);
    CurvatureSchedule sched = schedule_from(sf, "hull", f, p);
    double lambda = parse_real(sf.get("hull", "lambda").value_or("1"), "lambda");
    double tol = tol_flag > 0 ? tol_flag : grid_tolerance(f);
    if (auto t = sf.get("hull", "tol")) tol = parse_real(*t, "tol");
    p.echo("lambda", fmt_double(lambda));
    p.echo("tol", fmt_double(tol));
    sf.check_consumed();

    GridFunction H = phi_hull(f, sched);
    GridFunction env = moreau_envelope(f, lambda);
    auto gap = hull_gap(f, sched);
    double max_gap = 0.0;
    size_t argmax = 0;
    bool touches_boundary = false;
    for (size_t i = 0; i < f.size(); ++i) {
        if (gap[i] > max_gap) {
            max_gap = gap[i];
            argmax = i;
        }
        auto ij = f.grid().unflat(i);
        bool on_boundary = ij[0] == 0 || ij[0] == f.grid().axis(0).count - 1;
        if (f.grid().dim() == 2)
            on_boundary = on_boundary || ij[1] == 0 || ij[1] == f.grid().axis(1).count - 1;
        if (on_boundary && std::isfinite(f.value(i)) && gap[i] <= tol) touches_boundary = true;
    }

    std::ostringstream rep;
    rep << p.config.str();
    rep << "is_phi_convex: " << (max_gap <= tol ? "true" : "false") << "\n";
    rep << "max_hull_gap: " << fmt_double(max_gap) << "\n";
    rep << "max_gap_at: " << fmt_vec(f.grid().node(argmax)) << "\n";
    if (touches_boundary)
        rep << "warning: hull touches the box boundary; minorants with contact "
               "points outside the box are under-represented\n";
    out.emit_report(name, rep.str());

    std::ostringstream csv;
    write_hull_csv(csv, f, H, env);
    out.emit_csv(name, csv.str());
    return 0;
}

int cmd_subgrad(const SpecFile& sf, Problem& p, const Output& out, double tol_flag) {
    const GridFunction& f = require_f(p);
    Vec point = parse_point(sf.require("subgrad", "point"), p.dim);
    size_t xbar = p.grid.nearest_node(point);
    double eps = parse_real(sf.get("subgrad", "eps").value_or("0"), "eps");
    CurvatureSchedule sched = schedule_from(sf, "subgrad", f, p);
    double tol = tol_flag > 0 ? tol_flag : 1e-12;
    p.echo("point", fmt_vec(p.grid.node(xbar)));
    p.echo("eps", fmt_double(eps));
    p.echo("tol", fmt_double(tol));
    sf.check_consumed();

    auto w = find_eps_subgradient(f, xbar, eps, sched, tol);
    std::ostringstream rep;
    rep << p.config.str();
    if (w) {
        rep << "verdict: found\n";
        write_witness_report(rep, *w, p.grid.node(xbar));
    } else {
        rep << "verdict: not_found\n";
    }
    out.emit_report("subgrad", rep.str());
    return 0;
}

int cmd_globalize(const SpecFile& sf, Problem& p, const Output& out, double tol_flag) {
    const GridFunction& f = require_f(p);
    Vec point = parse_point(sf.require("globalize", "point"), p.dim);
    size_t xbar = p.grid.nearest_node(point);
    double delta = parse_real(sf.require("globalize", "delta"), "delta");
    double a = parse_real(sf.get("globalize", "a").value_or("0"), "a");
    Vec v = parse_point(sf.get("globalize", "v").value_or(p.dim == 1 ? "0" : "0,0"), p.dim);
    double a0 = parse_real(sf.get("globalize", "bound_a0").value_or("0"), "bound_a0");
    double c0 = sf.get("globalize", "bound_c0")
                    ? parse_real(*sf.get("globalize", "bound_c0"), "bound_c0")
                    : f.finite_min();
    double tol = tol_flag > 0 ? tol_flag : 1e-9 * (1.0 + f.max_abs_finite());
    p.echo("point", fmt_vec(p.grid.node(xbar)));
    p.echo("delta", fmt_double(delta));
    p.echo("local_witness", fmt_double(a) + ";" + fmt_vec(v));
    p.echo("bound", fmt_double(a0) + ";" + fmt_double(c0));
    p.echo("tol", fmt_double(tol));
    sf.check_consumed();

    GlobalMinorantBound bound = make_global_bound(f, a0, c0, tol);
    SubgradientWitness w = globalize(f, xbar, a, v, delta, bound, tol);
    std::ostringstream rep;
    rep << p.config.str();
    rep << "verdict: globalized\n";
    write_witness_report(rep, w, p.grid.node(xbar));
    out.emit_report("globalize", rep.str());
    return 0;
}

int cmd_paraconvex(const SpecFile& sf, Problem& p, const Output& out, double tol_flag) {
    const GridFunction& f = require_f(p);
    double tol = tol_flag > 0 ? tol_flag : 1e-6;
    p.echo("tol", fmt_double(tol));
    std::optional<double> gamma, C;
    if (auto g = sf.get("paraconvex", "gamma")) gamma = parse_real(*g, "gamma");
    if (auto c = sf.get("paraconvex", "C")) C = parse_real(*c, "C");
    sf.check_consumed();

    ParaconvexityReport rep = paraconvexity_constant(f, tol);
    std::ostringstream os;
    os << p.config.str();
    os << "constant: " << (rep.finite ? fmt_double(rep.constant) : "no_finite_constant") << "\n";
    std::string levels;
    for (double c : rep.required_c_by_resolution) {
        if (!levels.empty()) levels += ",";
        levels += fmt_double(c);
    }
    os << "required_c_coarse_to_fine: " << levels << "\n";
    if (gamma && C) {
        GammaCheckResult plain = check_gamma_paraconvex(f, *gamma, *C);
        GammaCheckResult strong = check_strong_gamma_paraconvex(f, *gamma, *C);
        os << "gamma_paraconvex: " << (plain.holds ? "true" : "false") << "\n";
        os << "strong_gamma_paraconvex: " << (strong.holds ? "true" : "false") << "\n";
        if (!plain.holds)
            os << "gamma_worst_triple: x=" << fmt_vec(plain.x) << " y=" << fmt_vec(plain.y)
               << " t=" << fmt_double(plain.t)
               << " violation=" << fmt_double(plain.worst_violation) << "\n";
    }
    out.emit_report("paraconvex", os.str());
    return 0;
}

int cmd_intersect(const SpecFile& sf, Problem& p, const Output& out) {
    QuadraticMinorant phi1 = parse_minorant(sf.require("intersect", "phi1"), p.dim);
    QuadraticMinorant phi2 = parse_minorant(sf.require("intersect", "phi2"), p.dim);
    double alpha = parse_real(sf.require("intersect", "alpha"), "alpha");
    p.echo("phi1", fmt_double(phi1.a) + ";" + fmt_vec(phi1.v) + ";" + fmt_double(phi1.c));
    p.echo("phi2", fmt_double(phi2.a) + ";" + fmt_vec(phi2.v) + ";" + fmt_double(phi2.c));
    p.echo("alpha", fmt_double(alpha));
    sf.check_consumed();

    IntersectionResult r = intersection_property(phi1, phi2, alpha);
    std::ostringstream os;
    os << p.config.str();
    os << "intersection: " << (r.empty ? "empty" : "witness") << "\n";
    if (!r.empty) {
        os << "witness: " << fmt_vec(*r.witness) << "\n";
        os << "phi1_at_witness: " << fmt_double(phi1.eval(*r.witness)) << "\n";
        os << "phi2_at_witness: " << fmt_double(phi2.eval(*r.witness)) << "\n";
    }
    out.emit_report("intersect", os.str());
    return 0;
}

int cmd_zs(const SpecFile& sf, Problem& p, const Output& out, double tol_flag) {
    const GridFunction& f = require_f(p);
    if (!p.g) throw SpecError("missing key 'g' in section [problem]");
    const GridFunction& g = *p.g;
    double eps = parse_real(sf.get("zs", "eps").value_or("0"), "eps");
    double tol = tol_flag > 0 ? tol_flag : 1e-9 * (1.0 + f.max_abs_finite() + g.max_abs_finite());
    p.echo("eps", fmt_double(eps));
    p.echo("tol", fmt_double(tol));

    std::vector<std::pair<size_t, size_t>> pairs;
    if (auto x1s = sf.get("zs", "x1")) {
        size_t x1 = p.grid.nearest_node(parse_point(*x1s, p.dim));
        size_t x2 = p.grid.nearest_node(parse_point(sf.require("zs", "x2"), p.dim));
        pairs.emplace_back(x1, x2);
        p.echo("sweep", "explicit");
    } else {
        sf.get("zs", "x2");
        // 8 x 8 interior lattice
        std::vector<size_t> samples;
        for (int j = 0; j < 8; ++j) {
            Vec q{};
            q.dim = p.dim;
            for (int i = 0; i < p.dim; ++i) {
                auto ii = static_cast<size_t>(i);
                q[i] = p.lo[ii] + (j + 0.5) / 8.0 * (p.hi[ii] - p.lo[ii]);
            }
            samples.push_back(p.grid.nearest_node(q));
        }
        for (size_t i : samples)
            for (size_t j : samples) pairs.emplace_back(i, j);
        p.echo("sweep", "8x8 interior");
    }
    sf.check_consumed();

    std::ostringstream os;
    os << p.config.str();
    std::optional<ZsResult> hit;
    std::pair<size_t, size_t> hit_pair{0, 0};
    int checked = 0;
    for (auto [x1, x2] : pairs) {
        ZsInstance inst = make_zs_instance(f, g, x1, x2, eps, tol);
        ZsResult r = zs_check(inst);
        ++checked;
        if (r.holds) {
            hit = r;
            hit_pair = {x1, x2};
            break;
        }
    }
    os << "pairs_checked: " << checked << "\n";
    if (hit) {
        os << "verdict: holds\n";
        os << "x1: " << fmt_vec(p.grid.node(hit_pair.first)) << "\n";
        os << "x2: " << fmt_vec(p.grid.node(hit_pair.second)) << "\n";
        os << "lambda: " << fmt_double(hit->lambda) << "\n";
        if (hit->w1) os << "w1: a=" << fmt_double(hit->w1->a) << " v=" << fmt_vec(hit->w1->v) << "\n";
        if (hit->w2) os << "w2: a=" << fmt_double(hit->w2->a) << " v=" << fmt_vec(hit->w2->v) << "\n";
    } else {
        os << "verdict: fails_on_sample\n";
    }
    out.emit_report("zs", os.str());
    return 0;
}

int cmd_minimax(const SpecFile& sf, Problem& p, const Output& out, double tol_flag) {
    std::vector<std::string> vars = default_variables(p.dim);
    vars.push_back("y");
    ExprPtr expr = parse_expression(*p.a_text, vars);
    // freeze y per row so the x sweep evaluates a dim-variable tree
    ExprPtr row;
    double row_y = std::numeric_limits<double>::quiet_NaN();
    SaddleGrid a = SaddleGrid::sample(p.grid, p.ylo, p.yhi, p.yh, [&](const Vec& x, double y) {
        if (!row || y != row_y) {
            row = substitute(expr, p.dim, y);
            row_y = y;
        }
        return row->eval(x);
    });

    CertificateSearchSpec spec;
    std::string mode = sf.get("minimax", "mode").value_or("exact");
    if (mode == "epssweep")
        spec.mode = CertificateMode::EpsSweep;
    else if (mode != "exact")
        throw SpecError("minimax mode must be exact or epssweep");
    std::string hyp = sf.get("minimax", "hypothesis").value_or("phiconvex");
    if (hyp == "paraconvex")
        spec.hypothesis = HypothesisKind::Paraconvex;
    else if (hyp != "phiconvex")
        throw SpecError("minimax hypothesis must be phiconvex or paraconvex");
    if (auto e = sf.get("minimax", "eps_list")) spec.eps_list = parse_reals(*e, "eps_list");
    if (tol_flag > 0) spec.tol = tol_flag;
    p.echo("ybox", fmt_double(p.ylo) + ":" + fmt_double(p.yhi));
    p.echo("yh", fmt_double(p.yh));
    p.echo("mode", mode);
    p.echo("hypothesis", hyp);
    sf.check_consumed();

    MinimaxCertificate cert = minimax_certificate(a, spec);
    std::ostringstream os;
    os << p.config.str();
    write_certificate_report(os, cert);
    out.emit_report("minimax", os.str());

    double gap_tol = 2.0 * p.grid.max_step();
    if (cert.verdict == MinimaxCertificate::Verdict::Certified && std::abs(cert.gap) > gap_tol) {
        std::cerr << "internal inconsistency: certified with gap " << fmt_double(cert.gap) << "\n";
        return 5;
    }
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        QuadraticMinorant phi1(0.0, vec1(0.0), 0.0), phi2(1.0, vec1(0.0), 0.0);
        report("intersection-property-at-zero", intersection_property(phi1, phi2, 0.0).empty);
    }
    {
        Grid g = Grid::make1(-2.0, 2.0, 1.0 / 128);
        GridFunction f = sample(parse_expression("-pow(abs(x),3/2)", 1), g);
        auto w = find_eps_subgradient(f, g.nearest_node(vec1(0.0)), 0.0,
                                      CurvatureSchedule::default_for(f));
        report("cusp-has-no-subgradient", !w.has_value());
    }
    {
        Grid g = Grid::make1(-2.0, 2.0, 0.05);
        GridFunction f = sample(parse_expression("-x*x+4", 1), g);
        auto w = find_eps_subgradient(f, g.nearest_node(vec1(0.7)), 0.0,
                                      CurvatureSchedule::default_for(f));
        report("downward-parabola-witness", w.has_value() && w->a == 1.0);
    }
    {
        ExprPtr e = parse_expression("x*y", {"x", "y"});
        SaddleGrid a = SaddleGrid::sample(Grid::make1(-1.0, 1.0, 0.03125), -1.0, 1.0, 0.03125,
                                          [&](const Vec& x, double y) { return e->eval(vec2(x[0], y)); });
        MinimaxCertificate c = minimax_certificate(a);
        report("bilinear-minimax-certificate",
               c.verdict == MinimaxCertificate::Verdict::Certified && c.gap == 0.0);
    }
    {
        Grid g = Grid::make1(-2.0, 2.0, 0.0625);
        GridFunction f = sample(parse_expression("abs(x)", 1), g);
        GridFunction env = moreau_envelope(f, 1.0);
        bool ok = true;
        for (size_t i = 0; i < g.size(); ++i) {
            double x = g.node(i)[0];
            double huber = std::abs(x) <= 1.0 ? x * x / 2.0 : std::abs(x) - 0.5;
            if (std::abs(env.value(i) - huber) > 0.0625 * 0.0625 / 2.0 + 0.0625) ok = false;
        }
        report("moreau-envelope-huber", ok);
    }
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadratic-minorant convexity toolkit"};
    app.require_subcommand(1);

    std::string spec_path, out_dir;
    uint64_t seed = 0;
    double tol = -1.0;
    bool csv = false;
    app.add_option("--spec", spec_path, "problem spec file");
    app.add_option("--out", out_dir, "output directory for reports and CSV");
    app.add_option("--seed", seed, "seed recorded into reports");
    app.add_option("--tol", tol, "override the default tolerance");
    app.add_flag("--csv", csv, "emit CSV (requires --out)");

    std::map<std::string, CLI::App*> subs;
    for (const char* name : {"hull", "envelope", "subgrad", "globalize", "paraconvex",
                             "intersect", "zs", "minimax", "selftest"}) {
        subs[name] = app.add_subcommand(name);
        subs[name]->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string cmd;
    for (auto& [name, sub] : subs)
        if (sub->parsed()) cmd = name;

    try {
        if (cmd == "selftest") return cmd_selftest();
        if (spec_path.empty()) throw SpecError("--spec <file> is required");
        SpecFile sf = SpecFile::load(spec_path);
        bool saddle = cmd == "minimax";
        Problem p = load_problem(sf, seed, saddle);
        Output out{out_dir, csv};
        if (cmd == "hull") return cmd_hull(sf, p, out, tol, "hull");
        if (cmd == "envelope") return cmd_hull(sf, p, out, tol, "envelope");
        if (cmd == "subgrad") return cmd_subgrad(sf, p, out, tol);
        if (cmd == "globalize") return cmd_globalize(sf, p, out, tol);
        if (cmd == "paraconvex") return cmd_paraconvex(sf, p, out, tol);
        if (cmd == "intersect") return cmd_intersect(sf, p, out);
        if (cmd == "zs") return cmd_zs(sf, p, out, tol);
        if (cmd == "minimax") return cmd_minimax(sf, p, out, tol);
        throw SpecError("unknown command");
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis rejected: " << e.what() << "\n";
        return 4;
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
