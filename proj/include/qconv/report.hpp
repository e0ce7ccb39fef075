// Structured-text reports and CSV emission. Reports are flat "key: value"
// lines with a fixed field order and locale-independent %.17g doubles, so a
// given input always produces byte-identical output.

#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "qconv/core.hpp"
#include "qconv/minimax.hpp"

namespace qconv {

inline std::string fmt_double(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_vec(const Vec& v) {
    std::string s = fmt_double(v[0]);
    if (v.dim == 2) s += "," + fmt_double(v[1]);
    return s;
}

inline const char* scope_name(WitnessScope s) {
    return s == WitnessScope::Global ? "global" : "local";
}

inline const char* status_name(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::Unverified: return "unverified";
        case VerifyStatus::VerifiedOnGrid: return "verified_on_grid";
        case VerifyStatus::Refuted: return "refuted";
    }
    return "?";
}

inline void write_witness_report(std::ostream& os, const SubgradientWitness& w,
                                 const Vec& point) {
    os << "point: " << fmt_vec(point) << "\n";
    os << "a: " << fmt_double(w.a) << "\n";
    os << "v: " << fmt_vec(w.v) << "\n";
    os << "eps: " << fmt_double(w.eps) << "\n";
    os << "scope: " << scope_name(w.scope);
    if (w.scope == WitnessScope::Local) os << " delta: " << fmt_double(w.delta);
    os << "\n";
    os << "status: " << status_name(w.status) << "\n";
    if (w.status == VerifyStatus::Refuted) {
        os << "worst_violation_node: " << w.worst_node << "\n";
        os << "worst_violation_amount: " << fmt_double(w.worst_violation) << "\n";
    }
}

inline void write_certificate_report(std::ostream& os, const MinimaxCertificate& c) {
    os << "verdict: "
       << (c.verdict == MinimaxCertificate::Verdict::Certified ? "certified" : "not_found")
       << "\n";
    os << "y1: " << fmt_double(c.y1) << "\n";
    os << "y2: " << fmt_double(c.y2) << "\n";
    os << "xbar: " << c.xbar << "\n";
    os << "eps: " << fmt_double(c.eps) << "\n";
    os << "lambda: " << fmt_double(c.lambda) << "\n";
    if (c.w1) {
        os << "w1.a: " << fmt_double(c.w1->a) << "\n";
        os << "w1.v: " << fmt_vec(c.w1->v) << "\n";
    }
    if (c.w2) {
        os << "w2.a: " << fmt_double(c.w2->a) << "\n";
        os << "w2.v: " << fmt_vec(c.w2->v) << "\n";
    }
    os << "supinf: " << fmt_double(c.supinf) << "\n";
    os << "infsup: " << fmt_double(c.infsup) << "\n";
    os << "gap: " << fmt_double(c.gap) << "\n";
    os << "hypothesis_checks: " << (c.hypothesis_ok ? "ok" : "failed")
       << (c.concave_ok ? "" : " (y-concavity warning)") << "\n";
    if (c.relaxed_zs != MinimaxCertificate::RelaxedZs::NotRun)
        os << "relaxed_zs: "
           << (c.relaxed_zs == MinimaxCertificate::RelaxedZs::Holds ? "holds" : "fails_on_sample")
           << "\n";
    if (!c.note.empty()) os << "note: " << c.note << "\n";
}

// CSV schema shared by hull/envelope emission: x[,y],f,hull,envelope.
inline void write_hull_csv(std::ostream& os, const GridFunction& f,
                           const GridFunction& hull, const GridFunction& envelope) {
    const Grid& g = f.grid();
    os << (g.dim() == 1 ? "x,f,hull,envelope" : "x,y,f,hull,envelope") << "\n";
    for (size_t i = 0; i < g.size(); ++i) {
        Vec p = g.node(i);
        os << fmt_double(p[0]);
        if (g.dim() == 2) os << "," << fmt_double(p[1]);
        os << "," << fmt_double(f.value(i)) << "," << fmt_double(hull.value(i)) << ","
           << fmt_double(envelope.value(i)) << "\n";
    }
}

}  // namespace qconv
