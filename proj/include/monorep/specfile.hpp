#pragma once

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "calculus.hpp"
#include "core.hpp"
#include "operators.hpp"
#include "oracle.hpp"
#include "qualification.hpp"
#include "report.hpp"
#include "representatives.hpp"

// Problem-spec file format and batch runner.  The format is line oriented:
// stanzas `operator NAME KIND` / `map NAME` / `probe NAME` closed by `end`,
// followed by single-line `task VERB ...` records.  `#` starts a comment;
// `;` separates vector groups on a line.

namespace monorep {

struct SpecParseError : std::runtime_error {
    int line, col;
    SpecParseError(int l, int c, const std::string& msg)
        : std::runtime_error("parse error at line " + std::to_string(l) + ", column " +
                             std::to_string(c) + ": " + msg),
          line(l),
          col(c) {}
};

struct SpecNameError : std::runtime_error {
    explicit SpecNameError(const std::string& name)
        : std::runtime_error("unresolved name: " + name) {}
};

struct ProbeDesc {
    Vec lo, hi;
    double resolution = 0.05;
    double tol = 1e-9;

    bool degenerate() const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) return true;
        return lo.empty();
    }
    BoxProbe to_probe() const { return BoxProbe(lo, hi, resolution, tol); }
};

struct TaskRecord {
    std::string verb;
    std::vector<std::string> args;   // operand names, in order
    std::string probe;               // optional probe name
    std::vector<Vec> samples;        // optional `samples` payload
    std::string out;                 // optional output file name
    int line = 0;
};

struct ProblemSpec {
    std::map<std::string, OperatorPtr> operators;
    std::map<std::string, LinearMapRep> maps;
    std::map<std::string, ProbeDesc> probes;
    std::vector<TaskRecord> tasks;
};

namespace detail_spec {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int num = 0;
    while (std::getline(in, raw)) {
        ++num;
        std::string::size_type hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        Line ln;
        ln.number = num;
        std::string tok;
        for (char c : raw) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!tok.empty()) ln.tokens.push_back(tok), tok.clear();
            } else if (c == ';') {
                if (!tok.empty()) ln.tokens.push_back(tok), tok.clear();
                ln.tokens.push_back(";");
            } else {
                tok.push_back(c);
            }
        }
        if (!tok.empty()) ln.tokens.push_back(tok);
        if (!ln.tokens.empty()) out.push_back(std::move(ln));
    }
    return out;
}

inline double parse_number(const std::string& tok, int line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw SpecParseError(line, 1, "expected a number, got '" + tok + "'");
    }
}

// Split a token list into ';'-separated numeric groups.
inline std::vector<Vec> number_groups(const std::vector<std::string>& toks, std::size_t first,
                                      int line) {
    std::vector<Vec> groups(1);
    for (std::size_t i = first; i < toks.size(); ++i) {
        if (toks[i] == ";")
            groups.emplace_back();
        else
            groups.back().push_back(parse_number(toks[i], line));
    }
    return groups;
}

inline Mat parse_matrix(const std::vector<std::string>& toks, std::size_t first, int line) {
    std::vector<Vec> rows = number_groups(toks, first, line);
    if (rows.empty() || rows[0].empty()) throw SpecParseError(line, 1, "empty matrix");
    for (const Vec& r : rows)
        if (r.size() != rows[0].size()) throw SpecParseError(line, 1, "ragged matrix rows");
    return Mat::from_rows(rows);
}

}  // namespace detail_spec

inline ProblemSpec parse_problem_spec(const std::string& text) {
    using namespace detail_spec;
    std::vector<Line> lines = tokenize(text);
    ProblemSpec spec;
    const std::vector<std::string> verbs = {
        "monotone",       "ni",          "representable",     "maximal",
        "extension",      "sum",         "compose",           "chain-representative",
        "infconv2",       "skew-identity", "chain-identity",  "qual-sum",
        "qual-chain",     "interiority", "ncone-sum",         "ncone-chain",
        "domain-invariance", "diff-map", "linear-closedness", "sample-surface"};

    std::size_t i = 0;
    auto need = [&](const Line& ln, std::size_t k) {
        if (ln.tokens.size() <= k) throw SpecParseError(ln.number, 1, "missing field on line");
    };
    auto op_ref = [&](const std::string& name) -> OperatorPtr {
        auto it = spec.operators.find(name);
        if (it == spec.operators.end()) throw SpecNameError(name);
        return it->second;
    };

    while (i < lines.size()) {
        const Line& head = lines[i];
        const std::string& kw = head.tokens[0];
        if (kw == "operator") {
            need(head, 2);
            std::string name = head.tokens[1], kind = head.tokens[2];
            ++i;
            std::vector<PairedPoint> pts;
            std::optional<Mat> matrix;
            Vec offset;
            std::vector<Vec> slopes;
            Vec offsets;
            HalfspaceList hs;
            std::size_t ncdim = 0;
            std::vector<std::string> refs;
            std::string map_name, inner_name;
            while (i < lines.size() && lines[i].tokens[0] != "end") {
                const Line& ln = lines[i];
                const std::string& f = ln.tokens[0];
                if (f == "point") {
                    std::vector<Vec> g = number_groups(ln.tokens, 1, ln.number);
                    if (g.size() != 2 || g[0].size() != g[1].size())
                        throw SpecParseError(ln.number, 1, "point needs 'x... ; xstar...'");
                    pts.emplace_back(g[0], g[1]);
                } else if (f == "matrix") {
                    matrix = parse_matrix(ln.tokens, 1, ln.number);
                } else if (f == "offset") {
                    std::vector<Vec> g = number_groups(ln.tokens, 1, ln.number);
                    offset = g[0];
                } else if (f == "piece") {
                    std::vector<Vec> g = number_groups(ln.tokens, 1, ln.number);
                    if (g.size() != 2 || g[1].size() != 1)
                        throw SpecParseError(ln.number, 1, "piece needs 'slope... ; offset'");
                    slopes.push_back(g[0]);
                    offsets.push_back(g[1][0]);
                } else if (f == "halfspace") {
                    std::vector<Vec> g = number_groups(ln.tokens, 1, ln.number);
                    if (g.size() != 2 || g[1].size() != 1)
                        throw SpecParseError(ln.number, 1, "halfspace needs 'g... ; c'");
                    hs.push_back({g[0], g[1][0]});
                    ncdim = g[0].size();
                } else if (f == "of") {
                    for (std::size_t k = 1; k < ln.tokens.size(); ++k)
                        refs.push_back(ln.tokens[k]);
                } else if (f == "map") {
                    need(ln, 1);
                    map_name = ln.tokens[1];
                } else if (f == "inner") {
                    need(ln, 1);
                    inner_name = ln.tokens[1];
                } else {
                    throw SpecParseError(ln.number, 1, "unknown operator field '" + f + "'");
                }
                ++i;
            }
            if (i == lines.size()) throw SpecParseError(head.number, 1, "missing 'end'");
            ++i;  // consume end
            try {
                if (kind == "finite-graph") {
                    spec.operators[name] = make_finite_graph(pts);
                } else if (kind == "affine") {
                    if (!matrix) throw SpecParseError(head.number, 1, "affine needs matrix");
                    if (offset.empty()) offset = zeros(matrix->rows);
                    spec.operators[name] = make_affine(*matrix, offset);
                } else if (kind == "skew") {
                    if (!matrix) throw SpecParseError(head.number, 1, "skew needs matrix");
                    spec.operators[name] = make_skew(*matrix);
                } else if (kind == "subdiff-pl") {
                    spec.operators[name] = make_subdiff_pl(slopes, offsets);
                } else if (kind == "normal-cone") {
                    spec.operators[name] = make_normal_cone(hs, ncdim);
                } else if (kind == "sum" || kind == "product") {
                    if (refs.size() != 2)
                        throw SpecParseError(head.number, 1, kind + " needs 'of A B'");
                    OperatorPtr a = op_ref(refs[0]), b = op_ref(refs[1]);
                    spec.operators[name] = kind == "sum" ? make_sum(a, b) : make_product(a, b);
                } else if (kind == "precomp") {
                    auto mit = spec.maps.find(map_name);
                    if (mit == spec.maps.end()) throw SpecNameError(map_name);
                    spec.operators[name] = make_precomp(mit->second, op_ref(inner_name));
                } else {
                    throw SpecParseError(head.number, 1, "unknown operator kind '" + kind + "'");
                }
            } catch (const std::invalid_argument& e) {
                throw SpecParseError(head.number, 1, e.what());
            }
        } else if (kw == "map") {
            need(head, 1);
            std::string name = head.tokens[1];
            ++i;
            std::optional<Mat> matrix;
            while (i < lines.size() && lines[i].tokens[0] != "end") {
                const Line& ln = lines[i];
                if (ln.tokens[0] == "matrix")
                    matrix = detail_spec::parse_matrix(ln.tokens, 1, ln.number);
                else
                    throw SpecParseError(ln.number, 1, "unknown map field");
                ++i;
            }
            if (i == lines.size()) throw SpecParseError(head.number, 1, "missing 'end'");
            ++i;
            if (!matrix) throw SpecParseError(head.number, 1, "map needs matrix");
            spec.maps[name] = LinearMapRep{*matrix};
        } else if (kw == "probe") {
            need(head, 1);
            std::string name = head.tokens[1];
            ++i;
            ProbeDesc pd;
            std::size_t dim = 0;
            double radius = 2.0;
            bool have_box = false;
            while (i < lines.size() && lines[i].tokens[0] != "end") {
                const Line& ln = lines[i];
                const std::string& f = ln.tokens[0];
                if (f == "dim") {
                    need(ln, 1);
                    dim = static_cast<std::size_t>(parse_number(ln.tokens[1], ln.number));
                } else if (f == "radius") {
                    need(ln, 1);
                    radius = parse_number(ln.tokens[1], ln.number);
                } else if (f == "resolution") {
                    need(ln, 1);
                    pd.resolution = parse_number(ln.tokens[1], ln.number);
                } else if (f == "tol") {
                    need(ln, 1);
                    pd.tol = parse_number(ln.tokens[1], ln.number);
                } else if (f == "box") {
                    std::vector<Vec> g = number_groups(ln.tokens, 1, ln.number);
                    if (g.size() != 2 || g[0].size() != g[1].size())
                        throw SpecParseError(ln.number, 1, "box needs 'lo... ; hi...'");
                    pd.lo = g[0];
                    pd.hi = g[1];
                    have_box = true;
                } else {
                    throw SpecParseError(ln.number, 1, "unknown probe field '" + f + "'");
                }
                ++i;
            }
            if (i == lines.size()) throw SpecParseError(head.number, 1, "missing 'end'");
            ++i;
            if (!have_box) {
                if (dim == 0) throw SpecParseError(head.number, 1, "probe needs dim or box");
                pd.lo.assign(2 * dim, -radius);
                pd.hi.assign(2 * dim, radius);
            }
            spec.probes[name] = pd;
        } else if (kw == "task") {
            need(head, 1);
            TaskRecord t;
            t.verb = head.tokens[1];
            t.line = head.number;
            bool known = false;
            for (const std::string& v : verbs) known = known || v == t.verb;
            if (!known) throw SpecParseError(head.number, 1, "unknown task verb '" + t.verb + "'");
            std::size_t k = 2;
            while (k < head.tokens.size()) {
                const std::string& tok = head.tokens[k];
                if (tok == "probe") {
                    need(head, k + 1);
                    t.probe = head.tokens[k + 1];
                    k += 2;
                } else if (tok == "out") {
                    need(head, k + 1);
                    t.out = head.tokens[k + 1];
                    k += 2;
                } else if (tok == "samples") {
                    std::vector<Vec> g = detail_spec::number_groups(head.tokens, k + 1,
                                                                    head.number);
                    for (Vec& s : g)
                        if (!s.empty()) t.samples.push_back(std::move(s));
                    k = head.tokens.size();
                } else {
                    t.args.push_back(tok);
                    ++k;
                }
            }
            spec.tasks.push_back(std::move(t));
            ++i;
        } else {
            throw SpecParseError(head.number, 1, "unknown stanza '" + kw + "'");
        }
    }
    return spec;
}

// ---- report structure --------------------------------------------------

struct ReportEntry {
    std::string header;  // "task N verb args..."
    std::vector<std::pair<std::string, std::string>> fields;
};

struct RunReport {
    std::vector<ReportEntry> entries;
};

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string serialize_report(const RunReport& r) {
    std::ostringstream out;
    out << "report\n";
    for (const ReportEntry& e : r.entries) {
        out << e.header << "\n";
        for (const auto& [k, v] : e.fields) out << "  " << k << " " << v << "\n";
        out << "end\n";
    }
    return out.str();
}

inline RunReport parse_report(const std::string& text) {
    RunReport r;
    std::istringstream in(text);
    std::string line;
    ReportEntry* cur = nullptr;
    while (std::getline(in, line)) {
        if (line.empty() || line == "report") continue;
        if (line == "end") {
            cur = nullptr;
            continue;
        }
        if (line.rfind("task ", 0) == 0) {
            r.entries.push_back({line, {}});
            cur = &r.entries.back();
        } else if (cur && line.size() > 2) {
            std::string body = line.substr(2);
            std::string::size_type sp = body.find(' ');
            cur->fields.emplace_back(body.substr(0, sp),
                                     sp == std::string::npos ? "" : body.substr(sp + 1));
        }
    }
    return r;
}

namespace detail_spec {

inline void fill_from_check(ReportEntry& e, const CheckReport& c, int depth = 0) {
    std::string prefix(static_cast<std::size_t>(depth) * 2, '.');
    if (depth > 0) e.fields.emplace_back(prefix + "sub", c.what);
    e.fields.emplace_back(prefix + "verdict", verdict_name(c.verdict));
    if (c.tol != 0.0) e.fields.emplace_back(prefix + "tol", format_double(c.tol));
    if (c.resolution != 0.0)
        e.fields.emplace_back(prefix + "resolution", format_double(c.resolution));
    e.fields.emplace_back(prefix + "worst", format_double(c.worst));
    if (c.witness) {
        std::string w;
        for (double v : c.witness->x) w += format_double(v) + " ";
        w += ";";
        for (double v : c.witness->xstar) w += " " + format_double(v);
        e.fields.emplace_back(prefix + "witness", w);
    }
    for (const CheckReport& s : c.sub) fill_from_check(e, s, depth + 1);
}

// A representative function for the operator: exact closed forms when the
// kind admits one, sampled max-affine otherwise.
inline RepFunction rep_of(const OperatorRep& op, const BoxProbe& probe) {
    if (const AffineMonotone* a = std::get_if<AffineMonotone>(&op.node))
        return rep_fitz_affine(a->m, a->q);
    if (const SkewLinear* s = std::get_if<SkewLinear>(&op.node))
        return rep_fitz_affine(s->b, zeros(op.dim));
    if (const FiniteGraph* g = std::get_if<FiniteGraph>(&op.node))
        return rep_fitz_finite(g->points);
    FiniteGraph g = discretize_graph(op, probe);
    return rep_fitz_finite(g.points);
}

}  // namespace detail_spec

// ---- task execution ----------------------------------------------------

struct RunOptions {
    std::optional<double> resolution;  // override every probe
    std::optional<double> tol;
    unsigned seed = 0;  // reserved; recorded in the report
};

inline int run_spec(const ProblemSpec& spec, const std::string& out_dir,
                    const RunOptions& opts = {}) {
    RunReport report;
    bool any_fail = false, any_possible = false;

    auto get_probe = [&](const TaskRecord& t) -> BoxProbe {
        auto it = spec.probes.find(t.probe);
        if (it == spec.probes.end()) throw SpecNameError(t.probe.empty() ? "<probe>" : t.probe);
        ProbeDesc pd = it->second;
        if (opts.resolution) pd.resolution = *opts.resolution;
        if (opts.tol) pd.tol = *opts.tol;
        return pd.to_probe();
    };
    auto get_probe_desc = [&](const TaskRecord& t) -> ProbeDesc {
        auto it = spec.probes.find(t.probe);
        if (it == spec.probes.end()) throw SpecNameError(t.probe.empty() ? "<probe>" : t.probe);
        ProbeDesc pd = it->second;
        if (opts.resolution) pd.resolution = *opts.resolution;
        if (opts.tol) pd.tol = *opts.tol;
        return pd;
    };
    auto get_op = [&](const std::string& name) -> OperatorPtr {
        auto it = spec.operators.find(name);
        if (it == spec.operators.end()) throw SpecNameError(name);
        return it->second;
    };
    auto get_map = [&](const std::string& name) -> const LinearMapRep& {
        auto it = spec.maps.find(name);
        if (it == spec.maps.end()) throw SpecNameError(name);
        return it->second;
    };
    auto arg = [&](const TaskRecord& t, std::size_t k) -> const std::string& {
        if (t.args.size() <= k)
            throw SpecParseError(t.line, 1, "task '" + t.verb + "' is missing an operand");
        return t.args[k];
    };

    int index = 0;
    for (const TaskRecord& t : spec.tasks) {
        ++index;
        ReportEntry entry;
        entry.header = "task " + std::to_string(index) + " " + t.verb;
        for (const std::string& a : t.args) entry.header += " " + a;
        auto start = std::chrono::steady_clock::now();
        CheckReport check;
        try {
            if (t.verb == "monotone") {
                OperatorPtr op = get_op(arg(t, 0));
                if (const FiniteGraph* g = std::get_if<FiniteGraph>(&op->node)) {
                    check = is_monotone_finite(*g);
                } else {
                    BoxProbe probe = get_probe(t);
                    check = is_monotone_finite(discretize_graph(*op, probe), probe.tol);
                    if (check.verdict == Verdict::Holds)
                        check.verdict = Verdict::HoldsAtResolution;
                    check.resolution = probe.resolution;
                }
            } else if (t.verb == "ni") {
                check = ni_probe(*get_op(arg(t, 0)), get_probe(t));
            } else if (t.verb == "representable") {
                check = representability_probe(*get_op(arg(t, 0)), get_probe(t));
            } else if (t.verb == "maximal") {
                check = maximality_certificate(*get_op(arg(t, 0)), get_probe(t));
            } else if (t.verb == "extension") {
                OperatorPtr op = get_op(arg(t, 0));
                const FiniteGraph* g = std::get_if<FiniteGraph>(&op->node);
                if (!g) throw std::invalid_argument("extension task needs a finite graph");
                BoxProbe probe = get_probe(t);
                FiniteGraph ext = extension_from_fitzpatrick(*g, probe);
                check.what = "unique maximal extension via {h = p}";
                check.resolution = probe.resolution;
                check.tol = 1.5 * probe.resolution * probe.resolution;
                bool contains = true;
                for (const PairedPoint& a : g->points) {
                    bool hit = false;
                    for (const PairedPoint& b : ext.points)
                        if (dist2(a, b) <= 1e-18) hit = true;
                    contains = contains && hit;
                }
                CheckReport mono = is_monotone_finite(ext, 3.0 * probe.resolution *
                                                               probe.resolution);
                check.worst = static_cast<double>(ext.points.size());
                check.verdict = contains && !mono.failed() ? Verdict::HoldsAtResolution
                                                           : Verdict::Fails;
                check.sub.push_back(mono);
            } else if (t.verb == "sum") {
                // A + B against the diagonal chain reduction, sampled x grid.
                OperatorPtr a = get_op(arg(t, 0)), b = get_op(arg(t, 1));
                BoxProbe probe = get_probe(t);
                OperatorPtr s = sum_operator(a, b);
                OperatorPtr chain =
                    precompose(diagonal_map(a->dim), product_operator(a, b));
                check.what = "sum equals diagonal chain reduction";
                check.tol = probe.tol;
                check.resolution = probe.resolution;
                check.verdict = Verdict::HoldsAtResolution;
                std::vector<Vec> dirs;
                for (std::size_t i = 0; i < a->dim; ++i) {
                    dirs.push_back(unit(a->dim, i, 1.0));
                    dirs.push_back(unit(a->dim, i, -1.0));
                }
                for_each_grid(probe, 0, a->dim, [&](const Vec& x) {
                    if (check.failed()) return;
                    GenPolytope v1 = evaluate(*s, x), v2 = evaluate(*chain, x);
                    if (v1.empty != v2.empty) {
                        check.verdict = Verdict::Fails;
                        check.witness = PairedPoint(x, zeros(a->dim));
                        return;
                    }
                    for (const Vec& d : dirs)
                        if (!ext_close(support_value(v1, d), support_value(v2, d), probe.tol)) {
                            check.verdict = Verdict::Fails;
                            check.witness = PairedPoint(x, d);
                        }
                });
            } else if (t.verb == "compose") {
                OperatorPtr comp = precompose(get_map(arg(t, 0)), get_op(arg(t, 1)));
                BoxProbe probe = get_probe(t);
                check = is_monotone_finite(discretize_graph(*comp, probe), probe.tol);
                if (check.verdict == Verdict::Holds) check.verdict = Verdict::HoldsAtResolution;
                check.what = "composite L*ML discretized graph monotone";
                check.resolution = probe.resolution;
            } else if (t.verb == "chain-representative") {
                const LinearMapRep& l = get_map(arg(t, 0));
                OperatorPtr m = get_op(arg(t, 1));
                BoxProbe probe = get_probe(t);
                FiniteGraph gm;
                if (const FiniteGraph* g = std::get_if<FiniteGraph>(&m->node))
                    gm = *g;
                else
                    gm = discretize_graph(*m, BoxProbe::cube(m->dim, norm_inf(probe.hi),
                                                             probe.resolution, probe.tol));
                check.what = "chain representative r >= p and LP attainment";
                check.tol = probe.tol;
                check.resolution = probe.resolution;
                check.verdict = Verdict::HoldsAtResolution;
                double worst = std::numeric_limits<double>::infinity();
                const std::size_t n = l.domain_dim();
                for_each_grid(probe, 0, 2 * n, [&](const Vec& zv) {
                    if (check.failed()) return;
                    Vec x(zv.begin(), zv.begin() + static_cast<long>(n));
                    Vec xs(zv.begin() + static_cast<long>(n), zv.end());
                    LPStatus st;
                    ExtReal r = chain_representative_value(l, gm, x, xs, &st);
                    if (st == LPStatus::Unbounded) {
                        check.verdict = Verdict::Fails;
                        check.witness = PairedPoint(x, xs);
                        return;
                    }
                    if (!r.finite()) return;
                    double gap = r.value - dot(x, xs);
                    worst = std::min(worst, gap);
                    if (gap < -probe.tol) {
                        check.verdict = Verdict::Fails;
                        check.witness = PairedPoint(x, xs);
                    }
                });
                check.worst = std::isfinite(worst) ? worst : 0.0;
            } else if (t.verb == "infconv2") {
                OperatorPtr a = get_op(arg(t, 0)), b = get_op(arg(t, 1));
                BoxProbe probe = get_probe(t);
                const SkewLinear* sk = std::get_if<SkewLinear>(&b->node);
                check.what = "infimal convolution with a skew indicator = shift";
                check.tol = 1e-12;
                check.resolution = probe.resolution;
                if (!sk) {
                    check.verdict = Verdict::Inapplicable;
                } else {
                    RepFunction h1 = detail_spec::rep_of(*a, probe);
                    RepFunction h2 = rep_fitz_affine(sk->b, zeros(b->dim));
                    const std::size_t n = a->dim;
                    check.verdict = Verdict::HoldsAtResolution;
                    double worst = 0.0;
                    for_each_grid(probe, 0, 2 * n, [&](const Vec& zv) {
                        if (check.failed()) return;
                        Vec x(zv.begin(), zv.begin() + static_cast<long>(n));
                        Vec xs(zv.begin() + static_cast<long>(n), zv.end());
                        ExtReal lhs = infconv2_value(h1, h2, x, xs);
                        ExtReal rhs = evaluate_rep(h1, PairedPoint(x, sub(xs, sk->b.apply(x))));
                        if (!lhs.finite() && !rhs.finite()) return;
                        if (lhs.finite() != rhs.finite()) {
                            check.verdict = Verdict::Fails;
                            check.witness = PairedPoint(x, xs);
                            return;
                        }
                        double dev = std::abs(lhs.value - rhs.value);
                        worst = std::max(worst, dev);
                        if (dev > check.tol) {
                            check.verdict = Verdict::Fails;
                            check.witness = PairedPoint(x, xs);
                        }
                    });
                    check.worst = worst;
                }
            } else if (t.verb == "skew-identity") {
                OperatorPtr a = get_op(arg(t, 0)), b = get_op(arg(t, 1));
                const SkewLinear* sk = std::get_if<SkewLinear>(&b->node);
                if (!sk) throw std::invalid_argument("skew-identity needs a skew operand");
                check = skew_shift_identity_check(a, sk->b, get_probe(t));
            } else if (t.verb == "chain-identity") {
                const LinearMapRep& l = get_map(arg(t, 0));
                OperatorPtr m = get_op(arg(t, 1));
                const AffineMonotone* am = std::get_if<AffineMonotone>(&m->node);
                if (!am) throw std::invalid_argument("chain-identity needs an affine operand");
                check = convex_graph_chain_check(l, am->m, am->q, get_probe(t));
            } else if (t.verb == "qual-sum") {
                check = qualification_sum(*get_op(arg(t, 0)), *get_op(arg(t, 1)));
            } else if (t.verb == "qual-chain") {
                check = qualification_chain(get_map(arg(t, 0)), *get_op(arg(t, 1)));
            } else if (t.verb == "interiority") {
                check = interiority_checks(*get_op(arg(t, 0)), *get_op(arg(t, 1)));
            } else if (t.verb == "ncone-sum") {
                const NormalConeOp* ca = std::get_if<NormalConeOp>(&get_op(arg(t, 0))->node);
                const NormalConeOp* cb = std::get_if<NormalConeOp>(&get_op(arg(t, 1))->node);
                if (!ca || !cb)
                    throw std::invalid_argument("ncone-sum needs normal-cone operands");
                check = ncone_sum_check(ca->c, cb->c, t.samples);
            } else if (t.verb == "ncone-chain") {
                const NormalConeOp* cm = std::get_if<NormalConeOp>(&get_op(arg(t, 1))->node);
                if (!cm) throw std::invalid_argument("ncone-chain needs a normal-cone operand");
                check = ncone_chain_check(get_map(arg(t, 0)), cm->c, t.samples);
            } else if (t.verb == "domain-invariance") {
                check = domain_invariance_check(*get_op(arg(t, 0)), t.samples, get_probe(t));
            } else if (t.verb == "diff-map") {
                check = difference_map_equivalence(convex_set(domain(*get_op(arg(t, 0)))),
                                                  convex_set(domain(*get_op(arg(t, 1)))));
            } else if (t.verb == "linear-closedness") {
                check = linear_closedness_check(*get_op(arg(t, 0)), *get_op(arg(t, 1)));
            } else if (t.verb == "sample-surface") {
                OperatorPtr op = get_op(arg(t, 0));
                ProbeDesc pd = get_probe_desc(t);
                std::string fname = t.out.empty() ? ("surface_" + std::to_string(index) + ".csv")
                                                  : t.out;
                std::ofstream out(out_dir + "/" + fname);
                if (!out) throw std::runtime_error("cannot open output file " + fname);
                const std::size_t n = op->dim;
                const FiniteGraph* g = std::get_if<FiniteGraph>(&op->node);
                out << "z";
                for (std::size_t i = 1; i < 2 * n; ++i) out << ",z" << i + 1;
                out << ",p,h";
                if (g) out << ",phi";
                out << ",h_minus_p\n";
                if (!pd.degenerate()) {
                    BoxProbe probe = pd.to_probe();
                    for_each_grid(probe, 0, 2 * n, [&](const Vec& zv) {
                        PairedPoint z(Vec(zv.begin(), zv.begin() + static_cast<long>(n)),
                                      Vec(zv.begin() + static_cast<long>(n), zv.end()));
                        double p = pairing_p(z);
                        ExtReal h = fitzpatrick_value(*op, z, probe);
                        for (double v : zv) out << format_double(v) << ",";
                        out << format_double(p) << ",";
                        out << (h.finite() ? format_double(h.value) : "inf");
                        if (g) {
                            ExtReal phi = penot_value(*g, z);
                            out << "," << (phi.finite() ? format_double(phi.value) : "inf");
                        }
                        out << ","
                            << (h.finite() ? format_double(h.value - p) : "inf") << "\n";
                    });
                }
                check.what = "surface dump " + fname;
                check.verdict = out.good() ? Verdict::Holds : Verdict::Error;
            }
        } catch (const SpecNameError&) {
            throw;  // unresolved names abort the whole run (exit 65)
        } catch (const std::exception& e) {
            check.verdict = Verdict::Error;
            check.what = e.what();
        }
        auto stop = std::chrono::steady_clock::now();
        detail_spec::fill_from_check(entry, check);
        entry.fields.emplace_back(
            "wall_ms",
            std::to_string(
                std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count()));
        report.entries.push_back(std::move(entry));
        if (check.verdict == Verdict::Fails || check.verdict == Verdict::Error) any_fail = true;
        if (check.verdict == Verdict::PossibleFail) any_possible = true;
    }

    std::ofstream out(out_dir + "/report.txt");
    out << serialize_report(report);
    out.close();
    if (any_fail) return 1;
    if (any_possible) return 2;
    return 0;
}

}  // namespace monorep
