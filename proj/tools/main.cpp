#include "qrw/dsl.hpp"
#include "qrw/graded.hpp"
#include "qrw/search.hpp"
#include "qrw/systems.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <map>

using nlohmann::json;
using namespace qrw;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInconclusive = 2;
constexpr int kInputError = 3;
constexpr int kUsage = 64;

struct Loaded {
    RewriteSystem system;
    std::optional<GradedSystem> graded;

    StepRelation relation() const { return graded ? StepRelation(*graded) : StepRelation(system); }
    GradedSystem as_graded() const { return graded ? *graded : GradedSystem(system, {}); }
};

Loaded load(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) {
        std::string name = spec.substr(8);
        if (auto g = systems::graded_by_name(name)) return {g->system(), g};
        return {systems::by_name(name), std::nullopt};
    }
    auto f = dsl::load_system(spec);
    return {f.system, f.graded};
}

Term term_arg(const Loaded& l, const std::string& text) {
    Term t = dsl::parse_term(l.system.signature(), text);
    if (!t.concrete())
        throw dsl::ParseError(1, 1, "term '" + text + "' has unbound index parameters");
    return t;
}

std::string verdict_name(int code) {
    switch (code) {
    case kPass: return "pass";
    case kFail: return "fail";
    default: return "inconclusive";
    }
}

json step_json(const RewriteSystem& sys, const RewriteStep& st) {
    const Quantale& q = sys.quantale();
    return {{"position", st.position}, {"rule", st.rule}, {"weight", q.format(st.weight)},
            {"from", sys.print(st.source)}, {"to", sys.print(st.target)}};
}

std::string step_text(const RewriteSystem& sys, const RewriteStep& st) {
    return "[" + position_str(st.position) + "] " + st.rule + " -[" + sys.quantale().format(st.weight) + "]-> " +
           sys.print(st.target);
}

json peak_json(const RewriteSystem& sys, const CriticalPeak& p) {
    const Quantale& q = sys.quantale();
    return {{"source", sys.print(p.source)},        {"left", sys.print(p.left)},
            {"left_weight", q.format(p.left_weight)}, {"right", sys.print(p.right)},
            {"right_weight", q.format(p.right_weight)}, {"position", p.position},
            {"inner_rule", p.inner_rule},             {"outer_rule", p.outer_rule}};
}

std::string peak_text(const RewriteSystem& sys, const CriticalPeak& p) {
    const Quantale& q = sys.quantale();
    return p.inner_rule + "@" + position_str(p.position) + "/" + p.outer_rule + ": " + sys.print(p.left) + " <-[" +
           q.format(p.left_weight) + "]- " + sys.print(p.source) + " -[" + q.format(p.right_weight) + "]-> " +
           sys.print(p.right);
}

RewriteSystem with_grid(const RewriteSystem& sys, const std::vector<std::string>& values) {
    if (values.empty()) return sys;
    ParamGrid grid = sys.grid();
    grid.values.clear();
    for (const auto& v : values) {
        auto r = parse_rational(v);
        if (!r) throw dsl::ParseError(1, 1, "bad grid value '" + v + "'");
        grid.values.push_back(*r);
    }
    return RewriteSystem(sys.quantale(), sys.signature(), sys.rules(), grid, sys.name());
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---- rewrite ----------------------------------------------------------------

struct RewriteArgs {
    std::string file, term, strategy = "innermost";
    std::optional<std::size_t> steps;
    bool json = false;
};

int cmd_rewrite(const RewriteArgs& a) {
    Loaded l = load(a.file);
    const RewriteSystem& sys = l.system;
    const Quantale& q = sys.quantale();
    StepRelation rel = l.relation();
    Term t = term_arg(l, a.term);
    if (!a.steps) {
        auto steps = rel.forward(t, {subterm_pool({t})});
        if (a.json) {
            json out{{"term", sys.print(t)}, {"steps", json::array()}};
            for (const auto& st : steps) out["steps"].push_back(step_json(sys, st));
            print_json(out);
        } else {
            std::cout << sys.print(t) << "\n";
            if (steps.empty()) std::cout << "  normal form\n";
            for (const auto& st : steps) std::cout << "  " << step_text(sys, st) << "\n";
        }
        return kPass;
    }
    static const std::map<std::string, Strategy> strategies{
        {"innermost", Strategy::LeftmostInnermost}, {"outermost", Strategy::LeftmostOutermost}, {"all", Strategy::All}};
    Strategy s = strategies.at(a.strategy);
    SearchBudget budget;
    budget.max_depth = *a.steps;
    auto res = normalize(rel, t, s, budget);
    if (a.json) {
        json out{{"term", sys.print(t)}, {"strategy", a.strategy}, {"complete", res.complete}};
        if (s == Strategy::All) {
            out["normal_forms"] = json::array();
            for (const auto& [u, w] : res.forms)
                out["normal_forms"].push_back({{"term", sys.print(u)}, {"weight", q.format(w)}});
        } else {
            out["path"] = json::array();
            for (const auto& st : res.path) out["path"].push_back(step_json(sys, st));
            QValue total = q.unit();
            for (const auto& st : res.path) total = q.tensor(total, st.weight);
            Term end = res.path.empty() ? t : res.path.back().target;
            out["result"] = sys.print(end);
            out["weight"] = q.format(total);
        }
        print_json(out);
    } else if (s == Strategy::All) {
        for (const auto& [u, w] : res.forms) std::cout << q.format(w) << "\t" << sys.print(u) << "\n";
        if (!res.complete) std::cout << "(incomplete: step bound reached)\n";
    } else {
        std::cout << sys.print(t) << "\n";
        QValue total = q.unit();
        for (const auto& st : res.path) {
            total = q.tensor(total, st.weight);
            std::cout << "  " << step_text(sys, st) << "\n";
        }
        std::cout << (res.complete ? "normal form" : "stopped") << " after " << res.path.size()
                  << " steps, weight " << q.format(total) << "\n";
    }
    return res.complete ? kPass : kInconclusive;
}

// ---- distance ---------------------------------------------------------------

struct DistanceArgs {
    std::string file, s, t, mode = "directed";
    std::size_t budget = 200000, depth = 64, max_size = 0;
    std::optional<std::string> cutoff;
    bool church_rosser = false;
};

int cmd_distance(const DistanceArgs& a) {
    Loaded l = load(a.file);
    StepRelation rel = l.relation();
    Term s = term_arg(l, a.s);
    Term t = term_arg(l, a.t);
    SearchBudget budget;
    budget.max_expanded_terms = a.budget;
    budget.max_depth = a.depth;
    budget.max_term_size = a.max_size;
    if (a.cutoff) budget.weight_cutoff = l.system.quantale().parse(*a.cutoff);
    DistanceAnswer ans;
    std::string note;
    if (a.mode == "directed") {
        ans = reduction_distance(rel, s, t, budget);
    } else if (a.mode == "valley") {
        ans = valley_distance(rel, s, t, budget);
    } else {
        ConvertOptions opts;
        if (a.church_rosser) {
            auto rep = confluence_report(l.system);
            opts.church_rosser = rep.certificate != Certificate::Inconclusive;
            note = opts.church_rosser ? "valley route (" + certificate_label(rep.certificate) + ")"
                                      : "no confluence certificate; plain conversion search";
        }
        ans = convertibility_distance(rel, s, t, budget, opts);
    }
    json out = json::parse(answer_json(rel, ans));
    out["mode"] = a.mode;
    out["valid_witness"] = ans.witness.empty() ? json(nullptr) : json(validate_witness(rel, s, t, ans));
    if (!note.empty()) out["route"] = note;
    print_json(out);
    return ans.kind == AnswerKind::Exact || ans.kind == AnswerKind::Unreachable ? kPass : kInconclusive;
}

// ---- critical pairs ---------------------------------------------------------

int cmd_critical_pairs(const std::string& file, const std::vector<std::string>& grid, bool as_json) {
    Loaded l = load(file);
    RewriteSystem sys = with_grid(l.system, grid);
    auto peaks = critical_pairs(sys);
    if (as_json) {
        json out{{"system", sys.name()}, {"count", peaks.size()}, {"peaks", json::array()}};
        for (const auto& p : peaks) out["peaks"].push_back(peak_json(sys, p));
        print_json(out);
    } else {
        for (const auto& p : peaks) std::cout << peak_text(sys, p) << "\n";
        std::cout << peaks.size() << " critical peaks\n";
    }
    return kPass;
}

// ---- check ------------------------------------------------------------------

struct CheckArgs {
    std::string file, what;
    std::size_t depth = 6;
    std::size_t sn_budget = 20000;
    std::vector<std::string> seeds;
    std::vector<std::string> grid;
    bool json = false;
};

struct CheckResult {
    int code = kInconclusive;
    json evidence = json::object();
    std::vector<std::string> lines;
};

bool has_variable_lhs(const RewriteSystem& sys) {
    return std::any_of(sys.rules().begin(), sys.rules().end(), [](const Rule& r) { return r.variable_lhs(); });
}

CheckResult check_local_confluence(const RewriteSystem& sys, std::size_t depth) {
    CheckResult r;
    auto peaks = critical_pairs(sys);
    std::size_t joined = 0;
    r.evidence["peaks"] = json::array();
    for (const auto& p : peaks) {
        auto v = join_check(sys, p, depth);
        json pj = peak_json(sys, p);
        pj["joinable"] = v.joinable;
        if (v.best_valley) pj["valley"] = sys.quantale().format(*v.best_valley);
        if (v.meet) pj["meet"] = sys.print(*v.meet);
        r.evidence["peaks"].push_back(pj);
        if (v.joinable) ++joined;
        else r.lines.push_back("not joined within depth " + std::to_string(depth) + ": " + peak_text(sys, p));
    }
    bool var_lhs = has_variable_lhs(sys);
    r.evidence["joined"] = joined;
    r.evidence["total"] = peaks.size();
    r.evidence["variable_lhs"] = var_lhs;
    r.lines.push_back(std::to_string(joined) + "/" + std::to_string(peaks.size()) + " critical peaks joinable");
    if (var_lhs) r.lines.push_back("variable left-hand sides are excluded from overlap analysis");
    r.code = joined == peaks.size() && !var_lhs ? kPass : kInconclusive;
    return r;
}

CheckResult check_strong_closure(const RewriteSystem& sys, std::size_t depth) {
    CheckResult r;
    auto peaks = critical_pairs(sys);
    std::size_t closed = 0;
    r.evidence["open"] = json::array();
    for (const auto& p : peaks) {
        auto v = strongly_closed_check(sys, p, depth);
        if (v.holds) {
            ++closed;
            continue;
        }
        r.evidence["open"].push_back(peak_json(sys, p));
        r.lines.push_back("not strongly closed within depth " + std::to_string(depth) + ": " + peak_text(sys, p));
    }
    bool var_lhs = has_variable_lhs(sys);
    r.evidence["closed"] = closed;
    r.evidence["total"] = peaks.size();
    r.evidence["linear"] = sys.linear();
    r.evidence["variable_lhs"] = var_lhs;
    r.lines.push_back(std::to_string(closed) + "/" + std::to_string(peaks.size()) + " critical peaks strongly closed");
    if (!sys.linear()) r.lines.push_back("system is not linear");
    if (var_lhs) r.lines.push_back("variable left-hand sides are excluded from overlap analysis");
    r.code = closed == peaks.size() && sys.linear() && !var_lhs ? kPass : kInconclusive;
    return r;
}

CheckResult check_orthogonal(const GradedSystem& g) {
    CheckResult r;
    auto rep = orthogonality_check(g);
    const RewriteSystem& sys = g.system();
    r.evidence["left_linear"] = rep.left_linear;
    r.evidence["nonlinear_rules"] = rep.nonlinear_rules;
    r.evidence["peaks"] = json::array();
    for (const auto& p : rep.peaks) {
        r.evidence["peaks"].push_back(peak_json(sys, p));
        r.lines.push_back("overlap: " + peak_text(sys, p));
    }
    for (const auto& n : rep.nonlinear_rules) r.lines.push_back("non-left-linear rule: " + n);
    r.lines.push_back(rep.orthogonal ? "orthogonal" : "not orthogonal");
    r.code = rep.orthogonal ? kPass : kFail;
    return r;
}

CheckResult check_balanced(const GradedSystem& g) {
    CheckResult r;
    const Quantale& q = g.quantale();
    auto rep = balanced_check(g);
    r.evidence["entries"] = json::array();
    bool sampled = false;
    for (const auto& e : rep.entries) {
        json params = json::object();
        for (const auto& [k, v] : e.params) params[k] = to_string(v);
        r.evidence["entries"].push_back({{"rule", e.rule}, {"params", params}, {"variable", e.variable},
                                         {"lhs", e.lhs.str(q)}, {"rhs", e.rhs.str(q)}, {"equal", e.equal},
                                         {"sampled", e.sampled}});
        sampled = sampled || e.sampled;
        if (!e.equal) {
            std::string ps;
            for (const auto& [k, v] : e.params) ps += (ps.empty() ? " " : ",") + k + "=" + to_string(v);
            r.lines.push_back("unbalanced: " + e.rule + ps + " variable " + e.variable + ": " + e.lhs.str(q) +
                              " vs " + e.rhs.str(q));
        }
    }
    r.lines.push_back(std::to_string(rep.entries.size()) + " rule/variable grades compared; " +
                      (rep.balanced ? "balanced" : "not balanced"));
    if (sampled) r.lines.push_back("grade equality was sampled");
    r.code = !rep.balanced ? kFail : sampled ? kInconclusive : kPass;
    return r;
}

std::vector<Term> default_seeds(const RewriteSystem& sys) {
    std::vector<Term> seeds;
    for (const auto& inst : instantiate_rules(sys)) seeds.push_back(inst.rule.lhs);
    for (const auto& p : critical_pairs(sys)) seeds.push_back(p.source);
    return seeds;
}

std::string sn_name(SnVerdict v) {
    switch (v) {
    case SnVerdict::NotTerminating: return "not-terminating";
    case SnVerdict::TerminatingOnExplored: return "terminating-on-explored";
    default: return "inconclusive";
    }
}

CheckResult check_sn(const RewriteSystem& sys, const std::vector<Term>& seeds, std::size_t budget) {
    CheckResult r;
    auto probe = sn_probe(sys, seeds, budget);
    r.evidence["verdict"] = sn_name(probe.verdict);
    r.evidence["explored"] = probe.explored;
    r.evidence["seeds"] = seeds.size();
    r.evidence["cycle"] = json::array();
    for (const auto& t : probe.cycle) r.evidence["cycle"].push_back(sys.print(t));
    r.lines.push_back(sn_name(probe.verdict) + " (" + std::to_string(probe.explored) + " terms from " +
                      std::to_string(seeds.size()) + " seeds)");
    if (!probe.cycle.empty()) {
        std::string c;
        for (const auto& t : probe.cycle) c += (c.empty() ? "" : " -> ") + sys.print(t);
        r.lines.push_back("cycle: " + c);
    }
    r.code = probe.verdict == SnVerdict::TerminatingOnExplored ? kPass
             : probe.verdict == SnVerdict::NotTerminating      ? kFail
                                                               : kInconclusive;
    return r;
}

CheckResult check_confluence(const RewriteSystem& sys, const ConfluenceOptions& opts) {
    CheckResult r;
    auto rep = confluence_report(sys, opts);
    std::size_t joinable = 0, closed = 0;
    for (const auto& p : rep.peaks) {
        if (p.join && p.join->joinable) ++joinable;
        if (p.strong && p.strong->holds) ++closed;
    }
    r.evidence["certificate"] = certificate_label(rep.certificate);
    r.evidence["linear"] = rep.linear;
    r.evidence["left_linear"] = rep.left_linear;
    r.evidence["termination"] = sn_name(rep.sn.verdict);
    r.evidence["peaks"] = rep.peaks.size();
    r.evidence["joinable"] = joinable;
    r.evidence["strongly_closed"] = closed;
    r.evidence["notes"] = rep.notes;
    r.lines.push_back("certificate: " + certificate_label(rep.certificate));
    r.lines.push_back("linear: " + std::string(rep.linear ? "yes" : "no") +
                      ", termination probe: " + sn_name(rep.sn.verdict));
    r.lines.push_back(std::to_string(rep.peaks.size()) + " critical peaks, " + std::to_string(joinable) +
                      " joinable, " + std::to_string(closed) + " strongly closed");
    for (const auto& n : rep.notes) r.lines.push_back("note: " + n);
    r.code = rep.certificate == Certificate::Inconclusive ? kInconclusive : kPass;
    return r;
}

int cmd_check(const CheckArgs& a) {
    Loaded l = load(a.file);
    RewriteSystem sys = with_grid(l.system, a.grid);
    std::vector<Term> seeds;
    for (const auto& s : a.seeds) seeds.push_back(term_arg(l, s));
    CheckResult r;
    if (a.what == "local-confluence") {
        r = check_local_confluence(sys, a.depth);
    } else if (a.what == "strong-closure") {
        r = check_strong_closure(sys, a.depth);
    } else if (a.what == "orthogonal") {
        r = check_orthogonal(l.graded ? GradedSystem(sys, l.graded->grades()) : GradedSystem(sys, {}));
    } else if (a.what == "balanced") {
        r = check_balanced(l.graded ? GradedSystem(sys, l.graded->grades()) : GradedSystem(sys, {}));
    } else if (a.what == "sn-probe") {
        r = check_sn(sys, seeds.empty() ? default_seeds(sys) : seeds, a.sn_budget);
    } else {
        r = check_confluence(sys, {seeds, a.depth, a.sn_budget});
    }
    if (a.json) {
        print_json({{"check", a.what}, {"system", sys.name()}, {"verdict", verdict_name(r.code)},
                    {"evidence", r.evidence}});
    } else {
        for (const auto& line : r.lines) std::cout << line << "\n";
        std::cout << a.what << ": " << verdict_name(r.code) << "\n";
    }
    return r.code;
}

// ---- graph ------------------------------------------------------------------

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

int cmd_graph(const std::string& file, const std::string& term, std::size_t depth, std::size_t max_nodes, bool dot,
              bool as_json) {
    Loaded l = load(file);
    const RewriteSystem& sys = l.system;
    const Quantale& q = sys.quantale();
    StepRelation rel = l.relation();
    Term t = term_arg(l, term);
    StepOptions opts{subterm_pool({t})};
    std::map<Term, std::size_t> ids{{t, 0}};
    std::vector<Term> order{t};
    std::vector<std::size_t> depths{0};
    struct Edge {
        std::size_t from, to;
        RewriteStep step;
    };
    std::vector<Edge> edges;
    bool truncated = false;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (depths[i] >= depth) continue;
        Term u = order[i];
        for (auto& st : rel.forward(u, opts)) {
            auto it = ids.find(st.target);
            if (it == ids.end()) {
                if (order.size() >= max_nodes) {
                    truncated = true;
                    continue;
                }
                it = ids.emplace(st.target, order.size()).first;
                order.push_back(st.target);
                depths.push_back(depths[i] + 1);
            }
            edges.push_back({i, it->second, std::move(st)});
        }
    }
    if (dot) {
        std::cout << "digraph reductions {\n  node [shape=box];\n";
        for (std::size_t i = 0; i < order.size(); ++i)
            std::cout << "  n" << i << " [label=\"" << dot_escape(sys.print(order[i])) << "\"];\n";
        for (const auto& e : edges)
            std::cout << "  n" << e.from << " -> n" << e.to << " [label=\"" << dot_escape(q.format(e.step.weight))
                      << "\", tooltip=\"" << dot_escape(e.step.rule + "@" + position_str(e.step.position)) << "\"];\n";
        std::cout << "}\n";
    } else if (as_json) {
        json out{{"nodes", json::array()}, {"edges", json::array()}, {"truncated", truncated}};
        for (std::size_t i = 0; i < order.size(); ++i)
            out["nodes"].push_back({{"id", i}, {"term", sys.print(order[i])}, {"depth", depths[i]}});
        for (const auto& e : edges)
            out["edges"].push_back({{"from", e.from}, {"to", e.to}, {"rule", e.step.rule},
                                    {"position", e.step.position}, {"weight", q.format(e.step.weight)}});
        print_json(out);
    } else {
        for (std::size_t i = 0; i < order.size(); ++i) std::cout << i << "\t" << sys.print(order[i]) << "\n";
        for (const auto& e : edges)
            std::cout << e.from << " -> " << e.to << "\t" << e.step.rule << "@" << position_str(e.step.position)
                      << "\t" << q.format(e.step.weight) << "\n";
        if (truncated) std::cout << "(truncated at " << max_nodes << " nodes)\n";
    }
    return truncated ? kInconclusive : kPass;
}

// ---- degree -----------------------------------------------------------------

int cmd_degree(const std::string& file, const std::string& term, const std::string& var, bool as_json) {
    Loaded l = load(file);
    GradedSystem g = l.as_graded();
    const Quantale& q = g.quantale();
    Term t = term_arg(l, term);
    auto positions = variable_positions(t, var);
    Sensitivity total = degree_of_variable(g, t, var);
    if (as_json) {
        json out{{"term", g.system().print(t)}, {"variable", var}, {"degree", total.str(q)},
                 {"positions", json::array()}};
        for (const auto& p : positions)
            out["positions"].push_back({{"position", p}, {"degree", degree_at_position(g, t, p).str(q)}});
        print_json(out);
    } else {
        for (const auto& p : positions)
            std::cout << "[" << position_str(p) << "] " << degree_at_position(g, t, p).str(q) << "\n";
        std::cout << "deg_" << var << " = " << total.str(q) << "\n";
    }
    return kPass;
}

// ---- catalog ----------------------------------------------------------------

int cmd_list() {
    for (const auto& e : systems::catalog()) std::cout << e.name << "\t" << e.description << "\n";
    return kPass;
}

int cmd_export(const std::string& name) {
    if (auto g = systems::graded_by_name(name)) std::cout << dsl::emit(*g);
    else std::cout << dsl::emit(systems::by_name(name));
    return kPass;
}

int cmd_parse(const std::string& file) {
    Loaded l = load(file);
    std::cout << (l.graded ? dsl::emit(*l.graded) : dsl::emit(l.system));
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantitative term rewriting", "qrw"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");
    int code = kPass;

    RewriteArgs rw;
    auto* rewrite = app.add_subcommand("rewrite", "One-step reducts of a term, or a strategy trace with --steps");
    rewrite->add_option("file", rw.file, "System file (.qtrs) or builtin:NAME")->required();
    rewrite->add_option("term", rw.term, "Term to rewrite")->required();
    rewrite->add_option("--steps", rw.steps, "Trace up to N steps of the strategy");
    rewrite->add_option("--strategy", rw.strategy, "innermost, outermost or all")
        ->check(CLI::IsMember({"innermost", "outermost", "all"}));
    rewrite->add_flag("--json", rw.json, "JSON output");
    rewrite->callback([&] { code = cmd_rewrite(rw); });

    DistanceArgs da;
    auto* distance = app.add_subcommand("distance", "Distance between two terms as a JSON answer");
    distance->add_option("file", da.file, "System file (.qtrs) or builtin:NAME")->required();
    distance->add_option("s", da.s, "Source term")->required();
    distance->add_option("t", da.t, "Target term")->required();
    distance->add_option("--mode", da.mode, "directed, convert or valley")
        ->check(CLI::IsMember({"directed", "convert", "valley"}));
    distance->add_option("--budget", da.budget, "Maximum expanded terms");
    distance->add_option("--depth", da.depth, "Maximum derivation length");
    distance->add_option("--max-size", da.max_size, "Maximum term size (0 disables)");
    distance->add_option("--cutoff", da.cutoff, "Drop branches worse than this weight");
    distance->add_flag("--church-rosser", da.church_rosser,
                       "In convert mode, use valley search when the system is certified confluent");
    distance->add_flag("--json", "Accepted for symmetry; output is always JSON");
    distance->callback([&] { code = cmd_distance(da); });

    std::string cp_file;
    std::vector<std::string> cp_grid;
    bool cp_json = false;
    auto* cps = app.add_subcommand("critical-pairs", "List critical peaks");
    cps->add_option("file", cp_file, "System file (.qtrs) or builtin:NAME")->required();
    cps->add_option("--grid", cp_grid, "Replace the default parameter grid")->delimiter(',');
    cps->add_flag("--json", cp_json, "JSON output");
    cps->callback([&] { code = cmd_critical_pairs(cp_file, cp_grid, cp_json); });

    CheckArgs ca;
    auto* check = app.add_subcommand("check", "Run an analysis; exit 0 pass, 1 fail, 2 inconclusive");
    check->add_option("file", ca.file, "System file (.qtrs) or builtin:NAME")->required();
    check->add_option("--what", ca.what, "Analysis to run")
        ->required()
        ->check(CLI::IsMember({"local-confluence", "strong-closure", "orthogonal", "balanced", "sn-probe",
                               "confluence-report"}));
    check->add_option("--depth", ca.depth, "Depth budget for joinability searches");
    check->add_option("--sn-budget", ca.sn_budget, "Node budget for the termination probe");
    check->add_option("--seed", ca.seeds, "Seed term for the termination probe (repeatable)");
    check->add_option("--grid", ca.grid, "Replace the default parameter grid")->delimiter(',');
    check->add_flag("--json", ca.json, "JSON output");
    check->callback([&] { code = cmd_check(ca); });

    std::string g_file, g_term;
    std::size_t g_depth = 3, g_nodes = 500;
    bool g_dot = false, g_json = false;
    auto* graph = app.add_subcommand("graph", "Reduction graph up to a depth");
    graph->add_option("file", g_file, "System file (.qtrs) or builtin:NAME")->required();
    graph->add_option("term", g_term, "Start term")->required();
    graph->add_option("--depth", g_depth, "Maximum depth");
    graph->add_option("--max-nodes", g_nodes, "Node cap");
    graph->add_flag("--dot", g_dot, "Graphviz DOT output");
    graph->add_flag("--json", g_json, "JSON output");
    graph->callback([&] { code = cmd_graph(g_file, g_term, g_depth, g_nodes, g_dot, g_json); });

    std::string d_file, d_term, d_var;
    bool d_json = false;
    auto* degree = app.add_subcommand("degree", "Sensitivity of a term in a variable");
    degree->add_option("file", d_file, "System file (.qtrs) or builtin:NAME")->required();
    degree->add_option("term", d_term, "Term")->required();
    degree->add_option("var", d_var, "Variable")->required();
    degree->add_flag("--json", d_json, "JSON output");
    degree->callback([&] { code = cmd_degree(d_file, d_term, d_var, d_json); });

    app.add_subcommand("list", "List built-in systems")->callback([&] { code = cmd_list(); });
    std::string e_name;
    auto* exp = app.add_subcommand("export", "Print a built-in system in the DSL");
    exp->add_option("name", e_name, "Built-in system name")->required();
    exp->callback([&] { code = cmd_export(e_name); });
    std::string p_file;
    auto* parse = app.add_subcommand("parse", "Parse a system file and print its normalised form");
    parse->add_option("file", p_file, "System file (.qtrs) or builtin:NAME")->required();
    parse->callback([&] { code = cmd_parse(p_file); });

    if (argc > 1 && argv[1][0] != '-') {
        auto subs = app.get_subcommands([](const CLI::App*) { return true; });
        bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == argv[1]; });
        if (!known) {
            std::cerr << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
            return kUsage;
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const dsl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return code;
}
