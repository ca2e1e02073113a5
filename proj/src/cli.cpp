#include <websmith/cli.hpp>

#include <websmith/catalog.hpp>
#include <websmith/criterion.hpp>
#include <websmith/leaves.hpp>
#include <websmith/rank.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace websmith::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw StructuralError("bad number '" + s + "' in " + what);
    }
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const std::string& t : split(s)) out.push_back(parse_double(t, what));
    return out;
}

std::string fmt(double v, const char* spec = "%.3e") {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw StructuralError("cannot write '" + path + "'");
    f << text;
}

// JSON to stdout for --format json, and to --out when given.
void emit_json(const json& j, const RunConfig& c, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (c.format == "json") out << text;
    if (!c.out.empty()) write_file(c.out, text);
}

struct Loaded {
    Web web;
    std::optional<NamedWeb> named;
};

Loaded load_web(const RunConfig& c) {
    if (c.web.empty()) throw StructuralError("--web is required");
    const bool is_file = c.web.ends_with(".json") || std::filesystem::is_regular_file(c.web);
    if (is_file) {
        std::ifstream f(c.web);
        if (!f) throw StructuralError("cannot read '" + c.web + "'");
        json j;
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw StructuralError("invalid JSON in '" + c.web + "': " + e.what());
        }
        Web w = web_from_json(j);
        if (c.base) w = w.at(*c.base);
        return {w, std::nullopt};
    }
    NamedWeb nw = make_named_web(c.web, {c.k, c.tau, c.base});
    Web w = nw.web;
    return {w, std::move(nw)};
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

int cmd_rank(const RunConfig& c, std::ostream& out) {
    const Loaded l = load_web(c);
    RankOptions opt;
    opt.degrees = c.degrees;
    opt.svd_gap = c.svd_gap;
    const RankReport r = rank_estimate(l.web, opt);

    json j = to_json(r);
    j["web"] = l.named ? l.named->id : l.web.name();
    emit_json(j, c, out);

    if (c.format == "csv") {
        out << "degree,kernel_dim,gap_ratio\n";
        for (std::size_t i = 0; i < r.degrees.size(); ++i)
            out << r.degrees[i] << ',' << r.kernel_dims[i] << ',' << fmt(r.gap_ratios[i], "%.6e") << '\n';
    } else if (c.format == "table") {
        out << "web: " << j["web"].get<std::string>() << '\n';
        out << "rank " << r.rank << " of bound " << r.bol_bound << " (d=" << r.foliations << ")\n";
        out << "degrees:";
        for (const int d : r.degrees) out << ' ' << d;
        out << "\nkernel dims:";
        for (const int d : r.kernel_dims) out << ' ' << d;
        out << "\ngap ratios:";
        for (const double g : r.gap_ratios) out << ' ' << fmt(g, "%.2e");
        out << "\nstabilized: " << (r.stabilized ? "yes" : "no") << '\n';
        if (r.bound_exceeded) out << "warning: kernel dimension exceeded the Bol bound\n";
        out << "singular-value tail:";
        for (const auto& s : j["singular_value_tail"]) out << ' ' << fmt(s.get<double>(), "%.2e");
        out << '\n';
    }
    return r.stabilized ? kOk : kUnstable;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int cmd_classify(const RunConfig& c, std::ostream& out) {
    if (c.vx.empty() || c.wx.empty()) throw StructuralError("classify needs --vx and --wx");
    const Univariate v = Univariate::parse(c.vx), w = Univariate::parse(c.wx);
    const WebClass cls = classify(slope_of(v), slope_of(w), default_line_samples());

    json j = to_json(cls);
    j["vx"] = c.vx;
    j["wx"] = c.wx;
    emit_json(j, c, out);
    if (c.format != "json") {
        out << "label: " << label_name(cls.label) << '\n';
        out << "case: " << cls.case_id << '\n';
        if (cls.modulus) out << "modulus: " << format_complex(*cls.modulus) << '\n';
        if (cls.sign) out << "sign: " << *cls.sign << '\n';
        auto fit = [&](const char* name, const std::optional<QuarticFit>& f) {
            if (!f) return;
            out << name << ": p=" << format_complex(f->p) << " q=" << format_complex(f->q) << " r=" << format_complex(f->r)
                << " residual=" << fmt(f->residual, "%.2e") << '\n';
        };
        fit("fit vx", cls.fit_v);
        fit("fit wx", cls.fit_w);
        if (!cls.note.empty()) out << "note: " << cls.note << '\n';
    }
    return cls.label == WebLabel::Indeterminate ? kIndeterminate : kOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

constexpr double kRelationTolerance = 1e-9;

int cmd_verify(const RunConfig& c, std::ostream& out) {
    IdentityOptions opt;
    opt.seed = sample_seed();
    opt.only = c.only;
    if (c.k) {
        if (std::abs(c.k->imag()) > 0.0) throw StructuralError("verify --k must be real");
        opt.moduli = {c.k->real()};
    }
    const ThetaFunction th = c.perturb ? perturbed_theta(*c.perturb) : ThetaFunction(theta);
    const auto ids = identity_suite(th, opt);

    bool ok = true;
    json j;
    j["identities"] = json::array();
    for (const IdentityResult& r : ids) {
        ok = ok && r.passed();
        j["identities"].push_back(
            {{"name", r.name}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"samples", r.samples}, {"passed", r.passed()}});
    }

    struct Row {
        std::string web, name;
        double residual;
    };
    std::vector<Row> rows;
    std::vector<IdentityResult> limits;
    if (!c.only) {
        std::vector<NamedWeb> webs;
        if (!c.web.empty()) {
            const Loaded l = load_web(c);
            if (!l.named) throw StructuralError("verify --web needs a catalog id");
            webs.push_back(*l.named);
        } else {
            for (const std::string& id : catalog_ids()) webs.push_back(make_named_web(id, {c.k, c.tau, std::nullopt}));
        }
        j["relations"] = json::array();
        for (const NamedWeb& nw : webs)
            for (const RelationResidual& r : verify_relations(nw, validation_samples(nw))) {
                rows.push_back({nw.id, r.name, r.residual});
                ok = ok && r.residual < kRelationTolerance;
                j["relations"].push_back({{"web", nw.id},
                                          {"name", r.name},
                                          {"form", form_name(r.form)},
                                          {"residual", r.residual},
                                          {"tolerance", kRelationTolerance}});
            }

        const LimitReport lr = family_limit_checks();
        limits = {{"limit-sn-sin", lr.sn_to_sin, 1e-6, 41},
                  {"limit-sn-tanh", lr.sn_to_tanh, 1e-4, 41},
                  {"limit-exp-order", std::abs(lr.exponential_order - 2.0), 0.05, static_cast<int>(lr.exponential.size())},
                  {"limit-eps-order", std::abs(lr.epsilon_order - 2.0), 0.05, static_cast<int>(lr.epsilon_plus.size())}};
        j["limits"] = json::array();
        for (const IdentityResult& r : limits) {
            ok = ok && r.passed();
            j["limits"].push_back({{"name", r.name}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"passed", r.passed()}});
        }
        j["limits_observed"] = {{"exponential_order", lr.exponential_order}, {"epsilon_order", lr.epsilon_order}};
    }
    j["passed"] = ok;
    emit_json(j, c, out);

    if (c.format != "json") {
        auto line = [&](const std::string& name, double res, double tol) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%-34s %10.2e %10.0e  %s\n", name.c_str(), res, tol, res < tol ? "PASS" : "FAIL");
            out << buf;
        };
        for (const IdentityResult& r : ids) line(r.name, r.residual, r.tolerance);
        for (const Row& r : rows) line(r.web + ":" + r.name, r.residual, kRelationTolerance);
        for (const IdentityResult& r : limits) line(r.name, r.residual, r.tolerance);
        out << (ok ? "all residuals within tolerance\n" : "residual above tolerance\n");
    }
    return ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

int cmd_catalog(const RunConfig& c, std::ostream& out) {
    if (!c.web.empty()) {
        const Loaded l = load_web(c);
        if (!l.named) throw StructuralError("catalog --web needs a catalog id");
        const json j = to_json(*l.named);
        if (c.out.empty() || c.format == "json") out << j.dump(2) << '\n';
        if (!c.out.empty()) write_file(c.out, j.dump(2) + "\n");
        return kOk;
    }
    json j = json::array();
    for (const std::string& id : catalog_ids()) j.push_back({{"id", id}, {"description", catalog_description(id)}});
    emit_json(j, c, out);
    if (c.format != "json")
        for (const std::string& id : catalog_ids()) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%-14s", id.c_str());
            out << buf << catalog_description(id) << '\n';
        }
    return kOk;
}

// ---------------------------------------------------------------------------
// leaves
// ---------------------------------------------------------------------------

int cmd_leaves(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Loaded l = load_web(c);
    const Web& web = l.web;
    const Point base = web.base();
    LeafOptions opt;
    opt.max_step = c.step;
    if (c.box) {
        const auto& b = *c.box;
        opt.box = {b[0], b[1], b[2], b[3]};
    } else {
        opt.box = {base.x.real() - 0.5, base.x.real() + 0.5, base.y.real() - 0.5, base.y.real() + 0.5};
    }

    std::vector<int> which;
    if (c.foliation) {
        if (*c.foliation < 0 || *c.foliation >= web.size()) throw StructuralError("--foliation out of range");
        which.push_back(*c.foliation);
    } else {
        for (int i = 0; i < web.size(); ++i) which.push_back(i);
    }

    std::vector<Leaf> leaves;
    for (const int i : which) {
        const Foliation& f = web.foliations()[static_cast<std::size_t>(i)];
        std::vector<double> levels = c.levels;
        if (levels.empty()) {
            // Five leaves through points on the box diagonal.
            const double hx = 0.5 * (opt.box.xmax - opt.box.xmin), hy = 0.5 * (opt.box.ymax - opt.box.ymin);
            const double cx = opt.box.xmin + hx, cy = opt.box.ymin + hy;
            for (const double t : {-0.6, -0.3, 0.0, 0.3, 0.6}) levels.push_back(f.value({cx + t * hx, cy + t * hy}).real());
        }
        for (const double level : levels) {
            Leaf leaf = trace_leaf(f, level, opt);
            leaf.foliation = i;
            if (leaf.truncated)
                err << "leaf foliation=" << i << " level=" << fmt(level, "%.6g") << " truncated (" << leaf.reason << ")\n";
            leaves.push_back(std::move(leaf));
        }
    }

    if (c.format == "json") {
        json j = json::array();
        for (const Leaf& leaf : leaves) {
            json pts = json::array();
            for (const auto& p : leaf.points) pts.push_back({p[0], p[1]});
            j.push_back({{"foliation", leaf.foliation},
                         {"name", leaf.name},
                         {"level", leaf.level},
                         {"truncated", leaf.truncated},
                         {"end", leaf.reason},
                         {"points", pts}});
        }
        out << j.dump(2) << '\n';
        if (!c.out.empty()) write_file(c.out, j.dump(2) + "\n");
        return kOk;
    }
    std::ostringstream csv;
    csv << "foliation,level,x,y\n";
    for (const Leaf& leaf : leaves)
        for (const auto& p : leaf.points) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", leaf.foliation, leaf.level, p[0], p[1]);
            csv << buf;
        }
    if (c.out.empty())
        out << csv.str();
    else
        write_file(c.out, csv.str());
    return kOk;
}

}  // namespace

void validate(const RunConfig& c) {
    if (!(c.svd_gap > 0.0)) throw StructuralError("--svd-gap must be positive");
    if (!(c.step > 0.0)) throw StructuralError("--step must be positive");
    if (c.degrees.empty()) throw StructuralError("--degrees is empty");
    for (std::size_t i = 0; i < c.degrees.size(); ++i) {
        if (c.degrees[i] < 1) throw StructuralError("--degrees must be positive");
        if (i > 0 && c.degrees[i] <= c.degrees[i - 1]) throw StructuralError("--degrees must be ascending");
    }
    if (c.perturb && !std::isfinite(*c.perturb)) throw StructuralError("--perturb must be finite");
    if (c.box && (c.box->size() != 4 || (*c.box)[0] >= (*c.box)[1] || (*c.box)[2] >= (*c.box)[3]))
        throw StructuralError("--box needs xmin,xmax,ymin,ymax with min < max");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"websmith"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rank, classification and identity checks for planar webs"};
    app.require_subcommand(1);
    RunConfig c;
    std::string k, tau, base, degrees, levels, box;
    std::optional<double> perturb;
    std::optional<std::string> only;
    std::optional<int> foliation;

    auto web_opts = [&](CLI::App* s) {
        s->add_option("--web", c.web, "Catalog id or web JSON file");
        s->add_option("--k", k, "Elliptic modulus (complex allowed, e.g. 0.5 or 0.3+0.2i)");
        s->add_option("--tau", tau, "Elliptic parameter tau (Family)");
        s->add_option("--base", base, "Base point x,y");
    };
    auto out_opts = [&](CLI::App* s) {
        s->add_option("--out", c.out, "Write output to this file");
        s->add_option("--format", c.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
    };

    CLI::App* rank = app.add_subcommand("rank", "Estimate the rank of a web");
    web_opts(rank);
    out_opts(rank);
    rank->add_option("--degrees", degrees, "Ascending polynomial degrees, e.g. 6,10,14");
    rank->add_option("--svd-gap", c.svd_gap, "Relative singular-value threshold");

    CLI::App* cls = app.add_subcommand("classify", "Classify T[u] for u = v(x) + w(y) from the slopes v_x, w_y");
    out_opts(cls);
    cls->add_option("--vx", c.vx, "Slope v_x, e.g. sn:0.6, poly:3x^2, exp")->required();
    cls->add_option("--wx,--wy", c.wx, "Slope w_y")->required();

    CLI::App* ver = app.add_subcommand("verify", "Check the identity suite and catalog relations");
    web_opts(ver);
    out_opts(ver);
    ver->add_option("--perturb", perturb, "Scale theta_3 by 1 + eps (sensitivity check)");
    ver->add_option("--only", only, "Run a single identity");

    CLI::App* cat = app.add_subcommand("catalog", "List named webs or export one as JSON");
    web_opts(cat);
    out_opts(cat);

    CLI::App* lv = app.add_subcommand("leaves", "Trace leaves as CSV (foliation, level, x, y)");
    web_opts(lv);
    out_opts(lv);
    lv->add_option("--levels", levels, "Comma-separated levels (default: five per foliation)");
    lv->add_option("--box", box, "xmin,xmax,ymin,ymax (default: base +- 0.5)");
    lv->add_option("--step", c.step, "Maximum arc-length step");
    lv->add_option("--foliation", foliation, "Only this foliation index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    try {
        if (!k.empty()) c.k = parse_complex(k);
        if (!tau.empty()) c.tau = parse_complex(tau);
        if (!base.empty()) {
            const auto parts = split(base);
            if (parts.size() != 2) throw StructuralError("--base needs x,y");
            c.base = Point{parse_complex(parts[0]), parse_complex(parts[1])};
        }
        if (!degrees.empty()) {
            c.degrees.clear();
            for (const std::string& d : split(degrees)) c.degrees.push_back(static_cast<int>(parse_double(d, "--degrees")));
        }
        if (!levels.empty()) c.levels = parse_doubles(levels, "--levels");
        if (!box.empty()) c.box = parse_doubles(box, "--box");
        c.perturb = perturb;
        c.only = only;
        c.foliation = foliation;
        c.command = app.get_subcommands().front()->get_name();
        validate(c);

        if (c.command == "rank") return cmd_rank(c, out);
        if (c.command == "classify") return cmd_classify(c, out);
        if (c.command == "verify") return cmd_verify(c, out);
        if (c.command == "catalog") return cmd_catalog(c, out);
        if (c.command == "leaves") return cmd_leaves(c, out, err);
        throw StructuralError("unknown command");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
}

}  // namespace websmith::cli
