#include "gint/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gint/corpus.hpp"
#include "gint/fubini.hpp"

namespace gint {

using nlohmann::json;

void RunConfig::check() const {
    if (tol && !(*tol > 0.0)) throw std::invalid_argument("--tol must be > 0");
    if (tol_inner && !(*tol_inner > 0.0)) throw std::invalid_argument("--tol-inner must be > 0");
    if (max_depth && (*max_depth < 1 || *max_depth > 60)) throw std::invalid_argument("--max-depth must lie in [1, 60]");
    if (threads && *threads < 1) throw std::invalid_argument("--threads must be >= 1");
    if (depth_p < 0 || depth_p > 24) throw std::invalid_argument("--depth-p must lie in [0, 24]");
    if (depth_q && (*depth_q < 0 || *depth_q > 24)) throw std::invalid_argument("--depth-q must lie in [0, 24]");
    if (dim && *dim != 1 && *dim != 2) throw std::invalid_argument("--dim must be 1 or 2");
}

void apply_config_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "fn") c.fn = v.get<std::string>();
        else if (key == "mode") c.mode = parse_discipline(v.get<std::string>());
        else if (key == "tol") c.tol = v.get<double>();
        else if (key == "tol_inner") c.tol_inner = v.get<double>();
        else if (key == "max_depth") c.max_depth = v.get<int>();
        else if (key == "tags") c.tags = v.get<std::string>();
        else if (key == "norm") c.norm = parse_norm(v.get<std::string>());
        else if (key == "out") c.out = parse_output_format(v.get<std::string>());
        else if (key == "dump_partition") c.dump_partition = v.get<std::string>();
        else if (key == "output") c.output = v.get<std::string>();
        else if (key == "threads") c.threads = v.get<int>();
        else if (key == "depth_p") c.depth_p = v.get<int>();
        else if (key == "depth_q") c.depth_q = v.get<int>();
        else if (key == "tags_q") c.tags_q = v.get<std::string>();
        else if (key == "set") c.set = v.get<std::string>();
        else if (key == "dim") c.dim = v.get<int>();
        else if (key == "json") c.list_json = v.get<bool>();
        else if (key == "class") c.cls = v.get<std::string>();
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

namespace {

/// Raw flag values; only the ones given on the command line override the config.
struct Flags {
    std::optional<std::string> fn, mode, tags, norm, out, dump, output, tags_q, set, cls, config;
    std::optional<double> tol, tol_inner;
    std::optional<int> max_depth, threads, depth_p, depth_q, dim;
    bool list_json = false;
};

void overlay(RunConfig& c, const Flags& f) {
    if (f.fn) c.fn = *f.fn;
    if (f.mode) c.mode = parse_discipline(*f.mode);
    if (f.tol) c.tol = f.tol;
    if (f.tol_inner) c.tol_inner = f.tol_inner;
    if (f.max_depth) c.max_depth = f.max_depth;
    if (f.tags) c.tags = f.tags;
    if (f.norm) c.norm = parse_norm(*f.norm);
    if (f.out) c.out = parse_output_format(*f.out);
    if (f.dump) c.dump_partition = f.dump;
    if (f.output) c.output = f.output;
    if (f.threads) c.threads = f.threads;
    if (f.depth_p) c.depth_p = *f.depth_p;
    if (f.depth_q) c.depth_q = f.depth_q;
    if (f.tags_q) c.tags_q = f.tags_q;
    if (f.set) c.set = f.set;
    if (f.dim) c.dim = f.dim;
    if (f.list_json) c.list_json = true;
    if (f.cls) c.cls = f.cls;
}

int default_threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

const CorpusFunction& need_fn(const RunConfig& c) {
    if (c.fn.empty()) throw std::invalid_argument("--fn is required");
    return lookup(c.fn);
}

TagStrategy tags_for(const std::optional<std::string>& name, const NullSet& z, const TagStrategy& fallback) {
    return name ? parse_tag_strategy(*name, z) : fallback;
}

void dump(const RunConfig& c, const TaggedPartition& p) {
    std::ofstream f(*c.dump_partition);
    if (!f) throw std::runtime_error("cannot open " + *c.dump_partition);
    write_jsonl(f, p);
}

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::string sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << x;
    return os.str();
}

/// Growth of the variation sums over the last four depths, when it signals divergence.
std::optional<std::string> variation_diagnostic(const IntegralResult& r) {
    std::vector<double> v;
    for (const auto& row : r.trace)
        if (row.variation) v.push_back(*row.variation);
    if (v.size() < 5 || !(v[v.size() - 5] > 0.0)) return std::nullopt;
    const double ratio = v.back() / v[v.size() - 5];
    if (ratio < 1.05) return std::nullopt;
    std::ostringstream os;
    os << "variation sums grew by a factor " << std::setprecision(4) << ratio
       << " over the last 4 depths: the norm of f does not look integrable";
    return os.str();
}

int cmd_integrate(const RunConfig& c, std::ostream& os) {
    const CorpusFunction& fn = need_fn(c);
    IntegrateOptions o = default_options(fn);
    if (c.mode) o.discipline = *c.mode;
    if (c.tol) o.tol = *c.tol;
    if (c.max_depth) o.max_depth = *c.max_depth;
    if (c.norm) o.norm = *c.norm;
    o.tags = tags_for(c.tags, fn.null_set(), fn.tags);
    if (c.mode == Discipline::hk && !c.tags) o.tags = TagStrategy::center();
    o.threads = c.threads.value_or(default_threads());
    o.record_variation = true;

    const IntegralResult r = integrate(fn.f, fn.domain, o);
    if (c.dump_partition) dump(c, stage_partition(fn.domain, o, r.depth));

    const auto diag = variation_diagnostic(r);
    std::optional<double> err;
    if (fn.exact) err = distance(r.value, *fn.exact, o.norm);
    switch (c.out) {
        case OutputFormat::json: {
            json j{{"command", "integrate"},
                   {"fn", fn.id},
                   {"result", to_json(r)},
                   {"exact", fn.exact ? to_json(*fn.exact) : json(nullptr)},
                   {"error", opt_json(err)},
                   {"diagnostics", diag ? json::array({*diag}) : json::array()}};
            os << j.dump(2) << '\n';
            break;
        }
        case OutputFormat::csv: write_csv(os, r); break;
        case OutputFormat::table:
            os << "fn          " << fn.id << '\n';
            write_table(os, r);
            if (err) os << "error       " << sci(*err) << " against " << fn.exact_expr << '\n';
            if (diag) os << "diagnostic  " << *diag << '\n';
            break;
    }
    return r.converged ? 0 : 2;
}

int cmd_fubini(const RunConfig& c, std::ostream& os) {
    const CorpusFunction& fn = need_fn(c);
    if (fn.dim != 2) throw std::invalid_argument("fubini needs a 2D corpus entry; '" + fn.id + "' is 1D");
    FubiniOptions o = default_fubini_options(fn);
    if (c.mode) o.discipline = *c.mode;
    if (c.tol) o.tol_outer = *c.tol;
    if (c.tol_inner) o.tol_inner = c.tol_inner;
    if (c.max_depth) o.max_depth = *c.max_depth;
    if (c.norm) o.norm = *c.norm;
    o.tags = tags_for(c.tags, fn.null_set(), fn.tags);
    if (c.mode == Discipline::hk && !c.tags) o.tags = TagStrategy::center();
    o.threads = c.threads.value_or(default_threads());

    const FubiniReport rep = fubini_compare(fn.f, fn.domain, fn.z1, fn.z2, o);
    if (c.dump_partition) {
        IntegrateOptions d;
        d.discipline = o.discipline;
        d.tags = o.tags;
        d.max_depth = o.max_depth;
        d.singular = o.singular;
        dump(c, stage_partition(fn.domain, d, rep.double_integral.depth));
    }
    switch (c.out) {
        case OutputFormat::json:
            os << json{{"command", "fubini"}, {"fn", fn.id}, {"report", to_json(rep)}}.dump(2) << '\n';
            break;
        case OutputFormat::csv: write_csv(os, rep); break;
        case OutputFormat::table:
            os << "fn          " << fn.id << '\n';
            write_table(os, rep);
            break;
    }
    return rep.within_bound() ? 0 : 2;
}

int cmd_sstar(const RunConfig& c, std::ostream& os) {
    const CorpusFunction& fn = need_fn(c);
    const int dq = c.depth_q.value_or(c.depth_p + 1);
    IntegrateOptions o;
    o.discipline = c.mode.value_or(Discipline::mcshane);
    o.scheme = uniform_scheme(fn.domain);
    o.tags = tags_for(c.tags, fn.null_set(), TagStrategy::center());
    const TaggedPartition p = stage_partition(fn.domain, o, c.depth_p);
    o.tags = tags_for(c.tags_q, fn.null_set(), o.tags);
    const TaggedPartition q = stage_partition(fn.domain, o, dq);
    const Norm norm = c.norm.value_or(Norm::euclid);

    const double sum = sstar_double_sum(fn.f, p, q, norm);
    std::optional<double> lip, bound;
    if (fn.lipschitz) {
        lip = fn.lipschitz_for(norm);
        bound = *lip * (p.mesh() + q.mesh()) * fn.domain.measure();
    }
    if (c.dump_partition) dump(c, p);

    const std::string tp = c.tags.value_or("center"), tq = c.tags_q.value_or(tp);
    switch (c.out) {
        case OutputFormat::json:
            os << json{{"command", "sstar"},
                       {"fn", fn.id},
                       {"depth_p", c.depth_p},
                       {"depth_q", dq},
                       {"tags_p", tp},
                       {"tags_q", tq},
                       {"cells_p", p.size()},
                       {"cells_q", q.size()},
                       {"mesh_p", p.mesh()},
                       {"mesh_q", q.mesh()},
                       {"sum", sum},
                       {"lipschitz", opt_json(lip)},
                       {"mesh_bound", opt_json(bound)},
                       {"within_bound", bound ? json(sum <= *bound) : json(nullptr)}}
                      .dump(2)
               << '\n';
            break;
        case OutputFormat::csv:
            os << "depth_p,depth_q,cells_p,cells_q,mesh_p,mesh_q,sum,mesh_bound\n"
               << c.depth_p << ',' << dq << ',' << p.size() << ',' << q.size() << ',' << format_double(p.mesh())
               << ',' << format_double(q.mesh()) << ',' << format_double(sum) << ','
               << (bound ? format_double(*bound) : "") << '\n';
            break;
        case OutputFormat::table:
            os << "fn          " << fn.id << '\n'
               << "P           depth " << c.depth_p << ", " << p.size() << " cells, mesh " << sci(p.mesh())
               << ", tags " << tp << '\n'
               << "Q           depth " << dq << ", " << q.size() << " cells, mesh " << sci(q.mesh()) << ", tags "
               << tq << '\n'
               << "S* sum      " << format_double(sum) << '\n';
            if (bound) os << "mesh bound  " << format_double(*bound) << " (L = " << format_double(*lip) << ")\n";
            break;
    }
    return 0;
}

int cmd_nullset(const RunConfig& c, std::ostream& os) {
    const CorpusFunction* fn = c.fn.empty() ? nullptr : &lookup(c.fn);
    if (!fn && !c.set) throw std::invalid_argument("nullset needs --set or --fn");
    const int dim = fn ? fn->dim : c.dim.value_or(1);
    if (fn && c.dim && *c.dim != dim) throw std::invalid_argument("--dim disagrees with the entry's dimension");
    const NullSet z = c.set ? NullSet::parse(*c.set, dim) : fn->null_set();
    const Box domain = fn ? fn->domain : (dim == 1 ? Box(Interval1(0.0, 1.0)) : Box(Interval1(0.0, 1.0), Interval1(0.0, 1.0)));

    IntegrateOptions o;
    o.discipline = c.mode.value_or(fn ? fn->discipline : Discipline::mcshane);
    o.tags = tags_for(c.tags, z, fn && !c.set && o.discipline == Discipline::mcshane ? fn->tags : TagStrategy::center());
    o.tol = c.tol.value_or(1e-6);
    o.max_depth = c.max_depth.value_or(dim == 1 ? 16 : 10);
    const int min_depth = std::max(0, o.max_depth - o.window + 1);

    const IntegralResult r = nullset_integral_check(z, domain, o.discipline, o.tags, o.tol, o.max_depth, min_depth);
    if (c.dump_partition) dump(c, stage_partition(domain, o, r.depth));
    const double est = r.value.norm(Norm::max);
    const bool ok = est <= o.tol;
    switch (c.out) {
        case OutputFormat::json:
            os << json{{"command", "nullset"},
                       {"set", z.to_json()},
                       {"describe", z.describe()},
                       {"tags", o.tags.name()},
                       {"estimate", est},
                       {"tol", o.tol},
                       {"within_tol", ok},
                       {"result", to_json(r)}}
                      .dump(2)
               << '\n';
            break;
        case OutputFormat::csv: write_csv(os, r); break;
        case OutputFormat::table:
            os << "set         " << z.describe() << "\ntags        " << o.tags.name() << '\n';
            write_table(os, r);
            os << "estimate    " << format_double(est) << (ok ? " <= " : " > ") << "tol " << sci(o.tol) << '\n';
            break;
    }
    return ok ? 0 : 2;
}

int cmd_corpus(const RunConfig& c, std::ostream& os) {
    CorpusFilter filter;
    filter.dim = c.dim;
    if (c.cls) filter.cls = parse_fn_class(*c.cls);
    if (c.list_json || c.out == OutputFormat::json) {
        os << registry_json(filter).dump(2) << '\n';
        return 0;
    }
    if (c.out == OutputFormat::csv) os << "id,dim,codim,class,exact\n";
    for (const auto& id : list(filter)) {
        const CorpusFunction& fn = lookup(id);
        std::string exact = "-";
        if (fn.exact) {
            exact.clear();
            for (int i = 0; i < fn.exact->dim(); ++i) exact += (i ? " " : "") + format_double((*fn.exact)[i]);
        }
        if (c.out == OutputFormat::csv)
            os << fn.id << ',' << fn.dim << ',' << fn.codim << ',' << to_string(fn.cls) << ',' << exact << '\n';
        else
            os << std::left << std::setw(14) << fn.id << " dim " << fn.dim << "  codim " << fn.codim << "  "
               << std::setw(15) << to_string(fn.cls) << ' ' << exact << std::right << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gauge integration of vector-valued functions on 1D and 2D intervals", "gint"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&f](CLI::App* s) {
        s->add_option("--fn", f.fn, "corpus function id");
        s->add_option("--mode", f.mode, "mcshane|hk");
        s->add_option("--tol", f.tol, "tolerance (outer tolerance for fubini)");
        s->add_option("--max-depth", f.max_depth, "depth budget in [1, 60]");
        s->add_option("--tags", f.tags, "center|null-avoiding|corner|null-seeking");
        s->add_option("--norm", f.norm, "euclid|max|sum");
        s->add_option("--out", f.out, "json|csv|table");
        s->add_option("--dump-partition", f.dump, "write the final partition as JSON lines to this file");
        s->add_option("-o,--output", f.output, "write the report to this file");
        s->add_option("--threads", f.threads, "worker threads (default: available parallelism)");
        s->add_option("--config", f.config, "JSON config file; flags take precedence");
    };
    CLI::App* integ = app.add_subcommand("integrate", "integrate a corpus function");
    common(integ);
    CLI::App* fub = app.add_subcommand("fubini", "compare the double integral with both iterated integrals");
    common(fub);
    fub->add_option("--tol-inner", f.tol_inner, "inner tolerance (default tol / 10)");
    CLI::App* ss = app.add_subcommand("sstar", "S* double sum over two uniform partitions");
    common(ss);
    ss->add_option("--depth-p", f.depth_p, "depth of P (default 6)");
    ss->add_option("--depth-q", f.depth_q, "depth of Q (default depth-p + 1)");
    ss->add_option("--tags-q", f.tags_q, "tag strategy for Q (default: that of P)");
    CLI::App* ns = app.add_subcommand("nullset", "integrate the indicator of a null set");
    common(ns);
    ns->add_option("--set", f.set, "empty|rationals|points:a,b|vlines:a,b|hlines:a,b|grid:xs;ys");
    ns->add_option("--dim", f.dim, "dimension for --set without --fn (default 1)");
    CLI::App* corp = app.add_subcommand("corpus", "corpus registry");
    corp->require_subcommand(1);
    CLI::App* lst = corp->add_subcommand("list", "list corpus entries");
    lst->add_flag("--json", f.list_json, "JSON metadata");
    lst->add_option("--dim", f.dim, "only entries of this dimension");
    lst->add_option("--class", f.cls, "bochner|hk_only|null_perturbed");
    lst->add_option("--out", f.out, "json|csv|table");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        RunConfig c;
        c.out = corp->parsed() ? OutputFormat::table : OutputFormat::json;
        c.command = app.get_subcommands().front()->get_name();
        if (f.config) {
            std::ifstream in(*f.config);
            if (!in) throw std::runtime_error("cannot open config file " + *f.config);
            apply_config_json(c, json::parse(in));
        }
        overlay(c, f);
        c.check();

        std::ofstream file;
        if (c.output) {
            file.open(*c.output);
            if (!file) throw std::runtime_error("cannot open " + *c.output);
        }
        std::ostream& os = c.output ? static_cast<std::ostream&>(file) : out;
        if (c.command == "integrate") return cmd_integrate(c, os);
        if (c.command == "fubini") return cmd_fubini(c, os);
        if (c.command == "sstar") return cmd_sstar(c, os);
        if (c.command == "nullset") return cmd_nullset(c, os);
        return cmd_corpus(c, os);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace gint
