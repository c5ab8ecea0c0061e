#include "gint/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "bucket_index.hpp"
#include "gint/reduce.hpp"

namespace gint {

namespace {

std::string point_text(const Point& t) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << t[0];
    if (t.dim == 2) os << ", " << t[1];
    os << ")";
    return os.str();
}

}  // namespace

EvaluationError::EvaluationError(const Point& t, const std::string& what)
    : std::runtime_error("evaluation failed at " + point_text(t) + ": " + what), where_(t) {}

Vec Integrand::operator()(const Point& t) const {
    Vec v;
    try {
        v = eval(t);
    } catch (const EvaluationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EvaluationError(t, e.what());
    }
    if (v.dim() != codim) throw EvaluationError(t, "value has the wrong dimension");
    for (int i = 0; i < v.dim(); ++i)
        if (!std::isfinite(v[i])) throw EvaluationError(t, "non-finite value");
    return v;
}

Vec AdditiveIntervalFn::operator()(const Box& cell) const {
    if (!domain.contains(cell)) throw std::invalid_argument("interval function evaluated outside its domain");
    return eval(cell);
}

namespace {

struct Acc {
    Vec est;
    double var = 0.0;
    double sg = 0.0;
};

Acc operator+(const Acc& a, const Acc& b) { return {a.est + b.est, a.var + b.var, a.sg + b.sg}; }

struct Item {
    Point tag;
    Box cell;
};

// Item buffers keep their capacity across the many short integrals of an
// iterated run instead of going back to the allocator.
std::vector<std::vector<Item>>& spare_buffers() {
    thread_local std::vector<std::vector<Item>> spare;
    return spare;
}

/// Streams (tag, cell) pairs into blocks of 2^12 that are summed independently,
/// possibly on several threads, and merged in item order.
class Accumulator {
public:
    static constexpr int kLevel = 12;
    static constexpr std::size_t kBlock = std::size_t{1} << kLevel;

    Accumulator(const Integrand& f, Norm norm, bool want_var, const AdditiveIntervalFn* F, int threads)
        : f_(f),
          norm_(norm),
          want_var_(want_var),
          F_(F),
          threads_(std::max(1, threads)),
          cap_(kBlock * static_cast<std::size_t>(threads_ > 1 ? 4 * threads_ : 1)),
          sum_(Acc{Vec::zero(f.codim), 0.0, 0.0}) {
        auto& spare = spare_buffers();
        if (!spare.empty()) {
            buf_ = std::move(spare.back());
            spare.pop_back();
        }
    }

    ~Accumulator() {
        auto& spare = spare_buffers();
        if (spare.size() < 16) {
            buf_.clear();
            spare.push_back(std::move(buf_));
        }
    }

    Accumulator(const Accumulator&) = delete;
    Accumulator& operator=(const Accumulator&) = delete;

    void add(const Point& t, const Box& c) {
        buf_.push_back({t, c});
        if (buf_.size() == cap_) flush_blocks();
    }

    Acc finish() {
        flush_blocks();
        // the tail splits into aligned power-of-two chunks, largest first,
        // exactly the entries item-by-item pushes would leave on the stack
        std::size_t at = 0;
        for (int lvl = kLevel - 1; lvl >= 0; --lvl) {
            const std::size_t len = std::size_t{1} << lvl;
            if (buf_.size() - at < len) continue;
            sum_.push_at_level(lvl, block_sum(at, len));
            at += len;
        }
        buf_.clear();
        return sum_.total();
    }

private:
    Acc term(const Item& it) const {
        const Vec fv = f_(it.tag);
        const double m = it.cell.measure();
        Acc a{fv * m, 0.0, 0.0};
        if (want_var_) a.var = fv.norm(norm_) * m;
        if (F_) a.sg = (fv * m - (*F_)(it.cell)).norm(norm_);
        return a;
    }

    // A full aligned block of 2^lvl items summed as a perfect binary tree, the
    // same (left + right) shape PairwiseSum gives it. The counter lives on the
    // stack: term() may run a nested integral that sums blocks of its own.
    Acc block_sum(std::size_t begin, std::size_t len = kBlock) const {
        std::array<Acc, kLevel + 1> stack;
        std::array<int, kLevel + 1> level{};
        int top = 0;
        for (std::size_t i = 0; i < len; ++i) {
            Acc v = term(buf_[begin + i]);
            int l = 0;
            while (top > 0 && level[static_cast<std::size_t>(top - 1)] == l) {
                v = stack[static_cast<std::size_t>(top - 1)] + v;
                --top;
                ++l;
            }
            stack[static_cast<std::size_t>(top)] = v;
            level[static_cast<std::size_t>(top)] = l;
            ++top;
        }
        return stack[0];
    }

    void flush_blocks() {
        const std::size_t nb = buf_.size() / kBlock;
        if (nb == 0) return;
        std::vector<Acc> sums(nb);
        const int nt = std::min<int>(threads_, static_cast<int>(nb));
        if (nt <= 1) {
            for (std::size_t b = 0; b < nb; ++b) sums[b] = block_sum(b * kBlock);
        } else {
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nt));
            auto work = [&](int tid) {
                try {
                    for (std::size_t b = static_cast<std::size_t>(tid); b < nb; b += static_cast<std::size_t>(nt))
                        sums[b] = block_sum(b * kBlock);
                } catch (...) {
                    errors[static_cast<std::size_t>(tid)] = std::current_exception();
                }
            };
            std::vector<std::thread> pool;
            for (int tid = 1; tid < nt; ++tid) pool.emplace_back(work, tid);
            work(0);
            for (auto& th : pool) th.join();
            for (const auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
        for (auto& s : sums) sum_.push_at_level(kLevel, std::move(s));
        buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(nb * kBlock));
    }

    const Integrand& f_;
    Norm norm_;
    bool want_var_;
    const AdditiveIntervalFn* F_;
    int threads_;
    std::size_t cap_;
    std::vector<Item> buf_;
    PairwiseSum<Acc> sum_;
};

Acc sum_over(const Integrand& f, const TaggedPartition& p, Norm norm, bool want_var, const AdditiveIntervalFn* F,
             int threads) {
    if (f.dim != p.domain().dim()) throw std::invalid_argument("integrand and partition dimensions differ");
    Accumulator acc(f, norm, want_var, F, threads);
    for (const auto& it : p) acc.add(it.tag, it.cell);
    return acc.finish();
}

}  // namespace

Vec riemann_sum(const Integrand& f, const TaggedPartition& p, int threads) {
    return sum_over(f, p, Norm::euclid, false, nullptr, threads).est;
}

double variation_sum(const Integrand& f, const TaggedPartition& p, Norm norm, int threads) {
    return sum_over(f, p, norm, true, nullptr, threads).var;
}

double strong_gap(const Integrand& f, const TaggedPartition& p, const AdditiveIntervalFn& F, Norm norm, int threads) {
    return sum_over(f, p, norm, false, &F, threads).sg;
}

double sstar_double_sum(const Integrand& f, const TaggedPartition& p, const TaggedPartition& q, Norm norm) {
    if (!(p.domain() == q.domain())) throw std::invalid_argument("sstar_double_sum: partitions have different domains");
    std::vector<Vec> fp, fq;
    fp.reserve(p.size());
    fq.reserve(q.size());
    for (const auto& it : p) fp.push_back(f(it.tag));
    for (const auto& it : q) fq.push_back(f(it.tag));

    detail::BucketIndex index(q.domain(), q.size());
    for (std::size_t j = 0; j < q.size(); ++j) index.insert(j, q[j].cell);

    PairwiseSum<double> total(0.0);
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cand.clear();
        index.for_buckets(p[i].cell, [&](std::size_t b) {
            const auto& ids = index.bucket(b);
            cand.insert(cand.end(), ids.begin(), ids.end());
        });
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (std::size_t j : cand) {
            const double m = overlap_measure(p[i].cell, q[j].cell);
            if (m > 0.0) total.push(distance(fp[i], fq[j], norm) * m);
        }
    }
    return total.total();
}

Scheme uniform_scheme(const Box& domain) {
    const double diam = domain.diameter();
    Scheme s;
    s.name = "uniform";
    s.stage = [domain, diam](int k) {
        return Stage{constant_gauge(domain, 0.75 * std::ldexp(diam, -k)), std::nullopt, "level " + std::to_string(k)};
    };
    return s;
}

Scheme singular_scheme(const Box& domain, std::vector<Locus> loci, SingularSchemeParams params) {
    if (loci.empty()) throw std::invalid_argument("singular_scheme needs at least one locus");
    if (!(params.coeff > 0.0)) throw std::invalid_argument("singular_scheme: coeff must be > 0");
    // width across the loci, used for the cell at the locus
    double width = 0.0;
    for (const auto& l : loci)
        for (int a = 0; a < domain.dim(); ++a)
            if (l.constrains(a)) width = std::max(width, domain.axis(a).length());
    if (width == 0.0) width = domain.diameter();
    const double diam = domain.diameter();
    const int lag = std::max(0, params.zero_lag);

    Scheme s;
    s.name = "singular";
    // the locus cell only starts shrinking at k = 2(lag+2); before that the
    // estimates barely move and must not count as stable
    s.min_depth = 2 * (lag + 2) + 2;
    // in 2D the locus cell is also held to the row height 2^-v, so z only bites once it exceeds v
    if (domain.dim() == 2)
        while (std::max(1, s.min_depth / 2 - lag) <= 1 + (s.min_depth + 3) / 4) ++s.min_depth;
    s.stage = [domain, loci, params, width, diam, lag](int k) {
        const int z = std::max(1, k / 2 - lag);
        const double eps = std::ldexp(width, -z);
        std::ostringstream label;
        if (domain.dim() == 1) {
            const int u = (k + 1) / 2 + params.uniform_lead;
            const double base = 0.75 * std::ldexp(diam, -u);
            label << "z=" << z << " u=" << u;
            return Stage{singularity_gauge(domain, loci, base, params.coeff / base, 3, 1.5 * eps), std::nullopt,
                         label.str()};
        }
        // the constant gauge only sets the resolution along the loci
        const int u = (k + 1) / 2 + params.uniform_lead;
        const int v = 1 + (k + 3) / 4;
        label << "z=" << z << " u=" << u << " v=" << v;
        const double base = 0.75 * std::ldexp(diam, -v);
        ResolutionHint hint{loci, params.coeff, 3, eps, std::ldexp(width, -u)};
        return Stage{constant_gauge(domain, base).with_anchors(loci), hint, label.str()};
    };
    return s;
}

Scheme default_scheme(const Box& domain, const IntegrateOptions& opts) {
    if (opts.scheme) return *opts.scheme;
    if (opts.discipline == Discipline::hk && !opts.singular.empty()) return singular_scheme(domain, opts.singular);
    return uniform_scheme(domain);
}

namespace {

struct CellBudgetExceeded {};

void check_options(const Integrand& f, const Box& domain, const IntegrateOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (opts.max_depth < 0 || opts.max_depth > 60) throw std::invalid_argument("depth budget must lie in [0, 60]");
    if (opts.window < 1) throw std::invalid_argument("stability window must be >= 1");
    if (f.dim != domain.dim()) throw std::invalid_argument("integrand and domain dimensions differ");
    if (opts.strong_gap == StrongGapMode::exact && !opts.interval_fn)
        throw std::invalid_argument("exact strong gap requested without an interval function");
}

CousinOptions cousin_options(const IntegrateOptions& opts, const Stage& st) {
    CousinOptions co;
    co.max_depth = std::max(40, opts.max_depth);
    co.hint = st.hint;
    return co;
}

}  // namespace

IntegralResult integrate(const Integrand& f, const Box& domain, const IntegrateOptions& opts) {
    check_options(f, domain, opts);
    const Scheme scheme = default_scheme(domain, opts);

    IntegralResult r;
    r.tol = opts.tol;
    r.discipline = to_string(opts.discipline);
    r.scheme = scheme.name;
    r.value = Vec::zero(f.codim);

    std::optional<AdditiveIntervalFn> F;
    if (opts.strong_gap == StrongGapMode::exact) {
        F = opts.interval_fn;
        r.strong_gap_source = "exact";
    } else if (opts.strong_gap == StrongGapMode::estimate) {
        IntegrateOptions sub = opts;
        sub.tol = opts.tol / 10.0;
        sub.strong_gap = StrongGapMode::off;
        sub.record_variation = false;
        sub.scheme.reset();
        sub.min_depth = 0;
        F = AdditiveIntervalFn{domain, [f, sub](const Box& c) { return interval_estimate(f, c, sub); }};
        r.strong_gap_source = "interval_estimate";
    }

    const int min_depth = std::max(opts.min_depth, scheme.min_depth);
    int stable = 0;
    for (int k = 0; k <= opts.max_depth; ++k) {
        const Stage st = scheme.stage(k);
        const CousinOptions co = cousin_options(opts, st);
        Accumulator acc(f, opts.norm, opts.record_variation, F ? &*F : nullptr, opts.threads);
        std::size_t n = 0;
        try {
            for_each_cousin_cell(domain, st.gauge, opts.discipline, opts.tags, co, [&](const Point& t, const Box& c) {
                if (++n > opts.max_cells) throw CellBudgetExceeded{};
                acc.add(t, c);
            });
        } catch (const RefinementDepthExceeded& e) {
            r.stop_reason = std::string("bisection budget: ") + e.what();
            break;
        } catch (const CellBudgetExceeded&) {
            r.stop_reason = "cell budget of " + std::to_string(opts.max_cells) + " exceeded at depth " +
                            std::to_string(k);
            break;
        }
        const Acc s = acc.finish();

        TraceRow row;
        row.depth = k;
        row.cells = n;
        row.estimate = s.est;
        if (opts.record_variation) row.variation = s.var;
        if (F) row.strong_gap = s.sg;
        if (!r.trace.empty()) {
            row.gap = distance(s.est, r.trace.back().estimate, opts.norm);
            stable = (*row.gap <= opts.tol && k >= min_depth) ? stable + 1 : 0;
        }
        r.trace.push_back(row);
        r.value = s.est;
        r.cauchy_gap = row.gap.value_or(0.0);
        r.depth = k;
        r.cells = n;
        if (stable >= opts.window) {
            r.converged = true;
            r.converged_depth = k - opts.window;
            r.stop_reason = "converged";
            break;
        }
    }
    if (!r.converged) {
        r.converged_depth = r.depth;
        if (r.stop_reason.empty()) r.stop_reason = "depth budget " + std::to_string(opts.max_depth) + " reached";
    }
    return r;
}

Vec interval_estimate(const Integrand& f, const Box& cell, const IntegrateOptions& opts) {
    IntegrateOptions sub = opts;
    sub.strong_gap = StrongGapMode::off;
    // a scheme built for another domain would not apply here
    sub.scheme.reset();
    const IntegralResult r = integrate(f, cell, sub);
    if (!r.converged) throw std::runtime_error("interval_estimate did not converge: " + r.stop_reason);
    return r.value;
}

TaggedPartition stage_partition(const Box& domain, const IntegrateOptions& opts, int k) {
    const Scheme scheme = default_scheme(domain, opts);
    const Stage st = scheme.stage(k);
    return cousin_partition(domain, st.gauge, opts.discipline, opts.tags, cousin_options(opts, st));
}

}  // namespace gint
