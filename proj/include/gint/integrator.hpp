#pragma once

// Riemann sums, strong gaps, S* double sums and the refinement loop.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gint/gauges.hpp"
#include "gint/geometry.hpp"
#include "gint/partitions.hpp"
#include "gint/vector_value.hpp"

namespace gint {

/// f : domain -> R^codim.
struct Integrand {
    int dim = 1;
    int codim = 1;
    std::function<Vec(const Point&)> eval;

    Vec operator()(const Point& t) const;
};

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const Point& t, const std::string& what);
    const Point& where() const { return where_; }

private:
    Point where_;
};

/// Interval function I -> F(I) on a domain. Additivity is a tested property.
struct AdditiveIntervalFn {
    Box domain;
    std::function<Vec(const Box&)> eval;

    Vec operator()(const Box& cell) const;
};

Vec riemann_sum(const Integrand& f, const TaggedPartition& p, int threads = 1);
double variation_sum(const Integrand& f, const TaggedPartition& p, Norm norm = Norm::euclid, int threads = 1);
/// sum of ||f(t)|I| - F(I)||.
double strong_gap(const Integrand& f, const TaggedPartition& p, const AdditiveIntervalFn& F, Norm norm = Norm::euclid,
                  int threads = 1);
/// sum over pairs of ||f(t) - f(s)|| |I n J|.
double sstar_double_sum(const Integrand& f, const TaggedPartition& p, const TaggedPartition& q,
                        Norm norm = Norm::euclid);

/// One refinement step: a gauge and an optional splitting hint.
struct Stage {
    Gauge gauge;
    std::optional<ResolutionHint> hint;
    std::string label;
};

/// Gauge sequence indexed by refinement depth k = 0, 1, ...
struct Scheme {
    std::string name;
    std::function<Stage(int k)> stage;
    /// The stability window only counts from this depth on.
    int min_depth = 0;
};

/// delta_k = 0.75 * diam * 2^-k, which yields exactly the level-k bisection cells.
Scheme uniform_scheme(const Box& domain);

struct SingularSchemeParams {
    double coeff = 1.0 / 16.0;  // cell width ~ coeff * dist^3 near a locus
    int zero_lag = 1;           // zero-cell level z_k = max(1, floor(k/2) - zero_lag)
    int uniform_lead = 6;       // 1D: constant-gauge level u_k = ceil(k/2) + uniform_lead
};

/// For integrands with an oscillating singularity on the loci (x^3-scale period).
///
/// 1D: delta_k is a cubic singularity gauge with floor ~ 2^-z_k at the loci, so
/// the cell at the locus is tagged there. 2D: a constant gauge with the loci as
/// anchors plus an x-only resolution hint, since square max-norm cells cannot
/// follow the oscillation.
Scheme singular_scheme(const Box& domain, std::vector<Locus> loci, SingularSchemeParams params = {});

struct TraceRow {
    int depth = 0;
    std::size_t cells = 0;
    Vec estimate;
    std::optional<double> gap;
    std::optional<double> variation;
    std::optional<double> strong_gap;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct IntegralResult {
    Vec value;
    double cauchy_gap = 0.0;
    int depth = 0;            // last depth computed
    int converged_depth = 0;  // first depth of the stable run
    std::size_t cells = 0;    // cells at the last depth
    std::vector<TraceRow> trace;
    bool converged = false;
    std::string stop_reason;
    double tol = 0.0;
    std::string discipline;
    std::string scheme;
    std::string strong_gap_source;  // "", "exact" or "interval_estimate"

    friend bool operator==(const IntegralResult&, const IntegralResult&) = default;
};

enum class StrongGapMode { off, exact, estimate };

struct IntegrateOptions {
    Discipline discipline = Discipline::mcshane;
    TagStrategy tags;
    double tol = 1e-6;
    int max_depth = 40;  // refinement steps and bisection budget
    int min_depth = 0;
    int window = 3;
    Norm norm = Norm::euclid;
    std::vector<Locus> singular;     // from corpus metadata
    std::optional<Scheme> scheme;    // overrides the default choice
    bool record_variation = false;
    StrongGapMode strong_gap = StrongGapMode::off;
    std::optional<AdditiveIntervalFn> interval_fn;  // used by StrongGapMode::exact
    int threads = 1;
    std::size_t max_cells = std::size_t{1} << 28;  // per depth; beyond this the run stops unconverged
};

/// The scheme integrate() would use for these options.
Scheme default_scheme(const Box& domain, const IntegrateOptions& opts);

IntegralResult integrate(const Integrand& f, const Box& domain, const IntegrateOptions& opts = {});

/// integrate restricted to I; throws if it does not converge.
Vec interval_estimate(const Integrand& f, const Box& cell, const IntegrateOptions& opts = {});

/// The partition integrate() builds at depth k.
TaggedPartition stage_partition(const Box& domain, const IntegrateOptions& opts, int k);

}  // namespace gint
