#pragma once

// Sections, exceptional-set truncation and iterated integrals on 2D boxes.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gint/integrator.hpp"
#include "gint/nullset.hpp"

namespace gint {

/// The factors of a 2D box as 1D boxes.
Box x_factor(const Box& domain);
Box y_factor(const Box& domain);

/// y -> f(t1, y) on the y factor.
Integrand section_x(const Integrand& f, const Box& domain, double t1);
/// x -> f(x, t2) on the x factor.
Integrand section_y(const Integrand& f, const Box& domain, double t2);

/// f0 = theta where t1 in z1 or t2 in z2, f elsewhere.
Integrand truncate_f0(const Integrand& f, const NullSet& z1, const NullSet& z2);

enum class Order { xy, yx };  // xy: inner over y, outer over x

std::string to_string(Order o);

class InnerIntegralError : public std::runtime_error {
public:
    InnerIntegralError(double at, Order order, const std::string& reason);
    double at() const { return at_; }

private:
    double at_;
};

/// Memo table shared by the copies of one inner-integral function.
struct InnerMemo;

/// Order xy: t1 -> integral over y of f(t1, .); yx: t2 -> integral over x of f(., t2).
/// Values are memoized by the exact coordinate. Non-convergence throws
/// InnerIntegralError naming the coordinate.
class InnerIntegral {
public:
    InnerIntegral(Integrand f, Box domain, Order order, IntegrateOptions inner);

    Vec operator()(double t) const;
    /// As a 1D integrand on the outer factor.
    Integrand as_integrand() const;

    std::size_t evaluations() const;  // distinct coordinates integrated so far
    Order order() const { return order_; }

private:
    Integrand f_;
    Box domain_;
    Order order_;
    IntegrateOptions inner_;
    std::shared_ptr<InnerMemo> memo_;
};

struct FubiniOptions {
    Discipline discipline = Discipline::mcshane;
    TagStrategy tags;  // 2D strategy; sections use the matching factor of its null set
    double tol_outer = 1e-6;
    std::optional<double> tol_inner;  // default tol_outer / 10
    int max_depth = 40;
    Norm norm = Norm::euclid;
    std::vector<Locus> singular;  // 2D loci from corpus metadata
    int threads = 1;

    double inner_tol() const { return tol_inner.value_or(tol_outer / 10.0); }
};

struct FubiniReport {
    IntegralResult double_integral;
    IntegralResult iterated_xy;
    IntegralResult iterated_yx;
    double gap_xy = 0.0;
    double gap_yx = 0.0;
    double bound_xy = 0.0;  // 10 (tol_outer + tol_inner * side)
    double bound_yx = 0.0;
    double tol_outer = 0.0;
    double tol_inner = 0.0;
    std::string discipline;
    NullSet z1 = NullSet::empty(1);
    NullSet z2 = NullSet::empty(1);
    std::size_t inner_evaluations_xy = 0;
    std::size_t inner_evaluations_yx = 0;

    bool within_bound() const { return gap_xy <= bound_xy && gap_yx <= bound_yx; }
    bool all_converged() const {
        return double_integral.converged && iterated_xy.converged && iterated_yx.converged;
    }

    friend bool operator==(const FubiniReport&, const FubiniReport&) = default;
};

/// Loci seen by 1D integrals along one axis (0: x, 1: y) derived from 2D loci.
std::vector<Locus> axis_loci(const std::vector<Locus>& loci, int axis);
/// The factor of a 2D strategy's null set along one axis; other strategies pass through.
TagStrategy axis_strategy(const TagStrategy& s, int axis);

/// Options for the 1D integrals of one order (inner or outer).
IntegrateOptions inner_options(const FubiniOptions& o, Order order);
IntegrateOptions outer_options(const FubiniOptions& o, Order order);

/// Double integral of f against both iterated integrals of f0.
FubiniReport fubini_compare(const Integrand& f, const Box& domain, const NullSet& z1, const NullSet& z2,
                            const FubiniOptions& opts = {});

/// Integrates the indicator of z (1D set, or a 2D cross/point set). With
/// min_depth = max_depth - window + 1 every depth up to the budget is traced.
IntegralResult nullset_integral_check(const NullSet& z, const Box& domain, Discipline discipline,
                                      const TagStrategy& tags, double tol = 1e-6, int max_depth = 12,
                                      int min_depth = 0);

}  // namespace gint
