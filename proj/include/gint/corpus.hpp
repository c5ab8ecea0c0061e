#pragma once

// Registry of test functions with closed-form values and metadata.

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gint/fubini.hpp"
#include "gint/integrator.hpp"
#include "gint/nullset.hpp"

namespace gint {

enum class FnClass { bochner, hk_only, null_perturbed };

std::string to_string(FnClass c);
FnClass parse_fn_class(const std::string& s);

/// F(x) = x^2 cos(pi / x^2), F(0) = 0, and its derivative (0 at x = 0).
double hk_primitive(double x);
double hk_derivative(double x);

struct CorpusFunction {
    std::string id;
    int dim = 1;
    int codim = 1;
    Box domain;
    Integrand f;
    FnClass cls = FnClass::bochner;

    std::optional<Vec> exact;  // closed form, evaluated at load
    std::string exact_expr;
    std::optional<AdditiveIntervalFn> primitive;  // exact F(I)
    std::function<Vec(double)> exact_inner_xy;    // t1 -> int f0(t1, y) dy
    std::function<Vec(double)> exact_inner_yx;    // t2 -> int f0(x, t2) dx

    NullSet z1 = NullSet::empty(1);
    NullSet z2 = NullSet::empty(1);
    std::vector<Locus> singular;
    std::string base;  // null_perturbed: the entry this one perturbs
    /// Lipschitz constant for the max norm on the domain, indexed by value norm.
    std::optional<std::array<double, 3>> lipschitz;

    Discipline discipline = Discipline::mcshane;
    TagStrategy tags;
    double tol = 1e-6;
    std::string notes;

    double lipschitz_for(Norm n) const;
    /// z1 in 1D; the cross set (Z1 x [a2,b2]) u ([a1,b1] x Z2) in 2D.
    NullSet null_set() const;
};

class UnknownFunction : public std::out_of_range {
public:
    explicit UnknownFunction(const std::string& id) : std::out_of_range("unknown function id '" + id + "'") {}
};

const std::vector<CorpusFunction>& registry();
const CorpusFunction& lookup(const std::string& id);

struct CorpusFilter {
    std::optional<int> dim;
    std::optional<FnClass> cls;
};

std::vector<std::string> list(const CorpusFilter& filter = {});

nlohmann::json metadata(const CorpusFunction& fn);
nlohmann::json registry_json(const CorpusFilter& filter = {});

/// The entry's defaults as integrate()/fubini_compare() options.
IntegrateOptions default_options(const CorpusFunction& fn);
FubiniOptions default_fubini_options(const CorpusFunction& fn);

/// int_0^1 exp(-x^2) dx by composite Simpson on 2^14 panels.
double gauss_1d_integral();

}  // namespace gint
