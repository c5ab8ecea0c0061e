#pragma once

// Command-line driver: integrate, fubini, sstar, nullset, corpus list.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gint/io.hpp"
#include "gint/partitions.hpp"
#include "gint/vector_value.hpp"

namespace gint {

/// Settings for one command. Unset optionals fall back to the corpus entry's defaults.
struct RunConfig {
    std::string command;  // integrate | fubini | sstar | nullset | corpus
    std::string fn;
    std::optional<Discipline> mode;
    std::optional<double> tol;
    std::optional<double> tol_inner;
    std::optional<int> max_depth;
    std::optional<std::string> tags;
    std::optional<Norm> norm;
    OutputFormat out = OutputFormat::json;
    std::optional<std::string> dump_partition;  // JSON-lines file for the final partition
    std::optional<std::string> output;          // report file; stdout when unset
    std::optional<int> threads;                 // default: available parallelism

    // sstar
    int depth_p = 6;
    std::optional<int> depth_q;  // default depth_p + 1
    std::optional<std::string> tags_q;

    // nullset
    std::optional<std::string> set;
    std::optional<int> dim;

    // corpus list
    bool list_json = false;
    std::optional<std::string> cls;

    /// Throws std::invalid_argument on tolerances <= 0 or a depth budget outside [1, 60].
    void check() const;
};

/// Keys as the long flag names with '-' replaced by '_' (tol_inner, max_depth, ...).
void apply_config_json(RunConfig& c, const nlohmann::json& j);

/// Exit code: 0 success, 2 not converged / bound missed / estimate above tol, 1 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gint
