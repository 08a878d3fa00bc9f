#pragma once

#include "imslab/analytic.hpp"
#include "imslab/domain.hpp"
#include "imslab/schemes.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace imslab::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kRuntimeError = 3,
    kDiverged = 4,
};

/// Agreement tolerance between simulated and closed-form delay.
inline constexpr Millis kAgreementTolerance = 1e-9;

/// Event cap from IMSLAB_EVENT_CAP, or the engine default when unset.
/// Throws ConfigError on a malformed value.
std::size_t event_cap_from_env();

struct SweepRow {
    std::string param;
    Millis value = 0;
    SchemeId scheme = SchemeId::Standard;
    Millis analytic_ms = 0;
    std::optional<Millis> simulated_ms;
    std::optional<std::size_t> messages_total;
    std::optional<std::size_t> messages_mn;
    std::optional<bool> slack;
};

/// Analytic sweep, optionally paired with one simulation per row. Rows are
/// sorted by (value, scheme name).
std::vector<SweepRow> run_sweep(const analytic::SweepSpec& spec, bool simulate,
                                std::size_t event_cap = sim::kDefaultEventCap);

/// CSV with header
/// `param,value,scheme,analytic_ms,simulated_ms,messages_total,messages_mn,regime`.
/// Each comment line is emitted first, prefixed by "# ".
std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const std::vector<std::string>& comments = {});

/// Rows in the slack regime whose simulated value misses the closed form.
std::vector<SweepRow> diverging_rows(const std::vector<SweepRow>& rows);

struct CompareRow {
    SchemeId scheme = SchemeId::Standard;
    Millis analytic_ms = 0;
    Millis simulated_ms = 0;
    Millis abs_diff = 0;
    bool slack = true;
};

std::vector<CompareRow> compare(const DelayParams& params,
                                std::size_t event_cap = sim::kDefaultEventCap);

struct FigureDataset {
    std::string file_name;
    std::string title;
    analytic::SweepSpec spec;
};

/// The five figure datasets over the default grids around `base`.
std::vector<FigureDataset> figure_datasets(const DelayParams& base = DelayParams::reference());

/// Writes every figure dataset into `out_dir`; returns the written paths.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& out_dir,
                                                 const DelayParams& base,
                                                 std::size_t event_cap = sim::kDefaultEventCap);

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace imslab::cli
