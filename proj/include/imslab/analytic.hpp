#pragma once

#include "imslab/domain.hpp"

#include <optional>
#include <string>
#include <vector>

namespace imslab::analytic {

// Closed-form disruption times. Each is a linear form in the link delays;
// processing, queuing, DAD and return routability are not modeled.

/// 2 t_nar + 2 t_h + 10 t_mc + 4 t_np
Millis t_standard(const DelayParams& p);

/// 4 t_oar + t_op + 2 t_onar + t_nar + 2 t_h + 4 t_mc + 2 t_np
Millis t_predictive(const DelayParams& p);

/// 2 t_oar + 3 t_np + t_nar + 2 t_onar + 3 t_onp + 2 t_ops + 2 t_h + 4 t_mc
Millis t_reactive(const DelayParams& p);

/// QoS context rides the concurrent transfer branch, so it adds nothing.
Millis t_qos_predictive(const DelayParams& p);

/// The old P-CSCF fetches the QoS context from its AR before answering
/// the context request: t_reactive + 2 t_par.
Millis t_qos_reactive(const DelayParams& p);

Millis disruption(SchemeId scheme, const DelayParams& p);

/// Coefficient of `param_name` in the scheme's formula (0 when absent).
/// Throws InvalidParamName for names that are not DelayParams fields.
double slope(SchemeId scheme, std::string_view param_name);

struct SweepSpec {
    DelayParams base;
    std::string param_name;
    Millis from_ms = 0;
    Millis to_ms = 0;
    Millis step_ms = 1;
    std::vector<SchemeId> schemes;

    /// Throws ConfigError / InvalidParamName on a malformed spec.
    void validate() const;
};

struct SweepPoint {
    Millis param_value = 0;
    SchemeId scheme = SchemeId::Standard;
    Millis analytic_ms = 0;
    std::optional<Millis> simulated_ms;
};

struct SweepResult {
    std::string param_name;
    std::vector<SweepPoint> points;
};

/// Grid values from, from+step, ... up to `to` inclusive. A step larger
/// than the range yields the single value `from`.
std::vector<Millis> sweep_grid(Millis from_ms, Millis to_ms, Millis step_ms);

/// Analytic values over the grid, ordered by (value, scheme). The scheme
/// set is deduplicated; simulated_ms is left empty.
SweepResult sweep(const SweepSpec& spec);

/// The default grid for a parameter: 0.5x to 2.5x of its reference value
/// in ten equal steps.
SweepSpec default_sweep(std::string_view param_name, std::vector<SchemeId> schemes,
                        const DelayParams& base = DelayParams::reference());

} // namespace imslab::analytic
