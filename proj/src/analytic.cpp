#include "imslab/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace imslab::analytic {

namespace {

struct Term {
    std::string_view field;
    double coefficient;
};

// Coefficient tables for slope(). The evaluation functions below spell the
// formulas out independently; the unit tests tie the two together.
constexpr std::array<Term, 4> kStandardTerms{{
    {"t_nar", 2}, {"t_h", 2}, {"t_mc", 10}, {"t_np", 4},
}};
constexpr std::array<Term, 7> kPredictiveTerms{{
    {"t_oar", 4}, {"t_op", 1}, {"t_onar", 2}, {"t_nar", 1}, {"t_h", 2}, {"t_mc", 4}, {"t_np", 2},
}};
constexpr std::array<Term, 8> kReactiveTerms{{
    {"t_oar", 2}, {"t_np", 3}, {"t_nar", 1}, {"t_onar", 2},
    {"t_onp", 3}, {"t_ops", 2}, {"t_h", 2},  {"t_mc", 4},
}};

std::span<const Term> terms_for(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::Standard: return kStandardTerms;
    case SchemeId::Predictive:
    case SchemeId::QosPredictive: return kPredictiveTerms;
    case SchemeId::Reactive:
    case SchemeId::QosReactive: return kReactiveTerms;
    }
    return {};
}

} // namespace

Millis t_standard(const DelayParams& p) {
    return 2 * p.t_nar + 2 * p.t_h + 10 * p.t_mc + 4 * p.t_np;
}

Millis t_predictive(const DelayParams& p) {
    return 4 * p.t_oar + p.t_op + 2 * p.t_onar + p.t_nar + 2 * p.t_h + 4 * p.t_mc + 2 * p.t_np;
}

Millis t_reactive(const DelayParams& p) {
    return 2 * p.t_oar + 3 * p.t_np + p.t_nar + 2 * p.t_onar + 3 * p.t_onp + 2 * p.t_ops +
           2 * p.t_h + 4 * p.t_mc;
}

Millis t_qos_predictive(const DelayParams& p) { return t_predictive(p); }

Millis t_qos_reactive(const DelayParams& p) { return t_reactive(p) + 2 * p.t_par; }

Millis disruption(SchemeId scheme, const DelayParams& p) {
    switch (scheme) {
    case SchemeId::Standard: return t_standard(p);
    case SchemeId::Predictive: return t_predictive(p);
    case SchemeId::Reactive: return t_reactive(p);
    case SchemeId::QosPredictive: return t_qos_predictive(p);
    case SchemeId::QosReactive: return t_qos_reactive(p);
    }
    return 0;
}

double slope(SchemeId scheme, std::string_view param_name) {
    if (!is_delay_field(param_name)) {
        throw InvalidParamName("unknown delay parameter '" + std::string(param_name) + "'");
    }
    if (scheme == SchemeId::QosReactive && param_name == "t_par") {
        return 2;
    }
    for (const auto& term : terms_for(scheme)) {
        if (term.field == param_name) {
            return term.coefficient;
        }
    }
    return 0;
}

void SweepSpec::validate() const {
    if (!is_delay_field(param_name)) {
        throw InvalidParamName("unknown delay parameter '" + param_name + "'");
    }
    if (!std::isfinite(from_ms) || !std::isfinite(to_ms) || !std::isfinite(step_ms)) {
        throw ConfigError("sweep bounds must be finite");
    }
    if (from_ms < 0) {
        throw ConfigError("sweep start must be non-negative");
    }
    if (from_ms > to_ms) {
        throw ConfigError("sweep start exceeds sweep end");
    }
    if (step_ms <= 0) {
        throw ConfigError("sweep step must be positive");
    }
    base.validate();
}

std::vector<Millis> sweep_grid(Millis from_ms, Millis to_ms, Millis step_ms) {
    std::vector<Millis> grid;
    // Index-based so the grid does not accumulate rounding drift; the small
    // slack admits an endpoint that lands a few ulps past `to`.
    const double span = (to_ms - from_ms) / step_ms;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid.push_back(from_ms + static_cast<double>(i) * step_ms);
    }
    return grid;
}

SweepResult sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SchemeId> schemes = spec.schemes;
    std::sort(schemes.begin(), schemes.end());
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());

    SweepResult result;
    result.param_name = spec.param_name;
    if (schemes.empty()) {
        return result;
    }
    for (Millis value : sweep_grid(spec.from_ms, spec.to_ms, spec.step_ms)) {
        DelayParams p = spec.base;
        p.set(spec.param_name, value);
        for (SchemeId s : schemes) {
            result.points.push_back({value, s, disruption(s, p), std::nullopt});
        }
    }
    return result;
}

SweepSpec default_sweep(std::string_view param_name, std::vector<SchemeId> schemes,
                        const DelayParams& base) {
    const Millis nominal = base.get(param_name);
    SweepSpec spec;
    spec.base = base;
    spec.param_name = std::string(param_name);
    spec.from_ms = 0.5 * nominal;
    spec.to_ms = 2.5 * nominal;
    spec.step_ms = (spec.to_ms - spec.from_ms) / 10.0;
    spec.schemes = std::move(schemes);
    return spec;
}

} // namespace imslab::analytic
