#include "imslab/expcli.hpp"

#include "imslab/params_file.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace imslab::cli {

namespace {

std::string fixed3(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << contents;
    if (!out) {
        throw ConfigError("failed writing " + path.string());
    }
}

SchemeId scheme_or_throw(const std::string& name) {
    if (auto s = parse_scheme(name)) {
        return *s;
    }
    throw ConfigError("unknown scheme '" + name +
                      "' (expected standard|predictive|reactive|qos-predictive|qos-reactive)");
}

std::vector<SchemeId> parse_scheme_list(const std::string& list) {
    if (list == "all") {
        return {all_schemes().begin(), all_schemes().end()};
    }
    std::vector<SchemeId> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(scheme_or_throw(item));
        }
    }
    return out;
}

std::string regime_label(bool slack) { return slack ? "slack" : "branch-bound"; }

} // namespace

std::size_t event_cap_from_env() {
    const char* raw = std::getenv("IMSLAB_EVENT_CAP");
    if (raw == nullptr || *raw == '\0') {
        return sim::kDefaultEventCap;
    }
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(raw, &end, 10);
    if (*end != '\0' || cap == 0 || raw[0] == '-') {
        throw ConfigError(std::string("IMSLAB_EVENT_CAP must be a positive integer, got '") + raw + "'");
    }
    return static_cast<std::size_t>(cap);
}

std::vector<SweepRow> run_sweep(const analytic::SweepSpec& spec, bool simulate,
                                std::size_t event_cap) {
    const auto result = analytic::sweep(spec);
    std::vector<SweepRow> rows;
    rows.reserve(result.points.size());
    schemes::ScenarioOptions options;
    options.event_cap = event_cap;
    for (const auto& point : result.points) {
        SweepRow row;
        row.param = spec.param_name;
        row.value = point.param_value;
        row.scheme = point.scheme;
        row.analytic_ms = point.analytic_ms;
        if (simulate) {
            DelayParams p = spec.base;
            p.set(spec.param_name, point.param_value);
            const auto run = schemes::run_handover(point.scheme, p, options);
            row.simulated_ms = run.disruption_ms;
            row.messages_total = run.messages_total;
            row.messages_mn = run.messages_mn;
            row.slack = schemes::in_slack_regime(run);
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.value != b.value) {
            return a.value < b.value;
        }
        return to_string(a.scheme) < to_string(b.scheme);
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& comments) {
    std::ostringstream out;
    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
    out << "param,value,scheme,analytic_ms,simulated_ms,messages_total,messages_mn,regime\n";
    for (const auto& r : rows) {
        out << r.param << ',' << fixed3(r.value) << ',' << to_string(r.scheme) << ','
            << fixed3(r.analytic_ms) << ',';
        if (r.simulated_ms) {
            out << fixed3(*r.simulated_ms);
        }
        out << ',';
        if (r.messages_total) {
            out << *r.messages_total;
        }
        out << ',';
        if (r.messages_mn) {
            out << *r.messages_mn;
        }
        out << ',';
        if (r.slack) {
            out << regime_label(*r.slack);
        }
        out << '\n';
    }
    return out.str();
}

std::vector<SweepRow> diverging_rows(const std::vector<SweepRow>& rows) {
    std::vector<SweepRow> bad;
    for (const auto& r : rows) {
        if (r.simulated_ms && r.slack.value_or(false) &&
            std::abs(*r.simulated_ms - r.analytic_ms) > kAgreementTolerance) {
            bad.push_back(r);
        }
    }
    return bad;
}

std::vector<CompareRow> compare(const DelayParams& params, std::size_t event_cap) {
    schemes::ScenarioOptions options;
    options.event_cap = event_cap;
    std::vector<CompareRow> rows;
    for (SchemeId s : all_schemes()) {
        const auto run = schemes::run_handover(s, params, options);
        CompareRow row;
        row.scheme = s;
        row.analytic_ms = analytic::disruption(s, params);
        row.simulated_ms = run.disruption_ms;
        row.abs_diff = std::abs(row.simulated_ms - row.analytic_ms);
        row.slack = schemes::in_slack_regime(run);
        rows.push_back(row);
    }
    return rows;
}

std::vector<FigureDataset> figure_datasets(const DelayParams& base) {
    using enum SchemeId;
    const std::vector<SchemeId> three{Standard, Predictive, Reactive};
    return {
        {"fig10_t_mc.csv", "disruption time versus MN-CN delay",
         analytic::default_sweep("t_mc", three, base)},
        {"fig11_t_h.csv", "disruption time versus MN-HA delay",
         analytic::default_sweep("t_h", three, base)},
        {"fig12_t_onp.csv", "disruption time versus old-new P-CSCF delay",
         analytic::default_sweep("t_onp", three, base)},
        {"fig13_t_onar.csv", "disruption time versus old-new AR delay",
         analytic::default_sweep("t_onar", three, base)},
        {"fig17_t_onp_qos.csv", "disruption time with QoS context versus old-new P-CSCF delay",
         analytic::default_sweep("t_onp", {Standard, Predictive, Reactive, QosPredictive, QosReactive},
                                 base)},
    };
}

std::vector<std::filesystem::path> write_figures(const std::filesystem::path& out_dir,
                                                 const DelayParams& base, std::size_t event_cap) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw ConfigError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    for (const auto& fig : figure_datasets(base)) {
        const auto rows = run_sweep(fig.spec, true, event_cap);
        const std::vector<std::string> comments{
            fig.title,
            "grid: " + fig.spec.param_name + " from " + fixed3(fig.spec.from_ms) + " to " +
                fixed3(fig.spec.to_ms) + " step " + fixed3(fig.spec.step_ms) + " ms (0.5x..2.5x nominal)",
        };
        const auto path = out_dir / fig.file_name;
        write_file(path, sweep_csv(rows, comments));
        written.push_back(path);
    }
    return written;
}

namespace {

struct Options {
    std::string scheme;
    std::string params_file;
    std::string trace_file;
    std::string ladder_file;
    std::string param;
    double from = 0;
    double to = 0;
    double step = 0;
    std::string schemes = "all";
    std::string out;
    bool simulate = false;
};

int cmd_simulate(const Options& o, std::size_t cap, std::ostream& out) {
    const SchemeId scheme = scheme_or_throw(o.scheme);
    const DelayParams params = load_params(o.params_file);
    schemes::ScenarioOptions options;
    options.event_cap = cap;
    const auto run = schemes::run_handover(scheme, params, options);

    out << "scheme: " << to_string(scheme) << '\n'
        << "disruption_ms: " << fixed3(run.disruption_ms) << '\n'
        << "messages_total: " << run.messages_total << '\n'
        << "messages_mn: " << run.messages_mn << '\n'
        << "context_preserved: " << (run.context_preserved ? "true" : "false") << '\n'
        << "regime: " << regime_label(schemes::in_slack_regime(run)) << '\n';
    if (!o.trace_file.empty()) {
        write_file(o.trace_file, sim::to_jsonl(run.trace));
    }
    if (!o.ladder_file.empty()) {
        write_file(o.ladder_file, schemes::ladder(run));
    }
    return kOk;
}

int cmd_sweep(const Options& o, std::size_t cap, std::ostream& err) {
    analytic::SweepSpec spec;
    spec.base = load_params(o.params_file);
    spec.param_name = o.param;
    spec.from_ms = o.from;
    spec.to_ms = o.to;
    spec.step_ms = o.step;
    spec.schemes = parse_scheme_list(o.schemes);
    spec.validate();

    const auto rows = run_sweep(spec, o.simulate, cap);
    write_file(o.out, sweep_csv(rows));
    const auto bad = diverging_rows(rows);
    for (const auto& r : bad) {
        err << "divergence: " << to_string(r.scheme) << " at " << r.param << '=' << fixed3(r.value)
            << ": analytic " << fixed3(r.analytic_ms) << " simulated " << fixed3(*r.simulated_ms)
            << '\n';
    }
    return bad.empty() ? kOk : kDiverged;
}

int cmd_analytic(const Options& o, std::ostream& out) {
    const SchemeId scheme = scheme_or_throw(o.scheme);
    const DelayParams params = load_params(o.params_file);
    out << fixed3(analytic::disruption(scheme, params)) << '\n';
    return kOk;
}

int cmd_compare(const Options& o, std::size_t cap, std::ostream& out, std::ostream& err) {
    const DelayParams params = load_params(o.params_file);
    const auto rows = compare(params, cap);
    out << std::left << std::setw(16) << "scheme" << std::right << std::setw(14) << "analytic_ms"
        << std::setw(14) << "simulated_ms" << std::setw(14) << "abs_diff" << "  regime\n";
    bool diverged = false;
    for (const auto& r : rows) {
        std::ostringstream diff;
        diff << std::scientific << std::setprecision(3) << r.abs_diff;
        out << std::left << std::setw(16) << to_string(r.scheme) << std::right << std::setw(14)
            << fixed3(r.analytic_ms) << std::setw(14) << fixed3(r.simulated_ms) << std::setw(14)
            << diff.str() << "  " << regime_label(r.slack) << '\n';
        if (r.abs_diff > kAgreementTolerance) {
            diverged = true;
            err << to_string(r.scheme) << ": simulated " << fixed3(r.simulated_ms)
                << " ms differs from closed form " << fixed3(r.analytic_ms) << " ms";
            if (!r.slack) {
                err << "; concurrent branch lacks slack and sits on the critical path";
            }
            err << '\n';
        }
    }
    return diverged ? kDiverged : kOk;
}

int cmd_figures(const Options& o, std::size_t cap, std::ostream& out) {
    const DelayParams base =
        o.params_file.empty() ? DelayParams::reference() : load_params(o.params_file);
    for (const auto& path : write_figures(o.out, base, cap)) {
        out << path.string() << '\n';
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"IMS over Mobile IPv6 handover simulator and delay model", "imslab"};
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "run one handover scheme through the simulator");
    simulate->add_option("--scheme", o.scheme, "scheme name")->required();
    simulate->add_option("--params", o.params_file, "parameter file (JSON)")->required();
    simulate->add_option("--trace", o.trace_file, "write the event trace as JSON Lines");
    simulate->add_option("--ladder", o.ladder_file, "write a plain-text ladder diagram");

    auto* sweep = app.add_subcommand("sweep", "vary one delay and tabulate disruption times");
    sweep->add_option("--param", o.param, "delay parameter to vary")->required();
    sweep->add_option("--from", o.from, "first value (ms)")->required();
    sweep->add_option("--to", o.to, "last value (ms)")->required();
    sweep->add_option("--step", o.step, "step (ms)")->required();
    sweep->add_option("--schemes", o.schemes, "comma-separated scheme names or 'all'");
    sweep->add_option("--params", o.params_file, "parameter file (JSON)")->required();
    sweep->add_option("--out", o.out, "CSV output path")->required();
    sweep->add_flag("--simulate", o.simulate, "also run the simulator for every row");

    auto* analytic_cmd = app.add_subcommand("analytic", "evaluate the closed-form disruption time");
    analytic_cmd->add_option("--scheme", o.scheme, "scheme name")->required();
    analytic_cmd->add_option("--params", o.params_file, "parameter file (JSON)")->required();

    auto* compare_cmd = app.add_subcommand("compare", "check simulator against closed forms");
    compare_cmd->add_option("--params", o.params_file, "parameter file (JSON)")->required();

    auto* figures = app.add_subcommand("figures", "write the figure datasets as CSV");
    figures->add_option("--out", o.out, "output directory")->required();
    figures->add_option("--params", o.params_file, "base parameter file (default: reference set)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        const std::size_t cap = event_cap_from_env();
        if (simulate->parsed()) {
            return cmd_simulate(o, cap, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(o, cap, err);
        }
        if (analytic_cmd->parsed()) {
            return cmd_analytic(o, out);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(o, cap, out, err);
        }
        if (figures->parsed()) {
            return cmd_figures(o, cap, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kConfigError;
}

} // namespace imslab::cli
