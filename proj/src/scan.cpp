#include "kerr/scan.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "kerr/closed_form.hpp"
#include "kerr/fock_engine.hpp"

namespace kerr {

PathMode parse_path_mode(std::string_view token) {
    if (token == "closed" || token == "closed_form") return PathMode::closed_form;
    if (token == "oracle") return PathMode::oracle;
    if (token == "both") return PathMode::both;
    throw ConfigError("invalid --path value '" + std::string(token) +
                      "' (expected closed, oracle or both)");
}

std::string to_string(PathMode mode) {
    switch (mode) {
        case PathMode::closed_form: return "closed";
        case PathMode::oracle: return "oracle";
        default: return "both";
    }
}

void validate(const RunConfig& c) {
    auto fail = [](const std::string& what, double value) {
        throw ConfigError(what + " (got " + format_double(value) + ")");
    };
    if (!std::isfinite(c.x0)) fail("--x0 must be finite", c.x0);
    if (!std::isfinite(c.p0)) fail("--p0 must be finite", c.p0);
    if (!(c.chi > 0.0) || !std::isfinite(c.chi)) fail("--chi must be positive", c.chi);
    if (!(c.t_max_in_revivals > 0.0) || !std::isfinite(c.t_max_in_revivals)) {
        fail("--revivals must be positive", c.t_max_in_revivals);
    }
    if (c.steps < 2) fail("--steps must be at least 2", c.steps);
    if (c.max_moment_order < 4 || c.max_moment_order > kMaxExpansionOrder) {
        fail("--order must lie in [4, 8]", c.max_moment_order);
    }
    if (c.m_max < 2) fail("--mmax must be at least 2", c.m_max);
    if (!(c.tail_tolerance > 0.0 && c.tail_tolerance < 1.0)) {
        fail("--tail-tol must lie in (0, 1)", c.tail_tolerance);
    }
}

ParsedArgs parse_config(std::span<const std::string> args) {
    ParsedArgs parsed;
    RunConfig& c = parsed.config;
    std::string path_token = to_string(c.path_mode);
    std::string out_dir = c.output_dir.string();

    CLI::App app{"Kerr-medium wave packet revivals: moment time series and burst analysis",
                 "kerr_revival"};
    app.add_option("--x0", c.x0, "initial position centre")->capture_default_str();
    app.add_option("--p0", c.p0, "initial momentum centre")->capture_default_str();
    app.add_option("--chi", c.chi, "Kerr coupling (inverse time)")->capture_default_str();
    app.add_option("--revivals", c.t_max_in_revivals, "scan length in units of T_rev")
        ->capture_default_str();
    app.add_option("--steps", c.steps, "number of time rows")->capture_default_str();
    app.add_option("--order", c.max_moment_order, "highest raw moment recorded (4..8)")
        ->capture_default_str();
    app.add_option("--mmax", c.m_max, "largest fractional-revival denominator scheduled")
        ->capture_default_str();
    app.add_option("--tail-tol", c.tail_tolerance, "Fock cutoff tail tolerance")
        ->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--path", path_token, "closed | oracle | both")->capture_default_str();
    app.set_config("--config", "", "key=value file; flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        parsed.help_requested = true;
        parsed.help_text = app.help();
        return parsed;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    c.path_mode = parse_path_mode(path_token);
    c.output_dir = out_dir;
    validate(c);
    return parsed;
}

double relative_discrepancy(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-2});
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

namespace {

SeriesRow closed_row(const ClosedFormContext& ctx, double t, int order) {
    SeriesRow row;
    RawMoments raw;
    for (int k = 1; k <= order; ++k) {
        row.raw_x.push_back(closed_moment_via_expansion(ctx, Quadrature::x, k, t));
        row.raw_p.push_back(closed_moment_via_expansion(ctx, Quadrature::p, k, t));
        if (k <= 4) {
            raw.x[k] = row.raw_x.back();
            raw.p[k] = row.raw_p.back();
        }
    }
    row.stats = assemble_statistics(raw, t, MomentPath::closed_form, autocorrelation(ctx, t));
    return row;
}

SeriesRow oracle_row(const FockVector& state0, const KerrModel& model, double t, int order) {
    const FockVector state = evolve(state0, model, t);
    SeriesRow row;
    RawMoments raw;
    for (int k = 1; k <= order; ++k) {
        row.raw_x.push_back(numeric_quadrature_moment(state, Quadrature::x, k).value);
        row.raw_p.push_back(numeric_quadrature_moment(state, Quadrature::p, k).value);
        if (k <= 4) {
            raw.x[k] = row.raw_x.back();
            raw.p[k] = row.raw_p.back();
        }
    }
    const double norm = state0.norm_squared();
    const double c = std::norm(state0.amplitudes().dot(state.amplitudes())) / (norm * norm);
    row.stats = assemble_statistics(raw, t, MomentPath::oracle, c);
    return row;
}

}  // namespace

MomentSeries compute_series(const RunConfig& config) {
    validate(config);
    const CoherentParams params(config.x0, config.p0);
    const KerrModel model(config.chi);
    const ClosedFormContext ctx{params, model};
    const bool want_closed = config.path_mode != PathMode::oracle;
    const bool want_oracle = config.path_mode != PathMode::closed_form;

    MomentSeries series;
    series.t_rev = model.t_rev();
    const auto steps = static_cast<std::size_t>(config.steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double s = config.t_max_in_revivals * static_cast<double>(i) /
                         static_cast<double>(steps - 1);
        series.t_over_trev.push_back(s);
        series.times.push_back(s * model.t_rev());
    }

    if (want_closed) {
        series.closed_form.reserve(steps);
        for (const double t : series.times) {
            series.closed_form.push_back(closed_row(ctx, t, config.max_moment_order));
        }
    }
    if (want_oracle) {
        const FockVector state0 = prepare_coherent(params, config.tail_tolerance);
        series.oracle.reserve(steps);
        for (const double t : series.times) {
            series.oracle.push_back(oracle_row(state0, model, t, config.max_moment_order));
        }
    }
    if (want_closed && want_oracle) {
        for (std::size_t i = 0; i < steps; ++i) {
            double worst = 0.0;
            const SeriesRow& a = series.closed_form[i];
            const SeriesRow& b = series.oracle[i];
            for (std::size_t k = 0; k < a.raw_x.size(); ++k) {
                worst = std::max(worst, relative_discrepancy(a.raw_x[k], b.raw_x[k]));
                worst = std::max(worst, relative_discrepancy(a.raw_p[k], b.raw_p[k]));
            }
            series.path_discrepancy.push_back(worst);
        }
    }
    return series;
}

namespace {

bool inside(const std::vector<TimeInterval>& intervals, double t) {
    return std::any_of(intervals.begin(), intervals.end(),
                       [t](const TimeInterval& iv) { return t >= iv.begin && t <= iv.end; });
}

}  // namespace

ScanSummary summarize(const RunConfig& config, const MomentSeries& series) {
    const KerrModel model(config.chi);
    const CoherentParams params(config.x0, config.p0);
    const std::vector<SeriesRow>& rows = series.primary();

    ScanSummary s;
    s.nu = params.nu();
    s.t_rev = model.t_rev();
    const double t_begin = series.times.front();
    const double t_end = series.times.back();
    const auto quiet1 = quiet_intervals(model, 1, t_begin, t_end);
    const auto quiet2 = quiet_intervals(model, 2, t_begin, t_end);
    const auto quiet4 = quiet_intervals(model, 4, t_begin, t_end);
    const double plateau_up = s.nu + 0.5;

    s.min_uncertainty_product = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const StatisticsRecord& r = rows[i].stats;
        const double t = series.times[i];
        s.min_uncertainty_product = std::min(s.min_uncertainty_product, r.uncertainty_product);
        if (inside(quiet1, t)) {
            s.mean_x_plateau = std::max(s.mean_x_plateau, std::abs(r.mean_x));
        }
        if (inside(quiet2, t)) {
            s.uncertainty_plateau_deviation =
                std::max(s.uncertainty_plateau_deviation,
                         std::abs(r.uncertainty_product - plateau_up) / plateau_up);
        }
        if (inside(quiet4, t)) {
            const double dev = std::max(std::abs(r.excess_kurtosis_x + 1.5),
                                        std::abs(r.excess_kurtosis_p + 1.5)) / 1.5;
            s.kurtosis_plateau_deviation = std::max(s.kurtosis_plateau_deviation, dev);
        }
    }

    std::vector<std::vector<double>> columns(4);
    for (const SeriesRow& row : rows) {
        columns[0].push_back(row.stats.mean_x);
        columns[1].push_back(row.stats.uncertainty_product);
        columns[2].push_back(row.stats.skewness_sq_x);
        columns[3].push_back(row.stats.excess_kurtosis_x);
    }
    try {
        const BurstOptions options = default_burst_options(model);
        for (int order = 1; order <= 4; ++order) {
            s.bursts.push_back(
                detect_bursts(series.times, columns[order - 1], order, model, options));
        }
        s.bursts_available = true;
    } catch (const std::invalid_argument& e) {
        s.bursts.clear();
        s.bursts_note = e.what();
    }

    if (!series.path_discrepancy.empty()) {
        s.has_path_discrepancy = true;
        s.max_path_discrepancy =
            *std::max_element(series.path_discrepancy.begin(), series.path_discrepancy.end());
    }
    return s;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (const double v : values) {
        if (!first) out << ',';
        out << format_double(v);
        first = false;
    }
    out << '\n';
}

std::string join_times(const std::vector<double>& times, double t_rev) {
    std::string out;
    for (const double t : times) {
        if (!out.empty()) out += ' ';
        out += format_double(t / t_rev);
    }
    return out.empty() ? "-" : out;
}

}  // namespace

void write_outputs(const RunConfig& config, const MomentSeries& series,
                   const ScanSummary& summary) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec || !std::filesystem::is_directory(config.output_dir)) {
        throw ConfigError("cannot create output directory " + config.output_dir.string());
    }
    const auto& rows = series.primary();
    const auto& dir = config.output_dir;

    {
        auto out = open_output(dir / "series.csv");
        out << "t,t_over_trev,mean_x,mean_p,var_x,var_p,uncertainty_product,skew_sq_x,"
               "skew_sq_p,exkurt_x,exkurt_p,autocorrelation\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const StatisticsRecord& r = rows[i].stats;
            write_row(out, {series.times[i], series.t_over_trev[i], r.mean_x, r.mean_p, r.var_x,
                            r.var_p, r.uncertainty_product, r.skewness_sq_x, r.skewness_sq_p,
                            r.excess_kurtosis_x, r.excess_kurtosis_p, r.autocorrelation});
        }
    }
    {
        auto out = open_output(dir / "phase_xp.csv");
        out << "t,t_over_trev,mean_x,mean_p\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            write_row(out, {series.times[i], series.t_over_trev[i], rows[i].stats.mean_x,
                            rows[i].stats.mean_p});
        }
    }
    {
        auto out = open_output(dir / "phase_dxdp.csv");
        out << "t,t_over_trev,delta_x,delta_p\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            write_row(out, {series.times[i], series.t_over_trev[i],
                            std::sqrt(rows[i].stats.var_x), std::sqrt(rows[i].stats.var_p)});
        }
    }
    {
        auto out = open_output(dir / "phase_skew.csv");
        out << "t,t_over_trev,skew_sq_x,skew_sq_p\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            write_row(out, {series.times[i], series.t_over_trev[i], rows[i].stats.skewness_sq_x,
                            rows[i].stats.skewness_sq_p});
        }
    }
    {
        auto out = open_output(dir / "phase_kurt.csv");
        out << "t,t_over_trev,exkurt_x,exkurt_p\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            write_row(out, {series.times[i], series.t_over_trev[i],
                            rows[i].stats.excess_kurtosis_x, rows[i].stats.excess_kurtosis_p});
        }
    }
    if (!series.path_discrepancy.empty()) {
        auto out = open_output(dir / "path_diff.csv");
        out << "t,t_over_trev,max_rel_discrepancy\n";
        for (std::size_t i = 0; i < series.path_discrepancy.size(); ++i) {
            write_row(out, {series.times[i], series.t_over_trev[i], series.path_discrepancy[i]});
        }
    }

    auto out = open_output(dir / "summary.txt");
    out << "x0 = " << format_double(config.x0) << '\n'
        << "p0 = " << format_double(config.p0) << '\n'
        << "chi = " << format_double(config.chi) << '\n'
        << "nu = " << format_double(summary.nu) << '\n'
        << "t_rev = " << format_double(summary.t_rev) << '\n'
        << "revivals = " << format_double(config.t_max_in_revivals) << '\n'
        << "steps = " << config.steps << '\n'
        << "path = " << to_string(config.path_mode) << '\n'
        << "min_uncertainty_product = " << format_double(summary.min_uncertainty_product) << '\n'
        << "mean_x_plateau_max_abs = " << format_double(summary.mean_x_plateau) << '\n'
        << "uncertainty_plateau_target = " << format_double(summary.nu + 0.5) << '\n'
        << "uncertainty_plateau_max_rel_dev = "
        << format_double(summary.uncertainty_plateau_deviation) << '\n'
        << "exkurt_plateau_target = -1.5\n"
        << "exkurt_plateau_max_rel_dev = " << format_double(summary.kurtosis_plateau_deviation)
        << '\n';
    if (summary.has_path_discrepancy) {
        out << "max_path_discrepancy = " << format_double(summary.max_path_discrepancy) << '\n';
    }
    if (!summary.bursts_available) {
        out << "bursts = unavailable (" << summary.bursts_note << ")\n";
    }
    static constexpr const char* names[] = {"mean_x", "uncertainty_product", "skew_sq_x",
                                            "exkurt_x"};
    for (const BurstReport& b : summary.bursts) {
        const std::string key = std::string("bursts.") + names[b.moment_order - 1];
        std::vector<double> matched;
        double worst = 0.0;
        for (const MatchedBurst& m : b.matched) {
            matched.push_back(m.detected);
            worst = std::max(worst, m.match_error);
        }
        std::vector<double> missed;
        for (const ScheduleEvent& e : b.missed_events) {
            missed.push_back(e.t);
        }
        out << key << ".order = " << b.moment_order << '\n'
            << key << ".detected_over_trev = " << join_times(b.detected_times, summary.t_rev)
            << '\n'
            << key << ".unmatched_over_trev = " << join_times(b.unmatched_times, summary.t_rev)
            << '\n'
            << key << ".missed_over_trev = " << join_times(missed, summary.t_rev) << '\n'
            << key << ".max_match_error_over_trev = " << format_double(worst / summary.t_rev)
            << '\n';
    }
}

ScanResult run_scan(const RunConfig& config) {
    ScanResult result{compute_series(config), {}};
    result.summary = summarize(config, result.series);
    write_outputs(config, result.series, result.summary);
    return result;
}

}  // namespace kerr
