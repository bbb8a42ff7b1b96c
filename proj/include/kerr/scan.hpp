#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kerr/moment_algebra.hpp"
#include "kerr/revival_analysis.hpp"

namespace kerr {

enum class PathMode { closed_form, oracle, both };

PathMode parse_path_mode(std::string_view token);
std::string to_string(PathMode mode);

struct RunConfig {
    double x0 = 1.0;
    double p0 = 1.0;
    double chi = 5.0;
    double t_max_in_revivals = 1.0;
    int steps = 1024;
    int max_moment_order = 4;
    int m_max = 4;
    double tail_tolerance = 1e-12;
    std::filesystem::path output_dir = "kerr_out";
    PathMode path_mode = PathMode::both;
};

struct ParsedArgs {
    RunConfig config;
    bool help_requested = false;
    std::string help_text;
};

/// `args` excludes the program name. Flags override values from an optional
/// `--config FILE` of key=value lines, which override the defaults.
/// Throws ConfigError naming the offending token.
ParsedArgs parse_config(std::span<const std::string> args);

/// Throws ConfigError if a field is outside its valid range.
void validate(const RunConfig& config);

struct SeriesRow {
    StatisticsRecord stats;
    std::vector<double> raw_x;  // <x^k>, k = 1..max_moment_order at index k - 1
    std::vector<double> raw_p;
};

struct MomentSeries {
    double t_rev = 0.0;
    std::vector<double> times;
    std::vector<double> t_over_trev;
    std::vector<SeriesRow> closed_form;  // empty unless requested
    std::vector<SeriesRow> oracle;       // empty unless requested
    std::vector<double> path_discrepancy;  // per row, only for PathMode::both

    /// The path that feeds series.csv and the summary.
    const std::vector<SeriesRow>& primary() const {
        return closed_form.empty() ? oracle : closed_form;
    }
};

/// |a - b| / max(|a|, |b|, 1e-2): at most 1e-8 exactly when the two values agree to
/// 1e-8 relative or 1e-10 absolute, whichever is looser.
double relative_discrepancy(double a, double b);

struct ScanSummary {
    double nu = 0.0;
    double t_rev = 0.0;
    double min_uncertainty_product = 0.0;
    double mean_x_plateau = 0.0;              // max |<x>| over order-1 quiet intervals
    double uncertainty_plateau_deviation = 0.0;  // max |dx dp - (nu + 1/2)| / (nu + 1/2), order-2 quiet
    double kurtosis_plateau_deviation = 0.0;     // max |exkurt + 3/2| / (3/2), order-4 quiet, x and p
    bool bursts_available = false;
    std::string bursts_note;
    std::vector<BurstReport> bursts;  // orders 1..4: mean_x, dx dp, skew_sq_x, exkurt_x
    bool has_path_discrepancy = false;
    double max_path_discrepancy = 0.0;
};

MomentSeries compute_series(const RunConfig& config);
ScanSummary summarize(const RunConfig& config, const MomentSeries& series);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Writes series.csv, phase_xp.csv, phase_dxdp.csv, phase_skew.csv, phase_kurt.csv,
/// summary.txt and, for PathMode::both, path_diff.csv.
void write_outputs(const RunConfig& config, const MomentSeries& series,
                   const ScanSummary& summary);

struct ScanResult {
    MomentSeries series;
    ScanSummary summary;
};

ScanResult run_scan(const RunConfig& config);

}  // namespace kerr
