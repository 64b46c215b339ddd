#pragma once

// Report emission: RFC-4180 CSV with 17-significant-digit doubles, minimal
// hand-rolled SVG line charts, and the Mobius correlation experiment.

#include <string>
#include <vector>

#include "nilab/arith.hpp"
#include "nilab/complexity.hpp"
#include "nilab/flows.hpp"
#include "nilab/observables.hpp"

namespace nilab::report {

/// %.17g — round-trip exact for doubles, "." decimal separator.
std::string format_double(double v);

/// RFC-4180: quote when the field contains a comma, quote or newline.
std::string csv_field(const std::string& raw);

std::string csv_row(const std::vector<std::string>& fields);

struct SvgSeries {
    std::vector<double> x, y;
    std::string label;
};

/// Single-series (or few-series) line chart; log-log when requested.
std::string svg_line_chart(const std::vector<SvgSeries>& series, bool loglog,
                           const std::string& title, int width = 640, int height = 420);

}  // namespace nilab::report

namespace nilab::cli {

/// Partial Mobius averages A(N_k) = N_k^{-1} sum_{n<=N_k} mu(n) f(T^n P0).
struct CorrelationReport {
    std::vector<long long> checkpoints;
    std::vector<cplx> partial_sums;  // sum at each checkpoint (A recomputable)
    std::vector<cplx> averages;
    std::vector<double> magnitudes;
    double observable_sup = 0.0;
    double truncation_tail = 0.0;
    bool truncation_warning = false;
    bool unit_weights = false;
};

/// Single orbit pass with compensated summation. With unit_weights the Mobius
/// weight is replaced by 1 (plain Birkhoff average, diagnostic only).
CorrelationReport correlate(const flows::SkewProductSpec& spec, const obs::ObservableSpec& f,
                            const heis::PhasePoint& p0, long long N,
                            std::vector<long long> checkpoints, const arith::MobiusTable& table,
                            int trunc = obs::kDefaultTrunc, bool unit_weights = false);

std::string correlation_csv(const CorrelationReport& report);
std::string covering_csv(const std::vector<complexity::CoveringReport>& rows);

}  // namespace nilab::cli
