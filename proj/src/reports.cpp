#include "nilab/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nilab::report {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += csv_field(fields[i]);
    }
    row += "\r\n";
    return row;
}

namespace {

double tick_transform(double v, bool logscale) { return logscale ? std::log10(v) : v; }

}  // namespace

std::string svg_line_chart(const std::vector<SvgSeries>& series, bool loglog,
                           const std::string& title, int width, int height) {
    const int margin = 48;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = tick_transform(s.x[i], loglog);
            const double y = tick_transform(s.y[i], loglog);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-12) { xmax = xmin + 1; }
    if (ymax - ymin < 1e-12) { ymax = ymin + 1; }

    auto px = [&](double x) {
        return margin + (tick_transform(x, loglog) - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto py = [&](double y) {
        return height - margin -
               (tick_transform(y, loglog) - ymin) / (ymax - ymin) * (height - 2 * margin);
    };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << (loglog ? " (log-log)" : "") << "</text>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "<polyline fill=\"none\" stroke=\"" << kColors[s % 4] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            svg << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
        svg << "\"/>\n";
        if (!series[s].label.empty())
            svg << "<text x=\"" << width - margin << "\" y=\"" << margin + 16 * (s + 1)
                << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << kColors[s % 4] << "\">"
                << series[s].label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace nilab::report

namespace nilab::cli {

CorrelationReport correlate(const flows::SkewProductSpec& spec, const obs::ObservableSpec& f,
                            const heis::PhasePoint& p0, long long N,
                            std::vector<long long> checkpoints, const arith::MobiusTable& table,
                            int trunc, bool unit_weights) {
    if (N > table.limit)
        throw std::out_of_range("correlate: N exceeds the Mobius table limit");
    std::sort(checkpoints.begin(), checkpoints.end());
    for (long long c : checkpoints)
        if (c < 1 || c > N)
            throw std::invalid_argument("correlate: checkpoints must lie in [1, N]");

    CorrelationReport report;
    report.unit_weights = unit_weights;
    report.observable_sup = obs::observable_sup_bound(f, trunc);
    report.truncation_tail = obs::psi_tail_bound(trunc);
    report.truncation_warning = report.truncation_tail > 1e-8;

    flows::OrbitIterator it(spec, p0);
    KahanSumComplex acc;
    std::size_t next_cp = 0;
    for (long long n = 1; n <= N && next_cp < checkpoints.size(); ++n) {
        it.advance();
        const int mu = unit_weights ? 1 : table.mu(n);
        if (mu != 0) acc.add(static_cast<double>(mu) * obs::eval_observable(f, it.current(), trunc));
        if (n == checkpoints[next_cp]) {
            const cplx sum = acc.value();
            const cplx avg = sum / static_cast<double>(n);
            report.checkpoints.push_back(n);
            report.partial_sums.push_back(sum);
            report.averages.push_back(avg);
            report.magnitudes.push_back(std::abs(avg));
            ++next_cp;
        }
    }
    return report;
}

std::string correlation_csv(const CorrelationReport& report) {
    using report::csv_row;
    using report::format_double;
    std::string out = csv_row({"N", "sum_re", "sum_im", "avg_re", "avg_im", "avg_abs"});
    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
        out += csv_row({std::to_string(report.checkpoints[i]),
                        format_double(report.partial_sums[i].real()),
                        format_double(report.partial_sums[i].imag()),
                        format_double(report.averages[i].real()),
                        format_double(report.averages[i].imag()),
                        format_double(report.magnitudes[i])});
    }
    return out;
}

std::string covering_csv(const std::vector<complexity::CoveringReport>& rows) {
    using report::csv_row;
    using report::format_double;
    std::string out = csv_row({"n", "epsilon", "s_n", "covered_mass", "seconds"});
    for (const auto& r : rows) {
        out += csv_row({std::to_string(r.n), format_double(r.epsilon), std::to_string(r.s_n),
                        format_double(r.covered_mass), format_double(r.seconds)});
    }
    return out;
}

}  // namespace nilab::cli
