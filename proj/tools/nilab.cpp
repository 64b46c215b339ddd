// nilab — experiment runner for the skew-product laboratory.
//
// Subcommands cover the full pipeline: sieve, cf, classify, split, coboundary,
// conj-check, omega-check, orbit-oracle, hua, correlate, lemma43, grid-shadow,
// complexity-scan, distal-probe. Every run is reproducible from (config, seed);
// outputs are CSV (RFC 4180, 17 significant digits) or JSON, with optional
// single-series SVG charts.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "nilab/arith.hpp"
#include "nilab/complexity.hpp"
#include "nilab/flows.hpp"
#include "nilab/json_io.hpp"
#include "nilab/observables.hpp"
#include "nilab/periodic.hpp"
#include "nilab/reports.hpp"

using namespace nilab;
using nlohmann::json;

namespace {

// Deferred output: nothing touches the filesystem until a run succeeds, and
// each file is written to a temp path and renamed, so failures leave no
// partial outputs behind.
class OutputSink {
public:
    void stage(const std::string& path, std::string content) {
        staged_.emplace_back(path, std::move(content));
    }
    void stage_or_print(const std::string& path, std::string content) {
        if (path.empty())
            std::cout << content;
        else
            stage(path, std::move(content));
    }
    void commit() {
        for (const auto& [path, content] : staged_) {
            const std::string tmp = path + ".tmp";
            {
                std::ofstream os(tmp, std::ios::binary);
                if (!os) throw std::runtime_error("cannot open output file " + tmp);
                os << content;
            }
            std::filesystem::rename(tmp, path);
        }
        staged_.clear();
    }

private:
    std::vector<std::pair<std::string, std::string>> staged_;
};

struct GlobalOpts {
    std::string config_path;
    std::string out;
    std::string format = "json";
    std::string svg;
    std::uint64_t seed = 1;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    json j;
    is >> j;
    return j;
}

// CLI flag wins; otherwise the config key; otherwise the built-in default.
template <class T>
T pick(const CLI::Option* opt, const T& flag_value, const json& cfg, const char* key,
       const T& fallback) {
    if (opt != nullptr && opt->count() > 0) return flag_value;
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
}

arith::AlphaSpec alpha_from_cfg(const json& cfg, const std::string& flag) {
    if (!flag.empty()) return json_io::alpha_from_string(flag);
    if (cfg.contains("alpha")) return json_io::alpha_from_json(cfg.at("alpha"));
    throw std::invalid_argument("no alpha given (use --alpha or the config)");
}

periodic::PeriodicFunction function_from_cfg(const json& cfg, const char* key,
                                             const std::string& flag,
                                             const std::string& fallback_preset) {
    if (!flag.empty()) {
        if (flag.front() == '{' || flag.front() == '[')
            return json_io::periodic_from_json_or_preset(json::parse(flag));
        return json_io::periodic_from_json_or_preset(json(flag));
    }
    if (cfg.contains(key)) return json_io::periodic_from_json_or_preset(cfg.at(key));
    return json_io::periodic_from_json_or_preset(json(fallback_preset));
}

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

arith::MobiusTable table_for(const std::string& table_path, long long N) {
    if (!table_path.empty()) {
        auto table = arith::load_mobius(table_path);
        if (table.limit < N)
            throw std::invalid_argument("table " + table_path + " only covers N <= " +
                                        std::to_string(table.limit));
        return table;
    }
    return arith::mobius_sieve(N);
}

heis::PhasePoint seeded_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(rng), {{u(rng), u(rng), u(rng)}}};
}

// Branch selection for the section-4 pipeline: with a nonempty sharp set the
// resonant construction applies, otherwise the finite-Q# branch.
flows::Theorem2Pipeline build_pipeline(const arith::AlphaSpec& alpha, double k,
                                       const periodic::PeriodicFunction& phi,
                                       const periodic::PeriodicFunction& psi, double B,
                                       int cf_terms, const std::string& branch) {
    if (branch == "finite") return flows::build_finite_branch(alpha, k, phi, psi, cf_terms);
    if (branch == "resonant")
        return flows::build_theorem2_pipeline(alpha, k, phi, psi, B, cf_terms);
    const auto cf = arith::cf_expand(alpha, arith::CfStop{cf_terms, std::nullopt});
    const auto cls = arith::classify_denominators(cf, B);
    if (cls.sharp_ranges.empty()) return flows::build_finite_branch(alpha, k, phi, psi, cf_terms);
    return flows::build_theorem2_pipeline(alpha, k, phi, psi, B, cf_terms);
}

int run_sieve(const GlobalOpts& g, const json& cfg, long long N, const CLI::Option* n_opt,
              long long n_flag) {
    N = pick(n_opt, n_flag, cfg, "N", N);
    const auto table = arith::mobius_sieve(N);
    OutputSink sink;
    if (!g.out.empty()) {
        arith::save_mobius(table, g.out + ".tmp");
        std::filesystem::rename(g.out + ".tmp", g.out);
    }
    const long long mert = arith::mertens(table, N);
    if (g.format == "csv") {
        std::string csv = report::csv_row({"N", "mertens"});
        csv += report::csv_row({std::to_string(N), std::to_string(mert)});
        std::cout << csv;
    } else {
        std::cout << json{{"N", N}, {"mertens", mert}}.dump(2) << "\n";
    }
    sink.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for skew products on T x Heisenberg nilmanifold"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file")->configurable(false);
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--out", g.out, "output path (binary table for sieve)");
    app.add_option("--format", g.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--svg", g.svg, "write an SVG line chart here");

    // shared per-command overrides
    long long N = 1000000;
    std::string alpha_flag;
    double B = 3.0;
    double epsilon = 0.1;
    double k = 2.0;
    long long n_steps = 10000;
    std::string phi_flag, psi_flag, f_flag;
    std::string spec_flag, observable_flag = "";
    std::string table_path;
    std::string checkpoints_flag = "1000,10000,100000,1000000";
    int cf_terms = 64;
    double tol = 0.0;
    std::string branch = "auto";
    int trunc = obs::kDefaultTrunc;

    auto* sieve = app.add_subcommand("sieve", "Mobius sieve; --out writes the binary table");
    auto* sieve_n = sieve->add_option("--N", N, "sieve limit");

    auto* cf = app.add_subcommand("cf", "continued fraction expansion of alpha");
    cf->add_option("--alpha", alpha_flag, "alpha: 'p/q', 'golden', '0.123', '[a1,a2,...]'");
    int max_terms = 64;
    long long max_q = 0;
    cf->add_option("--max-terms", max_terms);
    cf->add_option("--max-q", max_q);

    auto* classify = app.add_subcommand("classify", "Q-sharp/Q-flat classification");
    classify->add_option("--alpha", alpha_flag);
    classify->add_option("--B", B);
    classify->add_option("--max-terms", max_terms);

    auto* split = app.add_subcommand("split", "resonant/non-resonant split of a function");
    split->add_option("--alpha", alpha_flag);
    split->add_option("--B", B);
    split->add_option("--f", f_flag, "function JSON or preset (cos, sin, cos2)");
    split->add_option("--max-terms", max_terms);

    auto* cob = app.add_subcommand("coboundary", "solve g(t+a)-g(t) = f2(t)");
    cob->add_option("--alpha", alpha_flag);
    cob->add_option("--B", B);
    cob->add_option("--f", f_flag);
    cob->add_option("--max-terms", max_terms);
    auto* cob_tol = cob->add_option("--tol", tol, "residual gate (default 1e-9)");

    auto* conj = app.add_subcommand("conj-check", "T1 = R^-1 T R residual");
    conj->add_option("--alpha", alpha_flag);
    conj->add_option("--B", B);
    conj->add_option("--k", k);
    conj->add_option("--phi", phi_flag);
    conj->add_option("--psi", psi_flag);
    conj->add_option("--branch", branch)->check(CLI::IsMember({"auto", "resonant", "finite"}));
    long long samples = 1000;
    conj->add_option("--samples", samples);
    auto* conj_tol = conj->add_option("--tol", tol);

    auto* omega = app.add_subcommand("omega-check", "omega simplification residual");
    omega->add_option("--alpha", alpha_flag);
    omega->add_option("--B", B);
    omega->add_option("--k", k);
    omega->add_option("--phi", phi_flag);
    omega->add_option("--psi", psi_flag);
    omega->add_option("--branch", branch)->check(CLI::IsMember({"auto", "resonant", "finite"}));
    auto* omega_tol = omega->add_option("--tol", tol);

    auto* oracle = app.add_subcommand("orbit-oracle", "closed Birkhoff form vs iteration");
    oracle->add_option("--alpha", alpha_flag, "rational alpha p/q");
    auto* oracle_n = oracle->add_option("--n", n_steps);
    int modes = 8;
    oracle->add_option("--modes", modes);
    auto* oracle_tol = oracle->add_option("--tol", tol);

    auto* hua = app.add_subcommand("hua", "Mobius-twisted polynomial exponential sum");
    std::string coeffs_flag = "1.4142135623730951,0,0";
    hua->add_option("--coeffs", coeffs_flag, "alpha_d,...,alpha_0");
    long long hua_a = 0, hua_q = 1;
    hua->add_option("--a", hua_a);
    hua->add_option("--q", hua_q);
    auto* hua_n = hua->add_option("--N", N);
    hua->add_option("--checkpoints", checkpoints_flag);
    hua->add_option("--table", table_path, "mu table (binary); sieved inline if absent");

    auto* corr = app.add_subcommand("correlate", "partial Mobius averages along an orbit");
    corr->add_option("--spec", spec_flag, "skew product JSON (or @file)");
    corr->add_option("--observable", observable_flag, "observable JSON or preset");
    auto* corr_n = corr->add_option("--N", N);
    corr->add_option("--checkpoints", checkpoints_flag);
    corr->add_option("--table", table_path);
    corr->add_option("--trunc", trunc);
    bool unit_weights = false;
    corr->add_flag("--unit-weights", unit_weights, "replace mu by 1 (diagnostic)");

    auto* lemma43 = app.add_subcommand("lemma43", "resonant Birkhoff decay across sharp q_i");
    lemma43->add_option("--alpha", alpha_flag);
    lemma43->add_option("--B", B);
    lemma43->add_option("--phi", phi_flag, "resonant-supported function (default: synthetic)");
    lemma43->add_option("--max-terms", max_terms);
    double slack = 2.0;
    lemma43->add_option("--slack", slack);

    auto* shadow = app.add_subcommand("grid-shadow", "F(i) shadowing of T1 orbits");
    shadow->add_option("--alpha", alpha_flag);
    shadow->add_option("--B", B);
    shadow->add_option("--k", k);
    shadow->add_option("--phi", phi_flag);
    shadow->add_option("--psi", psi_flag);
    long long q_i = 0, inv_eps = 10, big_l = 0, cap = complexity::kDefaultGridCap;
    shadow->add_option("--qi", q_i, "sharp denominator (default: first sharp)");
    shadow->add_option("--inv-epsilon", inv_eps);
    shadow->add_option("--L", big_l, "grid scale (default: Lipschitz bound rounded up)");
    shadow->add_option("--cap", cap);
    shadow->add_option("--samples", samples);

    auto* scan = app.add_subcommand("complexity-scan", "covering numbers s_n over an n-list");
    scan->add_option("--spec", spec_flag);
    std::string ns_flag = "1,10,100";
    std::string cloud_kind = "haar";
    long long cloud_count = 2000;
    scan->add_option("--ns", ns_flag);
    auto* scan_eps = scan->add_option("--epsilon", epsilon);
    scan->add_option("--cloud", cloud_kind)->check(CLI::IsMember({"haar", "orbit"}));
    scan->add_option("--count", cloud_count);
    long long gap = 97, burn_in = 1000;
    scan->add_option("--gap", gap);
    scan->add_option("--burn-in", burn_in);

    auto* distal = app.add_subcommand("distal-probe", "minimal orbit-pair separation");
    distal->add_option("--spec", spec_flag);
    auto* distal_n = distal->add_option("--n", n_steps);

    // global flags remain usable after the subcommand name
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(g.config_path);
        OutputSink sink;

        if (sieve->parsed()) return run_sieve(g, cfg, 1000000, sieve_n, N);

        if (cf->parsed()) {
            const auto alpha = alpha_from_cfg(cfg, alpha_flag);
            arith::CfStop stop;
            stop.max_terms = max_terms;
            if (max_q > 0) stop.max_q = max_q;
            const auto expansion = arith::cf_expand(alpha, stop);
            if (g.format == "csv") {
                std::string csv = report::csv_row({"i", "a_i", "l_i", "q_i"});
                for (int i = 0; i < expansion.terms(); ++i)
                    csv += report::csv_row({std::to_string(i + 1), std::to_string(expansion.a[i]),
                                            std::to_string(expansion.convergents[i].l),
                                            std::to_string(expansion.convergents[i].q)});
                sink.stage_or_print(g.out, csv);
            } else {
                sink.stage_or_print(g.out, json_io::to_json(expansion).dump(2) + "\n");
            }
            sink.commit();
            return 0;
        }

        if (classify->parsed()) {
            const auto alpha = alpha_from_cfg(cfg, alpha_flag);
            const auto expansion = arith::cf_expand(alpha, arith::CfStop{max_terms, std::nullopt});
            const auto cls = arith::classify_denominators(expansion, B);
            sink.stage_or_print(g.out, json_io::to_json(cls).dump(2) + "\n");
            sink.commit();
            return 0;
        }

        if (split->parsed()) {
            const auto alpha = alpha_from_cfg(cfg, alpha_flag);
            const auto f = function_from_cfg(cfg, "f", f_flag, "cos");
            const auto expansion = arith::cf_expand(alpha, arith::CfStop{max_terms, std::nullopt});
            const auto result = periodic::split_resonant(f, expansion, B);
            sink.stage_or_print(g.out, json{{"B", B},
                                            {"part1", json_io::to_json(result.part1)},
                                            {"part2", json_io::to_json(result.part2)}}
                                               .dump(2) +
                                           "\n");
            sink.commit();
            return 0;
        }

        if (cob->parsed()) {
            const auto alpha = alpha_from_cfg(cfg, alpha_flag);
            const auto f = function_from_cfg(cfg, "f", f_flag, "cos");
            const auto expansion = arith::cf_expand(alpha, arith::CfStop{max_terms, std::nullopt});
            const auto result = periodic::split_resonant(f, expansion, B);
            const auto solution = periodic::solve_coboundary(result.part2, alpha);
            double residual = 0.0;
            const double a = alpha.value();
            for (int i = 0; i < (1 << 10); ++i) {
                const double t = i / 1024.0;
                residual = std::max(residual,
                                    std::abs(solution.eval_complex(frac(t + a)) -
                                             solution.eval_complex(t) - result.part2.eval_complex(t)));
            }
            const double gate = pick(cob_tol, tol, cfg, "tol", 1e-9);
            sink.stage_or_print(g.out, json{{"g", json_io::to_json(solution)},
                                            {"residual", residual},
                                            {"tol", gate}}
                                               .dump(2) +
                                           "\n");
            sink.commit();
            return residual < gate ? 0 : 1;
        }

        if (conj->parsed() || omega->parsed()) {
            const auto alpha = alpha_from_cfg(cfg, alpha_flag);
            const auto phi = function_from_cfg(cfg, "phi", phi_flag, "cos");
            const auto psi = function_from_cfg(cfg, "psi", psi_flag, "sin");
            const double kk = pick(conj->parsed() ? conj->get_option("--k") : omega->get_option("--k"),
                                   k, cfg, "k", 2.0);
            const auto pipe = build_pipeline(alpha, kk, phi, psi, B, cf_terms,
                                             pick<std::string>(nullptr, "", cfg, "branch", branch));
            if (conj->parsed()) {
                std::mt19937_64 rng(g.seed);
                std::vector<heis::PhasePoint> pts;
                pts.reserve(static_cast<std::size_t>(samples));
                for (long long i = 0; i < samples; ++i) pts.push_back(seeded_point(rng));
                const double residual =
                    flows::conjugation_residual(pipe.spec_T, pipe.R, pipe.spec_T1, pts);
                const double gate = pick(conj_tol, tol, cfg, "tol", 1e-9);
                sink.stage_or_print(g.out, json{{"residual", residual},
                                                {"samples", samples},
                                                {"tol", gate}}
                                                   .dump(2) +
                                               "\n");
                sink.commit();
                return residual < gate ? 0 : 1;
            }
            const double residual = flows::omega_identity_residual(pipe, 1 << 10);
            const double gate = pick(omega_tol, tol, cfg, "tol", 1e-10);
            sink.stage_or_print(g.out,
                                json{{"residual", residual}, {"tol", gate}}.dump(2) + "\n");
            sink.commit();
            return residual < gate ? 0 : 1;
        }

        if (oracle->parsed()) {
            auto alpha = alpha_flag.empty() && !cfg.contains("alpha")
                             ? arith::AlphaSpec::rational(3, 7)
                             : alpha_from_cfg(cfg, alpha_flag);
            std::mt19937_64 rng(g.seed);
            const auto spec = flows::SkewProductSpec::make_S(
                alpha, periodic::random_real_trig(modes, rng),
                periodic::random_real_trig(modes, rng), periodic::random_real_trig(modes, rng));
            const heis::PhasePoint start = seeded_point(rng);
            const long long nmax = pick(oracle_n, n_steps, cfg, "n", 10000LL);
            flows::OrbitIterator it(spec, start);
            flows::BirkhoffAccumulator acc(spec, start.t);
            double worst = 0.0;
            for (long long n = 1; n <= nmax; ++n) {
                it.advance();
                acc.advance();
                const auto gelem = flows::state_from_sums(start.coset.rep, acc.current());
                worst = std::max(worst, heis::phase_dist({it.current().t,
                                                          heis::canonical_rep(gelem).point},
                                                         it.current()));
            }
            const double gate = pick(oracle_tol, tol, cfg, "tol", 1e-6);
            sink.stage_or_print(g.out, json{{"max_deviation", worst},
                                            {"n", nmax},
                                            {"tol", gate}}
                                               .dump(2) +
                                           "\n");
            sink.commit();
            return worst <= gate ? 0 : 1;
        }

        if (hua->parsed()) {
            std::vector<double> coeffs;
            for (const auto& part : parse_ll_list("0")) (void)part;  // placeholder removal
            {
                std::stringstream ss(coeffs_flag);
                std::string item;
                while (std::getline(ss, item, ',')) coeffs.push_back(std::stod(item));
            }
            const long long nmax = pick(hua_n, N, cfg, "N", 1000000LL);
            const auto table = table_for(table_path, nmax);
            std::string csv = report::csv_row({"N", "re", "im", "abs", "abs_over_N"});
            json rows = json::array();
            for (long long cp : parse_ll_list(checkpoints_flag)) {
                if (cp > nmax) continue;
                const cplx s = arith::hua_sum(coeffs, hua_a, hua_q, cp, table);
                csv += report::csv_row({std::to_string(cp), report::format_double(s.real()),
                                        report::format_double(s.imag()),
                                        report::format_double(std::abs(s)),
                                        report::format_double(std::abs(s) / cp)});
                rows.push_back({{"N", cp},
                                {"re", s.real()},
                                {"im", s.imag()},
                                {"abs", std::abs(s)},
                                {"abs_over_N", std::abs(s) / cp}});
            }
            sink.stage_or_print(g.out, g.format == "csv" ? csv : rows.dump(2) + "\n");
            sink.commit();
            return 0;
        }

        if (corr->parsed()) {
            json spec_json;
            if (!spec_flag.empty()) {
                spec_json = spec_flag.front() == '@'
                                ? load_config(spec_flag.substr(1))
                                : json::parse(spec_flag);
            } else if (cfg.contains("spec")) {
                spec_json = cfg.at("spec");
            } else {
                throw std::invalid_argument("correlate needs --spec or a config spec block");
            }
            const auto spec = json_io::spec_from_json(spec_json);
            const auto f = observable_flag.empty()
                               ? (cfg.contains("observable")
                                      ? json_io::observable_from_json_or_preset(cfg.at("observable"))
                                      : obs::ObservableSpec::typical())
                               : json_io::observable_from_json_or_preset(
                                     observable_flag.front() == '{' ? json::parse(observable_flag)
                                                                    : json(observable_flag));
            const long long nmax = pick(corr_n, N, cfg, "N", 1000000LL);
            auto cps = parse_ll_list(pick(corr->get_option("--checkpoints"), checkpoints_flag,
                                          cfg, "checkpoints", checkpoints_flag));
            std::erase_if(cps, [&](long long c) { return c > nmax; });
            const auto table = table_for(table_path, nmax);
            std::mt19937_64 rng(g.seed);
            const heis::PhasePoint start =
                cfg.contains("point") ? json_io::phase_point_from_json(cfg.at("point"))
                                      : seeded_point(rng);
            const auto report_data =
                cli::correlate(spec, f, start, nmax, cps, table, trunc, unit_weights);
            if (!g.svg.empty()) {
                report::SvgSeries series;
                for (std::size_t i = 0; i < report_data.checkpoints.size(); ++i) {
                    series.x.push_back(static_cast<double>(report_data.checkpoints[i]));
                    series.y.push_back(std::max(report_data.magnitudes[i], 1e-300));
                }
                series.label = "|A(N)|";
                sink.stage(g.svg, report::svg_line_chart({series}, true, "Mobius correlation"));
            }
            if (g.format == "csv") {
                sink.stage_or_print(g.out, cli::correlation_csv(report_data));
            } else {
                json rows = json::array();
                for (std::size_t i = 0; i < report_data.checkpoints.size(); ++i)
                    rows.push_back({{"N", report_data.checkpoints[i]},
                                    {"re", report_data.averages[i].real()},
                                    {"im", report_data.averages[i].imag()},
                                    {"abs", report_data.magnitudes[i]}});
                sink.stage_or_print(g.out, json{{"averages", rows},
                                                {"observable_sup", report_data.observable_sup},
                                                {"truncation_warning", report_data.truncation_warning},
                                                {"unit_weights", report_data.unit_weights}}
                                                   .dump(2) +
                                               "\n");
            }
            sink.commit();
            return 0;
        }

        if (lemma43->parsed()) {
            const auto alpha = alpha_flag.empty() && !cfg.contains("alpha")
                                   ? arith::AlphaSpec::partial_quotients({2, 1, 9, 841, 595040846})
                                   : alpha_from_cfg(cfg, alpha_flag);
            const auto expansion = arith::cf_expand(alpha, arith::CfStop{max_terms, std::nullopt});
            const auto cls = arith::classify_denominators(expansion, B);
            periodic::PeriodicFunction phi;
            if (!phi_flag.empty() || cfg.contains("phi")) {
                phi = function_from_cfg(cfg, "phi", phi_flag, "cos");
            } else {
                // synthetic resonant data with the smooth decay m^{-2B}
                std::vector<std::pair<int, cplx>> coeffs;
                for (const auto& range : cls.sharp_ranges) {
                    for (long long m = range.q; m < std::min<long long>(range.q_next, 4 * range.q);
                         m += range.q) {
                        if (m > 1000000) break;
                        const double c = std::pow(static_cast<double>(m), -2.0 * B);
                        coeffs.emplace_back(static_cast<int>(m), cplx{c, 0.0});
                        coeffs.emplace_back(static_cast<int>(-m), cplx{c, 0.0});
                    }
                }
                phi = periodic::PeriodicFunction::from_coeffs(std::move(coeffs), true);
            }
            const auto pipe = flows::build_theorem2_pipeline(alpha, 1.0, phi,
                                                             periodic::PeriodicFunction::zero(), B,
                                                             max_terms);
            const auto rows = flows::lemma43_scan(pipe, 1 << 10);
            if (rows.empty()) {
                sink.stage_or_print(g.out,
                                    json{{"rows", json::array()},
                                         {"note", "no sharp denominators within the expansion"}}
                                            .dump(2) +
                                        "\n");
                sink.commit();
                return 0;
            }
            const double C = rows.front().sup_phi *
                             std::pow(static_cast<double>(rows.front().qi), B - 1.0);
            bool pass = true;
            json jrows = json::array();
            for (const auto& row : rows) {
                const double bound =
                    slack * C * std::pow(static_cast<double>(row.qi), -(B - 1.0));
                pass = pass && row.sup_phi <= bound;
                jrows.push_back({{"q_i", row.qi},
                                 {"sup_phi", row.sup_phi},
                                 {"bound", bound},
                                 {"sup_eta", row.sup_eta},
                                 {"sup_psi", row.sup_psi}});
            }
            sink.stage_or_print(g.out,
                                json{{"C", C}, {"slack", slack}, {"rows", jrows}, {"pass", pass}}
                                        .dump(2) +
                                    "\n");
            sink.commit();
            return pass ? 0 : 1;
        }

        if (shadow->parsed()) {
            const auto alpha = alpha_flag.empty() && !cfg.contains("alpha")
                                   ? arith::AlphaSpec::partial_quotients({2, 4, 3, 5, 2})
                                   : alpha_from_cfg(cfg, alpha_flag);
            const auto phi = function_from_cfg(cfg, "phi", phi_flag, "cos");
            const auto psi = function_from_cfg(cfg, "psi", psi_flag, "sin");
            const double kk = pick(shadow->get_option("--k"), k, cfg, "k", 2.0);
            const auto pipe = flows::build_theorem2_pipeline(alpha, kk, phi, psi, B, cf_terms);
            long long qi = q_i;
            if (qi == 0) {
                if (pipe.cls.sharp_ranges.empty())
                    throw std::runtime_error("no sharp q_i available: finite branch");
                qi = pipe.cls.sharp_ranges.front().q;
            }
            const auto rows = flows::lemma43_scan(pipe, 1 << 8);
            const double C1 =
                rows.empty() ? 0.0
                             : rows.front().sup_phi *
                                   std::pow(static_cast<double>(rows.front().qi), B - 1.0);
            long long L = big_l;
            if (L == 0) {
                const double lip = std::max({pipe.spec_T1.phi1().lipschitz_bound(),
                                             pipe.spec_T1.eta1().lipschitz_bound(),
                                             pipe.spec_T1.psi().lipschitz_bound()});
                L = static_cast<long long>(std::ceil(std::max(lip, 1.0)));
            }
            std::mt19937_64 rng(g.seed);
            std::vector<heis::PhasePoint> pts;
            for (long long i = 0; i < samples; ++i) pts.push_back(seeded_point(rng));
            const auto report_data =
                complexity::grid_shadowing_check(pipe.spec_T1, qi, B, inv_eps, L, pts, C1, cap);
            sink.stage_or_print(
                g.out, json{{"worst", report_data.worst},
                            {"bound", report_data.bound},
                            {"n_i", report_data.n_i},
                            {"grid_cardinality", report_data.grid_cardinality},
                            {"C1", report_data.c1},
                            {"C2", report_data.c2},
                            {"c1c2_check", report_data.c1c2_check},
                            {"epsilon_inverse_check", report_data.epsilon_inverse_check},
                            {"pass", report_data.pass}}
                           .dump(2) +
                       "\n");
            sink.commit();
            return report_data.pass ? 0 : 1;
        }

        if (scan->parsed()) {
            json spec_json;
            if (!spec_flag.empty())
                spec_json = spec_flag.front() == '@' ? load_config(spec_flag.substr(1))
                                                     : json::parse(spec_flag);
            else if (cfg.contains("spec"))
                spec_json = cfg.at("spec");
            else
                throw std::invalid_argument("complexity-scan needs --spec or a config spec block");
            const auto spec = json_io::spec_from_json(spec_json);
            const auto ns = parse_ll_list(ns_flag);
            const double eps = pick(scan_eps, epsilon, cfg, "epsilon", 0.1);
            const long long nmax = *std::max_element(ns.begin(), ns.end());
            complexity::SampleCloud cloud;
            if (cloud_kind == "haar") {
                cloud = complexity::make_haar_cloud(spec, static_cast<std::size_t>(cloud_count),
                                                    nmax, g.seed);
            } else {
                std::mt19937_64 rng(g.seed);
                cloud = complexity::make_orbit_cloud(spec, seeded_point(rng),
                                                     static_cast<std::size_t>(cloud_count), gap,
                                                     nmax, burn_in);
            }
            const auto result = complexity::complexity_scan(cloud, ns, eps);
            if (!g.svg.empty()) {
                report::SvgSeries series;
                for (const auto& row : result.rows) {
                    series.x.push_back(static_cast<double>(row.n));
                    series.y.push_back(static_cast<double>(row.s_n));
                }
                series.label = "s_n";
                sink.stage(g.svg, report::svg_line_chart({series}, true, "covering numbers"));
            }
            if (g.format == "csv") {
                sink.stage_or_print(g.out, cli::covering_csv(result.rows));
            } else {
                json jrows = json::array();
                for (const auto& row : result.rows)
                    jrows.push_back({{"n", row.n},
                                     {"epsilon", row.epsilon},
                                     {"s_n", row.s_n},
                                     {"covered_mass", row.covered_mass},
                                     {"seconds", row.seconds}});
                sink.stage_or_print(g.out, json{{"rows", jrows},
                                                {"slope", result.slope},
                                                {"intercept", result.intercept},
                                                {"max_residual", result.max_residual},
                                                {"provenance", cloud.provenance}}
                                                   .dump(2) +
                                               "\n");
            }
            sink.commit();
            return 0;
        }

        if (distal->parsed()) {
            json spec_json;
            if (!spec_flag.empty())
                spec_json = spec_flag.front() == '@' ? load_config(spec_flag.substr(1))
                                                     : json::parse(spec_flag);
            else if (cfg.contains("spec"))
                spec_json = cfg.at("spec");
            else
                throw std::invalid_argument("distal-probe needs --spec or a config spec block");
            const auto spec = json_io::spec_from_json(spec_json);
            std::mt19937_64 rng(g.seed);
            heis::PhasePoint p1 = seeded_point(rng), p2 = seeded_point(rng);
            if (cfg.contains("point1")) p1 = json_io::phase_point_from_json(cfg.at("point1"));
            if (cfg.contains("point2")) p2 = json_io::phase_point_from_json(cfg.at("point2"));
            const long long nmax = pick(distal_n, n_steps, cfg, "n", 10000LL);
            flows::OrbitIterator it1(spec, p1), it2(spec, p2);
            double min_sep = heis::phase_dist(it1.current(), it2.current());
            long long argmin = 0;
            for (long long n = 1; n <= nmax; ++n) {
                it1.advance();
                it2.advance();
                const double d = heis::phase_dist(it1.current(), it2.current());
                if (d < min_sep) {
                    min_sep = d;
                    argmin = n;
                }
            }
            sink.stage_or_print(g.out, json{{"min_separation", min_sep},
                                            {"argmin_n", argmin},
                                            {"n", nmax},
                                            {"positive", min_sep > 0.0}}
                                               .dump(2) +
                                           "\n");
            sink.commit();
            return min_sep > 0.0 ? 0 : 1;
        }

        std::cerr << "no subcommand dispatched\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
