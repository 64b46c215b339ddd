#include "nilab/json_io.hpp"

#include <sstream>

namespace nilab::json_io {

namespace {

const char* termination_name(arith::CfTermination t) {
    switch (t) {
        case arith::CfTermination::Complete: return "complete";
        case arith::CfTermination::StopRule: return "stop_rule";
        case arith::CfTermination::PrecisionExhausted: return "precision_exhausted";
        case arith::CfTermination::Overflow: return "overflow";
    }
    return "unknown";
}

}  // namespace

json to_json(const arith::ContinuedFraction& cf) {
    json conv = json::array();
    for (const auto& c : cf.convergents) conv.push_back(json::array({c.l, c.q}));
    json j{{"a", cf.a}, {"convergents", conv}, {"termination", termination_name(cf.termination)}};
    if (cf.period_start) {
        j["period_start"] = *cf.period_start;
        j["period_length"] = *cf.period_length;
    }
    return j;
}

json to_json(const arith::DenominatorClassification& cls) {
    return json{{"B", cls.B},
                {"sharp", cls.sharp},
                {"flat", cls.flat},
                {"ties", cls.ties},
                {"decidable_below", cls.decidable_below}};
}

json to_json(const heis::PhasePoint& p) {
    return json{{"t", p.t}, {"x", p.coset.rep.x}, {"y", p.coset.rep.y}, {"z", p.coset.rep.z}};
}

heis::PhasePoint phase_point_from_json(const json& j) {
    heis::PhasePoint p;
    p.t = frac(j.at("t").get<double>());
    const heis::HeisenbergElement g{j.at("x").get<double>(), j.at("y").get<double>(),
                                    j.at("z").get<double>()};
    p.coset = heis::canonical_rep(g).point;
    return p;
}

json to_json(const periodic::PeriodicFunction& f) {
    json coeffs = json::array();
    for (const auto& [m, c] : f.coeffs())
        coeffs.push_back(json::array({m, c.real(), c.imag()}));
    return json{{"real", f.real_valued()}, {"coeffs", coeffs}};
}

periodic::PeriodicFunction periodic_from_json(const json& j) {
    std::vector<std::pair<int, cplx>> coeffs;
    for (const auto& row : j.at("coeffs")) {
        if (!row.is_array() || row.size() != 3)
            throw std::invalid_argument("PeriodicFunction JSON: each coeff must be [m, re, im]");
        coeffs.emplace_back(row[0].get<int>(), cplx{row[1].get<double>(), row[2].get<double>()});
    }
    return periodic::PeriodicFunction::from_coeffs(std::move(coeffs),
                                                   j.value("real", true));
}

periodic::PeriodicFunction periodic_from_json_or_preset(const json& j) {
    using periodic::PeriodicFunction;
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "cos") return PeriodicFunction::cosine();
        if (name == "sin") return PeriodicFunction::sine();
        if (name == "cos2")
            return PeriodicFunction::from_coeffs(
                {{0, {0.5, 0.0}}, {2, {0.25, 0.0}}, {-2, {0.25, 0.0}}}, true);
        if (name == "zero") return PeriodicFunction::zero();
        if (name == "one") return PeriodicFunction::constant(1.0);
        throw std::invalid_argument("unknown periodic function preset '" + name + "'");
    }
    return periodic_from_json(j);
}

json to_json(const arith::AlphaSpec& alpha) {
    using Kind = arith::AlphaSpec::Kind;
    switch (alpha.kind()) {
        case Kind::Rational:
            return json{{"type", "rational"}, {"p", alpha.rat_p()}, {"q", alpha.rat_q()}};
        case Kind::QuadraticIrrational:
            return json{{"type", "quadratic"},
                        {"d", alpha.quad_d()},
                        {"p", alpha.rat_p()},
                        {"q", alpha.rat_q()}};
        case Kind::PartialQuotients:
            return json{{"type", "partial_quotients"}, {"a", alpha.given_quotients()}};
        case Kind::Decimal:
            return json{{"type", "decimal"},
                        {"p", alpha.rat_p()},
                        {"q", alpha.rat_q()},
                        {"precision", alpha.declared_precision()}};
    }
    throw std::logic_error("to_json: unknown AlphaSpec kind");
}

arith::AlphaSpec alpha_from_json(const json& j) {
    if (j.is_string()) return alpha_from_string(j.get<std::string>());
    const std::string type = j.at("type").get<std::string>();
    if (type == "rational")
        return arith::AlphaSpec::rational(j.at("p").get<long long>(), j.at("q").get<long long>());
    if (type == "quadratic")
        return arith::AlphaSpec::quadratic_irrational(
            j.at("d").get<long long>(), j.at("p").get<long long>(), j.at("q").get<long long>());
    if (type == "partial_quotients")
        return arith::AlphaSpec::partial_quotients(j.at("a").get<std::vector<long long>>());
    if (type == "decimal") {
        if (j.contains("value"))
            return arith::AlphaSpec::decimal(j.at("value").get<std::string>(),
                                             j.at("precision").get<double>());
        // round-trip form: exact numerator over a power of ten
        const long long p = j.at("p").get<long long>();
        const long long q = j.at("q").get<long long>();
        std::string digits = "0.";
        std::string frac_digits = std::to_string(p);
        std::size_t width = std::to_string(q).size() - 1;
        digits += std::string(width - frac_digits.size(), '0') + frac_digits;
        return arith::AlphaSpec::decimal(digits, j.at("precision").get<double>());
    }
    throw std::invalid_argument("alpha_from_json: unknown type '" + type + "'");
}

arith::AlphaSpec alpha_from_string(const std::string& s) {
    if (s == "golden") return arith::AlphaSpec::golden();
    if (s.find('/') != std::string::npos) {
        const auto pos = s.find('/');
        return arith::AlphaSpec::rational(std::stoll(s.substr(0, pos)),
                                          std::stoll(s.substr(pos + 1)));
    }
    if (!s.empty() && s.front() == '[') {
        std::vector<long long> terms;
        std::string body = s.substr(1, s.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) terms.push_back(std::stoll(item));
        return arith::AlphaSpec::partial_quotients(std::move(terms));
    }
    if (s.find('.') != std::string::npos) return arith::AlphaSpec::decimal(s, 1e-15);
    throw std::invalid_argument("alpha_from_string: cannot parse '" + s + "'");
}

json to_json(const flows::SkewProductSpec& spec) {
    using Kind = flows::SkewProductSpec::Kind;
    json j{{"alpha", to_json(spec.alpha())}};
    switch (spec.kind()) {
        case Kind::S:
            j["kind"] = "S";
            j["phi1"] = to_json(spec.phi1());
            j["phi2"] = to_json(spec.phi2());
            j["psi"] = to_json(spec.psi());
            break;
        case Kind::T:
            j["kind"] = "T";
            j["k"] = spec.k();
            j["phi"] = to_json(spec.phi1());
            j["psi"] = to_json(spec.psi());
            j["theorem2"] = spec.theorem2();
            break;
        case Kind::T1:
            j["kind"] = "T1";
            j["k"] = spec.k();
            j["phi1"] = to_json(spec.phi1());
            j["eta1"] = to_json(spec.eta1());
            j["psi1"] = to_json(spec.psi());
            break;
        case Kind::T1Tilde:
            j["kind"] = "T1~";
            j["c"] = spec.central_constant();
            break;
    }
    return j;
}

flows::SkewProductSpec spec_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    auto alpha = alpha_from_json(j.at("alpha"));
    if (kind == "S")
        return flows::SkewProductSpec::make_S(std::move(alpha),
                                              periodic_from_json_or_preset(j.at("phi1")),
                                              periodic_from_json_or_preset(j.at("phi2")),
                                              periodic_from_json_or_preset(j.at("psi")));
    if (kind == "T")
        return flows::SkewProductSpec::make_T(std::move(alpha), j.at("k").get<double>(),
                                              periodic_from_json_or_preset(j.at("phi")),
                                              periodic_from_json_or_preset(j.at("psi")),
                                              j.value("theorem2", false));
    if (kind == "T1")
        return flows::SkewProductSpec::make_T1(std::move(alpha), j.at("k").get<double>(),
                                               periodic_from_json_or_preset(j.at("phi1")),
                                               periodic_from_json_or_preset(j.at("eta1")),
                                               periodic_from_json_or_preset(j.at("psi1")));
    if (kind == "T1~" || kind == "T1tilde")
        return flows::SkewProductSpec::make_T1_tilde(std::move(alpha), j.at("c").get<double>());
    throw std::invalid_argument("spec_from_json: unknown kind '" + kind + "'");
}

namespace {

const char* variant_name(obs::PsiVariant v) {
    switch (v) {
        case obs::PsiVariant::Psi: return "psi";
        case obs::PsiVariant::PsiBar: return "psi_bar";
        case obs::PsiVariant::PsiStar: return "psi_star";
        case obs::PsiVariant::PsiStarBar: return "psi_star_bar";
    }
    return "psi";
}

obs::PsiVariant variant_from_name(const std::string& s) {
    if (s == "psi") return obs::PsiVariant::Psi;
    if (s == "psi_bar") return obs::PsiVariant::PsiBar;
    if (s == "psi_star") return obs::PsiVariant::PsiStar;
    if (s == "psi_star_bar") return obs::PsiVariant::PsiStarBar;
    throw std::invalid_argument("unknown psi variant '" + s + "'");
}

}  // namespace

json to_json(const obs::ObservableSpec& spec) {
    using Class = obs::ObservableSpec::Class;
    switch (spec.cls) {
        case Class::Typical:
            return json{{"variant", "typical"}};
        case Class::A:
            return json{{"variant", "classA"},
                        {"xi", json::array({spec.xi1, spec.xi2, spec.xi3})},
                        {"m", spec.m},
                        {"j", spec.j},
                        {"psi", variant_name(spec.variant)}};
        case Class::B: {
            json f2 = json::array();
            for (const auto& [mx, my, c] : spec.f2)
                f2.push_back(json::array({mx, my, c.real(), c.imag()}));
            return json{{"variant", "classB"}, {"f1", to_json(spec.f1)}, {"f2", f2}};
        }
    }
    throw std::logic_error("to_json: unknown ObservableSpec class");
}

obs::ObservableSpec observable_from_json(const json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "typical") return obs::ObservableSpec::typical();
    if (variant == "classA") {
        const auto& xi = j.at("xi");
        return obs::ObservableSpec::classA(xi.at(0).get<int>(), xi.at(1).get<int>(),
                                           xi.at(2).get<int>(), j.at("m").get<int>(),
                                           j.at("j").get<int>(),
                                           variant_from_name(j.value("psi", "psi")));
    }
    if (variant == "classB") {
        std::vector<std::tuple<int, int, cplx>> f2;
        for (const auto& row : j.at("f2"))
            f2.emplace_back(row.at(0).get<int>(), row.at(1).get<int>(),
                            cplx{row.at(2).get<double>(), row.at(3).get<double>()});
        return obs::ObservableSpec::classB(periodic_from_json_or_preset(j.at("f1")),
                                           std::move(f2));
    }
    throw std::invalid_argument("observable_from_json: unknown variant '" + variant + "'");
}

obs::ObservableSpec observable_from_json_or_preset(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "typical") return obs::ObservableSpec::typical();
        if (name == "psi_10") return obs::ObservableSpec::classA(0, 0, 0, 1, 0);
        if (name == "classB_cos_cos") {
            std::vector<std::tuple<int, int, cplx>> f2{{1, 1, {0.25, 0.0}},
                                                       {1, -1, {0.25, 0.0}},
                                                       {-1, 1, {0.25, 0.0}},
                                                       {-1, -1, {0.25, 0.0}}};
            return obs::ObservableSpec::classB(periodic::PeriodicFunction::cosine(),
                                               std::move(f2));
        }
        throw std::invalid_argument("unknown observable preset '" + name + "'");
    }
    return observable_from_json(j);
}

}  // namespace nilab::json_io
