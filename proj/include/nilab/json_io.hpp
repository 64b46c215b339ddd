#pragma once

// JSON forms of the shared types. Wire formats:
//   ContinuedFraction  {"a":[...], "convergents":[[l,q],...], ...}
//   PhasePoint         {"t":.., "x":.., "y":.., "z":..}
//   PeriodicFunction   {"real": true, "coeffs": [[m, re, im], ...]}
//   AlphaSpec          {"type":"rational"|"quadratic"|"partial_quotients"|"decimal", ...}
//   SkewProductSpec    {"kind":"S"|"T"|"T1"|"T1~", "alpha":{...}, ...}
//   ObservableSpec     {"variant":"typical"|"classA"|"classB", ...}

#include <json.hpp>

#include "nilab/arith.hpp"
#include "nilab/complexity.hpp"
#include "nilab/flows.hpp"
#include "nilab/heisenberg.hpp"
#include "nilab/observables.hpp"
#include "nilab/periodic.hpp"

namespace nilab::json_io {

using nlohmann::json;

json to_json(const arith::ContinuedFraction& cf);

json to_json(const arith::DenominatorClassification& cls);

json to_json(const heis::PhasePoint& p);
heis::PhasePoint phase_point_from_json(const json& j);

json to_json(const periodic::PeriodicFunction& f);
periodic::PeriodicFunction periodic_from_json(const json& j);
/// Accepts the named presets "cos", "sin", "cos2", "zero", "one" or a JSON table.
periodic::PeriodicFunction periodic_from_json_or_preset(const json& j);

json to_json(const arith::AlphaSpec& alpha);
arith::AlphaSpec alpha_from_json(const json& j);
/// Shorthand: "golden", "p/q", a decimal string "0.1234" (precision 1e-15), or
/// "[a1,a2,...]" partial quotients.
arith::AlphaSpec alpha_from_string(const std::string& s);

json to_json(const flows::SkewProductSpec& spec);
flows::SkewProductSpec spec_from_json(const json& j);

json to_json(const obs::ObservableSpec& spec);
obs::ObservableSpec observable_from_json(const json& j);
/// Accepts the named presets "typical", "psi_10", "classB_cos_cos".
obs::ObservableSpec observable_from_json_or_preset(const json& j);

}  // namespace nilab::json_io
