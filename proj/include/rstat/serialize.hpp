#ifndef RSTAT_SERIALIZE_HPP
#define RSTAT_SERIALIZE_HPP

#include <json.hpp>
#include <string>

#include "rstat/coeffs.hpp"
#include "rstat/minimax.hpp"
#include "rstat/plan.hpp"
#include "rstat/simulate.hpp"
#include "rstat/spectra.hpp"

namespace rstat {

using Json = nlohmann::json;

// Complex numbers serialise as [re, im] pairs throughout.
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json density_to_json(const SpectralDensity& d);
SpectralDensity density_from_json(const Json& j);

/// {"coeffs": [[re,im],...]} or
/// {"rule": {"type":"geometric","scale":[re,im],"ratio":[re,im]}, "truncation": n}.
/// The truncation hint applies when the rule omits its own.
CoefSeq coeffs_from_json(const Json& j, std::uint32_t truncation_hint);
Json coeffs_to_json(const CoefSeq& a);

Json plan_to_json(const EstimatePlan& p);
EstimatePlan plan_from_json(const Json& j);

Json factorization_to_json(const Factorization& f);

Json density_class_to_json(const DensityClass& c);
DensityClass density_class_from_json(const Json& j);

Json minimax_solution_to_json(const MinimaxSolution& s, const Grid& grid);

Json mc_report_to_json(const MCReport& r);

}  // namespace rstat

#endif
