#pragma once

#include <string>

#include <json.hpp>

#include "steinlab/bounds.hpp"
#include "steinlab/colored.hpp"
#include "steinlab/ensembles.hpp"
#include "steinlab/lab.hpp"
#include "steinlab/normal_form.hpp"
#include "steinlab/stein.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

// Repo-wide matrix interchange format:
//   {"rows": r, "cols": c, "entries": [[re, im], ...]}   (row-major)
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json pair_to_json(const InputPair& pair);
InputPair pair_from_json(const nlohmann::json& j);

nlohmann::json spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const SteinSolution& s);
SteinSolution solution_from_json(const nlohmann::json& j);

nlohmann::json transform_to_json(const InTransform& t);

// Flat name -> value map plus the "applicable" name list.
nlohmann::json bound_report_to_json(const BoundReport& r);

nlohmann::json noise_to_json(const NoiseModel& m);
NoiseModel noise_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const SampleRecord& r);
nlohmann::json summary_to_json(const QuantileSummary& s);

InputPair load_pair_file(const std::string& path);
Spectrum load_spectrum_file(const std::string& path);

}  // namespace steinlab
