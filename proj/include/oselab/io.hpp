#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "oselab/cocycle.hpp"
#include "oselab/drivers.hpp"
#include "oselab/interval_maps.hpp"
#include "oselab/stepfn.hpp"

namespace oselab {

using json = nlohmann::json;

// Doubles are rendered through a fixed 17-significant-digit formatter so
// that re-runs emit byte-identical files. Bottom exponents serialize as null.
json number_17g(double x);

json map_to_json(const PiecewiseAffineMap& map);
PiecewiseAffineMap map_from_json(const json& spec);

// {"type":"periodic","word":[...]} | {"type":"pi_sft","shift":...,"anchor":...}
// | {"type":"explicit","symbols":[...],"origin":...}
Driver driver_from_json(const json& spec);

json spectrum_to_json(const SpectrumReport& report);
json lyapunov_to_json(const LyapunovEstimate& estimate);
json stepfn_to_json(const StepFunction& f);
StepFunction stepfn_from_json(const json& spec);

// Temp file + rename.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

std::string dump_sorted(const json& j);

}  // namespace oselab
