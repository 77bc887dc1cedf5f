#pragma once

#include <string>

#include "json.hpp"

#include "kboot/bootstrap.hpp"
#include "kboot/experiments.hpp"
#include "kboot/smooth_kmax.hpp"

namespace kboot::report {

using json = nlohmann::ordered_json;

// Every artifact starts with this header; re-running the command with
// the echoed config reproduces the artifact byte for byte.
json make_header(const std::string& command, json config);

json to_json(const SeedSpec& seed);
json to_json(const bootstrap::BootstrapSpec& spec);
json to_json(const bootstrap::PValueReport& report);
json to_json(const smooth::CheckReport& report);
json to_json(const experiments::UniformityReport& report);
json to_json(const experiments::CoverageReport& report);
json to_json(const experiments::LevyReport& report);
json to_json(const experiments::MaxInequalityReport& report);
json to_json(const experiments::ComparisonReport& report);

}  // namespace kboot::report
