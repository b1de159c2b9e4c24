#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dunkl/spaces.hpp"
#include "dunkl/verify.hpp"

namespace dunkl {

/// Fixed "%.12g" float formatting so identical runs produce identical bytes.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_json(const std::string& path, const nlohmann::json& j);

nlohmann::json sweep_to_json(const SweepReport& rep);
void write_sweep_csv(const std::string& path, const SweepReport& rep);

nlohmann::json oscillation_to_json(const OscillationReport& rep);
void write_oscillation_csv(const std::string& path, const OscillationReport& rep);

}  // namespace dunkl
