#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "eon/instance.hpp"
#include "eon/tcs.hpp"

namespace eon {

/// Shortest round-trip decimal text for a double ("%.17g" trimmed).
std::string format_number(double v);

/// request_id,c,b,r,p_mW,m,omega_GHz,osnr_dB,threshold_dB,power_W
void write_configs_csv(std::ostream& os, const ProblemInstance& inst, const std::vector<TransponderConfig>& configs);

/// Reads the columns written by write_configs_csv back into configurations
/// ordered like inst.requests. Derived columns are ignored. Throws InputError
/// on a missing or unknown request id, a duplicate row, or a malformed field.
std::vector<TransponderConfig> read_configs_csv(std::istream& is, const ProblemInstance& inst);

nlohmann::json report_to_json(const SolveReport& report, const ProblemInstance& inst);

}  // namespace eon
