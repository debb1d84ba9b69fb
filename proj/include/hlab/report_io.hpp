#pragma once

// JSON (machine) and aligned-column text (human) renderings of the
// validation reports.

#include <string>
#include <vector>

#include "json.hpp"

#include "hlab/validation.hpp"

namespace hlab {

nlohmann::ordered_json to_json(const DecayMonitor& m);
nlohmann::ordered_json to_json(const CrossCheckReport& r);
nlohmann::ordered_json to_json(const IdentityReport& r);
nlohmann::ordered_json to_json(const HolonomyStudy& s);
nlohmann::ordered_json to_json(const WeakResidualReport& r);
nlohmann::ordered_json to_json(const CovarianceReport& r);

/// Columns padded to the widest cell; numbers should already be formatted.
std::string aligned_table(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows);

std::string to_text(const CrossCheckReport& r);
std::string to_text(const IdentityReport& r);
std::string to_text(const HolonomyStudy& s);
std::string to_text(const WeakResidualReport& r);
std::string to_text(const std::vector<CovarianceReport>& r);

/// Shortest round-trip representation of a double ("%.17g" style), used for
/// every number written to CSV so outputs are byte-stable.
std::string format_double(double v);

}  // namespace hlab
