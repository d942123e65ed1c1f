#pragma once

#include "sheargeo/config.hpp"
#include "sheargeo/report.hpp"

namespace sheargeo {

// Run every check the command selects and collect the records. Failures of
// individual checks become failed records; hard errors (bad config) throw.
Report run_suite(const RunConfig& cfg);

}  // namespace sheargeo
