#pragma once

#include <stdexcept>
#include <string>

namespace sheargeo {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SHEARGEO_ERROR_TYPE(Name)                                   \
  struct Name : Error {                                             \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

SHEARGEO_ERROR_TYPE(SingularMetric);
SHEARGEO_ERROR_TYPE(OutOfChart);
SHEARGEO_ERROR_TYPE(NotSPD);
SHEARGEO_ERROR_TYPE(DegenerateOmega);
SHEARGEO_ERROR_TYPE(NotContact);
SHEARGEO_ERROR_TYPE(NotNull);
SHEARGEO_ERROR_TYPE(NoDecomposition);
SHEARGEO_ERROR_TYPE(RankDeficientBasis);
SHEARGEO_ERROR_TYPE(KernelDimensionMismatch);
SHEARGEO_ERROR_TYPE(SignatureError);
SHEARGEO_ERROR_TYPE(NoHolomorphicChart);
SHEARGEO_ERROR_TYPE(HorizonCrossing);
SHEARGEO_ERROR_TYPE(MissingDerivative);
SHEARGEO_ERROR_TYPE(BadCurvatureSign);
SHEARGEO_ERROR_TYPE(ODEStepError);
SHEARGEO_ERROR_TYPE(ConfigError);
SHEARGEO_ERROR_TYPE(IOError);

#undef SHEARGEO_ERROR_TYPE

}  // namespace sheargeo
