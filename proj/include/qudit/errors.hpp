#ifndef QUDIT_ERRORS_HPP
#define QUDIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qudit {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QUDIT_DEFINE_ERROR(Name)        \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

QUDIT_DEFINE_ERROR(DimensionError)
QUDIT_DEFINE_ERROR(IndexError)
QUDIT_DEFINE_ERROR(NotHermitianError)
QUDIT_DEFINE_ERROR(NotNormalError)
QUDIT_DEFINE_ERROR(InvalidKindError)
QUDIT_DEFINE_ERROR(LevelError)
QUDIT_DEFINE_ERROR(ZeroNormError)
QUDIT_DEFINE_ERROR(OverlapError)
QUDIT_DEFINE_ERROR(GateSpecError)
QUDIT_DEFINE_ERROR(CatalogError)
QUDIT_DEFINE_ERROR(CompositionError)
QUDIT_DEFINE_ERROR(NonLinearError)
QUDIT_DEFINE_ERROR(FixedPointError)
QUDIT_DEFINE_ERROR(UnphysicalWeightsError)
QUDIT_DEFINE_ERROR(AnnihilatedStateError)
QUDIT_DEFINE_ERROR(DegenerateFitError)

#undef QUDIT_DEFINE_ERROR

}  // namespace qudit

#endif  // QUDIT_ERRORS_HPP
