#pragma once

#include <stdexcept>
#include <string>

namespace hl {

/// All library failures carry a stable machine-readable name so the CLI can
/// map them into error reports without string matching on messages.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define HL_DEFINE_ERROR(Name)                         \
  class Name : public Error {                         \
   public:                                            \
    explicit Name(const std::string& what)            \
        : Error(#Name, what) {}                       \
  }

HL_DEFINE_ERROR(DimensionMismatch);
HL_DEFINE_ERROR(NonFinite);
HL_DEFINE_ERROR(InvalidBC);
HL_DEFINE_ERROR(SingularT);
HL_DEFINE_ERROR(NotUnitary);
HL_DEFINE_ERROR(NonHermitian);
HL_DEFINE_ERROR(NotIntegrable);
HL_DEFINE_ERROR(SolveDiverged);
HL_DEFINE_ERROR(ZeroK);
HL_DEFINE_ERROR(GridMismatch);
HL_DEFINE_ERROR(SingularJost);
HL_DEFINE_ERROR(RootFindStall);
HL_DEFINE_ERROR(OutOfMemory);
HL_DEFINE_ERROR(BranchJump);
HL_DEFINE_ERROR(ExtrapolationUnstable);
HL_DEFINE_ERROR(NearSingularQ);
HL_DEFINE_ERROR(SpectralPoint);
HL_DEFINE_ERROR(ConfigError);

#undef HL_DEFINE_ERROR

}  // namespace hl
