#pragma once

#include <stdexcept>
#include <string>

namespace nls {

// Structured error carrying the pipeline stage that failed.  Every module
// throws a named subtype so callers (and the CLI) can report the failing
// stage without string matching.
struct Error : std::runtime_error {
  std::string kind;
  std::string stage;
  Error(std::string kind_, std::string stage_, const std::string& msg)
      : std::runtime_error(stage_ + " [" + kind_ + "]: " + msg),
        kind(std::move(kind_)),
        stage(std::move(stage_)) {}
};

#define NLS_DEFINE_ERROR(NAME)                                  \
  struct NAME : Error {                                         \
    NAME(const std::string& stage, const std::string& msg)      \
        : Error(#NAME, stage, msg) {}                           \
  }

NLS_DEFINE_ERROR(UnsupportedDimension);
NLS_DEFINE_ERROR(IterationFailure);
NLS_DEFINE_ERROR(DegenerateSolution);
NLS_DEFINE_ERROR(StiffnessError);
NLS_DEFINE_ERROR(BlowUpError);
NLS_DEFINE_ERROR(AmbiguousCrossing);
NLS_DEFINE_ERROR(WindowTooSmall);
NLS_DEFINE_ERROR(DomainTooSmall);
NLS_DEFINE_ERROR(InvalidBlock);
NLS_DEFINE_ERROR(PerturbationFailure);
NLS_DEFINE_ERROR(DegenerateGram);
NLS_DEFINE_ERROR(IncompleteRun);
NLS_DEFINE_ERROR(WrongBranch);
NLS_DEFINE_ERROR(SchemaMismatch);
NLS_DEFINE_ERROR(MissingCache);
NLS_DEFINE_ERROR(InvalidConfig);
NLS_DEFINE_ERROR(NumericsFault);

#undef NLS_DEFINE_ERROR

}  // namespace nls
