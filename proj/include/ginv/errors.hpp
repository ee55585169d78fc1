#ifndef GINV_ERRORS_HPP
#define GINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ginv {

// Base class for all library errors. The what() string is human readable;
// name() is a stable machine-readable tag used by the CLI error envelope.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define GINV_DEFINE_ERROR(TYPE)                       \
  class TYPE : public Error {                         \
   public:                                            \
    explicit TYPE(const std::string& message)         \
        : Error(#TYPE, message) {}                    \
  }

GINV_DEFINE_ERROR(ShapeMismatch);
GINV_DEFINE_ERROR(SingularMatrix);
GINV_DEFINE_ERROR(NotStochastic);
GINV_DEFINE_ERROR(NotIrreducible);
GINV_DEFINE_ERROR(DegenerateParameters);
GINV_DEFINE_ERROR(NotAGInverse);
GINV_DEFINE_ERROR(ClassificationInconsistent);
GINV_DEFINE_ERROR(MPFormsDisagree);
GINV_DEFINE_ERROR(NotIn15a);
GINV_DEFINE_ERROR(BadBeta);
GINV_DEFINE_ERROR(RouteDisagreement);
GINV_DEFINE_ERROR(UnknownCase);
GINV_DEFINE_ERROR(TooManyCensored);
GINV_DEFINE_ERROR(NoConvergence);
GINV_DEFINE_ERROR(ParseError);

#undef GINV_DEFINE_ERROR

}  // namespace ginv

#endif  // GINV_ERRORS_HPP
