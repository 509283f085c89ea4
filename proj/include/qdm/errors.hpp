#ifndef QDM_ERRORS_HPP
#define QDM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdm {

// Base class for every engine error.  The `kind()` string is stable and
// machine-readable; the what() message carries the located witness.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define QDM_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}  \
    }

QDM_DEFINE_ERROR(NonInvertibleConstantTerm);
QDM_DEFINE_ERROR(NegativeHbarPole);
QDM_DEFINE_ERROR(SchemaError);
QDM_DEFINE_ERROR(ValidationError);
QDM_DEFINE_ERROR(NotNef);
QDM_DEFINE_ERROR(PresentationRequired);
QDM_DEFINE_ERROR(NonConvexAtLambdaZero);
QDM_DEFINE_ERROR(FrameNotUnital);
QDM_DEFINE_ERROR(ResidualHbar);
QDM_DEFINE_ERROR(GenerationFailure);
QDM_DEFINE_ERROR(ClosednessFailure);
QDM_DEFINE_ERROR(InconsistentMixedPartials);
QDM_DEFINE_ERROR(InternalFlatnessViolation);
QDM_DEFINE_ERROR(PairingMissing);
QDM_DEFINE_ERROR(NotRankOne);
QDM_DEFINE_ERROR(ConfigError);

#undef QDM_DEFINE_ERROR

} // namespace qdm

#endif
