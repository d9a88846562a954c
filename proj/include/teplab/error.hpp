#pragma once

#include <stdexcept>
#include <string>

namespace teplab {

// Every failure carries a stable machine-readable code (used by the CLI to
// emit error objects) plus a human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define TEPLAB_ERROR(Name)                                       \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

TEPLAB_ERROR(NotAUnit);
TEPLAB_ERROR(ParseError);
TEPLAB_ERROR(IrrationalSpectrum);
TEPLAB_ERROR(InternalSingular);
TEPLAB_ERROR(ResidueNotScalar);
TEPLAB_ERROR(NonzeroSubleading);
TEPLAB_ERROR(NotSemisimple);
TEPLAB_ERROR(Inconsistent);
TEPLAB_ERROR(NoSolution);
TEPLAB_ERROR(NonUnique);
TEPLAB_ERROR(UnknownPreset);
TEPLAB_ERROR(BadGrading);
TEPLAB_ERROR(MuPropertyFailed);
TEPLAB_ERROR(Obstructed);
TEPLAB_ERROR(MissingGrading);
TEPLAB_ERROR(LengthOverflow);
TEPLAB_ERROR(OddParityViolation);

#undef TEPLAB_ERROR

}  // namespace teplab
