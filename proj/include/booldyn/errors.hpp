#pragma once

#include <stdexcept>
#include <string>

namespace booldyn {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define BOOLDYN_DEFINE_ERROR(NAME)                                          \
    class NAME : public Error {                                             \
    public:                                                                 \
        explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
    }

BOOLDYN_DEFINE_ERROR(DuplicateAtomError);
BOOLDYN_DEFINE_ERROR(UnknownAtomError);
BOOLDYN_DEFINE_ERROR(UnknownLabelError);
BOOLDYN_DEFINE_ERROR(AlgebraMismatchError);
BOOLDYN_DEFINE_ERROR(UnsupportedBackendError);
BOOLDYN_DEFINE_ERROR(UnsupportedIdealFormError);
BOOLDYN_DEFINE_ERROR(SizeLimitError);
BOOLDYN_DEFINE_ERROR(InvalidGeneratorError);
BOOLDYN_DEFINE_ERROR(InvalidIdealError);
BOOLDYN_DEFINE_ERROR(InvalidTermError);
BOOLDYN_DEFINE_ERROR(InvalidSystemError);
BOOLDYN_DEFINE_ERROR(InvalidPairError);
BOOLDYN_DEFINE_ERROR(NotExpandableError);
BOOLDYN_DEFINE_ERROR(NotWeaklyLeftResolvingError);
BOOLDYN_DEFINE_ERROR(ShapeError);
BOOLDYN_DEFINE_ERROR(ParseError);
BOOLDYN_DEFINE_ERROR(InternalError);

#undef BOOLDYN_DEFINE_ERROR

} // namespace booldyn
