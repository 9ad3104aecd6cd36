#pragma once

#include <stdexcept>
#include <string>

namespace fheight {

enum class ErrorKind {
    NotPrime,
    FieldTooLarge,
    DivisionByZero,
    NotIrreducible,
    DegeneratePolygon,
    UnsupportedRamification,
    PrecisionExhausted,
    Inconclusive,
    IsotrivialCurve,
    UnsupportedCharacteristic,
    WidthNotReached,
    NonSemistablePlace,
    ComponentAmbiguous,
    RankUnknown,
    NotOnCurve,
    Parse,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace fheight
