#include "fheight/error.hpp"

namespace fheight {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::FieldTooLarge: return "FieldTooLarge";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::NotIrreducible: return "NotIrreducible";
        case ErrorKind::DegeneratePolygon: return "DegeneratePolygon";
        case ErrorKind::UnsupportedRamification: return "UnsupportedRamification";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::IsotrivialCurve: return "IsotrivialCurve";
        case ErrorKind::UnsupportedCharacteristic: return "UnsupportedCharacteristic";
        case ErrorKind::WidthNotReached: return "WidthNotReached";
        case ErrorKind::NonSemistablePlace: return "NonSemistablePlace";
        case ErrorKind::ComponentAmbiguous: return "ComponentAmbiguous";
        case ErrorKind::RankUnknown: return "RankUnknown";
        case ErrorKind::NotOnCurve: return "NotOnCurve";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

}  // namespace fheight
