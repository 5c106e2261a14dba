#ifndef BCX_ERROR_HPP
#define BCX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bcx {

// Domain error codes. Every failure mode of the library maps onto exactly one
// of these; the witness string carries enough data to reproduce the failure.
enum class Errc {
    NotIntegral,
    NotSaturated,
    HasTorsion,
    RankOverflow,
    NotSharp,
    NotInMonoid,
    ChartMismatch,
    UnsupportedFace,
    TransversalityViolation,
    NotClosed,
    NotExact,
    NotIntegrable,
    PreconditionResidual,
    DegreeOverflow,
    ParseError,
};

inline const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::NotSaturated: return "NotSaturated";
    case Errc::HasTorsion: return "HasTorsion";
    case Errc::RankOverflow: return "RankOverflow";
    case Errc::NotSharp: return "NotSharp";
    case Errc::NotInMonoid: return "NotInMonoid";
    case Errc::ChartMismatch: return "ChartMismatch";
    case Errc::UnsupportedFace: return "UnsupportedFace";
    case Errc::TransversalityViolation: return "TransversalityViolation";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotExact: return "NotExact";
    case Errc::NotIntegrable: return "NotIntegrable";
    case Errc::PreconditionResidual: return "PreconditionResidual";
    case Errc::DegreeOverflow: return "DegreeOverflow";
    case Errc::ParseError: return "ParseError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string witness)
        : std::runtime_error(std::string(errc_name(code)) + ": " + witness),
          code_(code), witness_(std::move(witness))
    {
    }

    Errc code() const { return code_; }
    const std::string& witness() const { return witness_; }

private:
    Errc code_;
    std::string witness_;
};

[[noreturn]] inline void raise(Errc code, std::string witness)
{
    throw Error(code, std::move(witness));
}

} // namespace bcx

#endif
