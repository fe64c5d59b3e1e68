#pragma once

#include <stdexcept>
#include <string>

namespace dcp {

enum class Errc {
    EmptyDraws,
    NonFinite,
    KTooLarge,
    InsufficientCalibration,
    InvalidBracket,
    UnsupportedFamily,
    EmptySet,
    DegenerateRange,
    ZeroMeanWidth,
    SeriesTooShort,
    EmptySplit,
    DegenerateScale,
    NoMember,
    BadInput,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::EmptyDraws: return "EmptyDraws";
        case Errc::NonFinite: return "NonFinite";
        case Errc::KTooLarge: return "KTooLarge";
        case Errc::InsufficientCalibration: return "InsufficientCalibration";
        case Errc::InvalidBracket: return "InvalidBracket";
        case Errc::UnsupportedFamily: return "UnsupportedFamily";
        case Errc::EmptySet: return "EmptySet";
        case Errc::DegenerateRange: return "DegenerateRange";
        case Errc::ZeroMeanWidth: return "ZeroMeanWidth";
        case Errc::SeriesTooShort: return "SeriesTooShort";
        case Errc::EmptySplit: return "EmptySplit";
        case Errc::DegenerateScale: return "DegenerateScale";
        case Errc::NoMember: return "NoMember";
        case Errc::BadInput: return "BadInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace dcp
