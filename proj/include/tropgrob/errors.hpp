#pragma once

#include <stdexcept>
#include <string>

namespace tropgrob {

// Exit code classes used by the CLI: 0 success, 2 user error,
// 3 internal invariant violation, 4 resource/retry cap reached.
enum class ErrorClass { User = 2, Internal = 3, Cap = 4 };

class TropError : public std::runtime_error {
public:
    TropError(std::string code, ErrorClass cls, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)), cls_(cls) {}
    const std::string& code() const { return code_; }
    ErrorClass error_class() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    std::string code_;
    ErrorClass cls_;
};

#define TROPGROB_ERROR(NAME, CLASS)                                  \
    class NAME : public TropError {                                  \
    public:                                                          \
        explicit NAME(const std::string& msg)                        \
            : TropError(#NAME, ErrorClass::CLASS, msg) {}            \
    };

TROPGROB_ERROR(ParseError, User)
TROPGROB_ERROR(InvalidFieldSpec, User)
TROPGROB_ERROR(ValueGroupError, User)
TROPGROB_ERROR(NotInValuationRing, User)
TROPGROB_ERROR(ZeroElement, User)
TROPGROB_ERROR(ZeroDivision, User)
TROPGROB_ERROR(ZeroPolynomial, User)
TROPGROB_ERROR(NotPolynomial, User)
TROPGROB_ERROR(NotHomogeneous, User)
TROPGROB_ERROR(ArityError, User)
TROPGROB_ERROR(MonomialInput, User)
TROPGROB_ERROR(IdealIsUnit, User)
TROPGROB_ERROR(NotInIdeal, User)
TROPGROB_ERROR(DirectionNotInLineality, User)
TROPGROB_ERROR(NotRenderable, User)

TROPGROB_ERROR(InconsistentInitial, Internal)
TROPGROB_ERROR(DegreeBoundTooSmall, Internal)
TROPGROB_ERROR(InvariantViolation, Internal)

TROPGROB_ERROR(CombinatorialCapExceeded, Cap)
TROPGROB_ERROR(NonConvergence, Cap)
TROPGROB_ERROR(RetryExhausted, Cap)

#undef TROPGROB_ERROR

}  // namespace tropgrob
