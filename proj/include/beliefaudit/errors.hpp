#pragma once

#include <stdexcept>
#include <string>

namespace beliefaudit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicateLabel : public Error {
public:
    explicit DuplicateLabel(const std::string& label)
        : Error("duplicate outcome label '" + label + "'") {}
};

class SizeOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SpaceMismatch : public Error {
public:
    SpaceMismatch() : Error("operands are defined on different outcome spaces") {}
};

/// f(empty) != 0 or f(Omega) != 1.
class B1Violation : public Error {
public:
    using Error::Error;
};

class FamilyTooLarge : public Error {
public:
    using Error::Error;
};

class NotNegative : public Error {
public:
    using Error::Error;
};

class SingletonCore : public Error {
public:
    using Error::Error;
};

class NoGap : public Error {
public:
    using Error::Error;
};

} // namespace beliefaudit
