#pragma once

#include <stdexcept>
#include <string>

namespace dplab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed shapes, out-of-domain parameters, unparsable files.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation that could not be completed to the requested accuracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotConverged : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotResonant : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateDenominator : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IllConditioned : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Phi vanishes identically, so every coupling constant is resonant.
class ZeroShape : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Comparison matrix requested at alpha = +-2.
class SingularAlpha : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace dplab
