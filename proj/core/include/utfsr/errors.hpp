#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace utfsr {

// Base for every numerical or modelling failure raised by the library.
// Precondition violations on arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DenominatorVanishes : public Error {
public:
    explicit DenominatorVanishes(std::size_t k)
        : Error("denominator vanishes at grid index " + std::to_string(k)), index(k) {}
    std::size_t index;
};

class SingularAtFrequency : public Error {
public:
    explicit SingularAtFrequency(std::size_t k)
        : Error("matrix is singular at grid index " + std::to_string(k)), index(k) {}
    std::size_t index;
};

class ResolutionTooCoarse : public Error {
public:
    using Error::Error;
};

class TailTooHeavy : public Error {
public:
    using Error::Error;
};

class SingularRegressorSpectrum : public Error {
public:
    using Error::Error;
};

class GramSingular : public Error {
public:
    using Error::Error;
};

class DivergenceDetected : public Error {
public:
    using Error::Error;
};

class AlgebraicLoop : public Error {
public:
    using Error::Error;
};

class NumericalInconsistency : public Error {
public:
    using Error::Error;
};

class SearchBudgetExceeded : public Error {
public:
    using Error::Error;
};

class GenerationFailed : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace utfsr
