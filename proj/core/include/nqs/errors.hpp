#pragma once

#include <stdexcept>
#include <string>

namespace nqs {

/// Base class for every runtime failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An amplitude is exactly zero, so its logarithm (or tanh of an angle) is undefined.
class SingularAmplitude : public Error {
public:
    using Error::Error;
};

/// A magnetization-conserving move was requested on a fully polarized configuration.
class FrozenSector : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

/// The weight part of a Fisher eigenvector vanishes; its entanglement is undefined.
class ZeroWeightBlock : public Error {
public:
    using Error::Error;
};

/// The regularized Fisher system could not be factorized or solved to tolerance.
class IllConditioned : public Error {
public:
    using Error::Error;
};

/// Enumeration or diagonalization requested beyond the configured size cap.
class OversizeSystem : public Error {
public:
    using Error::Error;
};

class NonFiniteEnergy : public Error {
public:
    using Error::Error;
};

class CheckpointError : public Error {
public:
    using Error::Error;
};

}  // namespace nqs
