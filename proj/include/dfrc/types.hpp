#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dfrc {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration / input data.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A matrix that must be positive semidefinite has a significantly negative eigenvalue.
class NotPsdError : public Error {
public:
  using Error::Error;
};

/// No feasible starting point could be drawn for the alternating optimizer.
class InitializationInfeasible : public Error {
public:
  using Error::Error;
};

} // namespace dfrc
