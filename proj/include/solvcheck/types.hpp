#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace solvcheck {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed case file (syntax or field type).
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Case parsed but violates a structural invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Singular admittance blocks: islanded buses, degenerate tie groups, zero sources.
class DegenerateNetwork : public Error {
  public:
    using Error::Error;
};

/// The operating point requested by a study has no power-flow solution.
class InsolvableCase : public Error {
  public:
    using Error::Error;
};

}  // namespace solvcheck
