#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace wgplate {

template<typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
template<typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template<typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Point2d = Point2<double>;
using VectorXd = VectorX<double>;
using MatrixXd = MatrixX<double>;

/// Symmetric 2x2 tensor in Voigt order (11, 22, 12). The 12 entry is stored
/// once; Frobenius inner products weight it by 2.
template<typename Scalar>
using Voigt = Eigen::Matrix<Scalar, 3, 1>;
using Voigtd = Voigt<double>;

// Error taxonomy. Every failure surfaced by the library derives from Error so
// the CLI can report a module diagnostic and exit nonzero.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class UnsupportedDegree : public Error
{
public:
  using Error::Error;
};

class ConditioningError : public Error
{
public:
  using Error::Error;
};

class SolverFailure : public Error
{
public:
  using Error::Error;
};

/// Cholesky breakdown on a matrix that should be SPD.
class NotSpdError : public SolverFailure
{
public:
  using SolverFailure::SolverFailure;
};

class UsageError : public Error
{
public:
  using Error::Error;
};

class InternalError : public Error
{
public:
  using Error::Error;
};

}  // namespace wgplate
