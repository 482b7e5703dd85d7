#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace p2nc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Bad input to a public entry point (sizes, ids, unsupported options).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Degenerate or inconsistent mesh geometry.
class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A factorization broke down. For a correctly built system this cannot happen,
/// so it points at a DOF or constraint bug.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix expected to be SPD is not.
class MatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace p2nc
