#ifndef PIDMD_TYPES_HPP
#define PIDMD_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pidmd {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Thrown when a CSV token or row cannot be parsed. Lines and columns are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what_arg)
      : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what_arg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class EmptyInput : public std::runtime_error {
 public:
  explicit EmptyInput(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

class InsufficientSnapshots : public std::runtime_error {
 public:
  explicit InsufficientSnapshots(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what_arg) : std::invalid_argument(what_arg) {}
};

class DegenerateInput : public std::runtime_error {
 public:
  explicit DegenerateInput(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

class SizeLimitExceeded : public std::runtime_error {
 public:
  explicit SizeLimitExceeded(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

class NearSingularResolvent : public std::runtime_error {
 public:
  explicit NearSingularResolvent(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Per-row outcome of a row-decoupled solver.
enum class RowStatus : unsigned char {
  kOk = 0,
  kUndetermined,   // row had no usable data; minimum-norm convention applied
  kTlsDegenerate,  // total-least-squares solution did not exist; least squares used
  kSmallPivot,     // triangular pivot below tolerance; row solution unreliable
};

// Spatial sample coordinates. Strictly increasing; periodic grids identify
// points[0] + period_length with points[0].
struct Grid {
  RealVector points;
  bool periodic = false;
  double period_length = 0.0;

  void validate() const {
    if (points.size() == 0) throw InvalidArgument("grid has no points");
    for (Eigen::Index i = 1; i < points.size(); ++i) {
      if (!(points[i] > points[i - 1])) throw InvalidArgument("grid points must strictly increase");
    }
    if (periodic) {
      const double span = points[points.size() - 1] - points[0];
      if (!(period_length > span)) throw InvalidArgument("periodic grid needs period_length > span");
    }
  }
};

enum class Pairing : unsigned char { kDiscrete, kDerivative };

// Whether an operator advances the state one step or generates d/dt.
enum class TimeKind : unsigned char { kDiscrete, kContinuous };

// Aligned data matrices: column j of Y is paired with column j of X, either as
// the next sample (discrete) or as its time derivative (derivative pairing).
struct SnapshotPair {
  Matrix X;
  Matrix Y;
  Pairing pairing = Pairing::kDiscrete;
  double dt = 1.0;
  std::optional<Grid> grid;

  Eigen::Index states() const { return X.rows(); }
  Eigen::Index samples() const { return X.cols(); }

  void validate() const {
    if (X.rows() == 0 || X.cols() == 0) throw EmptyInput("snapshot pair has empty X");
    if (X.rows() != Y.rows() || X.cols() != Y.cols())
      throw InvalidArgument("snapshot pair shape mismatch: X is " + std::to_string(X.rows()) + "x" +
                            std::to_string(X.cols()) + ", Y is " + std::to_string(Y.rows()) + "x" +
                            std::to_string(Y.cols()));
  }
};

}  // namespace pidmd

#endif  // PIDMD_TYPES_HPP
