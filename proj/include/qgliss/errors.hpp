#pragma once

#include <stdexcept>
#include <string>

namespace qgliss {

/// Base class for all qgliss errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration file / option parsing failure.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Graph/path invariant violation (see validate()).
class ValidationError : public Error {
public:
  enum class Code {
    NonPositiveLength,
    NotCoprime,
    DisconnectedGraph,
    LoopEdge,
    SizeMismatch,
    BadFrequency,
  };

  ValidationError(Code code, const std::string& msg) : Error(msg), code_(code) {}
  Code code() const { return code_; }

private:
  Code code_;
};

/// Operation requires a specific edge count (e.g. knot export needs E = 3).
class WrongDimension : public Error {
public:
  using Error::Error;
};

/// Directed-bond bookkeeping is inconsistent.
class IndexingError : public Error {
public:
  using Error::Error;
};

/// Two eigenvalue branches are closer than gap_tol, or a genuine double
/// root of the secular function was detected.
class DegenerateSpectrum : public Error {
public:
  DegenerateSpectrum(const std::string& msg, double k, double tau)
      : Error(msg), k_(k), tau_(tau) {}
  double k() const { return k_; }
  double tau() const { return tau_; }

private:
  double k_;
  double tau_;
};

/// Nearest-continuation matching between consecutive tau nodes failed.
class TrackingLost : public Error {
public:
  TrackingLost(const std::string& msg, double tau, int level)
      : Error(msg), tau_(tau), level_(level) {}
  double tau() const { return tau_; }
  int level() const { return level_; }

private:
  double tau_;
  int level_;
};

/// cos(k L_e) vanishes on some edge: the cosine-product amplitude formula
/// breaks down there.
class NearNode : public Error {
public:
  NearNode(const std::string& msg, double k, int edge)
      : Error(msg), k_(k), edge_(edge) {}
  double k() const { return k_; }
  int edge() const { return edge_; }

private:
  double k_;
  int edge_;
};

/// Frequency recovery was given too few probe samples.
class InsufficientSamples : public Error {
public:
  using Error::Error;
};

/// Frequency recovery could not round the fitted values to integers
/// within the residual threshold.
class NoIntegerFit : public Error {
public:
  using Error::Error;
};

}  // namespace qgliss
