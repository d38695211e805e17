#pragma once

#include <stdexcept>
#include <string>

namespace metapulse {

/// Raised when a frequency-domain formula is evaluated at a pole (omega = 0,
/// or a zero of mu for mu^-1).
class SingularFrequency : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a frequency lies in the evanescent band (a^2 < 0) where the
/// slowness operator has no real symbol.
class EvanescentBand : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a time grid cannot carry a requested operator: bins inside the
/// evanescent band, |a| below tolerance for a^-1, or a mismatched grid.
class InadmissibleGrid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A spectral product that should have been real produced an imaginary
/// residue above tolerance, or produced non-finite samples.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace metapulse
