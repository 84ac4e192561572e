#pragma once

#include <stdexcept>
#include <string>

namespace qnmc {

/// Base error for everything raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed configuration: bad config file keys, invalid classifier
/// specs, out-of-range parameters.
struct ConfigError : Error {
    using Error::Error;
};

/// Dataset-level failures: missing files, unparseable cells, schema
/// mismatches, empty datasets.
struct DataError : Error {
    using Error::Error;
};

/// Feature-vector encodings that are mathematically undefined for the
/// given input (e.g. the informative encoding at the origin).
struct EncodingError : Error {
    using Error::Error;
};

/// Numerical failures: eigensolver non-convergence, singular covariance
/// after regularization, invalid density-matrix input.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace qnmc
