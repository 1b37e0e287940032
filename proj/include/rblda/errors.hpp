#pragma once

#include <stdexcept>
#include <string>

namespace rblda {

/// Malformed or out-of-contract input: bad files, invalid parameters,
/// dimension mismatches, empty classes. CLI exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical degeneracy that valid inputs cannot produce (broken scatter,
/// infeasible eigenvalue, zero total variation). CLI exit code 3.
class degeneracy_error : public std::runtime_error {
public:
    explicit degeneracy_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A method that cannot run on the given data, e.g. strict BLDA with a
/// singular within-class matrix. CLI exit code 4.
class method_unavailable_error : public std::runtime_error {
public:
    explicit method_unavailable_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rblda
