#pragma once

#include <stdexcept>
#include <string>

namespace sfns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation detected at an API boundary.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace sfns
