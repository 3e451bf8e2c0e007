#ifndef HDMM_ERRORS_HPP
#define HDMM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hdmm {

// Error categories map 1:1 onto CLI exit codes and C API status codes.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hdmm

#endif
