#ifndef SKEWSPEC_ERRORS_HPP
#define SKEWSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace skewspec {

// Invalid or inconsistent user input (config files, CLI flags, bad parameters).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine failed to meet its contract (stagnant inverse iteration,
// overflow in an index computation, ...). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace skewspec

#endif
