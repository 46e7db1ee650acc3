#ifndef TALBOT_ERRORS_HPP
#define TALBOT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace talbot {

/// Invalid or inconsistent configuration input (bad key, violated bound).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Physically inadmissible request at runtime (e.g. v <= 0, empty window).
class PhysicsError : public std::runtime_error {
public:
    explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical scheme failed to converge within its resource budget.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace talbot

#endif
