#ifndef SWARMSTAB_ERRORS_HPP
#define SWARMSTAB_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmstab {

/// Invalid configuration value. `field()` names the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)),
          message_(message) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string field_;
    std::string message_;
};

/// A simulation produced a non-finite or out-of-range state.
class DivergedError : public std::runtime_error {
public:
    explicit DivergedError(std::size_t step)
        : std::runtime_error("simulation diverged at step " + std::to_string(step)), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Direct-feedthrough cycle found while interconnecting blocks.
class AlgebraicLoopError : public std::runtime_error {
public:
    explicit AlgebraicLoopError(std::vector<std::string> cycle)
        : std::runtime_error("algebraic loop: " + join(cycle)), cycle_(std::move(cycle)) {}

    const std::vector<std::string>& cycle() const noexcept { return cycle_; }

private:
    static std::string join(const std::vector<std::string>& names) {
        std::string out;
        for (const auto& n : names) {
            if (!out.empty()) out += " -> ";
            out += n;
        }
        return out;
    }

    std::vector<std::string> cycle_;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace swarmstab

#endif  // SWARMSTAB_ERRORS_HPP
