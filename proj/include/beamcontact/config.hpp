#pragma once

// Study configuration: line-oriented `key = value` text, '#' starts a
// comment. Keys:
//   a, b, alpha1, alpha2, beta1, beta2   problem data
//   K                                    contact stiffness (>= 0)
//   g                                    contact surface, expression in x
//   N                                    interior nodes for single solves
//   Ns                                   comma-separated refinement ladder
//   tol, max_iter                        iteration controls
//   seed                                 RNG seed for randomized checks
//   out                                  output directory

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beamcontact/expression.hpp"
#include "beamcontact/model.hpp"

namespace beamcontact {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::size_t line, std::string key)
        : std::runtime_error(what), line_(line), key_(std::move(key)) {}

    /// 1-based line number, 0 when the problem is not tied to one line.
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

struct StudyConfig {
    BVPSpec spec;
    double K = 0.0;
    std::string g_text = "0";
    Expression g = Expression::constant(0.0);
    Expression g_prime = Expression::constant(0.0);
    std::size_t N = 50;
    std::vector<std::size_t> Ns{11, 23, 47};
    std::optional<double> tol;
    std::size_t max_iter = 100000;
    std::uint64_t seed = 0;
    std::filesystem::path out = "out";

    [[nodiscard]] PiecewiseLinearContact contact() const;
};

StudyConfig parse_config(std::string_view text);
StudyConfig load_config(const std::filesystem::path& path);

}  // namespace beamcontact
