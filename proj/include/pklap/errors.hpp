#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "pklap/grid.hpp"

namespace pklap {

/// A solver stage failed. Carries the stage name and, when one exists, the
/// best iterate reached before giving up.
class SolverError : public std::runtime_error {
public:
    SolverError(std::string stage, const std::string& message, std::optional<GridFunction> best = std::nullopt)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), best_(std::move(best)) {}

    const std::string& stage() const { return stage_; }
    const std::optional<GridFunction>& best_iterate() const { return best_; }

private:
    std::string stage_;
    std::optional<GridFunction> best_;
};

}  // namespace pklap
