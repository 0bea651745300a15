#pragma once

#include <stdexcept>
#include <string>

namespace orthowave {

/// Pipeline stage that raised an error; the command line maps each to an exit code.
enum class Stage { parse = 2, basis = 3, assembly = 4, solve = 5, evaluate = 6 };

const char* stage_name(Stage s) noexcept;

class StageError : public std::runtime_error {
public:
    StageError(Stage stage, const std::string& what) : std::runtime_error(what), stage_(stage) {}
    [[nodiscard]] Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

}  // namespace orthowave
