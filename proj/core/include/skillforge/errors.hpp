#pragma once

#include <stdexcept>
#include <string>

namespace skillforge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- skill files ---------------------------------------------------------
struct ParseError : Error {
  ParseError(std::string msg, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                          : msg),
        line(line_no) {}
  int line;
};
struct MalformedEntry : ParseError {
  using ParseError::ParseError;
};
struct NonPositiveCount : ParseError {
  using ParseError::ParseError;
};
struct DuplicateSkill : ParseError {
  using ParseError::ParseError;
};
struct DuplicateItemInSection : ParseError {
  using ParseError::ParseError;
};
struct InvalidSkillDefinition : Error {
  using Error::Error;
};

// --- graph ----------------------------------------------------------------
struct UnknownItem : Error {
  explicit UnknownItem(const std::string& item)
      : Error("item has no producing skill and is not a declared primitive: " +
              item),
        item(item) {}
  std::string item;
};
struct CyclicDependency : Error {
  using Error::Error;
};

// --- planner ----------------------------------------------------------------
struct PlanDepthExceeded : Error {
  using Error::Error;
};
struct UnproducibleItem : Error {
  explicit UnproducibleItem(const std::string& item)
      : Error("no skill produces required item: " + item), item(item) {}
  std::string item;
};
struct ExecutionError : Error {
  ExecutionError(std::string msg, int step_index)
      : Error("step " + std::to_string(step_index) + ": " + msg),
        step(step_index) {}
  int step;
};

// --- world -------------------------------------------------------------------
struct InfeasibleDensity : Error {
  using Error::Error;
};
struct NoTargetInWorld : Error {
  using Error::Error;
};

// --- config / io ------------------------------------------------------------
struct ConfigError : Error {
  using Error::Error;
};
struct LlmError : Error {
  using Error::Error;
};

}  // namespace skillforge
