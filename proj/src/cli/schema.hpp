#pragma once

#include <string>
#include <vector>

namespace latdef::cli::detail {

enum class ArgType { Real, Int, Text, Reals, Flag };

struct ArgDef {
  const char* name;
  ArgType type;
  const char* help;
};

struct CommandDef {
  const char* name;
  const char* help;
  std::vector<ArgDef> args;
};

const std::vector<CommandDef>& commands();

/// nullptr if unknown.
const CommandDef* find_command(const std::string& name);

}  // namespace latdef::cli::detail
