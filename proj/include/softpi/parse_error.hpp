#pragma once

#include <stdexcept>
#include <string>

namespace softpi {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& what_)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + what_),
        line(line_),
        col(col_) {}
};

}  // namespace softpi
