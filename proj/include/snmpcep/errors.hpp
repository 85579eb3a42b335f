#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace snmpcep {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument to a constructor-like operation (unknown measure,
// empty signal name, violated precondition).
struct ValueError : Error {
  using Error::Error;
};

// Lexer/parser failure, positioned in the pattern source.
struct ParseError : Error {
  int line = 0;
  int col = 0;
  ParseError(std::string msg, int line_, int col_)
      : Error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
              ": " + std::move(msg)),
        line(line_),
        col(col_) {}
};

// Static validation failure (unknown measure, bad delta expression, type error).
struct ValidateError : Error {
  using Error::Error;
};

// Trace file failure, positioned by line number.
struct TraceError : Error {
  std::size_t line_no = 0;
  TraceError(std::string msg, std::size_t line_no_)
      : Error("line " + std::to_string(line_no_) + ": " + std::move(msg)),
        line_no(line_no_) {}
};

// Event delivered against the in-order contract.
struct OutOfOrderError : Error {
  std::int64_t have_ms = 0;
  std::int64_t got_ms = 0;
  OutOfOrderError(std::int64_t have, std::int64_t got)
      : Error("out-of-order event: clock at " + std::to_string(have) +
              " ms, got " + std::to_string(got) + " ms"),
        have_ms(have),
        got_ms(got) {}
};

struct SnmpError : Error {
  using Error::Error;
};

struct SnmpTimeout : SnmpError {
  using SnmpError::SnmpError;
};

}  // namespace snmpcep
