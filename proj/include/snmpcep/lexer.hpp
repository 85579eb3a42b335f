#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snmpcep/errors.hpp"

namespace snmpcep {

struct Token {
  enum class Kind { Keyword, Ident, Accessor, Text, Int, Op, Punct, End };
  Kind kind = Kind::End;
  std::string text;         // keyword/ident/accessor/operator/punct spelling, text body
  std::int64_t int_val = 0; // Kind::Int
  int line = 1;
  int col = 1;
};

namespace detail {

inline bool is_keyword(std::string_view s) {
  static constexpr std::string_view kw[] = {"select", "istream", "from", "pattern",
                                            "every",  "and",     "or",   "where",
                                            "sec",    "Event",   "true", "false"};
  for (auto k : kw)
    if (s == k) return true;
  return false;
}

inline bool is_accessor(std::string_view s) {
  return s == "getSNMPvalue" || s == "getMeasure" || s == "getAdapterFlag";
}

}  // namespace detail

// Splits pattern source into tokens. Comments (`-- ...` to end of line) and
// whitespace are discarded. Throws ParseError with position on bad input.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tline = line, tcol = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string digits(src.substr(i, j - i));
      Token t{Token::Kind::Int, digits, 0, tline, tcol};
      try {
        t.int_val = std::stoll(digits);
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range: " + digits, tline, tcol);
      }
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      // win:time and timer:within are single keywords.
      if ((word == "win" || word == "timer") && j < src.size() && src[j] == ':') {
        std::size_t k = j + 1;
        while (k < src.size() && std::isalpha(static_cast<unsigned char>(src[k]))) ++k;
        std::string compound(src.substr(i, k - i));
        if (compound == "win:time" || compound == "timer:within") {
          out.push_back({Token::Kind::Keyword, compound, 0, tline, tcol});
          advance(k - i);
          continue;
        }
      }
      Token::Kind kind = detail::is_keyword(word)    ? Token::Kind::Keyword
                         : detail::is_accessor(word) ? Token::Kind::Accessor
                                                     : Token::Kind::Ident;
      out.push_back({kind, std::move(word), 0, tline, tcol});
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '\'' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '\'')
        throw ParseError("unterminated text literal", tline, tcol);
      out.push_back({Token::Kind::Text, std::string(src.substr(i + 1, j - i - 1)), 0, tline, tcol});
      advance(j + 1 - i);
      continue;
    }
    auto two = i + 1 < src.size() ? src.substr(i, 2) : std::string_view{};
    if (two == "->" || two == ">=" || two == "<=" || two == "!=") {
      out.push_back({Token::Kind::Op, std::string(two), 0, tline, tcol});
      advance(2);
      continue;
    }
    if (c == '>' || c == '<' || c == '=' || c == '-' || c == '+') {
      out.push_back({Token::Kind::Op, std::string(1, c), 0, tline, tcol});
      advance(1);
      continue;
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == '.' || c == '*') {
      out.push_back({Token::Kind::Punct, std::string(1, c), 0, tline, tcol});
      advance(1);
      continue;
    }
    throw ParseError(std::string("illegal character '") + c + "'", tline, tcol);
  }
  return out;
}

}  // namespace snmpcep
