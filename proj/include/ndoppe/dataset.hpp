#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "ndoppe/errors.hpp"
#include "ndoppe/sample.hpp"

namespace ndoppe {

/// Parses whitespace-separated decimal counts. Every token must match
/// [0-9]+; tokens are separated by any ASCII whitespace.
inline Sample parse_dataset(std::string_view text) {
  std::vector<std::int64_t> values;
  std::size_t pos = 0;
  std::size_t token_index = 0;
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };

  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    if (pos == text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_space(text[end])) ++end;
    const std::string_view token = text.substr(pos, end - pos);
    ++token_index;

    for (const char c : token)
      if (c < '0' || c > '9')
        throw ParseError(token_index, "'" + std::string(token) + "' is not a nonnegative integer");
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw ParseError(token_index, "'" + std::string(token) + "' is out of range");
    values.push_back(v);
    pos = end;
  }
  if (values.empty()) throw ParseError(0, "dataset is empty");
  return Sample(std::move(values));
}

inline Sample parse_dataset(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_dataset(std::string_view(text));
}

}  // namespace ndoppe
