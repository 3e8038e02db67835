#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace emoclass {

std::string_view trim(std::string_view s);

// Splits on every occurrence of delim; empty fields are kept.
std::vector<std::string> split(std::string_view s, char delim);

// Splits file contents into lines; handles trailing newline and CRLF.
std::vector<std::string> split_lines(std::string_view text);

std::string to_lower_ascii(std::string_view s);

inline bool is_ascii_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string read_text_file(const std::string& path);   // io_failure if unreadable
void write_text_file(const std::string& path, std::string_view content);

}  // namespace emoclass
