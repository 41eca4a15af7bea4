#pragma once

// Small text helpers shared by the file-format readers and writers.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridsel::text {

std::string_view trim(std::string_view s);

/// Split on `sep`, trimming each field.
std::vector<std::string_view> split(std::string_view s, char sep);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest representation that parses back to the identical double.
std::string format_double(double v);

/// Hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// A file that cannot be opened, read or written.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace gridsel::text
