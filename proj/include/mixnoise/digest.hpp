#pragma once

#include <string>

namespace mixnoise {

// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& text);

}  // namespace mixnoise
