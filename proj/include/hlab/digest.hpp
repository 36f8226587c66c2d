#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace hlab {

// 256-bit digest used to pin program images byte-exactly.
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::string_view bytes);

std::string to_hex(const Digest& d);

// Short prefix (12 hex chars) for logs and reports.
std::string hex_prefix(const Digest& d);

}  // namespace hlab
