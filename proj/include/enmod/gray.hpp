#pragma once

#include <cstdint>
#include <string>

namespace enmod {

/// Binary reflected Gray code of index, which must be below 2^bits.
std::uint32_t gray_map(std::uint32_t index, int bits);
/// Inverse of gray_map.
std::uint32_t gray_unmap(std::uint32_t code, int bits);
/// Code as a string of '0'/'1', most significant bit first.
std::string gray_bits(std::uint32_t index, int bits);

}  // namespace enmod
