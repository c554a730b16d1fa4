#pragma once

#include <string>

#include "provsig/elf.hpp"

namespace provsig {

/// RFC 1321 digest as 32 lowercase hex characters.
std::string md5_hex(ByteView data);

} // namespace provsig
