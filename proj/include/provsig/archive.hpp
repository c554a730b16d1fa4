#pragma once

#include <string>
#include <vector>

#include "provsig/elf.hpp"

namespace provsig {

struct ArchiveMember {
    std::string name;
    Bytes bytes;
};

bool has_archive_magic(ByteView data);

/// Regular members of a System V / GNU `ar` archive. The symbol index (`/`,
/// `/SYM64/`) and long-name table (`//`) are consumed, not returned.
/// Throws MalformedArchive.
std::vector<ArchiveMember> parse_archive(ByteView data);

} // namespace provsig
