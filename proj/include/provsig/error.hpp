#pragma once

#include <stdexcept>
#include <string>

namespace provsig {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class MalformedElf : public Error {
  public:
    explicit MalformedElf(const std::string& what) : Error("malformed ELF: " + what) {}
};

class UnsupportedElf : public Error {
  public:
    explicit UnsupportedElf(const std::string& what) : Error("unsupported ELF: " + what) {}
};

class MalformedArchive : public Error {
  public:
    explicit MalformedArchive(const std::string& what) : Error("malformed archive: " + what) {}
};

class MalformedVerdef : public Error {
  public:
    explicit MalformedVerdef(const std::string& what) : Error("malformed version definitions: " + what) {}
};

class NoTextSection : public Error {
  public:
    explicit NoTextSection(const std::string& origin) : Error(origin + ": no .text section") {}
};

class LabelMismatch : public Error {
  public:
    LabelMismatch(const std::string& a, const std::string& b)
        : Error("cannot compare versions of different labels: " + a + " vs " + b) {}
};

class Unanchorable : public Error {
  public:
    explicit Unanchorable(const std::string& name)
        : Error("signature " + name + " has no literal run of at least 2 bytes") {}
};

class DuplicateSignatureName : public Error {
  public:
    explicit DuplicateSignatureName(const std::string& name) : Error("duplicate signature name: " + name) {}
};

class MalformedSigFile : public Error {
  public:
    explicit MalformedSigFile(const std::string& what) : Error("malformed signature file: " + what) {}
};

class EmptyDatabase : public Error {
  public:
    explicit EmptyDatabase(const std::string& dir) : Error("no signature files could be loaded from " + dir) {}
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace provsig
