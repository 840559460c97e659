#pragma once

#include <stdexcept>
#include <string>

namespace swx {

enum class Errc {
    parse,       // malformed regex / JSON / stream spec
    invalid,     // argument outside its domain
    contract,    // caller contract violated (tag check, alphabet mismatch, ...)
    no_witness,  // witness requested for a class the language belongs to
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace swx
