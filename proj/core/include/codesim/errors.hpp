#pragma once

#include <stdexcept>
#include <string>

namespace codesim {

// Base class for every recoverable error the library raises. The CLI maps
// these to exit code 2 (user input); anything else is an internal error.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class EmptyCorpus : public Error {
public:
    using Error::Error;
};

class EmptyData : public Error {
public:
    using Error::Error;
};

class SingleClassData : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class SpanOutOfRange : public Error {
public:
    using Error::Error;
};

class NoSubmissions : public Error {
public:
    using Error::Error;
};

class CorpusError : public Error {
public:
    using Error::Error;
};

class UnknownId : public Error {
public:
    UnknownId(const std::string& id, const std::string& what) : Error(what), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class ConflictingLabel : public Error {
public:
    using Error::Error;
};

class MalformedRow : public Error {
public:
    MalformedRow(int line, const std::string& what) : Error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

}  // namespace codesim
