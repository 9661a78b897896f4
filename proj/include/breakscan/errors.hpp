#pragma once
// Error types shared by ingestion and the command layer.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace breakscan {

// Malformed input: wrong column count, bad integer, missing header.
class FormatError : public std::runtime_error {
public:
    FormatError(std::string file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

// Well-formed input that violates a structural invariant of the corpus
// (hierarchy contradictions, duplicate ids, years outside the declared range).
class ConsistencyError : public std::runtime_error {
public:
    ConsistencyError(std::string pub_id, const std::string& what)
        : std::runtime_error(what), pub_id_(std::move(pub_id)) {}

    // Empty when the violation is not tied to a single publication.
    const std::string& pub_id() const { return pub_id_; }

private:
    std::string pub_id_;
};

} // namespace breakscan
