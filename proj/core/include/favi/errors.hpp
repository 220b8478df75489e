#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace favi {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// An evaluation setting (or aligned input) contained no items.
class EmptySetting : public Error {
public:
    EmptySetting() : Error("evaluation setting is empty") {}
    explicit EmptySetting(const std::string& message) : Error(message) {}
};

/// A collection that must hold exactly one setting per unordered
/// system pair had duplicates or gaps.
class InconsistentPairSet : public Error {
public:
    explicit InconsistentPairSet(const std::string& message) : Error(message) {}
};

/// A conditional distribution was requested for a human label that
/// never occurs in the data.
class DegenerateMarginal : public Error {
public:
    explicit DegenerateMarginal(const std::string& label)
        : Error("human label '" + label +
                "' has zero count; conditional probabilities are undefined"),
          label_(label) {}

    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

/// A scalar score was NaN or infinite.
class InvalidScore : public Error {
public:
    explicit InvalidScore(const std::string& message) : Error(message) {}
};

/// A required (item, system) score is not present.
class MissingScore : public Error {
public:
    MissingScore(const std::string& item, const std::string& system)
        : Error("no score for item '" + item + "' and system '" + system + "'"),
          item_(item),
          system_(system) {}

    const std::string& item() const noexcept { return item_; }
    const std::string& system() const noexcept { return system_; }

private:
    std::string item_;
    std::string system_;
};

/// Malformed input file content.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::uint64_t line, const std::string& message)
        : Error(source + ":" + std::to_string(line) + ": " + message),
          source_(source),
          line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::uint64_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::uint64_t line_;
};

/// The same unordered system pair appeared in both orderings without
/// permission to fold them together.
class OrderingConflict : public Error {
public:
    explicit OrderingConflict(const std::string& message) : Error(message) {}
};

/// A judge backend call failed (or had no way to be served).
class TransportError : public Error {
public:
    explicit TransportError(const std::string& message) : Error(message), item_() {}
    TransportError(const std::string& item, const std::string& message)
        : Error("item '" + item + "': " + message), item_(item) {}

    const std::string& item() const noexcept { return item_; }

private:
    std::string item_;
};

/// A judge response did not map to any known preference option.
class UnparseableResponse : public Error {
public:
    explicit UnparseableResponse(const std::string& raw)
        : Error("unparseable preference '" + raw + "'"), raw_(raw) {}
    UnparseableResponse(const std::string& item, const std::string& raw)
        : Error("item '" + item + "': unparseable preference '" + raw + "'"), raw_(raw) {}

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

/// Catch-all for argument contract violations.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& message) : Error(message) {}
};

/// A ranking graph operation received or produced a cycle.
class CyclicGraph : public Error {
public:
    explicit CyclicGraph(const std::string& message) : Error(message) {}
};

}  // namespace favi
