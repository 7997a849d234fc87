#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stablemc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An argument lies outside its documented domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// A window or random time reached past the trajectory horizon cap.
class HorizonExceeded : public Error {
public:
    HorizonExceeded(std::uint64_t requested, std::uint64_t horizon,
                    std::uint64_t replicate_id, std::uint64_t n)
        : Error("horizon exceeded: index " + std::to_string(requested) + " > cap " +
                std::to_string(horizon) + " (replicate " + std::to_string(replicate_id) +
                ", n=" + std::to_string(n) + ")"),
          requested_index(requested),
          horizon(horizon),
          replicate_id(replicate_id),
          n(n) {}

    std::uint64_t requested_index;
    std::uint64_t horizon;
    std::uint64_t replicate_id;
    std::uint64_t n;
};

// A conditioning event retained too few replicates for a usable estimate.
class InsufficientConditioningMass : public Error {
public:
    InsufficientConditioningMass(const std::string& event_label, std::uint64_t count,
                                 std::uint64_t required)
        : Error("conditioning event '" + event_label + "' retained " + std::to_string(count) +
                " replicates, need at least " + std::to_string(required)),
          event_label(event_label),
          count(count),
          required(required) {}

    std::string event_label;
    std::uint64_t count;
    std::uint64_t required;
};

class EmptySample : public Error {
public:
    explicit EmptySample(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace stablemc
