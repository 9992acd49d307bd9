#pragma once

#include <stdexcept>
#include <string>

namespace ndchaos {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A point fed to an operation lies outside the domain of its system.
struct DomainViolationError : Error { using Error::Error; };

// A materialized orbit would exceed the configured memory cap.
struct CapacityError : Error { using Error::Error; };

// An argument fails a precondition (bad epsilon, empty interval, ...).
struct ParameterError : Error { using Error::Error; };

// Exact integer recursion left the native integer range.
struct OverflowError : Error { using Error::Error; };

// A sequence has no generator and cannot be extended to the needed length.
struct ExtensionError : Error { using Error::Error; };

// A sequence family member ran out of terms during a construction.
struct InsufficientSequenceError : Error { using Error::Error; };

// An input sequence violates its stated bound.
struct BoundViolationError : Error { using Error::Error; };

// A checkpoint schedule is too shallow for the requested horizon.
struct ScheduleError : Error { using Error::Error; };

// A nested family numerically fails the expanding inclusion.
struct ExpandingConditionError : Error { using Error::Error; };

// Inputs make a construction's hypothesis vacuous (e.g. merging sequences
// with infinite overlap).
struct PreconditionError : Error { using Error::Error; };

// Unknown gallery id or failed metadata verification at load.
struct GalleryError : Error { using Error::Error; };

// Malformed config or serialized object.
struct SchemaError : Error { using Error::Error; };

}  // namespace ndchaos
