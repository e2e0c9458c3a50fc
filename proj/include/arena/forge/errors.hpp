#pragma once

#include <stdexcept>

namespace arena::forge {

/// A generated artifact failed validation and the retry budget is spent.
class GenerationRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reply could not be read as the requested record format.
class SchemaError : public GenerationRejected {
 public:
  using GenerationRejected::GenerationRejected;
};

}  // namespace arena::forge
