#pragma once

#include <stdexcept>
#include <string>

namespace arena::gateway {

class GatewayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every attempt failed (transport error, 429, 5xx) or the endpoint refused
/// the request outright.
class EndpointUnreachable : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

/// The last attempt timed out after the retry budget was spent.
class Timeout : public EndpointUnreachable {
 public:
  using EndpointUnreachable::EndpointUnreachable;
};

/// 2xx reply whose envelope does not carry choices[0].message.content.
class MalformedResponse : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class CacheCorrupt : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

/// A mock script has no entry matching the request.
class MockScriptExhausted : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

}  // namespace arena::gateway
