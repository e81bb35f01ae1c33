#pragma once

#include <stdexcept>
#include <string>

namespace argmine {

// Base for all toolkit failures. Derived types name the contract that broke.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// corpus
struct MalformedRecord : Error { using Error::Error; };
struct DuplicateClauseId : Error { using Error::Error; };
struct DanglingArgumentRef : Error { using Error::Error; };
struct TooFewDocuments : Error { using Error::Error; };

// embeddings
struct EmptyText : Error { using Error::Error; };
struct MalformedVectorFile : Error { using Error::Error; };

// encoders
struct AllPaddingInput : Error { using Error::Error; };

// training
struct SingleClassTrainSet : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };

// evaluation
struct LengthMismatch : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };

// configuration / io
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace argmine
