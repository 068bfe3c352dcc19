#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gna {

// Error taxonomy shared by the library and the command line tool.
// The tool maps these onto process exit codes:
//   2  malformed input (config, file schema, expression syntax, evaluation)
//   3  violated mathematical precondition (non-invertible scalar, wrong
//      symmetry class, non-free generators, ...)
//   4  a checked postcondition failed after construction (the heuristic
//      classifier rejected output the theory promises)
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Mismatched grids, shapes, or partitions between operands.
class StructuralError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::string message, std::size_t offset, std::string expected)
      : Error(std::move(message)), offset(offset), expected(std::move(expected)) {}
  std::size_t offset;   // byte offset into the source text
  std::string expected; // human-readable expected-token set
};

// Domain failure while evaluating an expression at one grid sample.
class EvalError : public Error {
public:
  EvalError(std::string message, std::ptrdiff_t sample_index)
      : Error(std::move(message)), sample_index(sample_index) {}
  std::ptrdiff_t sample_index;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

class PostconditionError : public Error {
public:
  using Error::Error;
};

// Input outside its required symmetry class (Hermitian / skew-symmetric).
class SymmetryError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

} // namespace gna
