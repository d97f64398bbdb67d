#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixann {

enum class ErrorCode {
  MissingFile,
  ParseError,
  LabelError,
  InsufficientClassSamples,
  InvalidConfig,
  DimensionMismatch,
  EmptyIndex,
  NoSuchLabel,
  SingleClassData,
  LengthMismatch,
  EmptyMatrix,
  AlphaOutOfRange,
  TooFewMinority,
  EmptyNeighborhood,
  NoOppositeLabel,
  EmptyBatch,
  BufferTooSmall,
  ShapeMismatch,
  VersionMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Row and column are 1-based, counted over data rows (header excluded).
class ParseError : public Error {
public:
  ParseError(std::size_t row, std::size_t column, const std::string& detail)
      : Error(ErrorCode::ParseError, "row " + std::to_string(row) + ", column " +
                                         std::to_string(column) + ": " + detail),
        row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace mixann
