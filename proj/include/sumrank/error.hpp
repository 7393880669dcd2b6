#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumrank {

enum class Errc {
  NonPrimeCharacteristic,
  FieldTooLarge,
  NotIrreducible,
  NotASubfield,
  DimensionMismatch,
  WrongField,
  RankOutOfRange,
  NotCoprime,
  BadRepresentative,
  BudgetExceeded,
  CapReached,
  DegenerateCodec,
  GeometryMismatch,
  LengthMismatch,
  BadDivisor,
  UnsupportedAlphabet,
  InputNotVerified,
  NonIntegralLog,
  ConfigError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sumrank
