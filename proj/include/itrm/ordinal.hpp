#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "itrm/nat.hpp"

namespace itrm {

// Error thrown by Ordinal::from_text; `position` is the byte offset of the
// offending character in the input.
class OrdinalParseError : public std::runtime_error {
 public:
  OrdinalParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// An ordinal below epsilon_0 in Cantor normal form:
//
//   sum over terms of  w^exponent * coefficient
//
// with exponents strictly decreasing and coefficients >= 1. The empty term
// list is 0. Values are immutable after construction.
class Ordinal {
 public:
  struct Term;

  Ordinal();
  explicit Ordinal(const Nat& n);  // finite ordinal
  explicit Ordinal(unsigned long n);
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal omega();
  // w^exponent * coefficient (coefficient >= 1 required).
  static Ordinal omega_power(const Ordinal& exponent, const Nat& coefficient);
  // Builds from a term list that must already be canonical.
  static Ordinal from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // The finite value, valid only when is_finite().
  Nat finite_value() const;
  // True iff nonzero with no constant term (a limit ordinal).
  bool is_limit() const;
  // True iff the canonical-form invariants hold (used by tests; construction
  // through the public interface always preserves them).
  bool is_canonical() const;

  int compare(const Ordinal& other) const;  // -1, 0, +1
  bool operator==(const Ordinal& other) const { return compare(other) == 0; }
  std::strong_ordering operator<=>(const Ordinal& other) const;

  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
  friend Ordinal operator*(const Ordinal& a, const Ordinal& b);

  std::string to_text() const;
  static Ordinal from_text(std::string_view text);

 private:
  // Invariant: strictly decreasing exponents, coefficients >= 1.
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  Nat coefficient;
};

}  // namespace itrm
