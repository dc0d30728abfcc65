#include "itrm/ordinal.hpp"

#include <utility>

namespace itrm {

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal::Ordinal(const Nat& n) {
  if (n > 0) terms_.push_back(Term{Ordinal(), n});
}

Ordinal::Ordinal(unsigned long n) : Ordinal(Nat(n)) {}

Ordinal Ordinal::omega() { return omega_power(Ordinal(Nat(1)), 1); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, const Nat& coefficient) {
  if (coefficient < 1) throw std::invalid_argument("omega_power: coefficient must be >= 1");
  if (exponent.is_zero()) return Ordinal(coefficient);
  Ordinal r;
  r.terms_.push_back(Term{exponent, coefficient});
  return r;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  Ordinal r;
  r.terms_ = std::move(terms);
  if (!r.is_canonical()) throw std::invalid_argument("from_terms: term list is not canonical");
  return r;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

Nat Ordinal::finite_value() const {
  if (terms_.empty()) return 0;
  return terms_[0].coefficient;
}

bool Ordinal::is_limit() const {
  return !terms_.empty() && !terms_.back().exponent.is_zero();
}

bool Ordinal::is_canonical() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coefficient < 1) return false;
    if (!terms_[i].exponent.is_canonical()) return false;
    if (i + 1 < terms_.size() &&
        terms_[i].exponent.compare(terms_[i + 1].exponent) <= 0)
      return false;
  }
  return true;
}

int Ordinal::compare(const Ordinal& other) const {
  std::size_t n = std::min(terms_.size(), other.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = terms_[i].exponent.compare(other.terms_[i].exponent);
    if (c != 0) return c;
    if (terms_[i].coefficient != other.terms_[i].coefficient)
      return terms_[i].coefficient < other.terms_[i].coefficient ? -1 : 1;
  }
  if (terms_.size() == other.terms_.size()) return 0;
  return terms_.size() < other.terms_.size() ? -1 : 1;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& other) const {
  int c = compare(other);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& lead = b.terms_[0].exponent;
  Ordinal r;
  std::size_t i = 0;
  while (i < a.terms_.size() && a.terms_[i].exponent.compare(lead) > 0)
    r.terms_.push_back(a.terms_[i++]);
  if (i < a.terms_.size() && a.terms_[i].exponent.compare(lead) == 0) {
    r.terms_.push_back(
        Ordinal::Term{lead, a.terms_[i].coefficient + b.terms_[0].coefficient});
  } else {
    r.terms_.push_back(b.terms_[0]);
  }
  for (std::size_t j = 1; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
  return r;
}

Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  Ordinal result;
  const Ordinal::Term& lead = a.terms_[0];
  for (const Ordinal::Term& t : b.terms_) {
    Ordinal part;
    if (t.exponent.is_zero()) {
      // a * k: the leading coefficient scales, the tail of a survives once.
      part.terms_.push_back(Ordinal::Term{lead.exponent, lead.coefficient * t.coefficient});
      for (std::size_t j = 1; j < a.terms_.size(); ++j) part.terms_.push_back(a.terms_[j]);
    } else {
      part.terms_.push_back(Ordinal::Term{lead.exponent + t.exponent, t.coefficient});
    }
    result = result + part;
  }
  return result;
}

std::string Ordinal::to_text() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += '+';
    const Term& t = terms_[i];
    if (t.exponent.is_zero()) {
      out += nat_to_string(t.coefficient);
    } else {
      out += "w^{";
      out += t.exponent.to_text();
      out += "}*";
      out += nat_to_string(t.coefficient);
    }
  }
  return out;
}

namespace {

// Recursive-descent parser for the ordinal grammar:
//   ord  := "0" | term ("+" term)*
//   term := nat | "w^{" ord "}*" nat
//   nat  := [1-9][0-9]* | "0"
// No whitespace. Exponents must strictly decrease; coefficients must be >= 1.
class OrdParser {
 public:
  explicit OrdParser(std::string_view text) : text_(text) {}

  Ordinal parse_all() {
    Ordinal r = parse_ord();
    if (pos_ != text_.size()) fail("trailing characters after ordinal");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw OrdinalParseError(msg + " at position " + std::to_string(pos_), pos_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  Nat parse_nat() {
    if (at_end() || peek() < '0' || peek() > '9') fail("expected a number");
    if (peek() == '0') {
      ++pos_;
      if (!at_end() && peek() >= '0' && peek() <= '9') fail("leading zero in number");
      return 0;
    }
    std::string digits;
    while (!at_end() && peek() >= '0' && peek() <= '9') digits += text_[pos_++];
    return Nat(digits);
  }

  Ordinal parse_ord() {
    if (at_end()) fail("empty ordinal");
    if (peek() == '0') {
      ++pos_;
      if (!at_end() && peek() >= '0' && peek() <= '9') fail("leading zero in number");
      return Ordinal();
    }
    std::vector<Ordinal::Term> terms;
    while (true) {
      std::size_t term_pos = pos_;
      Ordinal::Term t = parse_term();
      if (t.coefficient < 1) {
        pos_ = term_pos;
        fail("coefficient must be >= 1");
      }
      if (!terms.empty() && terms.back().exponent.compare(t.exponent) <= 0) {
        pos_ = term_pos;
        fail("exponents must be strictly decreasing");
      }
      terms.push_back(std::move(t));
      if (at_end() || peek() != '+') break;
      ++pos_;
    }
    return Ordinal::from_terms(std::move(terms));
  }

  Ordinal::Term parse_term() {
    if (peek() == 'w') {
      ++pos_;
      expect('^');
      expect('{');
      Ordinal exp = parse_ord();
      expect('}');
      expect('*');
      Nat coeff = parse_nat();
      return Ordinal::Term{std::move(exp), std::move(coeff)};
    }
    Nat coeff = parse_nat();
    return Ordinal::Term{Ordinal(), std::move(coeff)};
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::from_text(std::string_view text) {
  return OrdParser(text).parse_all();
}

}  // namespace itrm
