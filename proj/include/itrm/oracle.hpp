#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itrm/nat.hpp"

namespace itrm {

// Cantor's pairing function p(i,j) = (i+j)(i+j+1)/2 + i and its inverse.
Nat cantor_pair(const Nat& i, const Nat& j);
std::pair<Nat, Nat> cantor_unpair(const Nat& n);

class OracleParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A subset of the naturals, queried bitwise by the machine's qry instruction.
// Three representations:
//   finite    — an explicit finite set
//   periodic  — eventually periodic bit sequence (preperiod + period), kept
//               canonical: the period is not a proper power and the
//               preperiod is minimal
//   predicate — an arbitrary total membership function (not representable;
//               excluded from joins and from exact equality)
// Values are immutable and cheap to copy.
class OracleReal {
 public:
  enum class Kind { Finite, Periodic, Predicate };

  OracleReal();  // empty set

  static OracleReal finite(std::vector<Nat> elements);
  static OracleReal periodic(std::vector<bool> preperiod, std::vector<bool> period);
  static OracleReal predicate(std::function<bool(const Nat&)> membership,
                              std::string description);

  static OracleReal empty_set();
  static OracleReal evens();
  static OracleReal naturals();

  // Text format: finite:{1,3,5} | periodic:pre=0,per=10 | evens|empty|naturals
  static OracleReal from_text(std::string_view text);
  std::string to_text() const;

  bool bit_at(const Nat& n) const;

  Kind kind() const;
  bool is_representable() const { return kind() != Kind::Predicate; }

  // Eventually-periodic view (finite and periodic oracles): the canonical
  // preperiod and period bit strings. A finite set has period {0}. False for
  // predicate oracles and finite sets with elements beyond 2^22.
  bool has_periodic_view() const;
  const std::vector<bool>& preperiod_bits() const;
  const std::vector<bool>& period_bits() const;

  // Elements of a finite oracle, sorted ascending.
  const std::vector<Nat>& finite_elements() const;

  // Exact extensional equality for representable oracles; predicate oracles
  // are compared bit-by-bit up to `probe_bound`.
  static bool extensionally_equal(const OracleReal& a, const OracleReal& b,
                                  const Nat& probe_bound = Nat(4096));

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// The paper's join: {p(i,j) | i in a, j in b}, realized as a predicate
// oracle. Both inputs must be representable.
OracleReal join(const OracleReal& a, const OracleReal& b);

// Row projection {m | p(i,m) in j}; recovers b from join(a,b) for any i in a.
OracleReal project_row(const OracleReal& j, const Nat& i);

}  // namespace itrm
