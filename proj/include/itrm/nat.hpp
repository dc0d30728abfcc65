#pragma once

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace itrm {

// Unbounded natural number. Register contents, ordinal coefficients and
// program codes use this type; values are kept nonnegative by construction.
using Nat = boost::multiprecision::cpp_int;

inline std::string nat_to_string(const Nat& n) { return n.str(); }

inline std::size_t nat_hash(const Nat& n) { return boost::hash<Nat>{}(n); }

}  // namespace itrm
