#include "itrm/oracle.hpp"

#include <algorithm>

namespace itrm {

Nat cantor_pair(const Nat& i, const Nat& j) {
  Nat s = i + j;
  return s * (s + 1) / 2 + i;
}

std::pair<Nat, Nat> cantor_unpair(const Nat& n) {
  using boost::multiprecision::sqrt;
  Nat w = (sqrt(Nat(8 * n + 1)) - 1) / 2;
  Nat t = w * (w + 1) / 2;
  if (t > n) {
    --w;
    t = w * (w + 1) / 2;
  } else if (n - t > w) {
    ++w;
    t = w * (w + 1) / 2;
  }
  Nat i = n - t;
  return {i, w - i};
}

struct OracleReal::Impl {
  Kind kind = Kind::Finite;
  std::vector<Nat> elements;  // finite, sorted
  bool view_built = false;    // pre/per populated (false for predicate and
                              // for finite sets with impractically large elements)
  std::vector<bool> pre;      // eventually-periodic view (finite + periodic)
  std::vector<bool> per;
  std::function<bool(const Nat&)> membership;  // predicate
  std::string description;                     // predicate
};

namespace {

// Reduces the period to its primitive root and absorbs preperiod bits that
// merely repeat the tail of the period.
void canonicalize(std::vector<bool>& pre, std::vector<bool>& per) {
  if (per.empty()) throw std::invalid_argument("periodic oracle: empty period");
  for (std::size_t d = 1; d <= per.size() / 2; ++d) {
    if (per.size() % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < per.size() && ok; ++i) ok = per[i] == per[i % d];
    if (ok) {
      per.resize(d);
      break;
    }
  }
  while (!pre.empty() && pre.back() == per.back()) {
    pre.pop_back();
    per.insert(per.begin(), per.back());
    per.pop_back();
  }
}

std::shared_ptr<const OracleReal::Impl> make_finite(std::vector<Nat> elements) {
  auto impl = std::make_shared<OracleReal::Impl>();
  impl->kind = OracleReal::Kind::Finite;
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  for (const Nat& e : elements)
    if (e < 0) throw std::invalid_argument("finite oracle: negative element");
  impl->elements = std::move(elements);
  // Eventually-periodic view: bits up to the largest element, then zeros.
  if (impl->elements.empty() || impl->elements.back() < (1 << 22)) {
    if (!impl->elements.empty()) {
      std::size_t len = static_cast<std::size_t>(impl->elements.back()) + 1;
      impl->pre.assign(len, false);
      for (const Nat& e : impl->elements) impl->pre[static_cast<std::size_t>(e)] = true;
    }
    impl->per = {false};
    canonicalize(impl->pre, impl->per);
    impl->view_built = true;
  }
  return impl;
}

}  // namespace

OracleReal::OracleReal() : impl_(make_finite({})) {}

OracleReal OracleReal::finite(std::vector<Nat> elements) {
  OracleReal o;
  o.impl_ = make_finite(std::move(elements));
  return o;
}

OracleReal OracleReal::periodic(std::vector<bool> preperiod, std::vector<bool> period) {
  canonicalize(preperiod, period);
  // An all-zero period reduces the oracle to a finite set.
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Periodic;
  impl->view_built = true;
  impl->pre = std::move(preperiod);
  impl->per = std::move(period);
  if (impl->per.size() == 1 && !impl->per[0]) {
    std::vector<Nat> elements;
    for (std::size_t i = 0; i < impl->pre.size(); ++i)
      if (impl->pre[i]) elements.emplace_back(i);
    OracleReal o;
    o.impl_ = make_finite(std::move(elements));
    return o;
  }
  OracleReal o;
  o.impl_ = std::move(impl);
  return o;
}

OracleReal OracleReal::predicate(std::function<bool(const Nat&)> membership,
                                 std::string description) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Predicate;
  impl->membership = std::move(membership);
  impl->description = std::move(description);
  OracleReal o;
  o.impl_ = std::move(impl);
  return o;
}

OracleReal OracleReal::empty_set() { return OracleReal(); }

OracleReal OracleReal::evens() { return periodic({}, {true, false}); }

OracleReal OracleReal::naturals() { return periodic({}, {true}); }

bool OracleReal::bit_at(const Nat& n) const {
  if (n < 0) return false;
  switch (impl_->kind) {
    case Kind::Finite:
      return std::binary_search(impl_->elements.begin(), impl_->elements.end(), n);
    case Kind::Periodic: {
      if (n < impl_->pre.size()) return impl_->pre[static_cast<std::size_t>(n)];
      Nat off = (n - impl_->pre.size()) % impl_->per.size();
      return impl_->per[static_cast<std::size_t>(off)];
    }
    case Kind::Predicate:
      return impl_->membership(n);
  }
  return false;
}

OracleReal::Kind OracleReal::kind() const { return impl_->kind; }

bool OracleReal::has_periodic_view() const { return impl_->view_built; }

const std::vector<bool>& OracleReal::preperiod_bits() const {
  if (!impl_->view_built)
    throw std::logic_error("preperiod_bits: oracle has no periodic view");
  return impl_->pre;
}

const std::vector<bool>& OracleReal::period_bits() const {
  if (!impl_->view_built)
    throw std::logic_error("period_bits: oracle has no periodic view");
  return impl_->per;
}

const std::vector<Nat>& OracleReal::finite_elements() const {
  if (impl_->kind != Kind::Finite)
    throw std::logic_error("finite_elements: oracle is not a finite set");
  return impl_->elements;
}

bool OracleReal::extensionally_equal(const OracleReal& a, const OracleReal& b,
                                     const Nat& probe_bound) {
  if (a.impl_->view_built && b.impl_->view_built)
    return a.impl_->pre == b.impl_->pre && a.impl_->per == b.impl_->per;
  for (Nat n = 0; n < probe_bound; ++n)
    if (a.bit_at(n) != b.bit_at(n)) return false;
  return true;
}

std::string OracleReal::to_text() const {
  switch (impl_->kind) {
    case Kind::Finite: {
      std::string out = "finite:{";
      for (std::size_t i = 0; i < impl_->elements.size(); ++i) {
        if (i > 0) out += ',';
        out += nat_to_string(impl_->elements[i]);
      }
      return out + "}";
    }
    case Kind::Periodic: {
      auto bits = [](const std::vector<bool>& v) {
        std::string s;
        for (bool b : v) s += b ? '1' : '0';
        return s;
      };
      return "periodic:pre=" + bits(impl_->pre) + ",per=" + bits(impl_->per);
    }
    case Kind::Predicate:
      return "predicate:" + impl_->description;
  }
  return {};
}

namespace {

std::vector<bool> parse_bits(std::string_view s) {
  std::vector<bool> out;
  for (char c : s) {
    if (c == '0')
      out.push_back(false);
    else if (c == '1')
      out.push_back(true);
    else
      throw OracleParseError("oracle text: bit string may contain only 0 and 1");
  }
  return out;
}

}  // namespace

OracleReal OracleReal::from_text(std::string_view text) {
  if (text == "empty") return empty_set();
  if (text == "evens") return evens();
  if (text == "naturals") return naturals();
  if (text.rfind("finite:{", 0) == 0) {
    if (text.back() != '}') throw OracleParseError("oracle text: missing closing '}'");
    std::string_view body = text.substr(8, text.size() - 9);
    std::vector<Nat> elements;
    while (!body.empty()) {
      std::size_t comma = body.find(',');
      std::string_view item = body.substr(0, comma);
      if (item.empty() || item.find_first_not_of("0123456789") != std::string_view::npos)
        throw OracleParseError("oracle text: bad element '" + std::string(item) + "'");
      elements.emplace_back(std::string(item));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
      if (body.empty()) throw OracleParseError("oracle text: trailing comma");
    }
    return finite(std::move(elements));
  }
  if (text.rfind("periodic:pre=", 0) == 0) {
    std::string_view body = text.substr(13);
    std::size_t sep = body.find(",per=");
    if (sep == std::string_view::npos)
      throw OracleParseError("oracle text: periodic form needs ',per='");
    std::vector<bool> pre = parse_bits(body.substr(0, sep));
    std::vector<bool> per = parse_bits(body.substr(sep + 5));
    if (per.empty()) throw OracleParseError("oracle text: period must be nonempty");
    return periodic(std::move(pre), std::move(per));
  }
  throw OracleParseError("oracle text: unrecognized form '" + std::string(text) + "'");
}

OracleReal join(const OracleReal& a, const OracleReal& b) {
  if (!a.is_representable() || !b.is_representable())
    throw std::invalid_argument("join: both oracles must be finite or periodic");
  std::string desc = "join(" + a.to_text() + "," + b.to_text() + ")";
  return OracleReal::predicate(
      [a, b](const Nat& n) {
        auto [i, j] = cantor_unpair(n);
        return a.bit_at(i) && b.bit_at(j);
      },
      std::move(desc));
}

OracleReal project_row(const OracleReal& j, const Nat& i) {
  std::string desc = "row(" + nat_to_string(i) + "," + j.to_text() + ")";
  return OracleReal::predicate(
      [j, i](const Nat& m) { return j.bit_at(cantor_pair(i, m)); }, std::move(desc));
}

}  // namespace itrm
