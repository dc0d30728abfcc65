#include "symbolic.hpp"

#include <algorithm>

namespace itrm {
namespace detail {

GapAnalysis analyze_gap(const Form& lhs, const Form& rhs) {
  // Values are equal at repetition n iff (lhs.a - rhs.a) == n * (rhs.b - lhs.b).
  Nat da = lhs.a - rhs.a;
  Nat dd = rhs.b - lhs.b;
  GapAnalysis g;
  if (da == 0 && dd == 0) {
    g.equal_at_zero = true;
    g.uniform = true;
  } else if (da == 0) {
    g.equal_at_zero = true;
    g.uniform = false;
    g.flip = 1;
  } else if (dd == 0) {
    g.equal_at_zero = false;
    g.uniform = true;
  } else if ((da > 0) == (dd > 0) && da % dd == 0) {
    g.equal_at_zero = false;
    g.uniform = false;
    g.flip = da / dd;
  } else {
    g.equal_at_zero = false;
    g.uniform = true;
  }
  return g;
}

namespace {

constexpr std::size_t kSymWindowCap = 4096;
constexpr int kInnerFastForwardCap = 64;

void merge_flip(std::optional<Nat>& into, const Nat& candidate) {
  if (!into || candidate < *into) into = candidate;
}

// One symbolic step over affine forms following the n = 0 branch outcomes.
struct SymStep {
  std::size_t next_pc = 0;
  std::optional<Nat> flip;
  std::optional<std::string> bail;
};

SymStep sym_step(std::vector<Form>& f, std::size_t pc, const Program& p,
                 const OracleReal& x) {
  SymStep out;
  const Instruction& ins = p.lines()[pc];
  out.next_pc = pc + 1;
  switch (ins.op) {
    case Opcode::Zero:
      f[ins.r] = Form{0, 0};
      break;
    case Opcode::Inc:
      f[ins.r].a += 1;
      break;
    case Opcode::Copy:
      f[ins.s] = f[ins.r];
      break;
    case Opcode::Qry: {
      const Form& addr = f[ins.r];
      bool bit;
      if (addr.b == 0) {
        bit = x.bit_at(addr.a);
      } else if (x.has_periodic_view()) {
        Nat period = x.period_bits().size();
        Nat preperiod = x.preperiod_bits().size();
        if (addr.b % period == 0 && addr.a >= preperiod) {
          bit = x.bit_at(addr.a);
        } else {
          out.bail = "oracle read at a drifting address is not repetition-stable";
          return out;
        }
      } else {
        out.bail = "oracle read at a drifting address with no periodic representation";
        return out;
      }
      f[ins.s] = Form{bit ? 1 : 0, 0};
      break;
    }
    case Opcode::Jeq: {
      if (ins.target == pc + 1) break;  // both outcomes land on the same line
      GapAnalysis g = analyze_gap(f[ins.r], f[ins.s]);
      if (!g.uniform) out.flip = g.flip;
      if (g.equal_at_zero) out.next_pc = ins.target;
      break;
    }
  }
  return out;
}

// ---- Inner-cycle machinery over forms (used by the segment replay) ----

struct SymConfig {
  std::size_t pc = 0;
  std::vector<Form> regs;
};

struct InnerWitness {
  std::size_t start = 0;  // index into the history
  std::size_t cycle = 0;
  std::vector<std::size_t> pc_trace;
  std::vector<std::vector<Form>> base;   // cycle x R
  std::vector<std::vector<Form>> drift;  // cycle x R
};

// Componentwise difference as a valid form; nullopt when the later form is
// not pointwise >= the earlier one for every n.
std::optional<Form> form_drift(const Form& earlier, const Form& later) {
  if (later.a < earlier.a || later.b < earlier.b) return std::nullopt;
  Form d{later.a - earlier.a, later.b - earlier.b};
  // Drift that vanishes at n = 0 but not later cannot be classified uniformly.
  if (d.a == 0 && d.b > 0) return std::nullopt;
  return d;
}

std::optional<InnerWitness> try_candidate(const std::vector<SymConfig>& h, std::size_t c,
                                          const Program& p, const OracleReal& x) {
  std::size_t n = h.size();
  if (c == 0 || n < 4 * c) return std::nullopt;
  std::size_t R = h[0].regs.size();
  std::size_t t = n - 4 * c;
  for (std::size_t j = t; j + c < n; ++j)
    if (h[j].pc != h[j + c].pc) return std::nullopt;

  std::vector<std::vector<Form>> base(c), drift(c);
  for (std::size_t k = 0; k < c; ++k) {
    base[k] = h[t + k].regs;
    drift[k].resize(R);
    for (std::size_t r = 0; r < R; ++r) {
      auto d = form_drift(h[t + k].regs[r], h[t + c + k].regs[r]);
      if (!d) return std::nullopt;
      drift[k][r] = *d;
    }
  }
  // Affine verification across every position from t.
  for (std::size_t j = t; j < n; ++j) {
    std::size_t k = (j - t) % c;
    Nat m = (j - t) / c;
    for (std::size_t r = 0; r < R; ++r) {
      if (h[j].regs[r].a != base[k][r].a + m * drift[k][r].a) return std::nullopt;
      if (h[j].regs[r].b != base[k][r].b + m * drift[k][r].b) return std::nullopt;
    }
  }

  InnerWitness w;
  w.start = t;
  w.cycle = c;
  w.pc_trace.resize(c);
  for (std::size_t k = 0; k < c; ++k) w.pc_trace[k] = h[t + k].pc;
  w.base = std::move(base);
  w.drift = std::move(drift);

  // Oracle reads at drifting addresses force the cycle to cover the oracle
  // period; the caller retries with the multiplied length.
  Nat multiplier = 1;
  for (std::size_t k = 0; k < c; ++k) {
    const Instruction& ins = p.lines()[w.pc_trace[k]];
    if (ins.op != Opcode::Qry) continue;
    const Form& d = w.drift[k][ins.r];
    const Form& a = w.base[k][ins.r];
    if (d.a == 0 && d.b == 0) continue;
    if (d.b != 0 || !x.has_periodic_view()) return std::nullopt;
    Nat period = x.period_bits().size();
    Nat preperiod = x.preperiod_bits().size();
    if (a.b % period != 0 || a.a < preperiod) return std::nullopt;
    Nat g = boost::multiprecision::gcd(Nat(d.a % period), period);
    multiplier = boost::multiprecision::lcm(multiplier, Nat(period / g));
  }
  if (multiplier > 1) {
    if (multiplier > 64) return std::nullopt;
    return try_candidate(h, c * static_cast<std::size_t>(multiplier), p, x);
  }
  return w;
}

std::optional<InnerWitness> inner_detect(const std::vector<SymConfig>& h, const Program& p,
                                         const OracleReal& x) {
  std::size_t n = h.size();
  for (std::size_t c = 1; 4 * c <= n; ++c) {
    if (h[n - 1].pc != h[n - 1 - c].pc || h[n - 1].pc != h[n - 1 - 2 * c].pc ||
        h[n - 1].pc != h[n - 1 - 3 * c].pc)
      continue;
    // Anchor alignment: require the four repetitions to end exactly at the
    // history end so values at matching offsets line up.
    if (auto w = try_candidate(h, c, p, x)) return w;
  }
  return std::nullopt;
}

// a + b*n + c*m + d*n*m over the inner repetition m and meta repetition n.
struct BiForm {
  Nat a, b, c, d;
};

struct InnerStability {
  enum class Kind { Stable, Flip, Bail };
  Kind kind = Kind::Bail;
  Nat flip_m;
  std::optional<Nat> flip_n;  // n-flips discovered while replaying
  std::string note;
};

// Decides whether the branch outcome of a gap A + Bn + (C + Dn)m matches its
// m = 0 outcome for every m, n >= 0.
struct BiGapResult {
  enum class Kind { Stable, FlipM, Bail } kind = Kind::Bail;
  Nat flip_m;
};

BiGapResult analyze_bigap(const Nat& A, const Nat& B, const Nat& C, const Nat& D) {
  BiGapResult out;
  if (C == 0 && D == 0) {
    out.kind = BiGapResult::Kind::Stable;
    return out;
  }
  bool pos_m = C > 0 && D >= 0;
  bool neg_m = C < 0 && D <= 0;
  if (A == 0 && B == 0) {
    // Equal at m = 0 for every n; separates at m = 1 iff C + Dn never vanishes.
    if (pos_m || neg_m) {
      out.kind = BiGapResult::Kind::FlipM;
      out.flip_m = 1;
    }
    return out;
  }
  bool pos_n = A > 0 && B >= 0;
  bool neg_n = A < 0 && B <= 0;
  if ((pos_n && pos_m) || (neg_n && neg_m)) {
    out.kind = BiGapResult::Kind::Stable;  // gap strictly one-signed everywhere
    return out;
  }
  if (C != 0 && (-A) % C == 0) {
    Nat m = (-A) / C;
    if (m >= 1 && B == -(m * D)) {
      out.kind = BiGapResult::Kind::FlipM;
      out.flip_m = m;
      return out;
    }
  }
  return out;  // bail: n-dependent inner breakpoint
}

InnerStability inner_stability(const InnerWitness& w, const Program& p,
                               const OracleReal& x) {
  InnerStability out;
  std::size_t R = w.base[0].size();
  std::vector<BiForm> f(R);
  for (std::size_t r = 0; r < R; ++r)
    f[r] = BiForm{w.base[0][r].a, w.base[0][r].b, w.drift[0][r].a, w.drift[0][r].b};

  std::optional<Nat> flip_m;
  std::size_t pc = w.pc_trace[0];
  for (std::size_t k = 0; k < w.cycle; ++k) {
    if (pc != w.pc_trace[k]) {
      out.note = "inner cycle trace mismatch";
      return out;
    }
    const Instruction& ins = p.lines()[pc];
    std::size_t next = pc + 1;
    switch (ins.op) {
      case Opcode::Zero:
        f[ins.r] = BiForm{0, 0, 0, 0};
        break;
      case Opcode::Inc:
        f[ins.r].a += 1;
        break;
      case Opcode::Copy:
        f[ins.s] = f[ins.r];
        break;
      case Opcode::Qry: {
        const BiForm& addr = f[ins.r];
        bool bit;
        if (addr.b == 0 && addr.c == 0 && addr.d == 0) {
          bit = x.bit_at(addr.a);
        } else if (x.has_periodic_view()) {
          Nat period = x.period_bits().size();
          Nat preperiod = x.preperiod_bits().size();
          if (addr.b % period == 0 && addr.c % period == 0 && addr.d % period == 0 &&
              addr.a >= preperiod) {
            bit = x.bit_at(addr.a);
          } else {
            out.note = "inner oracle read is not stable across repetitions";
            return out;
          }
        } else {
          out.note = "inner oracle read with no periodic representation";
          return out;
        }
        f[ins.s] = BiForm{bit ? 1 : 0, 0, 0, 0};
        break;
      }
      case Opcode::Jeq: {
        if (ins.target == pc + 1) break;
        const BiForm& l = f[ins.r];
        const BiForm& rr = f[ins.s];
        Nat A = l.a - rr.a, B = l.b - rr.b, C = l.c - rr.c, D = l.d - rr.d;
        // n-flips at m = 0 first.
        GapAnalysis g0 = analyze_gap(Form{l.a, l.b}, Form{rr.a, rr.b});
        if (!g0.uniform) merge_flip(out.flip_n, g0.flip);
        BiGapResult bg = analyze_bigap(A, B, C, D);
        if (bg.kind == BiGapResult::Kind::Bail) {
          out.note = "inner branch outcome depends on the meta repetition";
          return out;
        }
        if (bg.kind == BiGapResult::Kind::FlipM) merge_flip(flip_m, bg.flip_m);
        if (g0.equal_at_zero) next = ins.target;
        break;
      }
    }
    pc = next;
  }
  if (pc != w.pc_trace[0]) {
    out.note = "inner cycle does not close";
    return out;
  }
  for (std::size_t r = 0; r < R; ++r) {
    const BiForm& e = f[r];
    const Form& b0 = w.base[0][r];
    const Form& d0 = w.drift[0][r];
    if (e.a != b0.a + d0.a || e.b != b0.b + d0.b || e.c != d0.a || e.d != d0.b) {
      out.note = "inner evolution is not affine across repetitions";
      return out;
    }
  }
  if (flip_m) {
    out.kind = InnerStability::Kind::Flip;
    out.flip_m = *flip_m;
  } else {
    out.kind = InnerStability::Kind::Stable;
  }
  return out;
}

// Pointwise minimum of affine forms; fails when forms cross.
bool fold_min(std::vector<Form>& mins, const std::vector<Form>& v) {
  if (mins.empty()) {
    mins = v;
    return true;
  }
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (mins[r].a <= v[r].a && mins[r].b <= v[r].b) continue;
    if (v[r].a <= mins[r].a && v[r].b <= mins[r].b) {
      mins[r] = v[r];
      continue;
    }
    return false;
  }
  return true;
}

}  // namespace

SegmentReplay symbolic_replay_segment(const Program& p, const OracleReal& x,
                                      std::size_t start_pc, std::vector<Form> forms,
                                      std::uint64_t max_steps) {
  SegmentReplay out;
  out.pc_set.assign(p.length() + 1, false);
  std::size_t pc = start_pc;
  std::vector<SymConfig> history;
  history.push_back(SymConfig{pc, forms});
  int inner_ffs = 0;

  for (std::uint64_t i = 0; i < max_steps; ++i) {
    if (pc >= p.length()) {
      out.bail_note = "segment reaches the halt state";
      return out;
    }
    SymStep st = sym_step(forms, pc, p, x);
    if (st.bail) {
      out.bail_note = *st.bail;
      return out;
    }
    if (st.flip) merge_flip(out.flip, *st.flip);
    pc = st.next_pc;

    out.pc_set[pc] = true;
    if (!fold_min(out.reg_min, forms)) {
      out.bail_note = "register minima are not comparable as forms";
      return out;
    }
    if (history.size() >= kSymWindowCap) {
      out.bail_note = "no inner cycle within the symbolic window";
      return out;
    }
    history.push_back(SymConfig{pc, forms});

    auto iw = inner_detect(history, p, x);
    if (!iw) continue;
    InnerStability ist = inner_stability(*iw, p, x);
    if (ist.flip_n) merge_flip(out.flip, *ist.flip_n);
    if (ist.kind == InnerStability::Kind::Bail) {
      out.bail_note = ist.note;
      return out;
    }
    if (ist.kind == InnerStability::Kind::Flip) {
      Nat observed = (history.size() - iw->start) / iw->cycle;
      if (ist.flip_m < observed) {
        // A flip inside the verified window contradicts the witness.
        out.bail_note = "inner breakpoint inside the verified window";
        return out;
      }
      if (++inner_ffs > kInnerFastForwardCap) {
        out.bail_note = "too many inner breakpoints in one segment";
        return out;
      }
      for (std::size_t r = 0; r < forms.size(); ++r) {
        forms[r].a = iw->base[0][r].a + ist.flip_m * iw->drift[0][r].a;
        forms[r].b = iw->base[0][r].b + ist.flip_m * iw->drift[0][r].b;
      }
      pc = iw->pc_trace[0];
      history.clear();
      history.push_back(SymConfig{pc, forms});
      if (!fold_min(out.reg_min, forms)) {
        out.bail_note = "register minima are not comparable as forms";
        return out;
      }
      continue;
    }

    // Stable inner cycle: the segment ends at its limit.
    std::size_t limit_pc = *std::min_element(iw->pc_trace.begin(), iw->pc_trace.end());
    std::vector<Form> limit(forms.size());
    for (std::size_t r = 0; r < forms.size(); ++r) {
      bool any = false;
      Form best;
      for (std::size_t k = 0; k < iw->cycle; ++k) {
        if (iw->drift[k][r].a != 0 || iw->drift[k][r].b != 0) continue;
        const Form& cand = iw->base[k][r];
        if (!any) {
          best = cand;
          any = true;
        } else if (cand.a <= best.a && cand.b <= best.b) {
          best = cand;
        } else if (!(best.a <= cand.a && best.b <= cand.b)) {
          out.bail_note = "limit register minima are not comparable as forms";
          return out;
        }
      }
      limit[r] = any ? best : Form{0, 0};
    }
    out.pc_set[limit_pc] = true;
    if (!fold_min(out.reg_min, limit)) {
      out.bail_note = "register minima are not comparable as forms";
      return out;
    }
    out.completed = true;
    out.end_pc = limit_pc;
    out.end_forms = std::move(limit);
    return out;
  }
  out.bail_note = "symbolic step budget exhausted";
  return out;
}

}  // namespace detail

std::optional<Nat> affine_comparison_flip(const Nat& v1, const Nat& d1, const Nat& v2,
                                          const Nat& d2) {
  detail::GapAnalysis g = detail::analyze_gap(detail::Form{v1, d1}, detail::Form{v2, d2});
  if (g.uniform) return std::nullopt;
  return g.flip;
}

Stability stability_check(const CycleWitness& w, const Program& p, const OracleReal& x) {
  Stability out;
  std::size_t R = p.register_count();
  std::size_t c = w.cycle_length;
  auto unknown = [&](std::string note) {
    out.kind = Stability::Kind::Unknown;
    out.note = std::move(note);
    return out;
  };
  if (c == 0 || w.pc_trace.size() != c || w.base_values.size() != c || w.drifts.size() != c)
    return unknown("malformed witness");
  for (std::size_t k = 0; k < c; ++k) {
    if (w.pc_trace[k] >= p.length()) return unknown("witness pc outside the program");
    if (w.base_values[k].size() != R || w.drifts[k].size() != R)
      return unknown("malformed witness");
    for (std::size_t r = 0; r < R; ++r)
      if (w.base_values[k][r] < 0 || w.drifts[k][r] < 0)
        return unknown("negative value or drift in witness");
  }

  std::vector<detail::Form> f(R);
  for (std::size_t r = 0; r < R; ++r)
    f[r] = detail::Form{w.base_values[0][r], w.drifts[0][r]};

  std::optional<Nat> flip;
  std::size_t pc = w.pc_trace[0];
  for (std::size_t k = 0; k < c; ++k) {
    if (pc != w.pc_trace[k]) return unknown("pc trace is not the orbit of its own start");
    detail::SymStep st = detail::sym_step(f, pc, p, x);
    if (st.bail) return unknown(*st.bail);
    if (st.flip && (!flip || *st.flip < *flip)) flip = st.flip;
    pc = st.next_pc;
  }
  if (pc != w.pc_trace[0]) return unknown("cycle does not close");
  for (std::size_t r = 0; r < R; ++r) {
    if (f[r].a != w.base_values[0][r] + w.drifts[0][r] || f[r].b != w.drifts[0][r])
      return unknown("register evolution is not affine across repetitions");
  }
  if (flip) {
    out.kind = Stability::Kind::Breakpoint;
    out.breakpoint = *flip;
  } else {
    out.kind = Stability::Kind::Stable;
  }
  return out;
}

}  // namespace itrm
