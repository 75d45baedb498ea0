#include "dioph/exact_arith.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <mutex>
#include <sstream>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::int64_t parse_digit(const std::string& token) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(token, &used);
    if (used != token.size()) throw MalformedDescriptor("bad digit '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    throw MalformedDescriptor("bad digit '" + token + "'");
  }
}

}  // namespace

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const BigRational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

BigInt parse_integer(std::string_view text) {
  auto t = trim(text);
  if (t.empty()) throw InvalidInput("empty integer");
  std::string s(t);
  if (s.front() == '+') s.erase(0, 1);
  for (std::size_t i = (s.size() > 0 && s[0] == '-') ? 1 : 0; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw InvalidInput("bad integer '" + std::string(t) + "'");
  }
  if (s.empty() || s == "-") throw InvalidInput("bad integer '" + std::string(t) + "'");
  return BigInt(s, 10);
}

BigRational parse_rational(std::string_view text) {
  auto t = trim(text);
  auto slash = t.find('/');
  if (slash == std::string_view::npos) return BigRational(parse_integer(t));
  return make_rational(parse_integer(t.substr(0, slash)), parse_integer(t.substr(slash + 1)));
}

BigInt floor_of(const BigRational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

BigInt ceil_of(const BigRational& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

BigRational dist_to_int(const BigRational& r) {
  BigInt rem;
  mpz_fdiv_r(rem.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  BigInt other = r.get_den() - rem;
  return make_rational(rem < other ? rem : other, r.get_den());
}

BigRational min_dist_on_interval(const BigInt& q, const BigRational& lo, const BigRational& hi) {
  BigRational a = q * lo;
  BigRational b = q * hi;
  if (a > b) std::swap(a, b);
  // ||t|| is a concave tent between consecutive integers.
  if (ceil_of(a) <= floor_of(b)) return BigRational(0);
  BigRational da = dist_to_int(a);
  BigRational db = dist_to_int(b);
  return da < db ? da : db;
}

BigRational max_dist_on_interval(const BigInt& q, const BigRational& lo, const BigRational& hi) {
  BigRational a = q * lo;
  BigRational b = q * hi;
  if (a > b) std::swap(a, b);
  // Peaks of the tent sit at half-integers.
  BigRational half(1, 2);
  if (ceil_of(a - half) <= floor_of(b - half)) return half;
  BigRational da = dist_to_int(a);
  BigRational db = dist_to_int(b);
  return da > db ? da : db;
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw InvalidInput("isqrt of a negative number");
  BigInt out;
  mpz_sqrt(out.get_mpz_t(), n.get_mpz_t());
  return out;
}

BigInt pow_int(const BigInt& base, unsigned long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

BigRational pow_rational(const BigRational& base, unsigned long exp) {
  return make_rational(pow_int(base.get_num(), exp), pow_int(base.get_den(), exp));
}

RationalEnclosure operator+(const RationalEnclosure& a, const RationalEnclosure& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

RationalEnclosure operator-(const RationalEnclosure& a, const RationalEnclosure& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

RationalEnclosure operator*(const RationalEnclosure& a, const RationalEnclosure& b) {
  std::array<BigRational, 4> v = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  return {*mn, *mx};
}

RationalEnclosure operator/(const RationalEnclosure& a, const RationalEnclosure& b) {
  if (b.lo <= 0 && b.hi >= 0) throw InvalidInput("division by an enclosure containing zero");
  BigRational inv_lo = 1 / b.hi;
  BigRational inv_hi = 1 / b.lo;
  return a * RationalEnclosure{inv_lo, inv_hi};
}

RationalEnclosure scale(const RationalEnclosure& a, const BigRational& k) {
  if (k >= 0) return {a.lo * k, a.hi * k};
  return {a.hi * k, a.lo * k};
}

ConvergentPair advance(const ConvergentPair& c, const BigInt& digit) {
  ConvergentPair next;
  next.n = c.n + 1;
  next.p = digit * c.p + c.p_prev;
  next.q = digit * c.q + c.q_prev;
  next.p_prev = c.p;
  next.q_prev = c.q;
  return next;
}

ConvergentPair initial_convergent(const BigInt& a0) {
  ConvergentPair c;
  c.n = 0;
  c.p = a0;
  c.q = 1;
  c.p_prev = 1;
  c.q_prev = 0;
  return c;
}

// ---------------------------------------------------------------------------

struct RealDescriptor::Impl {
  static constexpr std::size_t kChunk = 64;
  static constexpr std::size_t kMaxChunks = 8192;
  using Chunk = std::array<ConvergentPair, kChunk>;

  BigInt a0;
  bool periodic = false;
  std::vector<std::int64_t> prefix;
  std::vector<std::int64_t> period;
  DigitRule rule;
  std::optional<std::int64_t> bound;
  std::string label;

  std::array<std::atomic<Chunk*>, kMaxChunks> chunks{};
  std::atomic<std::size_t> ready{0};
  std::mutex grow;

  Impl() = default;
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;
  ~Impl() {
    for (auto& c : chunks) delete c.load();
  }

  std::int64_t checked_digit(std::size_t n) const {
    std::int64_t d;
    if (periodic) {
      d = n <= prefix.size() ? prefix[n - 1] : period[(n - 1 - prefix.size()) % period.size()];
    } else {
      d = rule(n);
    }
    if (d < 1) {
      throw MalformedDescriptor("digit a_" + std::to_string(n) + " = " + std::to_string(d) + " < 1");
    }
    if (bound && d > *bound) {
      throw MalformedDescriptor("digit a_" + std::to_string(n) + " exceeds declared bound " +
                                std::to_string(*bound));
    }
    return d;
  }

  ConvergentPair& slot(std::size_t n) { return (*chunks[n / kChunk].load(std::memory_order_acquire))[n % kChunk]; }

  const ConvergentPair& get(std::size_t n) {
    if (n < ready.load(std::memory_order_acquire)) return slot(n);
    std::lock_guard lock(grow);
    std::size_t have = ready.load(std::memory_order_relaxed);
    if (n / kChunk >= kMaxChunks) throw InvalidInput("convergent index out of cache range");
    for (std::size_t k = have; k <= n; ++k) {
      if (k % kChunk == 0 && chunks[k / kChunk].load(std::memory_order_relaxed) == nullptr) {
        chunks[k / kChunk].store(new Chunk(), std::memory_order_release);
      }
      slot(k) = k == 0 ? initial_convergent(a0) : advance(slot(k - 1), BigInt(static_cast<long>(checked_digit(k))));
      ready.store(k + 1, std::memory_order_release);
    }
    return slot(n);
  }
};

RealDescriptor::RealDescriptor(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

RealDescriptor RealDescriptor::periodic(BigInt a0, std::vector<std::int64_t> prefix,
                                        std::vector<std::int64_t> period) {
  if (period.empty()) throw MalformedDescriptor("periodic descriptor needs a non-empty period");
  auto impl = std::make_shared<Impl>();
  impl->a0 = std::move(a0);
  impl->periodic = true;
  std::int64_t mx = 0;
  for (auto d : prefix) {
    if (d < 1) throw MalformedDescriptor("prefix digit < 1");
    mx = std::max(mx, d);
  }
  for (auto d : period) {
    if (d < 1) throw MalformedDescriptor("period digit < 1");
    mx = std::max(mx, d);
  }
  impl->prefix = std::move(prefix);
  impl->period = std::move(period);
  impl->bound = mx;
  return RealDescriptor(std::move(impl));
}

RealDescriptor RealDescriptor::generated(BigInt a0, DigitRule rule, std::optional<std::int64_t> bound,
                                         std::string label) {
  if (!rule) throw MalformedDescriptor("generated descriptor without a rule");
  auto impl = std::make_shared<Impl>();
  impl->a0 = std::move(a0);
  impl->rule = std::move(rule);
  impl->bound = bound;
  impl->label = std::move(label);
  return RealDescriptor(std::move(impl));
}

RealDescriptor RealDescriptor::parse(std::string_view text) {
  auto t = trim(text);
  if (t.substr(0, 3) != "cf:") throw MalformedDescriptor("descriptor must start with 'cf:'");
  t = trim(t.substr(3));
  auto semi = t.find(';');
  if (semi == std::string_view::npos) throw MalformedDescriptor("descriptor needs ';' after a0");
  BigInt a0;
  try {
    a0 = parse_integer(t.substr(0, semi));
  } catch (const InvalidInput&) {
    throw MalformedDescriptor("bad integer part in '" + std::string(text) + "'");
  }
  auto rest = trim(t.substr(semi + 1));
  auto open = rest.find('(');
  auto close = rest.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      !trim(rest.substr(close + 1)).empty()) {
    throw MalformedDescriptor("descriptor needs a '(period ...)' tail: '" + std::string(text) + "'");
  }
  std::vector<std::int64_t> prefix;
  for (const auto& tok : split_tokens(rest.substr(0, open))) prefix.push_back(parse_digit(tok));
  auto inner = trim(rest.substr(open + 1, close - open - 1));
  if (inner.substr(0, 7) == "period:") inner = trim(inner.substr(7));
  std::vector<std::int64_t> period;
  for (const auto& tok : split_tokens(inner)) period.push_back(parse_digit(tok));
  return periodic(std::move(a0), std::move(prefix), std::move(period));
}

RealDescriptor RealDescriptor::sqrt2() { return periodic(1, {}, {2}); }
RealDescriptor RealDescriptor::golden() { return periodic(1, {}, {1}); }

const BigInt& RealDescriptor::a0() const { return impl_->a0; }

std::int64_t RealDescriptor::digit(std::size_t n) const {
  if (n == 0) throw InvalidInput("digit index starts at 1; use a0()");
  return impl_->checked_digit(n);
}

std::optional<std::int64_t> RealDescriptor::digit_bound() const { return impl_->bound; }

bool RealDescriptor::is_periodic() const { return impl_->periodic; }

std::string RealDescriptor::text() const {
  if (!impl_->periodic) return impl_->label;
  std::ostringstream os;
  os << "cf: " << impl_->a0.get_str() << ";";
  for (auto d : impl_->prefix) os << ' ' << d;
  os << " (period:";
  for (auto d : impl_->period) os << ' ' << d;
  os << ')';
  return os.str();
}

const ConvergentPair& RealDescriptor::convergent(std::size_t n) const { return impl_->get(n); }

std::size_t RealDescriptor::first_index_with_q_at_least(const BigInt& bound) const {
  std::size_t n = 0;
  while (convergent(n).q < bound) ++n;
  return n;
}

// ---------------------------------------------------------------------------

std::vector<BigInt> cf_digits(const RealDescriptor& x, std::size_t n) {
  std::vector<BigInt> out;
  out.reserve(n + 1);
  out.push_back(x.a0());
  for (std::size_t i = 1; i <= n; ++i) out.emplace_back(static_cast<long>(x.digit(i)));
  return out;
}

ConvergentPair convergents(const RealDescriptor& x, std::size_t n) { return x.convergent(n); }

namespace {

// |x - p_m/q_m| < 1/(q_m q_{m+1}), hence ||q x|| lies within q/(q_m q_{m+1})
// of ||q p_m/q_m||.
RationalEnclosure enclosure_at(const BigInt& q, const RealDescriptor& x, std::size_t m) {
  const auto& cm = x.convergent(m);
  const auto& cn = x.convergent(m + 1);
  BigInt r;
  BigInt qp = q * cm.p;
  mpz_fdiv_r(r.get_mpz_t(), qp.get_mpz_t(), cm.q.get_mpz_t());
  BigInt other = cm.q - r;
  BigRational d = make_rational(r < other ? r : other, cm.q);
  BigRational delta = make_rational(q, cm.q * cn.q);
  BigRational lo = d - delta;
  BigRational hi = d + delta;
  if (lo < 0) lo = 0;
  if (hi > BigRational(1, 2)) hi = BigRational(1, 2);
  return {lo, hi};
}

// Smallest m with 2q <= eps * q_m * q_{m+1}.
std::size_t index_for_width(const BigInt& q, const RealDescriptor& x, const BigRational& eps) {
  BigRational need = BigRational(2 * q) / eps;
  std::size_t m = x.first_index_with_q_at_least(isqrt(floor_of(need)));
  while (m > 0 && BigRational(x.convergent(m - 1).q * x.convergent(m).q) >= need) --m;
  while (BigRational(x.convergent(m).q * x.convergent(m + 1).q) < need) ++m;
  return m;
}

}  // namespace

RationalEnclosure dist_enclosure(const BigInt& q, const RealDescriptor& x, const BigRational& eps) {
  if (eps <= 0) throw InvalidInput("dist_enclosure: precision must be positive");
  if (q < 1) throw InvalidInput("dist_enclosure: q must be >= 1");
  return enclosure_at(q, x, index_for_width(q, x, eps));
}

bool decide_gt(const BigInt& q, const RealDescriptor& x, const BigRational& c) {
  if (q < 1) throw InvalidInput("decide_gt: q must be >= 1");
  if (c < 0) return true;
  if (c >= BigRational(1, 2)) return false;
  BigRational eps = c > 0 && c < BigRational(1, 4) ? c : BigRational(1, 4);
  for (int i = 0; i < kRefinementCap; ++i) {
    auto enc = dist_enclosure(q, x, eps);
    if (enc.lo > c) return true;
    if (enc.hi < c) return false;
    eps /= 2;
  }
  throw Undecided("decide_gt: ||" + q.get_str() + " x|| vs " + to_string(c) + " undecided for " + x.text());
}

RationalEnclosure enclosure_above(const BigInt& q, const RealDescriptor& x, const BigRational& c) {
  BigRational eps = c > 0 && c < BigRational(1, 4) ? c : BigRational(1, 4);
  for (int i = 0; i < kRefinementCap; ++i) {
    auto enc = dist_enclosure(q, x, eps);
    if (enc.lo > c) return enc;
    if (enc.hi < c) {
      throw InvalidInput("enclosure_above: ||" + q.get_str() + " x|| is below " + to_string(c));
    }
    eps /= 2;
  }
  throw Undecided("enclosure_above: refinement cap reached for q=" + q.get_str());
}

RationalEnclosure positive_dist_enclosure(const BigInt& q, const RealDescriptor& x) {
  return enclosure_above(q, x, BigRational(0));
}

bool frac_below_half(const BigInt& q, const RealDescriptor& x) {
  if (q < 1) throw InvalidInput("frac_below_half: q must be >= 1");
  BigRational eps(1, 4);
  for (int i = 0; i < kRefinementCap; ++i) {
    std::size_t m = index_for_width(q, x, eps);
    const auto& cm = x.convergent(m);
    const auto& cn = x.convergent(m + 1);
    BigInt r;
    BigInt qp = q * cm.p;
    mpz_fdiv_r(r.get_mpz_t(), qp.get_mpz_t(), cm.q.get_mpz_t());
    BigRational f = make_rational(r, cm.q);
    BigRational delta = make_rational(q, cm.q * cn.q);
    BigRational half(1, 2);
    if (f - delta > 0 && f + delta < half) return true;
    if (f - delta > half && f + delta < 1) return false;
    eps /= 2;
  }
  throw Undecided("frac_below_half: refinement cap reached for q=" + q.get_str());
}

namespace {

// Shared setup for the batched oracles: a convergent deep enough that
// delta_a = a/(q_m q_{m+1}) <= target for every a <= n_max.
std::size_t batch_index(const RealDescriptor& x, std::size_t n_max, const BigRational& target) {
  BigRational need = BigRational(BigInt(static_cast<unsigned long>(n_max))) / target;
  std::size_t m = 0;
  while (BigRational(x.convergent(m).q * x.convergent(m + 1).q) < need) ++m;
  return m;
}

}  // namespace

std::vector<bool> decide_gt_all(const RealDescriptor& x, const BigRational& c, std::size_t n_max) {
  std::vector<bool> out(n_max, false);
  if (n_max == 0) return out;
  if (c < 0 || c >= BigRational(1, 2)) {
    std::fill(out.begin(), out.end(), c < 0);
    return out;
  }
  BigRational scale_c = c > 0 && c < BigRational(1, 4) ? c : BigRational(1, 4);
  std::size_t m = batch_index(x, n_max, scale_c / 64);
  const auto& cm = x.convergent(m);
  const auto& cn = x.convergent(m + 1);
  const BigInt big_q = cm.q * cn.q;
  const BigInt threshold = c.get_num() * big_q;
  const BigInt& cden = c.get_den();
  BigInt r = 0;
  BigInt pmod;
  mpz_fdiv_r(pmod.get_mpz_t(), cm.p.get_mpz_t(), cm.q.get_mpz_t());
  BigInt dnum, lo_side, hi_side;
  for (std::size_t a = 1; a <= n_max; ++a) {
    r += pmod;
    if (r >= cm.q) r -= cm.q;
    dnum = cm.q - r;
    if (r < dnum) dnum = r;
    BigInt aa(static_cast<unsigned long>(a));
    lo_side = (dnum * cn.q - aa) * cden;
    hi_side = (dnum * cn.q + aa) * cden;
    if (lo_side > threshold) {
      out[a - 1] = true;
    } else if (hi_side < threshold) {
      out[a - 1] = false;
    } else {
      out[a - 1] = decide_gt(aa, x, c);
    }
  }
  return out;
}

std::vector<bool> frac_below_half_all(const RealDescriptor& x, std::size_t n_max) {
  std::vector<bool> out(n_max, false);
  if (n_max == 0) return out;
  std::size_t m = batch_index(x, n_max, BigRational(1, 1024));
  const auto& cm = x.convergent(m);
  const auto& cn = x.convergent(m + 1);
  const BigInt big_q = cm.q * cn.q;
  BigInt r = 0;
  BigInt pmod;
  mpz_fdiv_r(pmod.get_mpz_t(), cm.p.get_mpz_t(), cm.q.get_mpz_t());
  BigInt lo_side, hi_side;
  for (std::size_t a = 1; a <= n_max; ++a) {
    r += pmod;
    if (r >= cm.q) r -= cm.q;
    BigInt aa(static_cast<unsigned long>(a));
    lo_side = r * cn.q - aa;
    hi_side = r * cn.q + aa;
    if (lo_side > 0 && 2 * hi_side < big_q) {
      out[a - 1] = true;
    } else if (2 * lo_side > big_q && hi_side < big_q) {
      out[a - 1] = false;
    } else {
      out[a - 1] = frac_below_half(aa, x);
    }
  }
  return out;
}

std::vector<BigInt> cf_of_rational(const BigRational& r) {
  std::vector<BigInt> out;
  BigInt num = r.get_num();
  BigInt den = r.get_den();
  BigInt quot, rem;
  while (den != 0) {
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(quot);
    num = den;
    den = rem;
  }
  return out;
}

BigRational evaluate_cf(const std::vector<BigInt>& digits) {
  if (digits.empty()) throw InvalidInput("evaluate_cf: empty digit list");
  BigRational acc(digits.back());
  for (auto it = digits.rbegin() + 1; it != digits.rend(); ++it) {
    acc = BigRational(*it) + 1 / acc;
  }
  acc.canonicalize();
  return acc;
}

BigRational lacunarity_lower_bound(const RealDescriptor& x, std::size_t depth, std::size_t first) {
  if (depth < 2) throw InvalidInput("lacunarity_lower_bound: depth must be >= 2");
  if (first < 1 || first > depth) throw InvalidInput("lacunarity_lower_bound: bad window start");
  BigRational best = make_rational(x.convergent(first).q, x.convergent(first - 1).q);
  for (std::size_t n = first + 1; n <= depth; ++n) {
    BigRational ratio = make_rational(x.convergent(n).q, x.convergent(n - 1).q);
    if (ratio < best) best = ratio;
  }
  return best;
}

BigRational lacunarity_from_digit_bound(std::int64_t bound) {
  if (bound < 1) throw InvalidInput("digit bound must be >= 1");
  return 1 + make_rational(1, BigInt(static_cast<long>(bound)) + 1);
}

}  // namespace dioph
