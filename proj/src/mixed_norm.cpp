#include "dioph/mixed_norm.hpp"

#include <algorithm>
#include <sstream>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

std::vector<std::int64_t> parse_list(std::string_view s) {
  std::vector<std::int64_t> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      std::size_t used = 0;
      long long v = std::stoll(cur, &used);
      if (used != cur.size()) throw InvalidInput("bad D entry '" + cur + "'");
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw InvalidInput("bad D entry '" + cur + "'");
    }
    cur.clear();
  };
  for (char ch : s) {
    if (ch == ',' || ch == ' ') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return out;
}

void require_at_least_two(const std::vector<std::int64_t>& v) {
  for (auto d : v) {
    if (d < 2) throw InvalidInput("D-sequence entries must be >= 2, got " + std::to_string(d));
  }
}

}  // namespace

DSequence::DSequence(Kind kind, std::vector<std::int64_t> values, std::int64_t tail)
    : kind_(kind), values_(std::move(values)), tail_(tail) {}

DSequence DSequence::constant(std::int64_t d) {
  require_at_least_two({d});
  return DSequence(Kind::constant, {d}, d);
}

DSequence DSequence::periodic(std::vector<std::int64_t> block) {
  if (block.empty()) throw InvalidInput("periodic D-sequence needs a non-empty block");
  require_at_least_two(block);
  return DSequence(Kind::periodic, std::move(block), 0);
}

DSequence DSequence::explicit_list(std::vector<std::int64_t> head, std::int64_t tail) {
  require_at_least_two(head);
  require_at_least_two({tail});
  return DSequence(Kind::explicit_list, std::move(head), tail);
}

DSequence DSequence::parse(std::string_view text) {
  if (text.substr(0, 6) == "const:") {
    auto v = parse_list(text.substr(6));
    if (v.size() != 1) throw InvalidInput("const: takes exactly one value");
    return constant(v[0]);
  }
  if (text.substr(0, 7) == "period:") return periodic(parse_list(text.substr(7)));
  if (text.substr(0, 5) == "list:") {
    auto body = text.substr(5);
    auto semi = body.find(';');
    if (semi == std::string_view::npos || body.substr(semi + 1, 5) != "tail=") {
      throw InvalidInput("list: needs ';tail=<d>'");
    }
    auto tail = parse_list(body.substr(semi + 6));
    if (tail.size() != 1) throw InvalidInput("tail takes exactly one value");
    return explicit_list(parse_list(body.substr(0, semi)), tail[0]);
  }
  throw InvalidInput("unknown D-sequence '" + std::string(text) + "'");
}

std::int64_t DSequence::d(std::size_t k) const {
  if (k == 0) throw InvalidInput("d_k is indexed from 1");
  switch (kind_) {
    case Kind::constant:
      return values_[0];
    case Kind::periodic:
      return values_[(k - 1) % values_.size()];
    case Kind::explicit_list:
      return k <= values_.size() ? values_[k - 1] : tail_;
  }
  return tail_;
}

std::string DSequence::text() const {
  std::ostringstream os;
  auto join = [&](const std::vector<std::int64_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  };
  switch (kind_) {
    case Kind::constant:
      os << "const:" << values_[0];
      break;
    case Kind::periodic:
      os << "period:";
      join(values_);
      break;
    case Kind::explicit_list:
      os << "list:";
      join(values_);
      os << ";tail=" << tail_;
      break;
  }
  return os.str();
}

TnTable::TnTable(DSequence seq) : seq_(std::move(seq)) { t_.push_back(1); }

BigInt TnTable::at(std::size_t n) {
  std::lock_guard lock(mu_);
  while (t_.size() <= n) {
    t_.push_back(t_.back() * BigInt(static_cast<long>(seq_.d(t_.size()))));
  }
  return t_[n];
}

BigInt t_n(const DSequence& seq, std::size_t n) {
  BigInt t = 1;
  for (std::size_t k = 1; k <= n; ++k) t *= BigInt(static_cast<long>(seq.d(k)));
  return t;
}

std::size_t omega_D(const DSequence& seq, const BigInt& q) {
  if (q < 1) throw InvalidInput("omega_D: q must be >= 1");
  BigInt rest = q;
  std::size_t n = 0;
  for (;;) {
    unsigned long d = static_cast<unsigned long>(seq.d(n + 1));
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), d)) return n;
    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
    ++n;
  }
}

BigRational d_norm(const DSequence& seq, const BigInt& q) {
  return make_rational(1, t_n(seq, omega_D(seq, q)));
}

RationalEnclosure mixed_product_enclosure(const BigInt& q, const RealDescriptor& x, const DSequence& seq,
                                          const BigRational& eps) {
  if (eps <= 0) throw InvalidInput("mixed_product_enclosure: precision must be positive");
  BigRational factor = q * d_norm(seq, q);
  auto enc = dist_enclosure(q, x, eps / factor);
  return scale(enc, factor);
}

MembershipEvidence membership_evidence(const RealDescriptor& x, const DSequence& seq, std::size_t depth) {
  if (depth < 1) throw InvalidInput("membership_evidence: depth must be >= 1");
  MembershipEvidence ev;
  ev.depth = depth;
  BigInt t = 1;
  for (std::size_t n = 1; n <= depth; ++n) {
    t *= BigInt(static_cast<long>(seq.d(n)));
    auto enc = positive_dist_enclosure(t, x);
    if (n == 1 || enc.lo < ev.b_floor) ev.b_floor = enc.lo;
    auto norm = d_norm(seq, x.convergent(n).q);
    if (n == 1 || norm < ev.c_floor) ev.c_floor = norm;
    ev.max_digit = std::max(ev.max_digit, x.digit(n));
  }
  return ev;
}

}  // namespace dioph
