#include "dioph/cf_intervals.hpp"

#include <algorithm>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

void set_endpoints(FundamentalInterval& iv) {
  BigRational a = make_rational(iv.conv.p, iv.conv.q);
  BigRational b = make_rational(iv.conv.p + iv.conv.p_prev, iv.conv.q + iv.conv.q_prev);
  if (a <= b) {
    iv.lo = std::move(a);
    iv.hi = std::move(b);
  } else {
    iv.lo = std::move(b);
    iv.hi = std::move(a);
  }
}

}  // namespace

BigRational FundamentalInterval::length_formula() const {
  return make_rational(1, conv.q * (conv.q + conv.q_prev));
}

std::vector<BigInt> FundamentalInterval::associated_denominators() const {
  std::vector<BigInt> out;
  out.reserve(digits.size());
  ConvergentPair c = initial_convergent(0);
  for (auto d : digits) {
    c = advance(c, BigInt(static_cast<long>(d)));
    out.push_back(c.q);
  }
  return out;
}

FundamentalInterval interval_of(std::span<const std::int64_t> digits) {
  if (digits.empty()) throw InvalidInput("interval_of: order must be >= 1");
  FundamentalInterval iv;
  iv.conv = initial_convergent(0);
  for (auto d : digits) {
    if (d < 1) throw MalformedDescriptor("interval_of: digit " + std::to_string(d) + " < 1");
    iv.conv = advance(iv.conv, BigInt(static_cast<long>(d)));
  }
  iv.digits.assign(digits.begin(), digits.end());
  set_endpoints(iv);
  return iv;
}

FundamentalInterval child_of(const FundamentalInterval& parent, std::int64_t s) {
  if (s < 1) throw MalformedDescriptor("child_of: digit " + std::to_string(s) + " < 1");
  FundamentalInterval iv;
  iv.digits = parent.digits;
  iv.digits.push_back(s);
  iv.conv = advance(parent.conv, BigInt(static_cast<long>(s)));
  set_endpoints(iv);
  return iv;
}

std::vector<FundamentalInterval> children(const FundamentalInterval& parent, std::int64_t s_max) {
  if (s_max < 1) throw InvalidInput("children: s_max must be >= 1");
  std::vector<FundamentalInterval> out;
  out.reserve(static_cast<std::size_t>(s_max));
  for (std::int64_t s = 1; s <= s_max; ++s) out.push_back(child_of(parent, s));
  return out;
}

bool contains(const FundamentalInterval& interval, const BigRational& r) {
  return interval.lo <= r && r <= interval.hi;
}

bool contains(const FundamentalInterval& outer, const FundamentalInterval& inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

BigRational gap(const BigRational& lo1, const BigRational& hi1, const BigRational& lo2, const BigRational& hi2) {
  BigRational g = lo1 <= lo2 ? BigRational(lo2 - hi1) : BigRational(lo1 - hi2);
  return g > 0 ? g : BigRational(0);
}

BigRational gap(const FundamentalInterval& a, const FundamentalInterval& b) {
  return gap(a.lo, a.hi, b.lo, b.hi);
}

bool interiors_disjoint(const FundamentalInterval& a, const FundamentalInterval& b) {
  return a.hi <= b.lo || b.hi <= a.lo;
}

bool NicenessCertificate::nice() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const NicenessVerdict& v) { return v.ok; });
}

NicenessCertificate is_nice(const FundamentalInterval& interval, const RealDescriptor& x, const BigRational& c) {
  if (c <= 0 || c >= BigRational(1, 4)) throw InvalidInput("is_nice: c must lie in (0, 1/4)");
  NicenessCertificate cert{interval, c, x.text(), {}};
  auto qs = interval.associated_denominators();
  for (std::size_t k = 0; k < qs.size(); ++k) {
    cert.verdicts.push_back({k + 1, qs[k], decide_gt(qs[k], x, c)});
  }
  return cert;
}

NicenessCertificate extend_niceness(const NicenessCertificate& parent, const FundamentalInterval& child,
                                    const RealDescriptor& x) {
  NicenessCertificate cert{child, parent.c, parent.x, parent.verdicts};
  cert.verdicts.push_back({child.order(), child.conv.q, decide_gt(child.conv.q, x, parent.c)});
  return cert;
}

nlohmann::ordered_json to_json(const FundamentalInterval& interval) {
  nlohmann::ordered_json j;
  j["digits"] = interval.digits;
  j["p"] = interval.conv.p.get_str();
  j["q"] = interval.conv.q.get_str();
  j["p_prev"] = interval.conv.p_prev.get_str();
  j["q_prev"] = interval.conv.q_prev.get_str();
  j["lo"] = to_string(interval.lo);
  j["hi"] = to_string(interval.hi);
  return j;
}

nlohmann::ordered_json to_json(const NicenessCertificate& cert) {
  auto j = to_json(cert.interval);
  auto verdicts = nlohmann::ordered_json::array();
  for (const auto& v : cert.verdicts) {
    verdicts.push_back({{"k", v.k}, {"q_k", v.q_k.get_str()}, {"c", to_string(cert.c)}, {"ok", v.ok}});
  }
  j["verdicts"] = std::move(verdicts);
  return j;
}

FundamentalInterval interval_from_json(const nlohmann::ordered_json& j) {
  auto digits = j.at("digits").get<std::vector<std::int64_t>>();
  auto iv = interval_of(digits);
  // Stored numbers are redundant; a mismatch means the file was edited.
  if (iv.conv.p.get_str() != j.at("p").get<std::string>() || iv.conv.q.get_str() != j.at("q").get<std::string>() ||
      iv.conv.p_prev.get_str() != j.at("p_prev").get<std::string>() ||
      iv.conv.q_prev.get_str() != j.at("q_prev").get<std::string>() ||
      to_string(iv.lo) != j.at("lo").get<std::string>() || to_string(iv.hi) != j.at("hi").get<std::string>()) {
    throw VerificationFailure("interval record does not match its digits");
  }
  return iv;
}

NicenessCertificate certificate_from_json(const nlohmann::ordered_json& j) {
  NicenessCertificate cert;
  cert.interval = interval_from_json(j);
  const auto& verdicts = j.at("verdicts");
  for (const auto& v : verdicts) {
    cert.c = parse_rational(v.at("c").get<std::string>());
    cert.verdicts.push_back({v.at("k").get<std::size_t>(), parse_integer(v.at("q_k").get<std::string>()),
                             v.at("ok").get<bool>()});
  }
  return cert;
}

}  // namespace dioph
