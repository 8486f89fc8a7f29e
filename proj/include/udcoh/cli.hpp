#pragma once

// Batch front end: run configurations, the verification suites and their
// JSON or markdown reports.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "udcoh/anderson.hpp"
#include "udcoh/cohomology.hpp"

namespace udcoh::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Suites in report order.
inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"anderson", "appendix",  "cup",      "lift",
                                              "quasi-iso", "theorem-a", "theorem-b"};
  return names;
}

struct RunConfig {
  std::vector<long> primes;
  long modulus = 2;
  int n_max = 2;
  std::optional<std::vector<std::vector<long>>> ideal;  // maximal sets, as lists of primes
  std::vector<std::string> checks{"all"};
  std::string out;
  std::string format = "json";

  /// Requested suites with "all" expanded, sorted and without repeats.
  std::vector<std::string> expanded_checks() const {
    std::set<std::string> chosen;
    for (const auto& c : checks) {
      if (c == "all") chosen.insert(check_names().begin(), check_names().end());
      else chosen.insert(c);
    }
    return {chosen.begin(), chosen.end()};
  }

  PrimeConfig prime_config() const { return make_config(primes, modulus > 0 ? modulus : 1); }

  OrderIdeal order_ideal() const {
    const auto cfg = prime_config();
    if (!ideal) return OrderIdeal::full(cfg.s());
    std::vector<Subset> maximal;
    for (const auto& set : *ideal) {
      Subset t = 0;
      for (long p : set) t |= Subset{1} << cfg.index_of_prime(p);
      maximal.push_back(t);
    }
    return OrderIdeal::from_maximal(maximal);
  }

  json to_json() const {
    json j;
    j["primes"] = primes;
    j["modulus"] = modulus;
    j["n_max"] = n_max;
    j["ideal"] = ideal ? json(*ideal) : json(nullptr);
    j["checks"] = expanded_checks();
    return j;
  }
};

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

/// Values of the key=value grammar: integers, bare words and bracketed lists.
class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line, std::size_t column) : s_(text), line_(line), col0_(column) {}

  json parse() {
    json v = value();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected trailing text");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_, col0_;

  [[noreturn]] void fail(const std::string& what) const { parse_fail(line_, col0_ + pos_, what); }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' || c == '/';
  }

  json value() {
    skip_space();
    if (pos_ == s_.size()) fail("missing value");
    if (s_[pos_] == '[') return list();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && word_char(s_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("unexpected character '") + s_[pos_] + "'");
    const std::string word(s_.substr(start, pos_ - start));
    const bool numeric = std::all_of(word.begin() + (word[0] == '-' && word.size() > 1), word.end(),
                                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (numeric) {
      try {
        return json(std::stol(word));
      } catch (const std::out_of_range&) {
        fail("integer out of range");
      }
    }
    return json(word);
  }

  json list() {
    ++pos_;
    json arr = json::array();
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return arr;
    }
    for (;;) {
      arr.push_back(value());
      skip_space();
      if (pos_ == s_.size()) fail("unterminated list");
      if (s_[pos_] == ']') {
        ++pos_;
        return arr;
      }
      if (s_[pos_] != ',') fail("expected ',' or ']'");
      ++pos_;
    }
  }
};

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] inline void invalid(const std::string& what) { throw Error(ErrorKind::ValidationError, what); }

inline std::vector<long> long_list(const json& v, const std::string& key) {
  if (!v.is_array()) invalid(key + " must be a list of integers");
  std::vector<long> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) invalid(key + " must be a list of integers");
    out.push_back(x.get<long>());
  }
  return out;
}

inline long integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) invalid(key + " must be an integer");
  return v.get<long>();
}

inline std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) invalid(key + " must be a word");
  return v.get<std::string>();
}

}  // namespace detail

/// Parses a configuration document into a JSON object without validating it.
/// Text starting with '{' is read as JSON; anything else as key=value lines
/// with '#' comments.
inline json parse_document(std::string_view text) {
  const std::string body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      json j = json::parse(body);
      if (!j.is_object()) detail::parse_fail(1, 1, "top level must be an object");
      return j;
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
  }
  json out = json::object();
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) detail::parse_fail(line_no, 1, "expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    if (key.empty()) detail::parse_fail(line_no, 1, "empty key");
    if (out.contains(key)) detail::parse_fail(line_no, 1, "duplicate key '" + key + "'");
    out[key] = detail::ValueParser(std::string_view(line).substr(eq + 1), line_no, eq + 2).parse();
  }
  return out;
}

/// Builds a RunConfig from a parsed document, raising ValidationError for bad
/// primes, moduli, ideals, suites or formats.
inline RunConfig config_from_document(const json& doc) {
  RunConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "primes") cfg.primes = detail::long_list(v, key);
    else if (key == "modulus") cfg.modulus = detail::integer(v, key);
    else if (key == "n_max") cfg.n_max = static_cast<int>(detail::integer(v, key));
    else if (key == "out") cfg.out = detail::text(v, key);
    else if (key == "format") cfg.format = detail::text(v, key);
    else if (key == "checks") {
      if (v.is_string()) cfg.checks = {v.get<std::string>()};
      else if (v.is_array()) {
        cfg.checks.clear();
        for (const auto& c : v) cfg.checks.push_back(detail::text(c, key));
      } else detail::invalid("checks must be a list of suite names");
    } else if (key == "ideal") {
      if (v.is_null()) {
        cfg.ideal.reset();
        continue;
      }
      if (!v.is_array()) detail::invalid("ideal must be a list of prime lists");
      std::vector<std::vector<long>> sets;
      for (const auto& set : v) sets.push_back(detail::long_list(set, key));
      cfg.ideal = sets;
    } else {
      detail::invalid("unknown key '" + key + "'");
    }
  }
  if (cfg.primes.empty()) detail::invalid("primes must be a nonempty list");
  if (cfg.n_max < 0) detail::invalid("n_max must be nonnegative");
  if (cfg.modulus < 0) detail::invalid("modulus must be nonnegative");
  if (cfg.format != "json" && cfg.format != "markdown") detail::invalid("format must be json or markdown");
  for (const auto& c : cfg.checks)
    if (c != "all" && std::find(check_names().begin(), check_names().end(), c) == check_names().end())
      detail::invalid("unknown check '" + c + "'");
  try {
    const auto pc = cfg.prime_config();
    validate_modulus(pc, cfg.modulus);
    cfg.order_ideal().validate(pc.s());
  } catch (const Error& e) {
    detail::invalid(e.what());
  }
  return cfg;
}

inline RunConfig parse_config(std::string_view text) { return config_from_document(parse_document(text)); }

struct Record {
  std::string name;
  json inputs = json::object();
  json computed = json::object();
  json expected = json::object();
  std::string provenance;
  bool pass = false;
  json extra = json::object();  // additional top-level fields
};

struct Report {
  json config = json::object();
  std::vector<Record> records;
  std::vector<std::string> skipped;
  std::vector<std::pair<std::string, double>> timing;  // per suite, seconds
  bool with_timing = false;

  bool pass() const {
    return std::all_of(records.begin(), records.end(), [](const Record& r) { return r.pass; });
  }
};

namespace detail {

inline json big(const BigInt& x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(x.get_str());
}

inline json group_json(const CohomologyGroup& g) {
  json factors = json::array();
  for (const auto& d : g.invariant_factors) factors.push_back(big(d));
  return json{{"group", g.to_string()}, {"free_rank", g.free_rank}, {"invariant_factors", factors}};
}

inline json primes_of(const PrimeConfig& cfg, Subset t) {
  json out = json::array();
  for (std::size_t i = 0; i < cfg.s(); ++i)
    if (subset_contains(t, i)) out.push_back(cfg.primes[i]);
  return out;
}

inline json ideal_json(const PrimeConfig& cfg, const OrderIdeal& ideal) {
  json out = json::array();
  for (Subset t : ideal.members(cfg.s())) out.push_back(primes_of(cfg, t));
  return out;
}

inline Record failure(const std::string& name, const std::exception& e) {
  Record r;
  r.name = name;
  r.computed = {{"error", e.what()}};
  r.provenance = "engine error";
  return r;
}

inline long euler_phi(long n) {
  long out = n;
  for (long p : ::udcoh::detail::prime_factors(n)) out = out / p * (p - 1);
  return out;
}

inline std::vector<OrderIdeal> anderson_ideals(const PrimeConfig& cfg, const OrderIdeal& chosen) {
  const std::size_t s = cfg.s();
  std::vector<OrderIdeal> out{OrderIdeal::full(s), chosen, OrderIdeal::from_maximal({0})};
  if (s >= 2) out.push_back(OrderIdeal::up_to_size(s, 1));
  for (std::size_t i = 0; i < s; ++i) out.push_back(OrderIdeal::from_maximal({Subset{1} << i}));
  std::vector<OrderIdeal> unique;
  std::set<std::vector<Subset>> seen;
  for (const auto& ideal : out)
    if (seen.insert(ideal.members(s)).second) unique.push_back(ideal);
  return unique;
}

}  // namespace detail

/// H^n(L(I)) for several order ideals: zero off degree 0 and free of rank
/// phi(r) (full ideal) or the number of basic symbols supported in I.
inline std::vector<Record> run_anderson(const RunConfig& rc) {
  const auto cfg = rc.prime_config();
  const UniversalDistribution u(cfg);
  std::vector<Record> out;
  for (const auto& ideal : detail::anderson_ideals(cfg, rc.order_ideal())) {
    Record r;
    r.name = "anderson";
    r.inputs = {{"r", cfg.r()}, {"ideal", detail::ideal_json(cfg, ideal)}};
    const bool full = ideal.members(cfg.s()).size() == (std::size_t{1} << cfg.s());
    const std::size_t rank = full ? static_cast<std::size_t>(detail::euler_phi(cfg.r())) : ideal_basis(u, ideal).size();
    const auto h = homology_of_L(build_L(cfg, ideal));
    json computed = json::array(), expected = json::array();
    r.pass = true;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const CohomologyGroup want = k == 0 ? CohomologyGroup{rank, {}} : CohomologyGroup{};
      computed.push_back({{"degree", -static_cast<long>(k)}, {"homology", detail::group_json(h[k])}});
      expected.push_back({{"degree", -static_cast<long>(k)}, {"homology", detail::group_json(want)}});
      r.pass = r.pass && h[k] == want;
    }
    r.computed = {{"degrees", computed}};
    r.expected = {{"degrees", expected}};
    r.provenance = full ? "rank phi(r) of U_r" : "count of basic symbols with support in the ideal";
    out.push_back(std::move(r));
  }
  return out;
}

/// X/Y family matrices are unimodular of size f, and every level inclusion
/// U(g) -> U(f) is a split monomorphism.
inline std::vector<Record> run_appendix(const RunConfig& rc) {
  const long r = rc.prime_config().r();
  std::set<long> levels;
  for (long f = 1; f <= 12; ++f) levels.insert(f);
  levels.insert(21);
  if (r <= 105) levels.insert(r);
  std::vector<Record> out;
  for (long f : levels)
    for (auto variant : {XgVariant::X, XgVariant::Y}) {
      Record rec;
      rec.name = "appendix";
      rec.inputs = {{"family", variant == XgVariant::X ? "X" : "Y"}, {"f", f}};
      const auto m = xg_basis_matrix(f, variant);
      const BigInt det = m.rows() == m.cols() ? BigInt(determinant(m)) : BigInt(0);
      rec.computed = {{"rows", m.rows()}, {"cols", m.cols()}, {"determinant", detail::big(det)}};
      rec.expected = {{"cols", f}, {"abs_determinant", 1}};
      rec.provenance = "unimodular basis of the free group on all symbols of level f";
      rec.pass = m.cols() == static_cast<std::size_t>(f) && abs(det) == 1;
      out.push_back(std::move(rec));
    }
  std::set<long> tops{21, r};
  for (long f : tops) {
    if (f > 105) continue;
    for (long g = 1; g <= f; ++g) {
      if (f % g) continue;
      Record rec;
      rec.name = "appendix";
      rec.inputs = {{"inclusion", {g, f}}};
      const auto m = level_inclusion_matrix(g, f);
      json factors = json::array();
      const auto inv = invariant_factors(m);
      for (const auto& d : inv) factors.push_back(detail::big(d));
      rec.computed = {{"cols", m.cols()}, {"invariant_factors", factors}};
      rec.expected = {{"invariant_factors", std::vector<int>(m.cols(), 1)}};
      rec.provenance = "split monomorphism: all invariant factors 1";
      rec.pass = inv.size() == m.cols() && std::all_of(inv.begin(), inv.end(), [](const BigInt& d) { return d == 1; });
      out.push_back(std::move(rec));
    }
  }
  return out;
}

/// Closed-form cup product against the composition with the explicit diagonal,
/// for all e, e' of degree at most 2, and the graded sign under swapping.
inline std::vector<Record> run_cup(const RunConfig& rc) {
  const auto cfg = rc.prime_config();
  const long m = rc.modulus;
  std::vector<MultiIndex> small;
  for (unsigned d = 0; d <= 2; ++d)
    for (const auto& e : multi_indices(cfg.s(), d, full_subset(cfg.s()))) small.push_back(e);
  std::vector<Record> out;
  for (const auto& e : small)
    for (const auto& f : small) {
      Record rec;
      rec.name = "cup";
      rec.inputs = {{"e", e.e}, {"e'", f.e}, {"modulus", m}};
      const auto closed = cup_closed_form(cfg, m, e, f);
      const auto diag = cup_via_diagonal(cfg, m, e, f);
      const auto swapped = cup_via_diagonal(cfg, m, f, e);
      const BigInt sign = signs::parity_sign(static_cast<long>(e.degree() * f.degree()));
      rec.computed = {{"coefficient", detail::big(diag.coefficient)},
                      {"index", diag.index.e},
                      {"swapped_coefficient", detail::big(swapped.coefficient)}};
      rec.expected = {{"coefficient", detail::big(closed.coefficient)},
                      {"index", closed.index.e},
                      {"swapped_coefficient", detail::big(reduce(sign * closed.coefficient, m))}};
      rec.provenance = "closed-form product formula";
      rec.pass = diag == closed && reduce(swapped.coefficient - sign * closed.coefficient, m) == 0;
      out.push_back(std::move(rec));
    }
  return out;
}

/// Explicit prime cocycles, their lifts and images, and the mod M class counts.
inline std::vector<Record> run_lift(const RunConfig& rc) {
  const auto cfg = rc.prime_config();
  const long m = rc.modulus;
  const auto ideal = rc.order_ideal();
  const UniversalDistribution u(cfg);
  std::vector<Record> out;
  {
    const KComplex k(cfg, ideal, 0);
    for (Subset t : ideal.members(cfg.s())) {
      Record rec;
      rec.name = "lift";
      rec.inputs = {{"kind", "prime-cocycle"}, {"T", detail::primes_of(cfg, t)}, {"modulus", m}};
      try {
        const auto lift = lift_prime_cocycle(k, u, m, t);
        const bool closed = ::udcoh::detail::is_zero_mod(k.total(0) * k.to_vector(lift.cocycle), m);
        rec.computed = {{"leading_closed", true},
                        {"total_closed", closed},
                        {"tail_space", to_string(lift.tail_space)},
                        {"image", lift.image.to_string()},
                        {"sign", lift.leading_sign}};
        rec.pass = closed && lift.leading_sign != 0;
      } catch (const Error& e) {
        rec.computed = {{"error", e.what()}};
      }
      rec.expected = {{"image", "+-D_T[sum 1/l] plus terms of smaller support"},
                      {"target", u.apply(derivative_element(u.group(), t, m), u.unit_fraction_sum(t)).reduced(m).to_string()}};
      rec.provenance = "derivative class up to sign and lower terms";
      out.push_back(std::move(rec));
    }
  }
  const auto hom = hom_P_U(u, ideal);
  for (int n = 0; n <= rc.n_max; ++n) {
    Record rec;
    rec.name = "lift";
    rec.inputs = {{"kind", "class-count"}, {"degree", n}, {"modulus", m}};
    const std::size_t count = modM_class_count(cfg, n, ideal);
    const auto computed = hom.cohomology(n, m);
    const auto expected = free_mod(m, count);
    rec.computed = {{"cohomology", detail::group_json(computed)}};
    rec.expected = {{"cohomology", detail::group_json(expected)}, {"classes", count}};
    rec.provenance = "count of pairs (T, e) with supp e containing T and deg e = n + |T|";
    rec.pass = computed == expected;
    out.push_back(std::move(rec));
  }
  return out;
}

/// Total cohomology of the double complex against Hom(P, U), over Z and mod M.
inline std::vector<Record> run_quasi_iso(const RunConfig& rc) {
  const auto cfg = rc.prime_config();
  const auto rep = verify_quasi_iso(cfg, rc.modulus, rc.n_max, rc.order_ideal());
  std::vector<Record> out;
  Record chain;
  chain.name = "quasi-iso";
  chain.inputs = {{"kind", "chain-map"}};
  chain.computed = {{"commutes", rep.chain_map}};
  chain.expected = {{"commutes", true}};
  chain.provenance = "augmentation is a chain map";
  chain.pass = rep.chain_map;
  out.push_back(std::move(chain));
  auto add = [&](const ComparisonReport& cmp, long modulus) {
    for (const auto& d : cmp.degrees) {
      Record rec;
      rec.name = "quasi-iso";
      rec.inputs = {{"degree", d.degree}, {"modulus", modulus}};
      rec.computed = {{"total", detail::group_json(d.computed)}};
      rec.expected = {{"hom", detail::group_json(d.expected)}};
      rec.provenance = "Smith form of Hom(P, U)";
      rec.pass = d.pass();
      out.push_back(std::move(rec));
    }
  };
  add(rep.integral, 0);
  if (rc.modulus != 0) add(rep.reduced, rc.modulus);
  return out;
}

/// Integral cohomology by Smith form against the closed form.
inline std::vector<Record> run_theorem_a(const RunConfig& rc) {
  const auto cfg = rc.prime_config();
  const auto rep = verify_theorem_A(cfg, rc.n_max, rc.order_ideal());
  std::vector<Record> out;
  for (const auto& d : rep.degrees) {
    Record rec;
    rec.name = "theorem-a";
    rec.inputs = {{"degree", d.degree}};
    rec.computed = detail::group_json(d.computed);
    rec.expected = detail::group_json(d.expected);
    rec.provenance = "closed form: sum of (Z/m_e)-powers over T and even e";
    rec.pass = d.pass();
    rec.extra = {{"degree", d.degree}, {"predicted", d.expected.to_string()}};
    out.push_back(std::move(rec));
  }
  return out;
}

/// The 2^s derivative elements mod M are fixed, independent and span the invariants.
inline std::vector<Record> run_theorem_b(const RunConfig& rc) {
  const auto cfg = rc.prime_config();
  const UniversalDistribution u(cfg);
  const auto rep = verify_theorem_b(u, rc.modulus);
  Record rec;
  rec.name = "theorem-b";
  rec.inputs = {{"r", cfg.r()}, {"modulus", rc.modulus}};
  json family = json::array();
  for (const auto& v : rep.family) family.push_back(v.to_string());
  const std::size_t size = std::size_t{1} << cfg.s();
  const auto expected = free_mod(rc.modulus, size);
  rec.computed = {{"basis", family},
                  {"fixed", rep.fixed},
                  {"independent", rep.independent},
                  {"spans", rep.spans},
                  {"invariants", detail::group_json(rep.invariants)}};
  rec.expected = {{"basis_size", size}, {"invariants", detail::group_json(expected)}};
  rec.provenance = "free Z/M-module of rank 2^s";
  rec.pass = rep.pass() && rep.family.size() == size && rep.invariants == expected;
  return {rec};
}

/// Canonical basis of U_r and its rank phi(r).
inline std::vector<Record> run_basis(const RunConfig& rc) {
  const auto cfg = rc.prime_config();
  const UniversalDistribution u(cfg);
  Record rec;
  rec.name = "basis";
  rec.inputs = {{"r", cfg.r()}};
  json symbols = json::array();
  for (long n : Normalizer(cfg.r()).basis()) symbols.push_back(Fraction{n, cfg.r()}.to_string());
  rec.computed = {{"rank", u.rank()}, {"symbols", symbols}};
  rec.expected = {{"rank", detail::euler_phi(cfg.r())}};
  rec.provenance = "rank phi(r)";
  rec.pass = u.rank() == static_cast<std::size_t>(detail::euler_phi(cfg.r()));
  return {rec};
}

using Suite = std::function<std::vector<Record>(const RunConfig&)>;

inline Suite suite(const std::string& name) {
  if (name == "anderson") return run_anderson;
  if (name == "appendix") return run_appendix;
  if (name == "basis") return run_basis;
  if (name == "cup") return run_cup;
  if (name == "lift") return run_lift;
  if (name == "quasi-iso") return run_quasi_iso;
  if (name == "theorem-a") return run_theorem_a;
  if (name == "theorem-b") return run_theorem_b;
  throw Error(ErrorKind::ValidationError, "unknown check '" + name + "'");
}

/// Suites that need M >= 2.
inline bool needs_modulus(const std::string& name) { return name == "cup" || name == "lift" || name == "theorem-b"; }

/// Runs the named suites in sorted order. Engine errors become failed records.
inline Report run_suites(const RunConfig& rc, std::vector<std::string> names, bool timing = false) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  Report rep;
  rep.config = rc.to_json();
  rep.config["checks"] = names;
  rep.with_timing = timing;
  for (const auto& name : names) {
    if (needs_modulus(name) && rc.modulus < 2) {
      rep.skipped.push_back(name);
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      for (auto& r : suite(name)(rc)) rep.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      rep.records.push_back(detail::failure(name, e));
    }
    rep.timing.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return rep;
}

inline Report run_checks(const RunConfig& rc, bool timing = false) {
  return run_suites(rc, rc.expanded_checks(), timing);
}

inline json record_json(const Record& r) {
  json j;
  j["name"] = r.name;
  j["inputs"] = r.inputs;
  j["computed"] = r.computed;
  j["expected"] = r.expected;
  j["provenance"] = r.provenance;
  j["pass"] = r.pass;
  for (const auto& [k, v] : r.extra.items()) j[k] = v;
  return j;
}

inline json report_json(const Report& rep) {
  json meta;
  meta["version"] = kVersion;
  meta["config"] = rep.config;
  meta["skipped"] = rep.skipped;
  meta["pass"] = rep.pass();
  if (rep.with_timing) {
    json t = json::object();
    for (const auto& [name, sec] : rep.timing) t[name] = sec;
    meta["timing"] = t;
  }
  json results = json::array();
  for (const auto& r : rep.records) results.push_back(record_json(r));
  return json{{"meta", meta}, {"results", results}};
}

inline std::string emit_markdown(const Report& rep) {
  std::ostringstream out;
  out << "# udcoh report\n\n";
  out << "- version: " << kVersion << "\n";
  out << "- config: `" << rep.config.dump() << "`\n";
  out << "- overall: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
  if (!rep.skipped.empty()) {
    out << "- skipped (need M >= 2):";
    for (const auto& s : rep.skipped) out << " " << s;
    out << "\n";
  }
  if (rep.with_timing)
    for (const auto& [name, sec] : rep.timing) out << "- time " << name << ": " << sec << " s\n";
  std::string current;
  for (const auto& r : rep.records) {
    if (r.name != current) {
      current = r.name;
      out << "\n## " << current << "\n\n| inputs | computed | expected | provenance | pass |\n|---|---|---|---|---|\n";
    }
    auto cell = [](const json& j) {
      std::string s = j.dump();
      std::string escaped;
      for (char c : s) escaped += c == '|' ? std::string("\\|") : std::string(1, c);
      return "`" + escaped + "`";
    };
    out << "| " << cell(r.inputs) << " | " << cell(r.computed) << " | " << cell(r.expected) << " | " << r.provenance
        << " | " << (r.pass ? "yes" : "**no**") << " |\n";
  }
  return out.str();
}

inline std::string emit_report(const Report& rep, const std::string& format) {
  if (format == "json") return report_json(rep).dump(2) + "\n";
  if (format == "markdown") return emit_markdown(rep);
  throw Error(ErrorKind::ValidationError, "format must be json or markdown");
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path);
  f << text;
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace udcoh::cli
