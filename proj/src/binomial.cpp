#include "corral/binomial.hpp"

#include <algorithm>
#include <deque>

namespace corral {

namespace {

auto degree(const Exponent& a, std::optional<std::size_t> skip) -> long {
  long d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!skip || i != *skip) d += a[i];
  return d;
}

auto divides(const Exponent& a, const Exponent& b) -> bool {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

auto to_exponent(const IntVec& v) -> Exponent {
  Exponent e;
  for (const auto& x : v) {
    if (x < 0 || !x.fits_slong_p()) throw std::invalid_argument("exponent out of range");
    e.push_back(x.get_si());
  }
  return e;
}

constexpr long kExponentLimit = 1L << 40;

}  // namespace

auto RewriteSystem::Order::greater(const Exponent& a, const Exponent& b) const -> bool {
  if (eliminate) {
    if (a[*eliminate] != b[*eliminate]) return a[*eliminate] > b[*eliminate];
  }
  const long da = degree(a, eliminate), db = degree(b, eliminate);
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (eliminate && i == *eliminate) continue;
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

auto RewriteSystem::normal_form(Exponent a) const -> Exponent {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules_) {
      if (!divides(r.lead, a)) continue;
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += r.tail[i] - r.lead[i];
      changed = true;
      break;
    }
  }
  return a;
}

auto RewriteSystem::equivalent(const Exponent& a, const Exponent& b) const -> bool {
  return normal_form(a) == normal_form(b);
}

auto RewriteSystem::complete(const std::vector<std::pair<Exponent, Exponent>>& input, std::size_t nvars,
                             Order order, std::size_t budget) -> std::optional<RewriteSystem> {
  RewriteSystem rs;
  rs.order_ = order;
  auto orient = [&](Exponent a, Exponent b) -> std::optional<Binomial> {
    a = rs.normal_form(std::move(a));
    b = rs.normal_form(std::move(b));
    if (a == b) return std::nullopt;
    if (order.greater(b, a)) std::swap(a, b);
    return Binomial{std::move(a), std::move(b)};
  };

  std::deque<std::pair<std::size_t, std::size_t>> pairs;
  auto add_rule = [&](Binomial b) {
    for (std::size_t i = 0; i < rs.rules_.size(); ++i) pairs.emplace_back(i, rs.rules_.size());
    rs.rules_.push_back(std::move(b));
  };
  for (const auto& [a, b] : input) {
    if (a.size() != nvars || b.size() != nvars) throw std::invalid_argument("rewrite rule has wrong arity");
    if (auto r = orient(a, b)) add_rule(std::move(*r));
    if (rs.rules_.size() > budget) return std::nullopt;
  }

  std::size_t work = 0;
  while (!pairs.empty()) {
    if (++work > 50 * budget) return std::nullopt;
    auto [i, j] = pairs.front();
    pairs.pop_front();
    const auto& ri = rs.rules_[i];
    const auto& rj = rs.rules_[j];
    bool coprime = true;
    for (std::size_t k = 0; k < nvars; ++k)
      if (ri.lead[k] > 0 && rj.lead[k] > 0) coprime = false;
    if (coprime) continue;
    Exponent si(nvars), sj(nvars);
    for (std::size_t k = 0; k < nvars; ++k) {
      long m = std::max(ri.lead[k], rj.lead[k]);
      if (m > kExponentLimit) return std::nullopt;
      si[k] = m - ri.lead[k] + ri.tail[k];
      sj[k] = m - rj.lead[k] + rj.tail[k];
    }
    if (auto r = orient(std::move(si), std::move(sj))) {
      add_rule(std::move(*r));
      if (rs.rules_.size() > budget) return std::nullopt;
    }
  }
  return rs;
}

namespace {

auto rules_of(const MonoidPresentation& p) -> std::vector<std::pair<Exponent, Exponent>> {
  std::vector<std::pair<Exponent, Exponent>> out;
  for (const auto& [u, v] : p.relations) out.emplace_back(to_exponent(u), to_exponent(v));
  return out;
}

}  // namespace

auto congruent(const MonoidPresentation& p, const IntVec& u, const IntVec& v, const WordProblemOptions& opts)
    -> Tri {
  auto rs = RewriteSystem::complete(rules_of(p), p.size(), {}, opts.budget);
  if (!rs) return Tri::unknown;
  return tri(rs->equivalent(to_exponent(u), to_exponent(v)));
}

auto presentation_integral(const MonoidPresentation& p, const WordProblemOptions& opts) -> Tri {
  const std::size_t n = p.size();
  auto base = rules_of(p);
  auto rs = RewriteSystem::complete(base, n, {}, opts.budget);
  if (!rs) return Tri::unknown;

  // Cancellative iff I : x_i = I for every generator.  I : x_i comes from the
  // elimination of t in t·I + (1 − t)·⟨x_i⟩, all of whose generators are
  // pure-difference binomials.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<Exponent, Exponent>> rules;
    for (const auto& [a, b] : base) {
      Exponent ta = a, tb = b;
      ta.push_back(1);
      tb.push_back(1);
      rules.emplace_back(std::move(ta), std::move(tb));
    }
    Exponent xi(n + 1), txi(n + 1);
    xi[i] = 1;
    txi[i] = 1;
    txi[n] = 1;
    rules.emplace_back(xi, txi);
    auto elim = RewriteSystem::complete(rules, n + 1, {n}, opts.budget);
    if (!elim) return Tri::unknown;
    for (const auto& r : elim->rules()) {
      if (r.lead[n] != 0) continue;
      Exponent a(r.lead.begin(), r.lead.end() - 1), b(r.tail.begin(), r.tail.end() - 1);
      if (a[i] == 0 || b[i] == 0) throw std::logic_error("colon ideal generator not divisible by x_i");
      --a[i];
      --b[i];
      if (!rs->equivalent(a, b)) return Tri::no;
    }
  }
  return Tri::yes;
}

auto presentation_sharp(const MonoidPresentation& p, const WordProblemOptions& opts) -> Tri {
  const std::size_t n = p.size();
  // Union of supports of words congruent to 0: closed under "one side of a
  // relation supported inside ⇒ the other side too".
  std::vector<bool> in(n, false);
  auto inside = [&](const IntVec& w) {
    for (std::size_t k = 0; k < n; ++k)
      if (w[k] != 0 && !in[k]) return false;
    return true;
  };
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [u, v] : p.relations) {
      const bool iu = inside(u), iv = inside(v);
      if (iu == iv) continue;
      const IntVec& other = iu ? v : u;
      for (std::size_t k = 0; k < n; ++k)
        if (other[k] != 0 && !in[k]) {
          in[k] = true;
          grew = true;
        }
    }
  }
  if (std::none_of(in.begin(), in.end(), [](bool b) { return b; })) return Tri::yes;
  auto rs = RewriteSystem::complete(rules_of(p), n, {}, opts.budget);
  if (!rs) return Tri::unknown;
  for (std::size_t k = 0; k < n; ++k) {
    if (!in[k]) continue;
    Exponent e(n);
    e[k] = 1;
    if (!rs->equivalent(e, Exponent(n))) return Tri::no;
  }
  return Tri::yes;
}

}  // namespace corral
