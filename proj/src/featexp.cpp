#include "liftcal/featexp.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <unordered_set>

#include "liftcal/errors.hpp"
#include "liftcal/kernels.hpp"
#include "liftcal/lexer.hpp"

namespace liftcal {

// ---------------------------------------------------------------- space

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

} // namespace

FeatureSpace::FeatureSpace(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxFeatures) {
    throw SemanticError("too many features: " + std::to_string(names_.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!is_identifier(n)) throw SemanticError("bad feature name '" + n + "'");
    if (!seen.insert(n).second) throw SemanticError("duplicate feature '" + n + "'");
  }
}

std::optional<size_t> FeatureSpace::find(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

size_t FeatureSpace::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UndeclaredFeature(std::string(name));
}

// ---------------------------------------------------------------- FeatExp

FeatExp FeatExp::make(Kind k, std::string name, std::vector<FeatExp> kids) {
  return FeatExp(std::make_shared<const Node>(Node{k, std::move(name), std::move(kids)}));
}

FeatExp::FeatExp() : FeatExp(truth()) {}

FeatExp FeatExp::truth() {
  static const FeatExp t = make(Kind::True, "", {});
  return t;
}

FeatExp FeatExp::falsity() {
  static const FeatExp f = make(Kind::False, "", {});
  return f;
}

FeatExp FeatExp::atom(std::string name) { return make(Kind::Atom, std::move(name), {}); }

FeatExp FeatExp::negate(FeatExp e) { return make(Kind::Not, "", {std::move(e)}); }

namespace {

std::vector<FeatExp> flatten(FeatExp::Kind k, std::vector<FeatExp> kids) {
  std::vector<FeatExp> out;
  out.reserve(kids.size());
  for (auto& c : kids) {
    if (c.kind() == k) {
      out.insert(out.end(), c.kids().begin(), c.kids().end());
    } else {
      out.push_back(std::move(c));
    }
  }
  return out;
}

} // namespace

FeatExp FeatExp::conj(std::vector<FeatExp> kids) {
  kids = flatten(Kind::And, std::move(kids));
  if (kids.empty()) return truth();
  if (kids.size() == 1) return kids[0];
  return make(Kind::And, "", std::move(kids));
}

FeatExp FeatExp::disj(std::vector<FeatExp> kids) {
  kids = flatten(Kind::Or, std::move(kids));
  if (kids.empty()) return falsity();
  if (kids.size() == 1) return kids[0];
  return make(Kind::Or, "", std::move(kids));
}

FeatExp FeatExp::implies(FeatExp lhs, FeatExp rhs) {
  return make(Kind::Implies, "", {std::move(lhs), std::move(rhs)});
}

bool operator==(const FeatExp& a, const FeatExp& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.kids().size() != b.kids().size()) {
    return false;
  }
  return std::equal(a.kids().begin(), a.kids().end(), b.kids().begin());
}

namespace {

int prec(FeatExp::Kind k) {
  switch (k) {
    case FeatExp::Kind::Implies: return 1;
    case FeatExp::Kind::Or: return 2;
    case FeatExp::Kind::And: return 3;
    case FeatExp::Kind::Not: return 4;
    default: return 5;
  }
}

void render_into(const FeatExp& e, std::string& out);

void render_child(const FeatExp& c, bool parens, std::string& out) {
  if (parens) out += '(';
  render_into(c, out);
  if (parens) out += ')';
}

void render_into(const FeatExp& e, std::string& out) {
  using K = FeatExp::Kind;
  switch (e.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Atom: out += e.name(); return;
    case K::Not:
      out += '!';
      render_child(e.kids()[0], prec(e.kids()[0].kind()) < 4, out);
      return;
    case K::And:
    case K::Or: {
      const char* sep = e.kind() == K::And ? " & " : " | ";
      // Conjunctions inside a disjunction are bracketed for readability.
      int need = e.kind() == K::And ? 3 : 4;
      bool first = true;
      for (const auto& c : e.kids()) {
        if (!first) out += sep;
        first = false;
        render_child(c, prec(c.kind()) < need, out);
      }
      return;
    }
    case K::Implies:
      render_child(e.kids()[0], prec(e.kids()[0].kind()) <= 1, out);
      out += " => ";
      render_child(e.kids()[1], prec(e.kids()[1].kind()) < 1, out);
      return;
  }
}

} // namespace

std::string FeatExp::render() const {
  std::string out;
  render_into(*this, out);
  return out;
}

FeatExp FeatExp::fold() const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Atom:
      return *this;
    case Kind::Not: {
      FeatExp c = kids()[0].fold();
      if (c.kind() == Kind::True) return falsity();
      if (c.kind() == Kind::False) return truth();
      return negate(c);
    }
    case Kind::And:
    case Kind::Or: {
      bool is_and = kind() == Kind::And;
      Kind absorbing = is_and ? Kind::False : Kind::True;
      Kind unit = is_and ? Kind::True : Kind::False;
      std::vector<FeatExp> out;
      for (const auto& k : kids()) {
        FeatExp c = k.fold();
        if (c.kind() == absorbing) return c;
        if (c.kind() != unit) out.push_back(c);
      }
      return is_and ? conj(std::move(out)) : disj(std::move(out));
    }
    case Kind::Implies: {
      FeatExp l = kids()[0].fold();
      FeatExp r = kids()[1].fold();
      if (l.kind() == Kind::False || r.kind() == Kind::True) return truth();
      if (l.kind() == Kind::True) return r;
      if (r.kind() == Kind::False) return negate(l).fold();
      return implies(l, r);
    }
  }
  return *this;
}

FeatExp FeatExp::substitute(std::string_view n, bool value) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return *this;
    case Kind::Atom:
      return name() == n ? (value ? truth() : falsity()) : *this;
    case Kind::Not:
      return negate(kids()[0].substitute(n, value));
    case Kind::And:
    case Kind::Or: {
      std::vector<FeatExp> out;
      for (const auto& k : kids()) out.push_back(k.substitute(n, value));
      return kind() == Kind::And ? conj(std::move(out)) : disj(std::move(out));
    }
    case Kind::Implies:
      return implies(kids()[0].substitute(n, value), kids()[1].substitute(n, value));
  }
  return *this;
}

void FeatExp::atoms(std::set<std::string>& out) const {
  if (kind() == Kind::Atom) out.insert(name());
  for (const auto& k : kids()) k.atoms(out);
}

bool FeatExp::mentions(std::string_view n) const {
  if (kind() == Kind::Atom) return name() == n;
  return std::any_of(kids().begin(), kids().end(),
                     [&](const FeatExp& k) { return k.mentions(n); });
}

// ---------------------------------------------------------------- parser

namespace {

FeatExp parse_implies(TokenStream& ts, const FeatureSpace& sp);

FeatExp parse_atom(TokenStream& ts, const FeatureSpace& sp) {
  if (ts.accept(Tok::Bang)) return FeatExp::negate(parse_atom(ts, sp));
  if (ts.accept(Tok::LParen)) {
    FeatExp e = parse_implies(ts, sp);
    ts.expect(Tok::RParen);
    return e;
  }
  if (ts.at(Tok::Ident)) {
    const Token& t = ts.next();
    if (t.text == "true") return FeatExp::truth();
    if (t.text == "false") return FeatExp::falsity();
    if (!sp.contains(t.text)) throw UndeclaredFeature(t.text);
    return FeatExp::atom(t.text);
  }
  ts.fail("expected feature expression");
}

FeatExp parse_and(TokenStream& ts, const FeatureSpace& sp) {
  std::vector<FeatExp> kids{parse_atom(ts, sp)};
  while (ts.accept(Tok::Amp)) kids.push_back(parse_atom(ts, sp));
  return FeatExp::conj(std::move(kids));
}

FeatExp parse_or(TokenStream& ts, const FeatureSpace& sp) {
  std::vector<FeatExp> kids{parse_and(ts, sp)};
  while (ts.accept(Tok::Bar)) kids.push_back(parse_and(ts, sp));
  return FeatExp::disj(std::move(kids));
}

FeatExp parse_implies(TokenStream& ts, const FeatureSpace& sp) {
  FeatExp lhs = parse_or(ts, sp);
  if (ts.accept(Tok::Implies)) return FeatExp::implies(lhs, parse_implies(ts, sp));
  return lhs;
}

} // namespace

FeatExp parse_featexp(TokenStream& ts, const FeatureSpace& space) {
  return parse_implies(ts, space);
}

FeatExp parse_featexp(std::string_view text, const FeatureSpace& space) {
  TokenStream ts(tokenize(text));
  FeatExp e = parse_featexp(ts, space);
  if (!ts.at(Tok::End)) ts.fail("unexpected trailing input");
  return e;
}

void check_declared(const FeatExp& e, const FeatureSpace& space) {
  std::set<std::string> names;
  e.atoms(names);
  for (const auto& n : names) {
    if (!space.contains(n)) throw UndeclaredFeature(n);
  }
}

// ---------------------------------------------------------------- evaluation

uint64_t code_at_rank(size_t n, uint64_t rank) {
  uint64_t code = 0;
  for (size_t i = 0; i < n; ++i) {
    if (((rank >> (n - 1 - i)) & 1U) == 0) code |= uint64_t{1} << i;
  }
  return code;
}

uint64_t rank_of(size_t n, uint64_t code) {
  uint64_t rank = 0;
  for (size_t i = 0; i < n; ++i) {
    if (((code >> i) & 1U) == 0) rank |= uint64_t{1} << (n - 1 - i);
  }
  return rank;
}

bool eval(const FeatExp& e, const FeatureSpace& space, uint64_t code) {
  using K = FeatExp::Kind;
  switch (e.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: return ((code >> space.index(e.name())) & 1U) != 0;
    case K::Not: return !eval(e.kids()[0], space, code);
    case K::And:
      return std::all_of(e.kids().begin(), e.kids().end(),
                         [&](const FeatExp& k) { return eval(k, space, code); });
    case K::Or:
      return std::any_of(e.kids().begin(), e.kids().end(),
                         [&](const FeatExp& k) { return eval(k, space, code); });
    case K::Implies:
      return !eval(e.kids()[0], space, code) || eval(e.kids()[1], space, code);
  }
  return false;
}

namespace {

template <class Instr, class Op>
void compile_into(const FeatExp& e, const FeatureSpace& space, std::vector<Instr>& prog) {
  using K = FeatExp::Kind;
  for (const auto& k : e.kids()) compile_into<Instr, Op>(k, space, prog);
  switch (e.kind()) {
    case K::True: prog.push_back({Op::True, 0}); break;
    case K::False: prog.push_back({Op::False, 0}); break;
    case K::Atom:
      prog.push_back({Op::Atom, static_cast<uint32_t>(space.index(e.name()))});
      break;
    case K::Not: prog.push_back({Op::Not, 1}); break;
    case K::And: prog.push_back({Op::And, static_cast<uint32_t>(e.kids().size())}); break;
    case K::Or: prog.push_back({Op::Or, static_cast<uint32_t>(e.kids().size())}); break;
    case K::Implies: prog.push_back({Op::Implies, 2}); break;
  }
}

} // namespace

Predicate::Predicate(const FeatExp& e, const FeatureSpace& space) {
  compile_into<Instr, Op>(e, space, prog_);
}

bool Predicate::operator()(uint64_t code) const {
  auto& st = stack_;
  st.clear();
  for (const Instr& in : prog_) {
    switch (in.op) {
      case Op::True: st.push_back(1); break;
      case Op::False: st.push_back(0); break;
      case Op::Atom: st.push_back(static_cast<uint8_t>((code >> in.arg) & 1U)); break;
      case Op::Not: st.back() = !st.back(); break;
      case Op::And:
      case Op::Or: {
        bool is_and = in.op == Op::And;
        uint8_t acc = is_and ? 1 : 0;
        for (uint32_t i = 0; i < in.arg; ++i) {
          acc = is_and ? (acc & st.back()) : (acc | st.back());
          st.pop_back();
        }
        st.push_back(acc);
        break;
      }
      case Op::Implies: {
        uint8_t r = st.back();
        st.pop_back();
        st.back() = static_cast<uint8_t>(!st.back() || r);
        break;
      }
    }
  }
  return st.back() != 0;
}

// ---------------------------------------------------------------- valuations

namespace {

size_t words_for(size_t n) { return n >= 6 ? (size_t{1} << (n - 6)) : 1; }

uint64_t tail_mask(size_t n) {
  return n >= 6 ? ~uint64_t{0} : ((uint64_t{1} << (size_t{1} << n)) - 1);
}

void require_dense(size_t n) {
  if (n > kMaxDenseFeatures) {
    throw SemanticError("feature space too large for enumeration: " + std::to_string(n) +
                        " features (limit " + std::to_string(kMaxDenseFeatures) + ")");
  }
}

std::vector<uint64_t> atom_table(size_t n, size_t i) {
  static constexpr uint64_t kPattern[6] = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
  };
  std::vector<uint64_t> w(words_for(n));
  for (size_t k = 0; k < w.size(); ++k) {
    if (i < 6) {
      w[k] = kPattern[i];
    } else {
      w[k] = ((k >> (i - 6)) & 1U) ? ~uint64_t{0} : 0;
    }
  }
  w.back() &= tail_mask(n);
  return w;
}

std::vector<uint64_t> table_of(const FeatExp& e, const FeatureSpace& sp) {
  using K = FeatExp::Kind;
  const size_t n = sp.size();
  const auto& kt = kernels::active();
  switch (e.kind()) {
    case K::True: {
      std::vector<uint64_t> w(words_for(n), ~uint64_t{0});
      w.back() &= tail_mask(n);
      return w;
    }
    case K::False: return std::vector<uint64_t>(words_for(n), 0);
    case K::Atom: return atom_table(n, sp.index(e.name()));
    case K::Not: {
      auto w = table_of(e.kids()[0], sp);
      for (auto& x : w) x = ~x;
      w.back() &= tail_mask(n);
      return w;
    }
    case K::And:
    case K::Or: {
      auto acc = table_of(e.kids()[0], sp);
      for (size_t i = 1; i < e.kids().size(); ++i) {
        auto w = table_of(e.kids()[i], sp);
        if (e.kind() == K::And) {
          kt.bits_and(acc.data(), w.data(), acc.data(), acc.size());
        } else {
          kt.bits_or(acc.data(), w.data(), acc.data(), acc.size());
        }
      }
      return acc;
    }
    case K::Implies: {
      auto l = table_of(e.kids()[0], sp);
      auto r = table_of(e.kids()[1], sp);
      for (size_t i = 0; i < l.size(); ++i) l[i] = ~l[i] | r[i];
      l.back() &= tail_mask(n);
      return l;
    }
  }
  return {};
}

} // namespace

Valuations Valuations::dense_of(size_t n, std::vector<uint64_t> words) {
  Valuations v;
  v.n_ = n;
  v.words_ = std::move(words);
  return v;
}

Valuations Valuations::none(size_t n) {
  require_dense(n);
  return dense_of(n, std::vector<uint64_t>(words_for(n), 0));
}

Valuations Valuations::all(size_t n) {
  require_dense(n);
  std::vector<uint64_t> w(words_for(n), ~uint64_t{0});
  w.back() &= tail_mask(n);
  return dense_of(n, std::move(w));
}

Valuations Valuations::single(size_t n, uint64_t code) {
  Valuations v;
  v.n_ = n;
  v.is_single_ = true;
  v.code_ = code;
  return v;
}

Valuations Valuations::of(const FeatExp& e, const FeatureSpace& space) {
  require_dense(space.size());
  return dense_of(space.size(), table_of(e, space));
}

Valuations Valuations::from_codes(size_t n, std::span<const uint64_t> codes) {
  if (codes.size() == 1) return single(n, codes[0]);
  Valuations v = none(n);
  for (uint64_t c : codes) v.words_[c >> 6] |= uint64_t{1} << (c & 63U);
  return v;
}

const std::vector<uint64_t>& Valuations::dense() const {
  if (is_single_ && words_.empty()) {
    require_dense(n_);
    words_.assign(words_for(n_), 0);
    words_[code_ >> 6] |= uint64_t{1} << (code_ & 63U);
  }
  return words_;
}

bool Valuations::empty() const {
  if (is_single_) return false;
  return std::all_of(words_.begin(), words_.end(), [](uint64_t w) { return w == 0; });
}

size_t Valuations::count() const {
  if (is_single_) return 1;
  return kernels::active().bits_count(words_.data(), words_.size());
}

bool Valuations::contains(uint64_t code) const {
  if (is_single_) return code == code_;
  if (code >= (uint64_t{1} << n_)) return false;
  return ((words_[code >> 6] >> (code & 63U)) & 1U) != 0;
}

std::optional<uint64_t> Valuations::single_code() const {
  if (is_single_) return code_;
  if (count() != 1) return std::nullopt;
  for (size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) return (i << 6) + static_cast<uint64_t>(std::countr_zero(words_[i]));
  }
  return std::nullopt;
}

bool Valuations::subset_of(const Valuations& o) const {
  if (is_single_) return o.contains(code_);
  if (o.is_single_) {
    size_t c = count();
    return c == 0 || (c == 1 && contains(o.code_));
  }
  return kernels::active().bits_subset(words_.data(), o.words_.data(), words_.size());
}

bool Valuations::intersects(const Valuations& o) const {
  if (is_single_) return o.contains(code_);
  if (o.is_single_) return contains(o.code_);
  return kernels::active().bits_intersect(words_.data(), o.words_.data(), words_.size());
}

Valuations Valuations::unite(const Valuations& o) const {
  if (is_single_ && o.is_single_ && code_ == o.code_) return *this;
  const auto& a = dense();
  const auto& b = o.dense();
  std::vector<uint64_t> w(a.size());
  kernels::active().bits_or(a.data(), b.data(), w.data(), w.size());
  return dense_of(n_, std::move(w));
}

Valuations Valuations::intersect(const Valuations& o) const {
  if (is_single_) return o.contains(code_) ? *this : none(n_);
  if (o.is_single_) return contains(o.code_) ? o : none(n_);
  std::vector<uint64_t> w(words_.size());
  kernels::active().bits_and(words_.data(), o.words_.data(), w.data(), w.size());
  return dense_of(n_, std::move(w));
}

Valuations Valuations::complement() const {
  std::vector<uint64_t> w = dense();
  for (auto& x : w) x = ~x;
  w.back() &= tail_mask(n_);
  return dense_of(n_, std::move(w));
}

Valuations Valuations::union_of(size_t n, std::span<const Valuations> parts) {
  if (parts.size() == 1) return parts[0];
  Valuations acc = none(n);
  for (const auto& p : parts) {
    if (p.is_single_) {
      acc.words_[p.code_ >> 6] |= uint64_t{1} << (p.code_ & 63U);
    } else {
      kernels::active().bits_or(acc.words_.data(), p.words_.data(), acc.words_.data(),
                                acc.words_.size());
    }
  }
  return acc;
}

Valuations Valuations::forget(size_t i) const {
  std::vector<uint64_t> w = dense();
  if (i < 6) {
    static constexpr uint64_t kLow[6] = {
        0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
        0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
    };
    const unsigned sh = 1U << i;
    for (auto& x : w) {
      uint64_t lo = x & kLow[i];
      uint64_t hi = x & ~kLow[i];
      x |= (lo << sh) | (hi >> sh);
    }
    w.back() &= tail_mask(n_);
  } else {
    const size_t d = size_t{1} << (i - 6);
    for (size_t k = 0; k < w.size(); ++k) {
      if ((k & d) == 0) {
        uint64_t m = w[k] | w[k + d];
        w[k] = m;
        w[k + d] = m;
      }
    }
  }
  return dense_of(n_, std::move(w));
}

std::vector<uint64_t> Valuations::members() const {
  if (is_single_) return {code_};
  std::vector<uint64_t> out;
  for (size_t i = 0; i < words_.size(); ++i) {
    uint64_t w = words_[i];
    while (w) {
      out.push_back((i << 6) + static_cast<uint64_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  std::sort(out.begin(), out.end(),
            [n = n_](uint64_t a, uint64_t b) { return rank_of(n, a) < rank_of(n, b); });
  return out;
}

FeatExp Valuations::to_formula(const FeatureSpace& space) const {
  std::vector<FeatExp> terms;
  for (uint64_t c : members()) terms.push_back(config_formula(space, c));
  return FeatExp::disj(std::move(terms));
}

bool operator==(const Valuations& a, const Valuations& b) {
  if (a.n_ != b.n_) return false;
  if (a.is_single_ && b.is_single_) return a.code_ == b.code_;
  if (a.is_single_ || b.is_single_) {
    const Valuations& s = a.is_single_ ? a : b;
    const Valuations& d = a.is_single_ ? b : a;
    return d.count() == 1 && d.contains(s.code_);
  }
  return a.words_ == b.words_;
}

// ---------------------------------------------------------------- predicates

bool sat(const FeatExp& phi, const FeatureSpace& space) {
  return !Valuations::of(phi, space).empty();
}

bool valid(const FeatExp& phi, const FeatureSpace& space) {
  return Valuations::of(phi, space).complement().empty();
}

bool entails(const FeatExp& phi, const FeatExp& theta, const FeatureSpace& space) {
  return Valuations::of(phi, space).subset_of(Valuations::of(theta, space));
}

bool equiv(const FeatExp& a, const FeatExp& b, const FeatureSpace& space) {
  return Valuations::of(a, space) == Valuations::of(b, space);
}

FeatExp eliminate(const FeatExp& phi, std::string_view a) {
  return FeatExp::disj({phi.substitute(a, true), phi.substitute(a, false)}).fold();
}

FeatExp config_formula(const FeatureSpace& space, uint64_t code) {
  std::vector<FeatExp> lits;
  for (size_t i = 0; i < space.size(); ++i) {
    FeatExp a = FeatExp::atom(space.name(i));
    lits.push_back(((code >> i) & 1U) ? a : FeatExp::negate(a));
  }
  return FeatExp::conj(std::move(lits));
}

// ---------------------------------------------------------------- config sets

ConfigSet::ConfigSet(FeatureSpace space, std::vector<uint64_t> codes)
    : space_(std::move(space)), codes_(std::move(codes)) {
  const size_t n = space_.size();
  std::unordered_set<uint64_t> seen;
  for (uint64_t c : codes_) {
    if (n < 64 && (c >> n) != 0) throw SemanticError("configuration outside feature space");
    if (!seen.insert(c).second) throw SemanticError("duplicate configuration");
  }
}

std::optional<size_t> ConfigSet::find(uint64_t code) const {
  for (size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i] == code) return i;
  }
  return std::nullopt;
}

std::optional<size_t> ConfigSet::find(const FeatExp& k) const {
  auto c = Valuations::of(k, space_).single_code();
  return c ? find(*c) : std::nullopt;
}

namespace {

enum class Tri : uint8_t { False, True, Unknown };

// Evaluation under a partial assignment: features with a clear bit in known are unset.
Tri eval_partial(const FeatExp& e, const FeatureSpace& sp, uint64_t known, uint64_t code) {
  using K = FeatExp::Kind;
  switch (e.kind()) {
    case K::True: return Tri::True;
    case K::False: return Tri::False;
    case K::Atom: {
      size_t i = sp.index(e.name());
      if (((known >> i) & 1U) == 0) return Tri::Unknown;
      return ((code >> i) & 1U) ? Tri::True : Tri::False;
    }
    case K::Not: {
      Tri t = eval_partial(e.kids()[0], sp, known, code);
      return t == Tri::Unknown ? t : (t == Tri::True ? Tri::False : Tri::True);
    }
    case K::And:
    case K::Or: {
      Tri absorbing = e.kind() == K::And ? Tri::False : Tri::True;
      bool unknown = false;
      for (const auto& k : e.kids()) {
        Tri t = eval_partial(k, sp, known, code);
        if (t == absorbing) return absorbing;
        unknown |= t == Tri::Unknown;
      }
      if (unknown) return Tri::Unknown;
      return absorbing == Tri::False ? Tri::True : Tri::False;
    }
    case K::Implies: {
      Tri l = eval_partial(e.kids()[0], sp, known, code);
      Tri r = eval_partial(e.kids()[1], sp, known, code);
      if (l == Tri::False || r == Tri::True) return Tri::True;
      if (l == Tri::True && r == Tri::False) return Tri::False;
      return Tri::Unknown;
    }
  }
  return Tri::Unknown;
}

void enumerate_models(const FeatExp& psi, const FeatureSpace& sp, size_t i, uint64_t known,
                      uint64_t code, std::vector<uint64_t>& out) {
  Tri t = eval_partial(psi, sp, known, code);
  if (t == Tri::False) return;
  if (i == sp.size()) {
    out.push_back(code);
    return;
  }
  const uint64_t bit = uint64_t{1} << i;
  if (t == Tri::True) {
    // Every completion is a model; emit them in canonical order.
    const size_t free = sp.size() - i;
    if (free >= 63) throw SemanticError("too many valid configurations to enumerate");
    for (uint64_t r = 0; r < (uint64_t{1} << free); ++r) out.push_back(code | (code_at_rank(free, r) << i));
    return;
  }
  enumerate_models(psi, sp, i + 1, known | bit, code | bit, out);
  enumerate_models(psi, sp, i + 1, known | bit, code, out);
}

} // namespace

ConfigSet valid_configs(const FeatureModel& fm) {
  const size_t n = fm.space.size();
  std::vector<uint64_t> codes;
  if (n > kMaxDenseFeatures) {
    enumerate_models(fm.psi, fm.space, 0, 0, 0, codes);
    return ConfigSet(fm.space, std::move(codes));
  }
  Valuations models = Valuations::of(fm.psi, fm.space);
  const uint64_t total = uint64_t{1} << n;
  for (uint64_t r = 0; r < total; ++r) {
    uint64_t c = code_at_rank(n, r);
    if (models.contains(c)) codes.push_back(c);
  }
  return ConfigSet(fm.space, std::move(codes));
}

} // namespace liftcal
