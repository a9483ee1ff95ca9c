#include "wittcalc/poly.hpp"

#include "wittcalc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace wittcalc {

// ------------------------------------------------------------------ PolyRing

PolyRing::PolyRing() : vars_(std::make_shared<const std::vector<std::string>>()) {}

PolyRing::PolyRing(std::vector<std::string> variables) {
  std::set<std::string> seen;
  for (const auto& v : variables) {
    if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
      fail(ErrorKind::Parse, "invalid variable name '" + v + "'");
    for (char ch : v)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
        fail(ErrorKind::Parse, "invalid variable name '" + v + "'");
    if (!seen.insert(v).second) fail(ErrorKind::Structural, "duplicate ring variable '" + v + "'");
  }
  vars_ = std::make_shared<const std::vector<std::string>>(std::move(variables));
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

PolyRing PolyRing::parse(const std::string& text) {
  const std::string s = trim(text);
  if (s == "Z" || s == "ZZ") return PolyRing();
  if (s.size() < 3 || (s[0] != 'Z') || s[1] != '[' || s.back() != ']')
    fail(ErrorKind::Parse, "ring must look like Z or Z[x,y], got '" + text + "'");
  std::vector<std::string> vars;
  std::string cur;
  for (std::size_t k = 2; k + 1 < s.size(); ++k) {
    if (s[k] == ',') {
      vars.push_back(trim(cur));
      cur.clear();
    } else {
      cur += s[k];
    }
  }
  vars.push_back(trim(cur));
  return PolyRing(std::move(vars));
}

std::optional<std::size_t> PolyRing::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < vars_->size(); ++k)
    if ((*vars_)[k] == name) return k;
  return std::nullopt;
}

std::string PolyRing::to_string() const {
  if (vars_->empty()) return "Z";
  std::string out = "Z[";
  for (std::size_t k = 0; k < vars_->size(); ++k) out += (k ? "," : "") + (*vars_)[k];
  return out + "]";
}

// --------------------------------------------------------------- PolyElement

PolyElement::PolyElement(PolyRing ring, const Integer& constant) : ring_(std::move(ring)) {
  if (constant != 0) terms_.emplace(Exponents(ring_.nvars(), 0), constant);
}

PolyElement PolyElement::variable(const PolyRing& ring, std::size_t index) {
  if (index >= ring.nvars()) fail(ErrorKind::Structural, "variable index out of range for " + ring.to_string());
  Exponents e(ring.nvars(), 0);
  e[index] = 1;
  return monomial(ring, std::move(e), 1);
}

PolyElement PolyElement::monomial(const PolyRing& ring, Exponents exps, const Integer& coeff) {
  if (exps.size() != ring.nvars()) fail(ErrorKind::Structural, "exponent vector length mismatch");
  PolyElement p(ring, 0);
  if (coeff != 0) p.terms_.emplace(std::move(exps), coeff);
  return p;
}

bool PolyElement::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](std::uint32_t v) { return v == 0; });
}

Integer PolyElement::constant_term() const {
  auto it = terms_.find(Exponents(ring_.nvars(), 0));
  return it == terms_.end() ? Integer(0) : it->second;
}

bool PolyElement::is_unit() const {
  return is_constant() && !is_zero() && (constant_term() == 1 || constant_term() == -1);
}

std::size_t PolyElement::total_degree() const {
  std::size_t best = 0;
  for (const auto& [e, c] : terms_) {
    std::size_t s = 0;
    for (auto v : e) s += v;
    best = std::max(best, s);
  }
  return best;
}

void PolyElement::require_same_ring(const PolyElement& rhs, const char* what) const {
  if (ring_ != rhs.ring_)
    fail(ErrorKind::Structural, std::string(what) + " of elements of " + ring_.to_string() + " and " +
                                    rhs.ring_.to_string());
}

PolyElement PolyElement::operator+(const PolyElement& rhs) const {
  require_same_ring(rhs, "sum");
  PolyElement out = *this;
  for (const auto& [e, c] : rhs.terms_) {
    auto [it, inserted] = out.terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) out.terms_.erase(it);
    }
  }
  return out;
}

PolyElement PolyElement::operator-() const {
  PolyElement out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

PolyElement PolyElement::operator-(const PolyElement& rhs) const { return *this + (-rhs); }

PolyElement PolyElement::operator*(const PolyElement& rhs) const {
  require_same_ring(rhs, "product");
  PolyElement out(ring_, 0);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : rhs.terms_) {
      Exponents e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      auto [it, inserted] = out.terms_.emplace(std::move(e), ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  return out;
}

PolyElement PolyElement::operator*(long k) const { return *this * PolyElement(ring_, k); }

PolyElement PolyElement::pow(unsigned k) const {
  PolyElement out = one_like();
  PolyElement base = *this;
  while (k) {
    if (k & 1u) out = out * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return out;
}

bool PolyElement::operator==(const PolyElement& rhs) const {
  return ring_ == rhs.ring_ && terms_ == rhs.terms_;
}

std::optional<PolyElement> PolyElement::divide_exact(const PolyElement& d) const {
  require_same_ring(d, "division");
  if (d.is_zero()) fail(ErrorKind::Domain, "division by zero polynomial");
  PolyElement q(ring_, 0);
  PolyElement r = *this;
  const auto& [lead_e, lead_c] = *d.terms_.rbegin();
  while (!r.is_zero()) {
    const auto& [re, rc] = *r.terms_.rbegin();
    Exponents e(re.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (re[k] < lead_e[k]) return std::nullopt;
      e[k] = re[k] - lead_e[k];
    }
    if (rc % lead_c != 0) return std::nullopt;
    const PolyElement term = monomial(ring_, std::move(e), rc / lead_c);
    q = q + term;
    r = r - term * d;
  }
  return q;
}

std::string PolyElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool negative = c < 0;
    const Integer mag = negative ? Integer(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_.variables()[k];
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    if (mono.empty()) {
      out += wittcalc::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += wittcalc::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

// ------------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(const PolyRing& ring, const std::string& text) : ring_(ring), s_(text) {}

  PolyElement run() {
    PolyElement v = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Parse, "polynomial '" + s_ + "' at position " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  PolyElement expr() {
    PolyElement v = term();
    while (true) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  PolyElement term() {
    PolyElement v = factor();
    while (eat('*')) v = v * factor();
    return v;
  }

  PolyElement factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    PolyElement b = base();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("expected a non-negative exponent");
      const std::string digits = s_.substr(start, pos_ - start);
      if (digits.size() > 6) error("exponent too large");
      b = b.pow(static_cast<unsigned>(std::stoul(digits)));
    }
    return b;
  }

  PolyElement base() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      PolyElement v = expr();
      if (!eat(')')) error("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return PolyElement(ring_, Integer(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      auto idx = ring_.index_of(name);
      if (!idx) error("variable '" + name + "' is not declared in " + ring_.to_string());
      return PolyElement::variable(ring_, *idx);
    }
    error("unexpected '" + std::string(1, ch) + "'");
  }

  const PolyRing& ring_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

PolyElement PolyElement::parse(const PolyRing& ring, const std::string& text) { return Parser(ring, text).run(); }

// ------------------------------------------------------------- determinants

PolyElement determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::Structural, "determinant of a non-square " + m.shape() + " matrix");
  const std::size_t n = m.rows();
  if (n == 0) return m.zero().one_like();
  PolyMatrix a = m;
  PolyElement prev = m.zero().one_like();
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k).is_zero()) ++swap;
      if (swap == n) return m.zero();
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        const PolyElement num = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        auto q = num.divide_exact(prev);
        if (!q) fail(ErrorKind::Internal, "Bareiss step is not exact");
        a(i, j) = *q;
      }
    prev = a(k, k);
  }
  return negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

std::optional<PolyMatrix> inverse_unimodular(const PolyMatrix& m) {
  const PolyElement det = determinant(m);
  if (!det.is_unit()) return std::nullopt;
  const std::size_t n = m.rows();
  PolyMatrix inv(n, n, m.zero());
  if (n == 1) {
    inv(0, 0) = det;  // det^-1 = det for det = +-1
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      PolyMatrix minor(n - 1, n - 1, m.zero());
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      PolyElement cof = determinant(minor);
      if ((i + j) % 2) cof = -cof;
      inv(j, i) = cof * det;
    }
  return inv;
}

// ---------------------------------------------------------- LocalizedElement

LocalizedElement::LocalizedElement(PolyElement num, std::uint32_t t_power, PolyElement t)
    : num_(std::move(num)), k_(t_power), t_(std::move(t)) {
  if (t_.is_zero()) fail(ErrorKind::Domain, "cannot localize at zero");
  if (num_.ring() != t_.ring())
    fail(ErrorKind::Structural, "numerator in " + num_.ring().to_string() + ", t in " + t_.ring().to_string());
  if (num_.is_zero()) {
    k_ = 0;
    return;
  }
  while (k_ > 0) {
    auto q = num_.divide_exact(t_);
    if (!q) break;
    num_ = std::move(*q);
    --k_;
  }
}

void LocalizedElement::require_same_t(const LocalizedElement& rhs) const {
  if (t_ != rhs.t_)
    fail(ErrorKind::Structural, "localizations at " + t_.to_string() + " and " + rhs.t_.to_string());
}

bool LocalizedElement::is_unit() const {
  if (num_.is_zero()) return false;
  PolyElement r = num_;
  while (!r.is_unit()) {
    if (t_.is_unit()) return false;
    auto q = r.divide_exact(t_);
    if (!q) return false;
    r = std::move(*q);
  }
  return true;
}

LocalizedElement LocalizedElement::operator+(const LocalizedElement& rhs) const {
  require_same_t(rhs);
  const std::uint32_t k = std::max(k_, rhs.k_);
  const PolyElement a = num_ * t_.pow(k - k_);
  const PolyElement b = rhs.num_ * t_.pow(k - rhs.k_);
  return {a + b, k, t_};
}

LocalizedElement LocalizedElement::operator-() const { return {-num_, k_, t_}; }

LocalizedElement LocalizedElement::operator-(const LocalizedElement& rhs) const { return *this + (-rhs); }

LocalizedElement LocalizedElement::operator*(const LocalizedElement& rhs) const {
  require_same_t(rhs);
  return {num_ * rhs.num_, k_ + rhs.k_, t_};
}

LocalizedElement LocalizedElement::operator*(long k) const { return {num_ * k, k_, t_}; }

bool LocalizedElement::operator==(const LocalizedElement& rhs) const {
  return t_ == rhs.t_ && k_ == rhs.k_ && num_ == rhs.num_;
}

std::string LocalizedElement::to_string() const {
  if (k_ == 0) return num_.to_string();
  std::string den = "(" + t_.to_string() + ")";
  if (k_ > 1) den += "^" + std::to_string(k_);
  return "(" + num_.to_string() + ")/" + den;
}

LocMatrix localize(const PolyMatrix& m, const PolyElement& t) {
  return m.map([&](const PolyElement& p) { return LocalizedElement::from_poly(p, t); });
}

}  // namespace wittcalc
