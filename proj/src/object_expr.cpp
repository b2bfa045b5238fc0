#include "ttg/object_expr.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "ttg/error.hpp"

namespace ttg {

std::size_t OrbitSet::count() const { return static_cast<std::size_t>(std::popcount(bits_)); }

SlotList shifted(const SlotList& slots, int n) {
  SlotList out = slots;
  for (auto& s : out) s.shift += n;
  return out;
}

ObjectExpr::ObjectExpr(std::vector<Term> terms) : terms_(std::move(terms)) { canonicalize(); }

ObjectExpr ObjectExpr::single(int orbit, int shift, int multiplicity) {
  return ObjectExpr({Term{orbit, shift, multiplicity}});
}

ObjectExpr ObjectExpr::from_slots(const SlotList& slots) {
  std::vector<Term> terms;
  for (const auto& s : slots) terms.push_back({s.orbit, s.shift, 1});
  return ObjectExpr(std::move(terms));
}

void ObjectExpr::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return std::tie(a.orbit, a.shift) < std::tie(b.orbit, b.shift);
  });
  std::vector<Term> merged;
  for (const auto& t : terms_) {
    if (t.multiplicity < 0) throw Error(ErrorKind::Schema, "negative multiplicity");
    if (t.multiplicity == 0) continue;
    if (!merged.empty() && merged.back().orbit == t.orbit && merged.back().shift == t.shift)
      merged.back().multiplicity += t.multiplicity;
    else
      merged.push_back(t);
  }
  terms_ = std::move(merged);
}

int ObjectExpr::rank() const {
  int r = 0;
  for (const auto& t : terms_) r += t.multiplicity;
  return r;
}

OrbitSet ObjectExpr::support() const {
  OrbitSet s;
  for (const auto& t : terms_) s.insert(static_cast<std::size_t>(t.orbit));
  return s;
}

ObjectExpr ObjectExpr::shifted(int n) const {
  ObjectExpr e = *this;
  for (auto& t : e.terms_) t.shift += n;
  return e;
}

ObjectExpr ObjectExpr::operator+(const ObjectExpr& o) const {
  std::vector<Term> terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  return ObjectExpr(std::move(terms));
}

SlotList ObjectExpr::slots() const {
  SlotList out;
  for (const auto& t : terms_)
    for (int k = 0; k < t.multiplicity; ++k) out.push_back({t.orbit, t.shift});
  return out;
}

bool ObjectExpr::operator<(const ObjectExpr& o) const {
  return std::lexicographical_compare(
      terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(), [](const Term& a, const Term& b) {
        return std::tie(a.orbit, a.shift, a.multiplicity) < std::tie(b.orbit, b.shift, b.multiplicity);
      });
}

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<std::string>& names, const AliasMap* aliases)
      : text_(text), names_(names), aliases_(aliases) {}

  ObjectExpr parse() {
    skip_ws();
    if (peek() == '0') {
      std::size_t save = pos_;
      ++pos_;
      skip_ws();
      if (pos_ == text_.size()) return ObjectExpr();
      pos_ = save;
    }
    ObjectExpr acc = term();
    skip_ws();
    while (pos_ < text_.size()) {
      expect('+');
      acc = acc + term();
      skip_ws();
    }
    return acc;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Schema,
                "object expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + msg);
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  long integer() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    std::size_t digits = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == digits) fail("expected integer");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }

  ObjectExpr term() {
    skip_ws();
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
      long mult = integer();
      if (mult <= 0) fail("multiplicity must be positive");
      expect('*');
      ObjectExpr inner = term();
      std::vector<ObjectExpr::Term> terms;
      for (auto t : inner.terms()) {
        t.multiplicity *= static_cast<int>(mult);
        terms.push_back(t);
      }
      return ObjectExpr(std::move(terms));
    }
    std::string name = identifier();
    int shift = 0;
    skip_ws();
    if (peek() == '[') {
      ++pos_;
      shift = static_cast<int>(integer());
      expect(']');
    }
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it != names_.end()) return ObjectExpr::single(static_cast<int>(it - names_.begin()), shift);
    if (aliases_) {
      auto a = aliases_->find(name);
      if (a != aliases_->end()) return a->second.shifted(shift);
    }
    fail("unknown name '" + name + "'");
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("expected name");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  const std::vector<std::string>& names_;
  const AliasMap* aliases_;
  std::size_t pos_ = 0;
};

}  // namespace

ObjectExpr parse_object_expr(std::string_view text, const std::vector<std::string>& orbit_names,
                             const AliasMap* aliases) {
  return ExprParser(text, orbit_names, aliases).parse();
}

std::string format_object_expr(const ObjectExpr& e, const std::vector<std::string>& orbit_names) {
  if (e.is_zero()) return "0";
  std::string out;
  for (const auto& t : e.terms()) {
    if (!out.empty()) out += " + ";
    if (t.multiplicity != 1) out += std::to_string(t.multiplicity) + "*";
    out += orbit_names.at(static_cast<std::size_t>(t.orbit));
    if (t.shift != 0) out += "[" + std::to_string(t.shift) + "]";
  }
  return out;
}

}  // namespace ttg
