#include "qfsc/weyl_word.hpp"

#include <cctype>
#include <cmath>

namespace qfsc {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  WordExprPtr parse() {
    WordExprPtr e = parseExpr();
    skipSpace();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool startsFactor() {
    const char c = peek();
    return c == '(' || c == 'W' || std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
           c == '-' || (c == 'i' && !std::isalnum(static_cast<unsigned char>(
                                        pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0')));
  }

  WordExprPtr parseExpr() {
    std::vector<WordExprPtr> terms{parseTerm()};
    skipSpace();
    while (peek() == '+') {
      ++pos_;
      terms.push_back(parseTerm());
      skipSpace();
    }
    if (terms.size() == 1) return terms.front();
    auto e = std::make_shared<WordExpr>();
    e->kind = WordExpr::Kind::sum;
    e->pos = terms.front()->pos;
    e->children = std::move(terms);
    return e;
  }

  WordExprPtr parseTerm() {
    std::vector<WordExprPtr> factors{parseFactor()};
    for (;;) {
      skipSpace();
      if (peek() != '*') break;
      const std::size_t star = pos_;
      ++pos_;
      skipSpace();
      if (!startsFactor()) throw ParseError("expected a factor after '*'", star);
      factors.push_back(parseFactor());
    }
    if (factors.size() == 1) return factors.front();
    auto e = std::make_shared<WordExpr>();
    e->kind = WordExpr::Kind::product;
    e->pos = factors.front()->pos;
    e->children = std::move(factors);
    return e;
  }

  WordExprPtr parseFactor() {
    skipSpace();
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) throw ParseError("expected a factor", pos_);
    const char c = peek();
    if (c == '(') {
      ++pos_;
      WordExprPtr inner = parseExpr();
      skipSpace();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (c == 'W') {
      ++pos_;
      skipSpace();
      if (peek() != '(') throw ParseError("expected '(' after W", pos_);
      ++pos_;
      skipSpace();
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        name += text_[pos_++];
      if (name.empty()) throw ParseError("expected an identifier", pos_);
      skipSpace();
      if (peek() != ')') throw ParseError("expected ')' after identifier", pos_);
      ++pos_;
      auto gen = std::make_shared<WordExpr>();
      gen->kind = WordExpr::Kind::generator;
      gen->name = name;
      gen->pos = start;
      // A '*' here is an adjoint only when no factor follows it.
      const std::size_t save = pos_;
      skipSpace();
      if (peek() == '*') {
        const std::size_t star = pos_;
        ++pos_;
        skipSpace();
        if (!startsFactor()) {
          auto adj = std::make_shared<WordExpr>();
          adj->kind = WordExpr::Kind::adjoint;
          adj->pos = star;
          adj->children.push_back(gen);
          return adj;
        }
        pos_ = save;  // a product: leave the '*' for parseTerm
      } else {
        pos_ = save;
      }
      return gen;
    }
    return parseScalar();
  }

  double parseNumber() {
    const std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = save;
      }
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '-'))
      throw ParseError("expected a number", start);
    return std::stod(text_.substr(start, pos_ - start));
  }

  WordExprPtr parseScalar() {
    const std::size_t start = pos_;
    auto e = std::make_shared<WordExpr>();
    e->kind = WordExpr::Kind::scalar;
    e->pos = start;
    // pure imaginary unit
    if (peek() == 'i') {
      ++pos_;
      e->value = kI;
      return e;
    }
    double first = parseNumber();
    if (peek() == 'i') {
      ++pos_;
      e->value = cxd(0.0, first);
      return e;
    }
    // a+bi / a-bi with no whitespace inside the literal
    if ((peek() == '+' || peek() == '-')) {
      const std::size_t save = pos_;
      const double sign = (peek() == '-') ? -1.0 : 1.0;
      ++pos_;
      if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                                  peek() == '.' || peek() == 'i')) {
        double second = (peek() == 'i') ? 1.0 : parseNumber();
        if (peek() == 'i') {
          ++pos_;
          e->value = cxd(first, sign * second);
          return e;
        }
      }
      pos_ = save;  // not a complex literal; the '+' belongs to the sum
    }
    e->value = cxd(first, 0.0);
    return e;
  }
};

void mergeTerm(NormalForm& nf, cxd coeff, const Vec& vector, double tol) {
  for (auto& t : nf.terms) {
    if ((t.vector - vector).cwiseAbs().maxCoeff() <= tol) {
      t.coeff += coeff;
      return;
    }
  }
  nf.terms.push_back({coeff, vector});
}

void dropZeroTerms(NormalForm& nf, double tol = 1e-15) {
  std::vector<NormalForm::Term> kept;
  for (auto& t : nf.terms)
    if (std::abs(t.coeff) > tol) kept.push_back(std::move(t));
  nf.terms = std::move(kept);
}

}  // namespace

WordExprPtr parseWord(const std::string& text) { return Parser(text).parse(); }

NormalForm normalProduct(const NormalForm& a, const NormalForm& b, double merge_tol) {
  NormalForm out;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      const cxd phase = std::exp(-kI * symplecticForm(ta.vector, tb.vector));
      mergeTerm(out, ta.coeff * tb.coeff * phase, Vec(ta.vector + tb.vector), merge_tol);
    }
  dropZeroTerms(out);
  return out;
}

NormalForm normalAdjoint(const NormalForm& a) {
  NormalForm out;
  for (const auto& t : a.terms) out.terms.push_back({std::conj(t.coeff), Vec(-t.vector)});
  return out;
}

NormalForm normalSum(const NormalForm& a, const NormalForm& b, double merge_tol) {
  NormalForm out = a;
  for (const auto& t : b.terms) mergeTerm(out, t.coeff, t.vector, merge_tol);
  dropZeroTerms(out);
  return out;
}

namespace {

NormalForm evaluate(const WordExprPtr& word, const WordEnvironment& env, Eigen::Index dim,
                    double tol) {
  NormalForm nf;
  switch (word->kind) {
    case WordExpr::Kind::scalar:
      nf.terms.push_back({word->value, Vec::Zero(dim)});
      return nf;
    case WordExpr::Kind::generator: {
      auto it = env.find(word->name);
      if (it == env.end())
        throw ParseError("unbound identifier '" + word->name + "'", word->pos);
      if (it->second.size() != dim)
        throw ParseError("identifier '" + word->name + "' has wrong dimension", word->pos);
      nf.terms.push_back({cxd(1.0, 0.0), it->second});
      return nf;
    }
    case WordExpr::Kind::adjoint:
      return normalAdjoint(evaluate(word->children.front(), env, dim, tol));
    case WordExpr::Kind::product: {
      NormalForm acc = evaluate(word->children.front(), env, dim, tol);
      for (std::size_t i = 1; i < word->children.size(); ++i)
        acc = normalProduct(acc, evaluate(word->children[i], env, dim, tol), tol);
      return acc;
    }
    case WordExpr::Kind::sum: {
      NormalForm acc = evaluate(word->children.front(), env, dim, tol);
      for (std::size_t i = 1; i < word->children.size(); ++i)
        acc = normalSum(acc, evaluate(word->children[i], env, dim, tol), tol);
      return acc;
    }
  }
  throw std::logic_error("evaluate: unreachable");
}

Eigen::Index environmentDim(const WordEnvironment& env) {
  if (env.empty()) throw std::invalid_argument("normalize: empty environment");
  return env.begin()->second.size();
}

}  // namespace

NormalForm normalize(const WordExprPtr& word, const WordEnvironment& env, double merge_tol) {
  return evaluate(word, env, environmentDim(env), merge_tol);
}

cxd expectExact(const NormalForm& nf, const PhaseSpaceModel& model, const SigmaMap& sigma) {
  cxd acc = 0.0;
  for (const auto& t : nf.terms)
    acc += t.coeff * std::exp(-0.5 * sigma.apply(iota(model, t.vector)).squaredNorm());
  return acc;
}

const Mat& WeylCache::get(const Vec& u) {
  std::string key(reinterpret_cast<const char*>(u.data()), u.size() * sizeof(cxd));
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(std::move(key), fock_->weylOperator(u).m).first->second;
}

namespace {

/// Applies the word to a vector, right to left; adjoint of a Weyl factor is
/// the Weyl operator of the negated argument.
Vec applyWord(const WordExprPtr& word, const WordEnvironment& env,
              const PhaseSpaceModel& model, const SigmaMap& sigma, const FockSpace& fock,
              WeylCache& cache, const Vec& v, bool adjoint_flag, double budget,
              bool& budget_exceeded) {
  switch (word->kind) {
    case WordExpr::Kind::scalar:
      return (adjoint_flag ? std::conj(word->value) : word->value) * v;
    case WordExpr::Kind::generator: {
      auto it = env.find(word->name);
      if (it == env.end())
        throw ParseError("unbound identifier '" + word->name + "'", word->pos);
      Vec u = sigma.apply(iota(model, it->second));
      if (u.norm() > budget) budget_exceeded = true;
      if (adjoint_flag) u = -u;
      return cache.get(u) * v;
    }
    case WordExpr::Kind::adjoint:
      return applyWord(word->children.front(), env, model, sigma, fock, cache, v,
                       !adjoint_flag, budget, budget_exceeded);
    case WordExpr::Kind::product: {
      Vec acc = v;
      if (!adjoint_flag) {
        for (auto it = word->children.rbegin(); it != word->children.rend(); ++it)
          acc = applyWord(*it, env, model, sigma, fock, cache, acc, false, budget,
                          budget_exceeded);
      } else {
        for (const auto& child : word->children)
          acc = applyWord(child, env, model, sigma, fock, cache, acc, true, budget,
                          budget_exceeded);
      }
      return acc;
    }
    case WordExpr::Kind::sum: {
      Vec acc = Vec::Zero(v.size());
      for (const auto& child : word->children)
        acc += applyWord(child, env, model, sigma, fock, cache, v, adjoint_flag, budget,
                         budget_exceeded);
      return acc;
    }
  }
  throw std::logic_error("applyWord: unreachable");
}

}  // namespace

TruncatedExpectation expectTruncated(const WordExprPtr& word, const WordEnvironment& env,
                                     const PhaseSpaceModel& model, const SigmaMap& sigma,
                                     const FockSpace& fock, WeylCache& cache, double budget) {
  TruncatedExpectation out;
  out.budget_exceeded = false;
  const Vec applied = applyWord(word, env, model, sigma, fock, cache, fock.vacuum(), false,
                                budget, out.budget_exceeded);
  out.value = applied[0];
  out.exact = expectExact(normalize(word, env), model, sigma);
  out.diff = std::abs(out.value - out.exact);
  return out;
}

}  // namespace qfsc
