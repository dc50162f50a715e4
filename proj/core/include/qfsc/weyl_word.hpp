#ifndef QFSC_WEYL_WORD_HPP
#define QFSC_WEYL_WORD_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qfsc/fock.hpp"
#include "qfsc/phase_space.hpp"

namespace qfsc {

/// Grammar:
///   expr   := term ('+' term)*
///   term   := factor ('*' factor)*
///   factor := scalar | 'W(' ident ')' ['*'] | '(' expr ')'
/// Scalar literals are complex: `0.5`, `2i`, `1+2i`, `1.5e-3-0.25i` (no
/// whitespace inside a literal). A '*' after a W-factor is an adjoint when
/// followed by '+', ')', '*' or the end of input, and a product otherwise.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct WordExpr {
  enum class Kind { scalar, generator, adjoint, product, sum };
  Kind kind;
  cxd value{};                 // scalar
  std::string name;            // generator
  std::size_t pos = 0;         // source span start
  std::vector<std::shared_ptr<WordExpr>> children;
};

using WordExprPtr = std::shared_ptr<WordExpr>;

WordExprPtr parseWord(const std::string& text);

/// Environment binding generator names to step functions in C^{bins*d}.
using WordEnvironment = std::map<std::string, Vec>;

/// Element of the linear span of CCR generators: sum of coeff * w_vector.
/// Vectors live in the pre-covariance step-function space; the quasifree
/// state carries the covariance map.
struct NormalForm {
  struct Term {
    cxd coeff;
    Vec vector;
  };
  std::vector<Term> terms;
};

/// Rewrites a word through w_u w_v = e^{-i Im<u,v>} w_{u+v} and
/// w_u* = w_{-u}; like terms are merged.
NormalForm normalize(const WordExprPtr& word, const WordEnvironment& env,
                     double merge_tol = 1e-12);

NormalForm normalProduct(const NormalForm& a, const NormalForm& b, double merge_tol = 1e-12);
NormalForm normalAdjoint(const NormalForm& a);
NormalForm normalSum(const NormalForm& a, const NormalForm& b, double merge_tol = 1e-12);

/// Exact quasifree expectation: sum of coeff * e^{-|Sigma iota v|^2 / 2}.
cxd expectExact(const NormalForm& nf, const PhaseSpaceModel& model, const SigmaMap& sigma);

/// Reusable cache of dense truncated Weyl operators keyed by argument.
class WeylCache {
 public:
  explicit WeylCache(const FockSpace& fock) : fock_(&fock) {}
  const Mat& get(const Vec& u);
  std::size_t size() const { return cache_.size(); }

 private:
  const FockSpace* fock_;
  std::map<std::string, Mat> cache_;
};

struct TruncatedExpectation {
  cxd value;
  cxd exact;
  double diff;
  bool budget_exceeded = false;  // argument norms beyond the truncation budget
};

/// Builds the word from truncated Weyl matrices, applies it to the vacuum
/// and compares with the exact oracle. Arguments with |Sigma iota f| above
/// `budget` get a warning flag rather than an error.
TruncatedExpectation expectTruncated(const WordExprPtr& word, const WordEnvironment& env,
                                     const PhaseSpaceModel& model, const SigmaMap& sigma,
                                     const FockSpace& fock, WeylCache& cache,
                                     double budget = 0.5);

}  // namespace qfsc

#endif
