#include "qfsc/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qfsc {

namespace {

struct TomlParser {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  explicit TomlParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void advance() {
    if (peek() == '\n') ++line;
    ++pos;
  }

  void skipInlineSpace() {
    while (peek() == ' ' || peek() == '\t') advance();
  }

  /// Skips whitespace, newlines and comments.
  void skipSpaceAndComments() {
    for (;;) {
      skipInlineSpace();
      if (peek() == '#') {
        while (peek() != '\n' && peek() != '\0') advance();
        continue;
      }
      if (peek() == '\n' || peek() == '\r') {
        advance();
        continue;
      }
      return;
    }
  }

  std::string parseKey() {
    skipInlineSpace();
    std::string key;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')
      key += text[pos], advance();
    if (key.empty()) fail("expected a key");
    return key;
  }

  TomlValue parseValue() {
    skipInlineSpace();
    const char c = peek();
    TomlValue v;
    if (c == '"') {
      advance();
      v.kind = TomlValue::Kind::string;
      while (peek() != '"') {
        if (peek() == '\0' || peek() == '\n') fail("unterminated string");
        v.str += text[pos];
        advance();
      }
      advance();
      return v;
    }
    if (c == '[') {
      advance();
      v.kind = TomlValue::Kind::array;
      skipSpaceAndComments();
      if (peek() == ']') {
        advance();
        return v;
      }
      for (;;) {
        v.items.push_back(parseValue());
        skipSpaceAndComments();
        if (peek() == ',') {
          advance();
          skipSpaceAndComments();
          if (peek() == ']') break;  // trailing comma
          continue;
        }
        break;
      }
      skipSpaceAndComments();
      if (peek() != ']') fail("expected ']'");
      advance();
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (std::isalpha(static_cast<unsigned char>(peek()))) word += text[pos], advance();
      if (word == "true") {
        v.kind = TomlValue::Kind::boolean;
        v.boolean = true;
        return v;
      }
      if (word == "false") {
        v.kind = TomlValue::Kind::boolean;
        v.boolean = false;
        return v;
      }
      fail("unexpected token '" + word + "'");
    }
    // number
    std::string num;
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '-' ||
           peek() == '+' || peek() == 'e' || peek() == 'E' || peek() == '_')
      if (peek() == '_')
        advance();
      else
        num += text[pos], advance();
    if (num.empty()) fail("expected a value");
    try {
      v.kind = TomlValue::Kind::number;
      v.number = std::stod(num);
    } catch (const std::exception&) {
      fail("bad number '" + num + "'");
    }
    return v;
  }

  TomlDoc parse() {
    TomlDoc doc;
    std::string section;
    for (;;) {
      skipSpaceAndComments();
      if (peek() == '\0') return doc;
      if (peek() == '[') {
        advance();
        section.clear();
        while (peek() != ']') {
          if (peek() == '\0' || peek() == '\n') fail("unterminated section header");
          section += text[pos];
          advance();
        }
        advance();
        continue;
      }
      std::string key = parseKey();
      skipInlineSpace();
      if (peek() != '=') fail("expected '=' after key '" + key + "'");
      advance();
      TomlValue value = parseValue();
      skipInlineSpace();
      if (peek() == '#')
        while (peek() != '\n' && peek() != '\0') advance();
      if (!doc[section].emplace(key, std::move(value)).second)
        fail("duplicate key '" + key + "'");
    }
  }
};

const TomlValue* find(const TomlDoc& doc, const std::string& section, const std::string& key) {
  auto s = doc.find(section);
  if (s == doc.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

double numberOr(const TomlDoc& doc, const std::string& s, const std::string& k, double dflt) {
  const TomlValue* v = find(doc, s, k);
  if (!v) return dflt;
  if (v->kind != TomlValue::Kind::number) throw ConfigError("[" + s + "] " + k + ": expected a number");
  return v->number;
}

int intOr(const TomlDoc& doc, const std::string& s, const std::string& k, int dflt) {
  const double x = numberOr(doc, s, k, dflt);
  if (x != std::floor(x)) throw ConfigError("[" + s + "] " + k + ": expected an integer");
  return static_cast<int>(x);
}

/// T spec: scalar (same value every bin), flat array of per-bin scalars, or
/// a d x d real symmetric matrix (array of rows) applied to every bin.
std::vector<Mat> resolveTSpec(const TomlValue& v, int d, int bins) {
  auto scalarBlock = [d](double t) { return Mat(t * Mat::Identity(d, d)); };
  if (v.kind == TomlValue::Kind::number)
    return std::vector<Mat>(bins, scalarBlock(v.number));
  if (v.kind != TomlValue::Kind::array) throw ConfigError("[state] T: expected number or array");
  if (v.items.empty()) throw ConfigError("[state] T: empty array");
  if (v.items.front().kind == TomlValue::Kind::number) {
    // per-bin scalars
    if (static_cast<int>(v.items.size()) != bins)
      throw ConfigError("[state] T: per-bin list must have one entry per bin");
    std::vector<Mat> out;
    for (const auto& item : v.items) {
      if (item.kind != TomlValue::Kind::number) throw ConfigError("[state] T: mixed array");
      out.push_back(scalarBlock(item.number));
    }
    return out;
  }
  // matrix rows
  if (static_cast<int>(v.items.size()) != d)
    throw ConfigError("[state] T: matrix must have d rows");
  Mat t(d, d);
  for (int r = 0; r < d; ++r) {
    const TomlValue& row = v.items[r];
    if (row.kind != TomlValue::Kind::array || static_cast<int>(row.items.size()) != d)
      throw ConfigError("[state] T: matrix row has wrong length");
    for (int c = 0; c < d; ++c) {
      if (row.items[c].kind != TomlValue::Kind::number)
        throw ConfigError("[state] T: matrix entries must be numbers");
      t(r, c) = row.items[c].number;
    }
  }
  return std::vector<Mat>(bins, t);
}

Mat resolvePSpec(const TomlValue* v, int d) {
  if (!v) return Mat::Zero(d, d);
  if (v->kind == TomlValue::Kind::number) return Mat(v->number * Mat::Identity(d, d));
  if (v->kind != TomlValue::Kind::array || static_cast<int>(v->items.size()) != d)
    throw ConfigError("[state] P: expected scalar or d x d matrix");
  Mat p(d, d);
  for (int r = 0; r < d; ++r) {
    const TomlValue& row = v->items[r];
    if (row.kind != TomlValue::Kind::array || static_cast<int>(row.items.size()) != d)
      throw ConfigError("[state] P: matrix row has wrong length");
    for (int c = 0; c < d; ++c) p(r, c) = row.items[c].number;
  }
  return p;
}

/// Word binding for d = 1: array over bins of real scalars or [re, im]
/// pairs.
Vec resolveWord(const TomlValue& v, int d, int bins, const std::string& name) {
  if (d != 1)
    throw ConfigError("[words] " + name + ": config word bindings support d = 1 only");
  if (v.kind != TomlValue::Kind::array || static_cast<int>(v.items.size()) != bins)
    throw ConfigError("[words] " + name + ": expected one entry per bin");
  Vec f(bins);
  for (int j = 0; j < bins; ++j) {
    const TomlValue& e = v.items[j];
    if (e.kind == TomlValue::Kind::number) {
      f[j] = e.number;
    } else if (e.kind == TomlValue::Kind::array && e.items.size() == 2 &&
               e.items[0].kind == TomlValue::Kind::number &&
               e.items[1].kind == TomlValue::Kind::number) {
      f[j] = cxd(e.items[0].number, e.items[1].number);
    } else {
      throw ConfigError("[words] " + name + ": entries must be numbers or [re, im] pairs");
    }
  }
  return f;
}

}  // namespace

TomlDoc parseToml(const std::string& text) { return TomlParser(text).parse(); }

Config Config::fromToml(const std::string& text) {
  const TomlDoc doc = parseToml(text);
  Config cfg;
  cfg.d = intOr(doc, "model", "d", cfg.d);
  cfg.bins = intOr(doc, "model", "bins", cfg.bins);
  cfg.dt = numberOr(doc, "model", "dt", cfg.dt);
  cfg.cutoff = intOr(doc, "model", "cutoff", cfg.cutoff);
  if (cfg.d < 1 || cfg.bins < 1 || cfg.cutoff < 1)
    throw ConfigError("[model]: d, bins and cutoff must be positive");

  if (const TomlValue* v = find(doc, "state", "kind")) {
    if (v->kind != TomlValue::Kind::string) throw ConfigError("[state] kind: expected a string");
    cfg.kind = v->str;
  }
  if (cfg.kind != "gauge" && cfg.kind != "squeezed" && cfg.kind != "custom_scaled")
    throw ConfigError("[state] kind: must be \"gauge\", \"squeezed\" or \"custom_scaled\"");
  if (const TomlValue* v = find(doc, "state", "T"))
    cfg.t_per_bin = resolveTSpec(*v, cfg.d, cfg.bins);
  else
    cfg.t_per_bin = std::vector<Mat>(cfg.bins, Mat::Identity(cfg.d, cfg.d));
  cfg.p = resolvePSpec(find(doc, "state", "P"), cfg.d);
  cfg.u_theta = numberOr(doc, "state", "U_theta", 0.0);
  if (const TomlValue* v = find(doc, "state", "strict")) {
    if (v->kind != TomlValue::Kind::boolean) throw ConfigError("[state] strict: expected a bool");
    cfg.strict = v->boolean;
  }
  cfg.custom_scale = numberOr(doc, "state", "scale", 1.0);

  cfg.tol_exact = numberOr(doc, "tolerances", "exact", cfg.tol_exact);
  cfg.tol_truncated = numberOr(doc, "tolerances", "truncated", cfg.tol_truncated);

  const double seed = numberOr(doc, "run", "seed", static_cast<double>(cfg.seed));
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.trials = intOr(doc, "run", "trials", cfg.trials);
  if (cfg.trials < 1) throw ConfigError("[run] trials: must be positive");

  if (auto s = doc.find("words"); s != doc.end())
    for (const auto& [name, value] : s->second)
      cfg.words.emplace(name, resolveWord(value, cfg.d, cfg.bins, name));

  // Validate the state upfront so schema errors surface before any run.
  cfg.buildSigma();
  return cfg;
}

Config Config::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fromToml(ss.str());
}

SigmaMap Config::buildSigma() const {
  const PhaseSpaceModel model = phaseModel();
  if (kind == "gauge") return buildSigmaGauge(model, t_per_bin, strict);
  if (kind == "custom_scaled")
    return buildSigmaGauge(model, t_per_bin, strict).scaled(custom_scale);
  SqueezeParams q;
  q.u = std::exp(kI * u_theta) * Mat::Identity(d, d);
  q.kp = ConjLinearMap::conjugation(d);
  q.p = p;
  return buildSigmaSqueezed(model, t_per_bin, std::vector<SqueezeParams>(bins, q), strict);
}

SigmaMap Config::buildSigmaPrimeMap() const {
  const SigmaMap sigma = buildSigma();
  if (kind == "gauge") return buildSigmaPrimeGauge(phaseModel(), t_per_bin);
  // Per-bin j composition; bins may carry different blocks.
  std::vector<Mat> blocks;
  for (int j = 0; j < sigma.bins(); ++j) {
    const ModularOneParticle m = polarConjLinear(sOmegaFiber(sigma.block(j)));
    blocks.push_back(m.j.kernel() * sigma.block(j).conjugate());
  }
  return SigmaMap(std::move(blocks), sigma.kind());
}

}  // namespace qfsc
