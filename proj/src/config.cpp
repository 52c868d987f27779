#include "fijord/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fijord/errors.hpp"

namespace fijord {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ParseError(what + ": expected a non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError(what + ": value '" + s + "' is out of range");
  }
}

}  // namespace

InstanceConfig parse_config_text(const std::string& text) {
  InstanceConfig cfg;
  bool saw_modulus = false;
  std::string section;
  std::set<std::string> seen_keys;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "instance" && section != "map" && section != "suite")
        throw ParseError(where + ": unknown section [" + section + "]");
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError(where + ": key '" + key + "' outside any section");
    if (!seen_keys.insert(section + "." + key).second)
      throw ParseError(where + ": duplicate key '" + key + "' in [" + section + "]");

    if (section == "instance") {
      if (key == "modulus") {
        cfg.modulus = static_cast<std::uint32_t>(parse_u64(value, where + " modulus"));
        saw_modulus = true;
      } else if (key == "elements") {
        cfg.elements = split_tokens(value);
      } else if (key == "pairs") {
        for (const std::string& tok : split_tokens(value)) {
          std::size_t lt = tok.find('<');
          if (lt == std::string::npos || lt == 0 || lt + 1 == tok.size())
            throw ParseError(where + ": pair '" + tok + "' must look like x<y");
          cfg.pairs.emplace_back(tok.substr(0, lt), tok.substr(lt + 1));
        }
      } else if (key == "max_elements") {
        cfg.max_elements = static_cast<std::size_t>(parse_u64(value, where + " max_elements"));
      } else {
        throw ParseError(where + ": unknown key '" + key + "' in [instance]");
      }
    } else if (section == "map") {
      if (key == "spec") {
        cfg.map_spec = value;
      } else {
        throw ParseError(where + ": unknown key '" + key + "' in [map]");
      }
    } else {  // suite
      if (key == "checks") {
        cfg.checks = split_tokens(value);
      } else if (key == "seed") {
        cfg.seed = parse_u64(value, where + " seed");
      } else if (key == "cap") {
        cfg.enum_cap = parse_u64(value, where + " cap");
      } else if (key == "samples") {
        cfg.samples = static_cast<std::uint32_t>(parse_u64(value, where + " samples"));
      } else if (key == "report") {
        cfg.report_path = value;
      } else {
        throw ParseError(where + ": unknown key '" + key + "' in [suite]");
      }
    }
  }

  if (!saw_modulus) throw ParseError("config does not set [instance] modulus");
  if (cfg.elements.empty()) throw ParseError("config does not list any [instance] elements");
  if (cfg.elements.size() > cfg.max_elements)
    throw ParseError("config lists " + std::to_string(cfg.elements.size()) +
                     " elements; the cap is " + std::to_string(cfg.max_elements) +
                     " (raise max_elements to override)");
  {
    std::vector<std::string> sorted = cfg.elements;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError("duplicate element label in [instance] elements");
  }
  if (cfg.checks.size() == 1 && cfg.checks[0] == "all") cfg.checks.clear();
  return cfg;
}

InstanceConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

FiContextPtr build_context(const InstanceConfig& cfg) {
  RingZn ring(cfg.modulus);
  Preorder pre = Preorder::build(cfg.elements, cfg.pairs);
  QuotientPoset poset = QuotientPoset::quotient(pre);
  return FiContext::make(std::move(poset), std::move(ring));
}

// ---------------------------------------------------------------------------
// Map expression parser/evaluator.
// ---------------------------------------------------------------------------

namespace {

struct SpecNode {
  std::string name;
  std::map<std::string, std::string> args;
  std::vector<SpecNode> children;
};

class SpecParser {
 public:
  explicit SpecParser(const std::string& s) : s_(s) {}

  SpecNode parse() {
    SpecNode node = parse_node();
    skip_ws();
    if (i_ != s_.size()) fail("trailing input after the expression");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("map spec: " + msg + " (at offset " + std::to_string(i_) + " of '" + s_ +
                     "')");
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t b = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    if (i_ == b) fail("expected a name");
    return s_.substr(b, i_ - b);
  }

  SpecNode parse_node() {
    SpecNode node;
    node.name = parse_ident();
    // key=value arguments (a bare identifier is a flag set to "yes").
    for (;;) {
      skip_ws();
      if (i_ >= s_.size() || s_[i_] == '(' || s_[i_] == ')' || s_[i_] == ';') break;
      std::string key = parse_ident();
      skip_ws();
      if (i_ < s_.size() && s_[i_] == '=') {
        ++i_;
        skip_ws();
        std::size_t b = i_;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) &&
               s_[i_] != '(' && s_[i_] != ')' && s_[i_] != ';')
          ++i_;
        if (i_ == b) fail("argument '" + key + "' has an empty value");
        node.args[key] = s_.substr(b, i_ - b);
      } else {
        node.args[key] = "yes";
      }
    }
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      for (;;) {
        node.children.push_back(parse_node());
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ';') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ')') {
          ++i_;
          break;
        }
        fail("expected ';' or ')' in an argument list");
      }
    }
    return node;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

Residue parse_residue(const FiContext& ctx, const std::string& value, const std::string& what) {
  return ctx.ring().canon(static_cast<std::int64_t>(parse_u64(value, what)));
}

std::vector<Residue> parse_coords(const FiContext& ctx, const std::string& value,
                                  std::size_t expected, const std::string& what) {
  std::vector<std::string> parts = split_tokens(value);
  if (parts.size() != expected)
    throw ParseError(what + ": expected " + std::to_string(expected) + " values, got " +
                     std::to_string(parts.size()));
  std::vector<Residue> out(expected);
  for (std::size_t i = 0; i < expected; ++i) out[i] = parse_residue(ctx, parts[i], what);
  return out;
}

class SpecEvaluator {
 public:
  SpecEvaluator(FiContextPtr ctx, SplitMix64& rng) : ctx_(std::move(ctx)), rng_(rng) {}

  LinearMap eval(const SpecNode& node) {
    require_arity(node);
    require_known_args(node);
    if (node.name == "identity") return LinearMap::identity_on(ctx_);
    if (node.name == "dproj") return diagonal_projection(ctx_);
    if (node.name == "reversal") return eval_reversal(node);
    if (node.name == "inner") return eval_inner(node);
    if (node.name == "jtwist") return eval_jtwist(node);
    if (node.name == "matrix") return eval_matrix(node);
    if (node.name == "scale") {
      Residue k = parse_residue(*ctx_, need(node, "k"), "scale k");
      return eval(node.children[0]).scaled(k);
    }
    if (node.name == "sum") {
      LinearMap acc = eval(node.children[0]);
      for (std::size_t i = 1; i < node.children.size(); ++i) acc = acc.plus(eval(node.children[i]));
      return acc;
    }
    if (node.name == "compose") {
      LinearMap acc = eval(node.children[0]);
      for (std::size_t i = 1; i < node.children.size(); ++i) acc = acc.after(eval(node.children[i]));
      return acc;
    }
    if (node.name == "near_sum")
      return near_sum_compose(eval(node.children[0]), eval(node.children[1])).as_linear();
    throw ParseError("map spec: unknown constructor '" + node.name + "'");
  }

 private:
  static void require_known_args(const SpecNode& node) {
    static const std::map<std::string, std::vector<std::string>> allowed = {
        {"identity", {}},       {"dproj", {}},
        {"sum", {}},            {"compose", {}},
        {"near_sum", {}},       {"reversal", {"lambda"}},
        {"inner", {"unit"}},    {"jtwist", {"class", "e", "blockwise"}},
        {"matrix", {"coords"}}, {"scale", {"k"}},
    };
    auto it = allowed.find(node.name);
    if (it == allowed.end()) return;  // unknown constructor reported by eval
    for (const auto& [key, value] : node.args) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ParseError("map spec: '" + node.name + "' does not take an argument '" + key +
                         "'");
    }
  }

  static std::string need(const SpecNode& node, const std::string& key) {
    auto it = node.args.find(key);
    if (it == node.args.end())
      throw ParseError("map spec: '" + node.name + "' needs the argument '" + key + "'");
    return it->second;
  }

  void require_arity(const SpecNode& node) const {
    std::size_t n = node.children.size();
    auto want = [&](bool ok, const char* expect) {
      if (!ok)
        throw ParseError("map spec: '" + node.name + "' takes " + expect + ", got " +
                         std::to_string(n));
    };
    if (node.name == "scale") want(n == 1, "exactly one child");
    else if (node.name == "near_sum") want(n == 2, "exactly two children");
    else if (node.name == "sum" || node.name == "compose") want(n >= 2, "at least two children");
    else want(n == 0, "no children");
  }

  LinearMap eval_reversal(const SpecNode& node) {
    auto it = node.args.find("lambda");
    if (it == node.args.end()) return order_reversal_map(ctx_).as_linear();
    std::vector<std::string> labels = split_tokens(it->second);
    const QuotientPoset& poset = ctx_->poset();
    if (labels.size() != poset.class_count())
      throw ParseError("map spec: reversal lambda must list every class once");
    std::vector<std::uint32_t> lambda(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      lambda[i] = static_cast<std::uint32_t>(poset.class_index_of(labels[i]));
    return order_reversal_map(ctx_, lambda).as_linear();
  }

  LinearMap eval_inner(const SpecNode& node) {
    std::string unit = node.args.count("unit") ? node.args.at("unit") : "random";
    if (unit == "random") {
      for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Residue> u = ctx_->random_coords(rng_);
        if (fi_inverse(*ctx_, u)) return inner_automorphism(ctx_, u).as_linear();
      }
      throw PreconditionFailed("inner automorphism: no invertible element found by sampling");
    }
    return inner_automorphism(ctx_, parse_coords(*ctx_, unit, ctx_->dim(), "inner unit"))
        .as_linear();
  }

  LinearMap eval_jtwist(const SpecNode& node) {
    Residue e = parse_residue(*ctx_, need(node, "e"), "jtwist e");
    if (node.args.count("blockwise")) {
      if (node.args.count("class"))
        throw ParseError("map spec: jtwist takes either class=... or blockwise, not both");
      return j_twist_blockwise(ctx_, e).as_linear();
    }
    std::uint32_t c = static_cast<std::uint32_t>(ctx_->poset().class_index_of(need(node, "class")));
    return j_twist_class(ctx_, c, e).as_linear();
  }

  LinearMap eval_matrix(const SpecNode& node) {
    std::vector<Residue> entries =
        parse_coords(*ctx_, need(node, "coords"), ctx_->dim() * ctx_->dim(), "matrix coords");
    MatZn m(ctx_->ring(), ctx_->dim(), ctx_->dim());
    for (std::size_t r = 0; r < ctx_->dim(); ++r)
      for (std::size_t c = 0; c < ctx_->dim(); ++c) m.set(r, c, entries[r * ctx_->dim() + c]);
    return LinearMap(ctx_, TargetAlgebra::from_context(ctx_), std::move(m));
  }

  FiContextPtr ctx_;
  SplitMix64& rng_;
};

}  // namespace

LinearMap eval_map_spec(const FiContextPtr& ctx, const std::string& spec, SplitMix64& rng) {
  if (!ctx) throw PreconditionFailed("map spec evaluation needs a context");
  SpecNode root = SpecParser(spec).parse();
  return SpecEvaluator(ctx, rng).eval(root);
}

AdditiveMap build_map(const FiContextPtr& ctx, const InstanceConfig& cfg,
                      const SampleBudget& budget) {
  SplitMix64 rng = budget.stream("map.random_unit");
  LinearMap lm = eval_map_spec(ctx, cfg.map_spec, rng);
  return AdditiveMap(lm.source(), lm.target(), lm.matrix());
}

}  // namespace fijord
