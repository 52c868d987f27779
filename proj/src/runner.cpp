#include "fijord/runner.hpp"

#include <algorithm>
#include <fstream>

#include "fijord/errors.hpp"

namespace fijord {

namespace {

using Coords = std::vector<Residue>;

Coords unit_coords(std::size_t dim, std::size_t k) {
  Coords v(dim, 0);
  v[k] = 1;
  return v;
}

bool all_zero(const Coords& v) {
  for (Residue x : v)
    if (x) return false;
  return true;
}

std::string join(const std::vector<std::string>& v, char sep = ' ') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

/// Every class subset when there are at most `exhaustive_classes` classes,
/// else a canonical family plus seeded random subsets.
std::vector<std::vector<std::uint32_t>> subsets_of_classes(const FiContext& ctx,
                                                           const SampleBudget& budget,
                                                           std::string_view stream_name,
                                                           std::uint32_t exhaustive_classes) {
  std::uint32_t c = static_cast<std::uint32_t>(ctx.poset().class_count());
  std::vector<std::vector<std::uint32_t>> out;
  if (c <= exhaustive_classes) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << c); ++bits) {
      std::vector<std::uint32_t> s;
      for (std::uint32_t i = 0; i < c; ++i)
        if (bits & (std::uint64_t(1) << i)) s.push_back(i);
      out.push_back(std::move(s));
    }
    return out;
  }
  out.push_back({});
  std::vector<std::uint32_t> full(c);
  for (std::uint32_t i = 0; i < c; ++i) full[i] = i;
  out.push_back(full);
  for (std::uint32_t i = 0; i < c; ++i) {
    out.push_back({i});
    std::vector<std::uint32_t> co;
    for (std::uint32_t j = 0; j < c; ++j)
      if (j != i) co.push_back(j);
    out.push_back(std::move(co));
  }
  SplitMix64 rng = budget.stream(stream_name);
  for (int t = 0; t < 64; ++t) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t i = 0; i < c; ++i)
      if (rng.next() & 1) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::uint32_t> intersect(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string subset_text(const FiContext& ctx, const std::vector<std::uint32_t>& X) {
  std::string s = "{";
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (i) s += ' ';
    s += ctx.poset().class_labels()[X[i]];
  }
  s += '}';
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Map-free suites.
// ---------------------------------------------------------------------------

std::vector<CheckResult> ring_axiom_checks(const RingZn& ring, const SampleBudget& budget) {
  const std::uint32_t n = ring.modulus();
  CheckResult addgrp{"ring.additive_group", true, ""};
  CheckResult monoid{"ring.multiplicative_monoid", true, ""};
  CheckResult dist{"ring.distributive", true, ""};

  auto test_triple = [&](Residue a, Residue b, Residue c) {
    std::string w = "a=" + std::to_string(a) + " b=" + std::to_string(b) +
                    " c=" + std::to_string(c);
    if (addgrp.passed) {
      bool ok = ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c)) &&
                ring.add(a, b) == ring.add(b, a) && ring.add(a, 0) == a &&
                ring.add(a, ring.neg(a)) == 0 && ring.sub(a, b) == ring.add(a, ring.neg(b));
      if (!ok) {
        addgrp.passed = false;
        addgrp.witness = w;
      }
    }
    if (monoid.passed) {
      bool ok = ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c)) &&
                ring.mul(a, b) == ring.mul(b, a) && ring.mul(a, 1 % n) == a;
      if (!ok) {
        monoid.passed = false;
        monoid.witness = w;
      }
    }
    if (dist.passed) {
      bool ok = ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c)) &&
                ring.mul(ring.add(a, b), c) == ring.add(ring.mul(a, c), ring.mul(b, c));
      if (!ok) {
        dist.passed = false;
        dist.witness = w;
      }
    }
  };

  if (n <= 64) {
    for (Residue a = 0; a < n; ++a)
      for (Residue b = 0; b < n; ++b)
        for (Residue c = 0; c < n; ++c) test_triple(a, b, c);
  } else {
    SplitMix64 rng = budget.stream("ring.axioms");
    for (std::uint32_t t = 0; t < budget.samples; ++t)
      test_triple(rng.below(n), rng.below(n), rng.below(n));
  }

  CheckResult census{"ring.idempotent_census", true, ""};
  std::vector<Residue> idem = ring.idempotents();
  std::uint64_t expected = std::uint64_t(1) << ring.prime_powers().size();
  if (idem.size() != expected) {
    census.passed = false;
    census.witness = "found " + std::to_string(idem.size()) + " idempotents, expected " +
                     std::to_string(expected);
  } else {
    for (Residue e = 0; e < n; ++e) {
      bool is_idem = ring.mul(e, e) == e;
      bool listed = std::binary_search(idem.begin(), idem.end(), e);
      if (is_idem != listed) {
        census.passed = false;
        census.witness = "e=" + std::to_string(e) + (is_idem ? " missing from" : " wrongly in") +
                         " the census";
        break;
      }
    }
  }
  return {addgrp, monoid, dist, census};
}

std::vector<CheckResult> fi_axiom_checks(const FiContext& ctx, const SampleBudget& budget) {
  const std::size_t d = ctx.dim();
  const Coords delta = ctx.delta_coords();

  CheckResult unit{"fi.unit", true, ""};
  for (std::size_t k = 0; k < d; ++k) {
    Coords b = unit_coords(d, k);
    if (ctx.convolve_coords(delta, b) != b || ctx.convolve_coords(b, delta) != b) {
      unit.passed = false;
      unit.witness = "a=" + ctx.basis_label(k);
      break;
    }
  }

  // Associativity on basis triples is complete: convolution is trilinear in
  // its inputs, so equality on every basis triple extends linearly to all
  // elements. Products of basis elements are read off the structure table.
  CheckResult assoc{"fi.associativity_basis", true, ""};
  auto assoc_triple = [&](std::size_t i, std::size_t j, std::size_t k) {
    std::int32_t ij = ctx.basis_product(i, j);
    std::int32_t left = ij < 0 ? -1 : ctx.basis_product(static_cast<std::size_t>(ij), k);
    std::int32_t jk = ctx.basis_product(j, k);
    std::int32_t right = jk < 0 ? -1 : ctx.basis_product(i, static_cast<std::size_t>(jk));
    if (left != right) {
      assoc.passed = false;
      assoc.witness = "a=" + ctx.basis_label(i) + " b=" + ctx.basis_label(j) +
                      " c=" + ctx.basis_label(k);
      return false;
    }
    return true;
  };
  if (d * d * d <= (std::size_t(1) << 24)) {
    for (std::size_t i = 0; i < d && assoc.passed; ++i)
      for (std::size_t j = 0; j < d && assoc.passed; ++j)
        for (std::size_t k = 0; k < d; ++k)
          if (!assoc_triple(i, j, k)) break;
  } else {
    SplitMix64 rng = budget.stream("fi.associativity_basis");
    for (std::uint32_t t = 0; t < (1u << 20) && assoc.passed; ++t)
      assoc_triple(rng.below(static_cast<std::uint32_t>(d)),
                   rng.below(static_cast<std::uint32_t>(d)),
                   rng.below(static_cast<std::uint32_t>(d)));
  }

  CheckResult assoc_s{"fi.associativity_samples", true, ""};
  CheckResult dist_s{"fi.distributivity_samples", true, ""};
  {
    SplitMix64 rng = budget.stream("fi.associativity_samples");
    for (std::uint32_t t = 0; t < budget.samples && (assoc_s.passed || dist_s.passed); ++t) {
      Coords a = ctx.random_coords(rng);
      Coords b = ctx.random_coords(rng);
      Coords c = ctx.random_coords(rng);
      if (assoc_s.passed && ctx.convolve_coords(ctx.convolve_coords(a, b), c) !=
                                ctx.convolve_coords(a, ctx.convolve_coords(b, c))) {
        assoc_s.passed = false;
        assoc_s.witness = "a=" + coords_text(a) + " b=" + coords_text(b) + " c=" + coords_text(c);
      }
      if (dist_s.passed) {
        Coords ab = ctx.add_coords(a, b);
        bool ok = ctx.convolve_coords(ab, c) ==
                      ctx.add_coords(ctx.convolve_coords(a, c), ctx.convolve_coords(b, c)) &&
                  ctx.convolve_coords(c, ab) ==
                      ctx.add_coords(ctx.convolve_coords(c, a), ctx.convolve_coords(c, b));
        if (!ok) {
          dist_s.passed = false;
          dist_s.witness = "a=" + coords_text(a) + " b=" + coords_text(b) +
                           " c=" + coords_text(c);
        }
      }
    }
  }

  std::vector<std::vector<std::uint32_t>> subsets =
      subsets_of_classes(ctx, budget, "fi.subsets", 8);
  CheckResult inter{"fi.idempotent_intersection", true, ""};
  for (std::size_t x = 0; x < subsets.size() && inter.passed; ++x) {
    Coords ex = ctx.idempotent_coords(subsets[x]);
    for (std::size_t y = 0; y < subsets.size(); ++y) {
      Coords ey = ctx.idempotent_coords(subsets[y]);
      Coords want = ctx.idempotent_coords(intersect(subsets[x], subsets[y]));
      if (ctx.convolve_coords(ex, ey) != want) {
        inter.passed = false;
        inter.witness = "X=" + subset_text(ctx, subsets[x]) + " Y=" + subset_text(ctx, subsets[y]);
        break;
      }
    }
  }

  std::size_t classes = ctx.poset().class_count();
  CheckResult orth{"fi.idempotent_orthogonality", true, ""};
  for (std::uint32_t x = 0; x < classes && orth.passed; ++x) {
    Coords ex = ctx.idempotent_coords({x});
    for (std::uint32_t y = 0; y < classes; ++y) {
      Coords ey = ctx.idempotent_coords({y});
      Coords want = x == y ? ex : ctx.zero_coords();
      if (ctx.convolve_coords(ex, ey) != want) {
        orth.passed = false;
        orth.witness = "x=" + ctx.poset().class_labels()[x] + " y=" + ctx.poset().class_labels()[y];
        break;
      }
    }
  }

  // e_x a e_y = (block of a at (x,y)) — linear in a, so basis elements are
  // complete.
  CheckResult sandwich{"fi.sandwich_rule", true, ""};
  for (std::uint32_t x = 0; x < classes && sandwich.passed; ++x) {
    Coords ex = ctx.idempotent_coords({x});
    for (std::uint32_t y = 0; y < classes && sandwich.passed; ++y) {
      Coords ey = ctx.idempotent_coords({y});
      for (std::size_t k = 0; k < d; ++k) {
        Coords b = unit_coords(d, k);
        Coords lhs = ctx.convolve_coords(ctx.convolve_coords(ex, b), ey);
        if (lhs != ctx.restrict_coords(b, {x}, {y})) {
          sandwich.passed = false;
          sandwich.witness = "x=" + ctx.poset().class_labels()[x] +
                             " y=" + ctx.poset().class_labels()[y] + " a=" + ctx.basis_label(k);
          break;
        }
      }
    }
  }

  CheckResult diag{"fi.diagonal_subring", true, ""};
  if (!all_zero(ctx.split_coords(delta).second)) {
    diag.passed = false;
    diag.witness = "the unit has a strict part";
  }
  for (std::size_t i : ctx.diagonal_basis()) {
    if (!diag.passed) break;
    for (std::size_t j : ctx.diagonal_basis()) {
      std::int32_t k = ctx.basis_product(i, j);
      if (k >= 0 && !ctx.basis_is_diagonal(static_cast<std::size_t>(k))) {
        diag.passed = false;
        diag.witness = "a=" + ctx.basis_label(i) + " b=" + ctx.basis_label(j);
        break;
      }
    }
  }

  CheckResult strict{"fi.strict_ideal", true, ""};
  for (std::size_t i : ctx.strict_basis()) {
    if (!strict.passed) break;
    for (std::size_t j = 0; j < d; ++j) {
      std::int32_t l = ctx.basis_product(i, j);
      std::int32_t r = ctx.basis_product(j, i);
      if ((l >= 0 && ctx.basis_is_diagonal(static_cast<std::size_t>(l))) ||
          (r >= 0 && ctx.basis_is_diagonal(static_cast<std::size_t>(r)))) {
        strict.passed = false;
        strict.witness = "a=" + ctx.basis_label(i) + " b=" + ctx.basis_label(j);
        break;
      }
    }
  }

  CheckResult splitc{"fi.split_recombination", true, ""};
  {
    SplitMix64 rng = budget.stream("fi.split_recombination");
    for (std::uint32_t t = 0; t < std::min<std::uint32_t>(budget.samples, 200); ++t) {
      Coords a = ctx.random_coords(rng);
      auto [dd, zz] = ctx.split_coords(a);
      bool ok = ctx.add_coords(dd, zz) == a && all_zero(ctx.split_coords(dd).second) &&
                all_zero(ctx.split_coords(zz).first);
      if (!ok) {
        splitc.passed = false;
        splitc.witness = "a=" + coords_text(a);
        break;
      }
    }
  }

  return {unit, assoc, assoc_s, dist_s, inter, orth, sandwich, diag, strict, splitc};
}

std::vector<CheckResult> restriction_calculus_checks(const FiContext& ctx,
                                                     const SampleBudget& budget) {
  std::vector<std::vector<std::uint32_t>> subsets =
      subsets_of_classes(ctx, budget, "restriction_calculus.subsets", 6);
  std::vector<std::uint32_t> full;
  for (std::uint32_t c = 0; c < ctx.poset().class_count(); ++c) full.push_back(c);

  std::uint32_t nser = std::min<std::uint32_t>(budget.samples, 100);
  SplitMix64 rng = budget.stream("restriction_calculus.series");
  std::vector<Coords> series;
  for (std::uint32_t t = 0; t < std::max(2u, nser); ++t) series.push_back(ctx.random_coords(rng));

  CheckResult additive{"restriction.additive", true, ""};
  CheckResult nesting{"restriction.nesting", true, ""};
  CheckResult product{"restriction.product_split", true, ""};

  bool pairs_exhaustive = subsets.size() * subsets.size() <= 4096;
  SplitMix64 prng = budget.stream("restriction_calculus.pairs");
  std::size_t pair_rounds = pairs_exhaustive ? subsets.size() * subsets.size() : 4096;

  for (std::size_t t = 0; t + 1 < series.size(); t += 2) {
    if (!additive.passed && !product.passed) break;
    const Coords& a = series[t];
    const Coords& b = series[t + 1];
    Coords apb = ctx.add_coords(a, b);
    Coords ab = ctx.convolve_coords(a, b);
    for (std::size_t r = 0; r < pair_rounds; ++r) {
      std::size_t xi = pairs_exhaustive ? r / subsets.size()
                                        : prng.below(static_cast<std::uint32_t>(subsets.size()));
      std::size_t yi = pairs_exhaustive ? r % subsets.size()
                                        : prng.below(static_cast<std::uint32_t>(subsets.size()));
      const auto& X = subsets[xi];
      const auto& Y = subsets[yi];
      if (additive.passed &&
          ctx.restrict_coords(apb, X, Y) !=
              ctx.add_coords(ctx.restrict_coords(a, X, Y), ctx.restrict_coords(b, X, Y))) {
        additive.passed = false;
        additive.witness = "X=" + subset_text(ctx, X) + " Y=" + subset_text(ctx, Y) +
                           " a=" + coords_text(a) + " b=" + coords_text(b);
      }
      if (product.passed &&
          ctx.restrict_coords(ab, X, Y) !=
              ctx.convolve_coords(ctx.restrict_coords(a, X, full),
                                  ctx.restrict_coords(b, full, Y))) {
        product.passed = false;
        product.witness = "X=" + subset_text(ctx, X) + " Y=" + subset_text(ctx, Y) +
                          " a=" + coords_text(a) + " b=" + coords_text(b);
      }
      if (!additive.passed && !product.passed) break;
    }
  }

  bool quads_exhaustive =
      subsets.size() <= 16;  // 16^4 = 65536 four-tuples at most when exhaustive
  SplitMix64 qrng = budget.stream("restriction_calculus.quads");
  std::size_t quad_rounds =
      quads_exhaustive ? subsets.size() * subsets.size() * subsets.size() * subsets.size() : 65536;
  for (const Coords& a : series) {
    if (!nesting.passed) break;
    for (std::size_t r = 0; r < quad_rounds; ++r) {
      std::size_t xi, yi, ui, vi;
      if (quads_exhaustive) {
        std::size_t m = subsets.size();
        xi = r / (m * m * m);
        yi = (r / (m * m)) % m;
        ui = (r / m) % m;
        vi = r % m;
      } else {
        xi = qrng.below(static_cast<std::uint32_t>(subsets.size()));
        yi = qrng.below(static_cast<std::uint32_t>(subsets.size()));
        ui = qrng.below(static_cast<std::uint32_t>(subsets.size()));
        vi = qrng.below(static_cast<std::uint32_t>(subsets.size()));
      }
      Coords lhs = ctx.restrict_coords(ctx.restrict_coords(a, subsets[xi], subsets[yi]),
                                       subsets[ui], subsets[vi]);
      Coords rhs = ctx.restrict_coords(a, intersect(subsets[xi], subsets[ui]),
                                       intersect(subsets[yi], subsets[vi]));
      if (lhs != rhs) {
        nesting.passed = false;
        nesting.witness = "X=" + subset_text(ctx, subsets[xi]) +
                          " Y=" + subset_text(ctx, subsets[yi]) +
                          " U=" + subset_text(ctx, subsets[ui]) +
                          " V=" + subset_text(ctx, subsets[vi]) + " a=" + coords_text(a);
        break;
      }
    }
  }

  return {additive, nesting, product};
}

// ---------------------------------------------------------------------------
// Suite registry.
// ---------------------------------------------------------------------------

namespace {

struct SuiteInfo {
  const char* name;
  const char* certifies;
};

const SuiteInfo kSuites[] = {
    {"ring-axioms",
     "commutative ring laws of the coefficient ring Z/n (exhaustive for n <= 64) and its "
     "idempotent census"},
    {"fi-axioms",
     "the incidence ring is an associative unital ring; subset idempotents multiply by "
     "intersection; sandwiching by class idempotents picks out single blocks; the diagonal "
     "subring and the strict ideal split every element"},
    {"restriction-calculus",
     "two-sided block restriction is additive, nests by subset intersection, and splits "
     "products into a source-restricted times a target-restricted factor"},
    {"jordan",
     "unit preservation, the square law phi(rr)=phi(r)phi(r), symmetrized products "
     "phi(rs+sr)=phi(r)phi(s)+phi(s)phi(r), triple products phi(rsr)=phi(r)phi(s)phi(r), and "
     "the polarized triple law"},
    {"classify",
     "informational verdicts: is the map multiplicative, is it anti-multiplicative (never "
     "affects the exit code)"},
    {"near-sum",
     "the component maps extracted on the strict ideal extend the diagonal part of the map to "
     "a near-sum: diagonal agreement, strict-part sum, mutual annihilation, and the "
     "multiplicativity equivalences"},
    {"sum",
     "per-class central idempotents of the class-block image rings split the map into a "
     "multiplicative plus an anti-multiplicative summand (needs every class to have more than "
     "one element and enumerable block images)"},
    {"idempotent-commutation",
     "phi(e)phi(r) = phi(r)phi(e) = phi(er) for subset idempotents e and ring elements r "
     "commuting with e"},
    {"sandwich-vanishing",
     "sandwiches of the components between class-idempotent images match the sandwiches of "
     "the map on aligned sides and vanish on misaligned sides; single blocks are recovered "
     "from their sandwiches"},
    {"restriction-sandwich",
     "multiplying a component by a subset-idempotent image on either side sees only the "
     "correspondingly restricted argument; the anti-multiplicative component sees the "
     "opposite side"},
    {"prime-multiplicative",
     "both strict-ideal block extractions are multiplicative as self-maps of the strict "
     "ideal"},
    {"mixed-product",
     "the first component turns diagonal-by-strict products into map-times-component "
     "products on the matching side"},
    {"restriction-compat", "the strict-ideal block extractions commute with two-sided restriction"},
};

}  // namespace

const std::vector<std::string>& all_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const SuiteInfo& s : kSuites) v.push_back(s.name);
    return v;
  }();
  return names;
}

std::string list_suites_text() {
  std::string out;
  for (const SuiteInfo& s : kSuites) {
    out += s.name;
    out += ": ";
    out += s.certifies;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instance runner.
// ---------------------------------------------------------------------------

namespace {

void emit_map_lines(ReportBuilder& rb, const FiContext& src, const std::string& label,
                    const LinearMap& m) {
  for (std::size_t k = 0; k < src.dim(); ++k)
    rb.header("MAP", label + " " + src.basis_label(k) + " -> " + coords_text(m.column(k)));
}

bool class_blocks_enumerable(const FiContext& ctx, std::uint64_t cap) {
  std::uint64_t n = ctx.ring().modulus();
  for (std::uint32_t c = 0; c < ctx.poset().class_count(); ++c) {
    std::size_t s = ctx.poset().class_size(c);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < s * s; ++i) {
      if (count > cap / n) return false;
      count *= n;
    }
  }
  return true;
}

}  // namespace

RunOutcome run_instance(const InstanceConfig& cfg0, const RunOptions& opt) {
  InstanceConfig cfg = cfg0;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.cap) cfg.enum_cap = *opt.cap;
  if (opt.samples) cfg.samples = *opt.samples;
  if (opt.report_path) cfg.report_path = *opt.report_path;

  ReportBuilder rb;
  int code = 0;
  try {
    const std::vector<std::string>& all = all_suite_names();
    std::vector<std::string> suites;
    bool explicit_suites = !cfg.checks.empty() && !opt.decompose;
    if (opt.decompose) {
      suites = {"jordan", "classify", "near-sum", "sum"};
    } else if (cfg.checks.empty()) {
      suites = all;
    } else {
      for (const std::string& name : cfg.checks)
        if (std::find(all.begin(), all.end(), name) == all.end())
          throw ParseError("unknown suite '" + name + "'; the suites command lists them");
      for (const std::string& name : all)
        if (std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end())
          suites.push_back(name);
    }

    FiContextPtr ctx = build_context(cfg);
    SampleBudget budget;
    budget.enum_cap = cfg.enum_cap;
    budget.samples = cfg.samples;
    budget.seed = cfg.seed;

    rb.header("MODULUS", std::to_string(cfg.modulus));
    rb.header("ELEMENTS", join(cfg.elements));
    {
      std::vector<std::string> cls;
      for (std::uint32_t c = 0; c < ctx->poset().class_count(); ++c)
        cls.push_back(ctx->poset().class_labels()[c] + "[" +
                      std::to_string(ctx->poset().class_size(c)) + "]");
      rb.header("CLASSES", join(cls));
      std::vector<std::string> rel;
      for (std::uint32_t i = 0; i < ctx->poset().class_count(); ++i)
        for (std::uint32_t j = 0; j < ctx->poset().class_count(); ++j)
          if (i != j && ctx->poset().leq(i, j))
            rel.push_back(ctx->poset().class_labels()[i] + "<" + ctx->poset().class_labels()[j]);
      rb.header("ORDER", rel.empty() ? "antichain" : join(rel));
    }
    rb.header("MAP", cfg.map_spec);
    rb.header("MODE", opt.decompose ? "decompose" : "verify");
    rb.header("SEED", std::to_string(cfg.seed));
    rb.header("CAP", std::to_string(cfg.enum_cap));
    rb.header("SAMPLES", std::to_string(cfg.samples));
    rb.header("SUITES", join(suites));

    AdditiveMap phi = build_map(ctx, cfg, budget);
    LinearMap philin = phi.as_linear();
    std::optional<FzSplit> split;
    auto need_split = [&]() -> const FzSplit& {
      if (!split) split = psi_theta_on_fz(phi);
      return *split;
    };

    for (const std::string& suite : suites) {
      try {
        if (suite == "ring-axioms") {
          rb.add_all(ring_axiom_checks(ctx->ring(), budget));
        } else if (suite == "fi-axioms") {
          rb.add_all(fi_axiom_checks(*ctx, budget));
        } else if (suite == "restriction-calculus") {
          rb.add_all(restriction_calculus_checks(*ctx, budget));
        } else if (suite == "jordan") {
          rb.add_all(jordan_law_checks(philin, budget));
        } else if (suite == "classify") {
          CheckResult m = multiplicative_check(philin);
          CheckResult a = antimultiplicative_check(philin);
          rb.verdict("classify.multiplicative", m.passed ? "yes" : "no (" + m.witness + ")");
          rb.verdict("classify.antimultiplicative", a.passed ? "yes" : "no (" + a.witness + ")");
        } else if (suite == "near-sum") {
          NearSumReport nr = near_sum_decompose(phi, budget);
          rb.header("NEAR_SUM_MODE", nr.mode);
          rb.add_all(nr.checks);
          for (const VerdictLine& v : nr.verdicts) rb.verdict(v);
          if (opt.decompose) {
            emit_map_lines(rb, *ctx, "psi~", nr.psi_tilde);
            emit_map_lines(rb, *ctx, "theta~", nr.theta_tilde);
          }
        } else if (suite == "sum") {
          ClassSizeKind kind = check_class_size_hypothesis(ctx->poset());
          if (kind != ClassSizeKind::AllNontrivialFinite) {
            std::string why =
                std::string("the sum decomposition requires every class to contain more than "
                            "one element; this order's classes are ") +
                to_string(kind);
            if (explicit_suites) throw HypothesisViolated(why);
            rb.note("sum skipped: " + why);
          } else if (!class_blocks_enumerable(*ctx, budget.enum_cap)) {
            std::string why = "a diagonal class block exceeds the enumeration cap of " +
                              std::to_string(budget.enum_cap) + " elements";
            if (explicit_suites) throw TooLarge(why);
            rb.note("sum skipped: " + why);
          } else {
            for (std::uint32_t c = 0; c < ctx->poset().class_count(); ++c) {
              ImageRingReport ir = dc_image_ring_check(phi, c, budget);
              rb.header("IMAGE_RING", "class=" + ctx->poset().class_labels()[c] +
                                          " size=" + std::to_string(ir.size));
              rb.add_all(ir.checks);
            }
            SumReport sr = full_sum_decompose(phi, budget);
            rb.add_all(sr.checks);
            for (const VerdictLine& v : sr.verdicts) rb.verdict(v);
            if (sr.decomposed) {
              for (const IdempotentWitness& w : sr.idempotents)
                rb.header("IDEMPOTENT", "class=" + w.class_label + " f=" + coords_text(w.f) +
                                            " g=" + coords_text(w.g));
              if (opt.decompose) {
                emit_map_lines(rb, *ctx, "psi", sr.psi);
                emit_map_lines(rb, *ctx, "theta", sr.theta);
              }
            }
          }
        } else if (suite == "idempotent-commutation") {
          rb.add_all(commuting_idempotent_checks(phi, budget));
        } else if (suite == "sandwich-vanishing") {
          rb.add_all(sandwich_identity_checks(phi, need_split(), budget));
        } else if (suite == "restriction-sandwich") {
          rb.add_all(restriction_identity_checks(phi, need_split(), budget));
        } else if (suite == "prime-multiplicative") {
          rb.add_all(prime_map_multiplicativity_checks(phi));
        } else if (suite == "mixed-product") {
          rb.add_all(mixed_product_checks(phi, need_split()));
        } else if (suite == "restriction-compat") {
          rb.add_all(prime_restriction_checks(phi, budget));
        }
      } catch (const JordanCheckFailed& e) {
        rb.add(CheckResult{suite + ".block_extraction", false, e.what()});
      }
    }
    code = rb.all_passed() ? 0 : 1;
  } catch (const HypothesisViolated& e) {
    rb.abort(std::string("hypothesis: ") + e.what());
    code = 3;
  } catch (const TooLarge& e) {
    rb.abort(std::string("cap: ") + e.what());
    code = 3;
  } catch (const ParseError& e) {
    rb.abort(std::string("parse: ") + e.what());
    code = 2;
  } catch (const BadLabel& e) {
    rb.abort(std::string("label: ") + e.what());
    code = 2;
  } catch (const NotInvertible& e) {
    rb.abort(std::string("construction: ") + e.what());
    code = 2;
  } catch (const PreconditionFailed& e) {
    rb.abort(std::string("construction: ") + e.what());
    code = 2;
  } catch (const ModulusMismatch& e) {
    rb.abort(std::string("construction: ") + e.what());
    code = 2;
  } catch (const ContextMismatch& e) {
    rb.abort(std::string("construction: ") + e.what());
    code = 2;
  } catch (const std::invalid_argument& e) {
    rb.abort(std::string("construction: ") + e.what());
    code = 2;
  }

  RunOutcome out{code, rb.render()};
  if (!cfg.report_path.empty()) {
    std::ofstream f(cfg.report_path, std::ios::binary);
    if (!f) {
      out.exit_code = 2;
      out.report += "RESULT ERROR io: cannot write report file '" + cfg.report_path + "'\n";
    } else {
      f << out.report;
    }
  }
  return out;
}

RunOutcome run_config_file(const std::string& path, const RunOptions& opt) {
  InstanceConfig cfg;
  try {
    cfg = load_config_file(path);
  } catch (const ParseError& e) {
    ReportBuilder rb;
    rb.abort(std::string("parse: ") + e.what());
    return RunOutcome{2, rb.render()};
  }
  return run_instance(cfg, opt);
}

}  // namespace fijord
