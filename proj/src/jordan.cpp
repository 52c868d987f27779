#include "fijord/jordan.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

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

Coords mat_col(const MatZn& m, std::size_t k) {
  Coords out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m.at(r, k);
  return out;
}

/// phi(b_i * b_j) read off the structure table (exact by additivity).
Coords map_of_product(const LinearMap& m, std::size_t i, std::size_t j) {
  std::int32_t k = m.source()->basis_product(i, j);
  if (k < 0) return Coords(m.target()->dim(), 0);
  return m.column(static_cast<std::size_t>(k));
}

std::string pair_witness(const FiContext& src, std::size_t i, std::size_t j, const Coords& lhs,
                         const Coords& rhs) {
  return "a=" + src.basis_label(i) + " b=" + src.basis_label(j) + " lhs=" + coords_text(lhs) +
         " rhs=" + coords_text(rhs);
}

bool hom_on_pairs(const LinearMap& m, const std::vector<std::size_t>& left,
                  const std::vector<std::size_t>& right, std::string& witness) {
  const TargetAlgebra& A = *m.target();
  for (std::size_t i : left) {
    Coords mi = m.column(i);
    for (std::size_t j : right) {
      Coords lhs = map_of_product(m, i, j);
      Coords rhs = A.mul(mi, m.column(j));
      if (lhs != rhs) {
        witness = pair_witness(*m.source(), i, j, lhs, rhs);
        return false;
      }
    }
  }
  return true;
}

bool antihom_on_pairs(const LinearMap& m, const std::vector<std::size_t>& left,
                      const std::vector<std::size_t>& right, std::string& witness) {
  const TargetAlgebra& A = *m.target();
  for (std::size_t i : left) {
    Coords mi = m.column(i);
    for (std::size_t j : right) {
      Coords lhs = map_of_product(m, i, j);
      Coords rhs = A.mul(m.column(j), mi);
      if (lhs != rhs) {
        witness = pair_witness(*m.source(), i, j, lhs, rhs);
        return false;
      }
    }
  }
  return true;
}

std::vector<std::size_t> all_basis_indices(const FiContext& ctx) {
  std::vector<std::size_t> out(ctx.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

std::vector<std::size_t> class_diag_basis(const FiContext& ctx, std::uint32_t c) {
  std::vector<std::size_t> out;
  for (std::size_t k : ctx.diagonal_basis())
    if (ctx.pair_classes(ctx.basis().at(k).pair).first == c) out.push_back(k);
  return out;
}

std::vector<std::uint32_t> all_classes(const FiContext& ctx) {
  std::vector<std::uint32_t> out(ctx.poset().class_count());
  for (std::uint32_t c = 0; c < out.size(); ++c) out[c] = c;
  return out;
}

/// Class subsets quantified over by the idempotent and restriction checks:
/// every subset when there are at most 12 classes, otherwise a canonical
/// family (empty, full, singletons, complements) plus seeded random ones.
std::vector<std::vector<std::uint32_t>> class_subsets(const FiContext& ctx,
                                                      const SampleBudget& budget,
                                                      std::string_view stream_name) {
  std::uint32_t c = static_cast<std::uint32_t>(ctx.poset().class_count());
  std::vector<std::vector<std::uint32_t>> out;
  if (c <= 12) {
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

Coords random_strict(const FiContext& ctx, SplitMix64& rng) {
  return ctx.split_coords(ctx.random_coords(rng)).second;
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
// Jordan laws.
// ---------------------------------------------------------------------------

CheckResult unit_preservation_check(const LinearMap& phi) {
  CheckResult res{"jordan.unit_preserved", true, ""};
  Coords lhs = phi.apply(phi.source()->delta_coords());
  if (lhs != phi.target()->one()) {
    res.passed = false;
    res.witness = "phi(1)=" + coords_text(lhs) + " identity=" + coords_text(phi.target()->one());
  }
  return res;
}

CheckResult square_law_check(const LinearMap& phi, const SampleBudget& budget) {
  CheckResult res{"jordan.squares", true, ""};
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  auto test = [&](const Coords& r) {
    Coords lhs = phi.apply(src.convolve_coords(r, r));
    Coords y = phi.apply(r);
    Coords rhs = A.mul(y, y);
    if (lhs != rhs) {
      res.passed = false;
      res.witness =
          "r=" + coords_text(r) + " phi(rr)=" + coords_text(lhs) + " phi(r)^2=" + coords_text(rhs);
      return false;
    }
    return true;
  };
  bool enumerable = true;
  try {
    element_count(src, budget.enum_cap);
  } catch (const TooLarge&) {
    enumerable = false;
  }
  if (enumerable) {
    ElementEnumerator en(phi.source(), budget.enum_cap);
    Coords r;
    while (en.next(r))
      if (!test(r)) return res;
  } else {
    SplitMix64 rng = budget.stream("jordan.squares");
    for (std::uint32_t t = 0; t < budget.samples; ++t)
      if (!test(src.random_coords(rng))) return res;
  }
  return res;
}

CheckResult symmetrized_product_check(const LinearMap& phi) {
  CheckResult res{"jordan.symmetrized_products", true, ""};
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  std::size_t d = src.dim();
  for (std::size_t i = 0; i < d; ++i) {
    Coords pi = phi.column(i);
    for (std::size_t j = 0; j < d; ++j) {
      Coords pj = phi.column(j);
      Coords lhs = A.context()->add_coords(map_of_product(phi, i, j), map_of_product(phi, j, i));
      Coords rhs = A.context()->add_coords(A.mul(pi, pj), A.mul(pj, pi));
      if (lhs != rhs) {
        res.passed = false;
        res.witness = pair_witness(src, i, j, lhs, rhs);
        return res;
      }
    }
  }
  return res;
}

CheckResult triple_product_check(const LinearMap& phi, const SampleBudget& budget) {
  CheckResult res{"jordan.triple_products", true, ""};
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  SplitMix64 rng = budget.stream("jordan.triple_products");
  for (std::uint32_t t = 0; t < budget.samples; ++t) {
    Coords r = src.random_coords(rng);
    Coords s = src.random_coords(rng);
    Coords lhs = phi.apply(src.convolve_coords(src.convolve_coords(r, s), r));
    Coords pr = phi.apply(r);
    Coords rhs = A.mul(A.mul(pr, phi.apply(s)), pr);
    if (lhs != rhs) {
      res.passed = false;
      res.witness = "r=" + coords_text(r) + " s=" + coords_text(s) + " phi(rsr)=" +
                    coords_text(lhs) + " phi(r)phi(s)phi(r)=" + coords_text(rhs);
      return res;
    }
  }
  return res;
}

CheckResult polarized_triple_check(const LinearMap& phi, const SampleBudget& budget) {
  CheckResult res{"jordan.polarized_triples", true, ""};
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  SplitMix64 rng = budget.stream("jordan.polarized_triples");
  for (std::uint32_t t = 0; t < budget.samples; ++t) {
    Coords r = src.random_coords(rng);
    Coords s = src.random_coords(rng);
    Coords u = src.random_coords(rng);
    Coords rst = src.convolve_coords(src.convolve_coords(r, s), u);
    Coords tsr = src.convolve_coords(src.convolve_coords(u, s), r);
    Coords lhs = phi.apply(src.add_coords(rst, tsr));
    Coords pr = phi.apply(r), ps = phi.apply(s), pu = phi.apply(u);
    Coords rhs = A.context()->add_coords(A.mul(A.mul(pr, ps), pu), A.mul(A.mul(pu, ps), pr));
    if (lhs != rhs) {
      res.passed = false;
      res.witness = "r=" + coords_text(r) + " s=" + coords_text(s) + " t=" + coords_text(u);
      return res;
    }
  }
  return res;
}

std::vector<CheckResult> jordan_law_checks(const LinearMap& phi, const SampleBudget& budget) {
  std::vector<CheckResult> out;
  out.push_back(unit_preservation_check(phi));
  out.push_back(square_law_check(phi, budget));
  out.push_back(symmetrized_product_check(phi));
  out.push_back(triple_product_check(phi, budget));
  out.push_back(polarized_triple_check(phi, budget));
  return out;
}

bool is_jordan(const LinearMap& phi, const SampleBudget& budget) {
  for (const CheckResult& c : jordan_law_checks(phi, budget))
    if (!c.passed) return false;
  return true;
}

CheckResult multiplicative_check(const LinearMap& phi) {
  CheckResult res{"classify.multiplicative", true, ""};
  std::vector<std::size_t> all = all_basis_indices(*phi.source());
  res.passed = hom_on_pairs(phi, all, all, res.witness);
  return res;
}

CheckResult antimultiplicative_check(const LinearMap& phi) {
  CheckResult res{"classify.antimultiplicative", true, ""};
  std::vector<std::size_t> all = all_basis_indices(*phi.source());
  res.passed = antihom_on_pairs(phi, all, all, res.witness);
  return res;
}

// ---------------------------------------------------------------------------
// Block extractions.
// ---------------------------------------------------------------------------

PrimePair prime_parts(const AdditiveMap& phi, const Coords& strict_coords) {
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  auto split = src.split_coords(strict_coords);
  if (!all_zero(split.first))
    throw PreconditionFailed("block extraction expects an element of the strict ideal");

  PrimePair out{src.zero_coords(), src.zero_coords()};
  Coords image = phi.apply(strict_coords);

  std::size_t classes = src.poset().class_count();
  std::vector<Coords> phi_e(classes);
  for (std::uint32_t c = 0; c < classes; ++c)
    phi_e[c] = phi.apply(src.idempotent_coords({c}));

  auto pull_block = [&](const Coords& sandwich, std::uint32_t p, Coords& into) {
    Coords gamma = phi.apply_inv(sandwich);
    for (std::size_t k = 0; k < src.dim(); ++k) {
      if (gamma[k] == 0) continue;
      if (src.basis().at(k).pair != p)
        throw JordanCheckFailed(
            "sandwich pullback is not supported on a single block: expected block of pair " +
            std::to_string(p) + ", found a nonzero coordinate at " + src.basis_label(k));
      into[k] = gamma[k];
    }
  };

  for (std::size_t p = 0; p < src.pair_count(); ++p) {
    if (src.pair_is_diagonal(p)) continue;
    auto [cx, cy] = src.pair_classes(p);
    pull_block(A.mul(A.mul(phi_e[cx], image), phi_e[cy]), static_cast<std::uint32_t>(p),
               out.first);
    pull_block(A.mul(A.mul(phi_e[cy], image), phi_e[cx]), static_cast<std::uint32_t>(p),
               out.second);
  }

  if (src.add_coords(out.first, out.second) != strict_coords)
    throw JordanCheckFailed("the two block extractions do not sum back to the input element");
  return out;
}

FzSplit psi_theta_on_fz(const AdditiveMap& phi) {
  FiContextPtr src = phi.source();
  TargetPtr dst = phi.target();
  FzSplit out{LinearMap::zero(src, dst), LinearMap::zero(src, dst), {}};

  for (std::size_t k : src->strict_basis()) {
    PrimePair pp = prime_parts(phi, unit_coords(src->dim(), k));
    out.psi.set_column(k, phi.apply(pp.first));
    out.theta.set_column(k, phi.apply(pp.second));
  }

  CheckResult sum{"fz_split.strict_sum", true, ""};
  for (std::size_t k : src->strict_basis()) {
    Coords lhs = dst->context()->add_coords(out.psi.column(k), out.theta.column(k));
    Coords rhs = mat_col(phi.matrix(), k);
    if (lhs != rhs) {
      sum.passed = false;
      sum.witness = "a=" + src->basis_label(k) + " psi(a)+theta(a)=" + coords_text(lhs) +
                    " phi(a)=" + coords_text(rhs);
      break;
    }
  }
  out.checks.push_back(sum);

  CheckResult hom{"fz_split.psi_multiplicative", true, ""};
  hom.passed = hom_on_pairs(out.psi, src->strict_basis(), src->strict_basis(), hom.witness);
  out.checks.push_back(hom);

  CheckResult anti{"fz_split.theta_antimultiplicative", true, ""};
  anti.passed =
      antihom_on_pairs(out.theta, src->strict_basis(), src->strict_basis(), anti.witness);
  out.checks.push_back(anti);
  return out;
}

// ---------------------------------------------------------------------------
// Near-sum decomposition.
// ---------------------------------------------------------------------------

bool NearSumReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

NearSumReport near_sum_decompose(const AdditiveMap& phi, const SampleBudget& budget) {
  FiContextPtr src = phi.source();
  TargetPtr dst = phi.target();
  const TargetAlgebra& A = *dst;
  FzSplit split = psi_theta_on_fz(phi);

  LinearMap phi_d = LinearMap::zero(src, dst);
  for (std::size_t k : src->diagonal_basis()) phi_d.set_column(k, mat_col(phi.matrix(), k));

  NearSumReport rep{src->strict_basis().empty() ? "diagonal_only" : "near_sum",
                    phi_d.plus(split.psi),
                    phi_d.plus(split.theta),
                    {},
                    {}};
  rep.checks = split.checks;

  CheckResult agree{"near_sum.diagonal_agreement", true, ""};
  for (std::size_t k : src->diagonal_basis()) {
    Coords want = mat_col(phi.matrix(), k);
    if (rep.psi_tilde.column(k) != want || rep.theta_tilde.column(k) != want) {
      agree.passed = false;
      agree.witness = "a=" + src->basis_label(k);
      break;
    }
  }
  rep.checks.push_back(agree);

  CheckResult strict_sum{"near_sum.strict_sum", true, ""};
  for (std::size_t k : src->strict_basis()) {
    Coords lhs = A.context()->add_coords(rep.psi_tilde.column(k), rep.theta_tilde.column(k));
    Coords want = mat_col(phi.matrix(), k);
    if (lhs != want) {
      strict_sum.passed = false;
      strict_sum.witness = "a=" + src->basis_label(k) + " psi~(a)+theta~(a)=" + coords_text(lhs) +
                           " phi(a)=" + coords_text(want);
      break;
    }
  }
  rep.checks.push_back(strict_sum);

  CheckResult annih{"near_sum.mutual_annihilation", true, ""};
  for (std::size_t i : src->strict_basis()) {
    if (!annih.passed) break;
    Coords pi = rep.psi_tilde.column(i);
    for (std::size_t j : src->strict_basis()) {
      Coords tj = rep.theta_tilde.column(j);
      if (!all_zero(A.mul(pi, tj)) || !all_zero(A.mul(tj, pi))) {
        annih.passed = false;
        annih.witness = "r=" + src->basis_label(i) + " s=" + src->basis_label(j);
        break;
      }
    }
  }
  rep.checks.push_back(annih);

  CheckResult annih_s{"near_sum.mutual_annihilation_samples", true, ""};
  {
    SplitMix64 rng = budget.stream("near_sum.mutual_annihilation_samples");
    std::uint32_t rounds = budget.samples;
    for (std::uint32_t t = 0; t < rounds; ++t) {
      Coords r = random_strict(*src, rng);
      Coords s = random_strict(*src, rng);
      Coords pr = rep.psi_tilde.apply(r);
      Coords ts = rep.theta_tilde.apply(s);
      if (!all_zero(A.mul(pr, ts)) || !all_zero(A.mul(ts, pr))) {
        annih_s.passed = false;
        annih_s.witness = "r=" + coords_text(r) + " s=" + coords_text(s);
        break;
      }
    }
  }
  rep.checks.push_back(annih_s);

  std::vector<std::size_t> all = all_basis_indices(*src);
  std::string w_psi, w_theta, w_dh, w_da;
  bool psi_hom = hom_on_pairs(rep.psi_tilde, all, all, w_psi);
  bool theta_anti = antihom_on_pairs(rep.theta_tilde, all, all, w_theta);
  LinearMap philin = phi.as_linear();
  bool diag_hom = hom_on_pairs(philin, src->diagonal_basis(), src->diagonal_basis(), w_dh);
  bool diag_anti = antihom_on_pairs(philin, src->diagonal_basis(), src->diagonal_basis(), w_da);

  CheckResult iff_hom{"near_sum.multiplicative_iff_diagonal", psi_hom == diag_hom, ""};
  if (!iff_hom.passed)
    iff_hom.witness = std::string("psi~ multiplicative=") + (psi_hom ? "yes" : "no") +
                      " but diagonal restriction multiplicative=" + (diag_hom ? "yes" : "no");
  rep.checks.push_back(iff_hom);

  CheckResult iff_anti{"near_sum.antimultiplicative_iff_diagonal", theta_anti == diag_anti, ""};
  if (!iff_anti.passed)
    iff_anti.witness = std::string("theta~ anti-multiplicative=") + (theta_anti ? "yes" : "no") +
                       " but diagonal restriction anti-multiplicative=" +
                       (diag_anti ? "yes" : "no");
  rep.checks.push_back(iff_anti);

  rep.verdicts.push_back(
      {"near_sum.psi_tilde_multiplicative", psi_hom ? "yes" : "no (" + w_psi + ")"});
  rep.verdicts.push_back(
      {"near_sum.theta_tilde_antimultiplicative", theta_anti ? "yes" : "no (" + w_theta + ")"});
  std::string diag_kind = diag_hom && diag_anti ? "multiplicative and anti-multiplicative"
                          : diag_hom            ? "multiplicative"
                          : diag_anti           ? "anti-multiplicative"
                                                : "neither multiplicative nor anti-multiplicative";
  rep.verdicts.push_back({"near_sum.diagonal_restriction", diag_kind});
  return rep;
}

// ---------------------------------------------------------------------------
// Diagonal-block image rings, local and full sums.
// ---------------------------------------------------------------------------

namespace {

/// Sorted list of the images phi(a) over all elements a of one class's
/// diagonal block. Throws TooLarge past the enumeration cap.
std::vector<Coords> block_image_sorted(const AdditiveMap& phi, std::uint32_t class_index,
                                       std::uint64_t cap, std::vector<std::size_t>* positions_out) {
  const FiContext& src = *phi.source();
  std::vector<std::size_t> positions = class_diag_basis(src, class_index);
  std::uint64_t m = src.ring().modulus();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (count > cap / m)
      throw TooLarge("diagonal block of class " +
                     src.poset().class_labels()[class_index] + " exceeds the enumeration cap of " +
                     std::to_string(cap) + " elements");
    count *= m;
  }
  std::vector<Coords> images;
  images.reserve(static_cast<std::size_t>(count));
  Coords a = src.zero_coords();
  std::vector<Residue> digits(positions.size(), 0);
  for (std::uint64_t t = 0;; ++t) {
    images.push_back(phi.apply(a));
    if (t + 1 == count) break;
    for (std::size_t i = 0;; ++i) {
      digits[i] = (digits[i] + 1) % static_cast<Residue>(m);
      a[positions[i]] = digits[i];
      if (digits[i] != 0) break;
    }
  }
  std::sort(images.begin(), images.end());
  if (positions_out) *positions_out = std::move(positions);
  return images;
}

bool member(const std::vector<Coords>& sorted, const Coords& v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

ImageRingReport dc_image_ring_check(const AdditiveMap& phi, std::uint32_t class_index,
                                    const SampleBudget& budget) {
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  const std::string label = src.poset().class_labels()[class_index];
  std::vector<std::size_t> positions;
  std::vector<Coords> images = block_image_sorted(phi, class_index, budget.enum_cap, &positions);

  ImageRingReport rep;
  rep.size = images.size();

  CheckResult closed{"diag_image.closed[class=" + label + "]", true, ""};
  const std::uint64_t pair_cap = std::uint64_t(1) << 21;
  std::uint64_t pair_count = static_cast<std::uint64_t>(images.size()) * images.size();
  if (pair_count <= pair_cap) {
    for (const Coords& a : images) {
      if (!closed.passed) break;
      for (const Coords& b : images) {
        if (!member(images, A.mul(a, b))) {
          closed.passed = false;
          closed.witness = "a=" + coords_text(a) + " b=" + coords_text(b) + " ab not in the image";
          break;
        }
      }
    }
  } else {
    // Bilinearity: products of the spanning images generate every product,
    // and the image is closed under addition, so spanning pairs suffice.
    for (std::size_t p : positions) {
      if (!closed.passed) break;
      Coords a = phi.apply(unit_coords(src.dim(), p));
      for (std::size_t q : positions) {
        Coords b = phi.apply(unit_coords(src.dim(), q));
        if (!member(images, A.mul(a, b))) {
          closed.passed = false;
          closed.witness = "a=phi(" + src.basis_label(p) + ") b=phi(" + src.basis_label(q) +
                           ") ab not in the image";
          break;
        }
      }
    }
  }
  rep.checks.push_back(closed);

  CheckResult unital{"diag_image.unital[class=" + label + "]", true, ""};
  Coords e = phi.apply(src.idempotent_coords({class_index}));
  for (const Coords& v : images) {
    if (A.mul(e, v) != v || A.mul(v, e) != v) {
      unital.passed = false;
      unital.witness = "v=" + coords_text(v) + " is not fixed by the class unit " + coords_text(e);
      break;
    }
  }
  rep.checks.push_back(unital);
  return rep;
}

LocalSum local_sum_decompose(const AdditiveMap& phi, std::uint32_t class_index,
                             const LinearMap& psi_z, const LinearMap& theta_z,
                             const SampleBudget& budget) {
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  const FiContext& tgt = *A.context();
  std::vector<Coords> images = block_image_sorted(phi, class_index, budget.enum_cap, nullptr);

  std::vector<std::size_t> cls = class_diag_basis(src, class_index);
  std::vector<Coords> phi_cls;
  phi_cls.reserve(cls.size());
  for (std::size_t k : cls) phi_cls.push_back(mat_col(phi.matrix(), k));

  std::vector<std::size_t> out_strict, in_strict;
  for (std::size_t k : src.strict_basis()) {
    auto [cx, cy] = src.pair_classes(src.basis().at(k).pair);
    if (cx == class_index) out_strict.push_back(k);
    if (cy == class_index) in_strict.push_back(k);
  }

  Coords e = phi.apply(src.idempotent_coords({class_index}));
  Residue minus_one = static_cast<Residue>(tgt.ring().modulus() - 1);

  auto column_or_zero = [&](const LinearMap& m, std::int32_t k) {
    return k < 0 ? Coords(m.target()->dim(), 0) : m.column(static_cast<std::size_t>(k));
  };

  for (const Coords& f : images) {
    if (A.mul(f, f) != f) continue;
    Coords g = tgt.add_coords(e, tgt.scale_coords(minus_one, f));

    bool ok = true;
    for (const Coords& col : phi_cls)
      if (A.mul(f, col) != A.mul(col, f)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (!all_zero(A.mul(f, g)) || !all_zero(A.mul(g, f)) || A.mul(g, g) != g) continue;

    // a |-> phi(a) f multiplicative, a |-> phi(a) g anti-multiplicative on
    // the class block.
    for (std::size_t i = 0; ok && i < cls.size(); ++i) {
      Coords pif = A.mul(phi_cls[i], f);
      Coords pig = A.mul(phi_cls[i], g);
      for (std::size_t j = 0; j < cls.size(); ++j) {
        std::int32_t kprod = src.basis_product(cls[i], cls[j]);
        Coords pprod = kprod < 0 ? Coords(tgt.dim(), 0)
                                 : mat_col(phi.matrix(), static_cast<std::size_t>(kprod));
        if (A.mul(pprod, f) != A.mul(pif, A.mul(phi_cls[j], f))) {
          ok = false;
          break;
        }
        if (A.mul(pprod, g) != A.mul(A.mul(phi_cls[j], g), pig)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;

    // Compatibility with the strict-part components on incident blocks.
    for (std::size_t ci = 0; ok && ci < cls.size(); ++ci) {
      Coords pf = A.mul(phi_cls[ci], f);
      Coords pg = A.mul(phi_cls[ci], g);
      for (std::size_t s : out_strict) {
        std::int32_t as = src.basis_product(cls[ci], s);
        if (A.mul(pf, psi_z.column(s)) != column_or_zero(psi_z, as) ||
            A.mul(theta_z.column(s), pg) != column_or_zero(theta_z, as)) {
          ok = false;
          break;
        }
      }
      for (std::size_t s : in_strict) {
        if (!ok) break;
        std::int32_t sa = src.basis_product(s, cls[ci]);
        if (A.mul(psi_z.column(s), pf) != column_or_zero(psi_z, sa) ||
            A.mul(pg, theta_z.column(s)) != column_or_zero(theta_z, sa)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;

    return LocalSum{true, f, g, ""};
  }

  return LocalSum{false,
                  {},
                  {},
                  "no central idempotent of the class-block image satisfies the "
                  "decomposition equations"};
}

bool SumReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

SumReport full_sum_decompose(const AdditiveMap& phi, const SampleBudget& budget) {
  FiContextPtr src = phi.source();
  TargetPtr dst = phi.target();
  const TargetAlgebra& A = *dst;

  ClassSizeKind kind = check_class_size_hypothesis(src->poset());
  if (kind != ClassSizeKind::AllNontrivialFinite)
    throw HypothesisViolated(
        std::string("the sum decomposition requires every class to contain more than one "
                    "element; this order's classes are ") +
        to_string(kind));

  FzSplit split = psi_theta_on_fz(phi);
  SumReport rep{"sum",
                false,
                LinearMap::zero(src, dst),
                LinearMap::zero(src, dst),
                {},
                {},
                {}};
  rep.checks = split.checks;

  std::size_t classes = src->poset().class_count();
  for (std::uint32_t c = 0; c < classes; ++c) {
    const std::string label = src->poset().class_labels()[c];
    LocalSum ls = local_sum_decompose(phi, c, split.psi, split.theta, budget);
    rep.checks.push_back(
        {"sum.local_idempotents[class=" + label + "]", ls.found, ls.found ? "" : ls.reason});
    if (!ls.found) return rep;
    for (std::size_t k : class_diag_basis(*src, c)) {
      Coords col = mat_col(phi.matrix(), k);
      rep.psi.set_column(k, A.mul(col, ls.f));
      rep.theta.set_column(k, A.mul(col, ls.g));
    }
    rep.idempotents.push_back({label, std::move(ls.f), std::move(ls.g)});
  }
  for (std::size_t k : src->strict_basis()) {
    rep.psi.set_column(k, split.psi.column(k));
    rep.theta.set_column(k, split.theta.column(k));
  }
  rep.decomposed = true;

  CheckResult recon{"sum.reconstructs_on_basis", true, ""};
  for (std::size_t k = 0; k < src->dim(); ++k) {
    Coords lhs = A.context()->add_coords(rep.psi.column(k), rep.theta.column(k));
    Coords want = mat_col(phi.matrix(), k);
    if (lhs != want) {
      recon.passed = false;
      recon.witness = "a=" + src->basis_label(k) + " psi(a)+theta(a)=" + coords_text(lhs) +
                      " phi(a)=" + coords_text(want);
      break;
    }
  }
  rep.checks.push_back(recon);

  CheckResult recon_s{"sum.reconstructs_on_samples", true, ""};
  {
    SplitMix64 rng = budget.stream("sum.reconstructs_on_samples");
    for (std::uint32_t t = 0; t < budget.samples; ++t) {
      Coords r = src->random_coords(rng);
      Coords lhs = A.context()->add_coords(rep.psi.apply(r), rep.theta.apply(r));
      Coords want = phi.apply(r);
      if (lhs != want) {
        recon_s.passed = false;
        recon_s.witness = "r=" + coords_text(r);
        break;
      }
    }
  }
  rep.checks.push_back(recon_s);

  std::vector<std::size_t> all = all_basis_indices(*src);
  CheckResult hom{"sum.psi_multiplicative", true, ""};
  hom.passed = hom_on_pairs(rep.psi, all, all, hom.witness);
  rep.checks.push_back(hom);

  CheckResult anti{"sum.theta_antimultiplicative", true, ""};
  anti.passed = antihom_on_pairs(rep.theta, all, all, anti.witness);
  rep.checks.push_back(anti);

  std::string annih_witness;
  bool annih = true;
  for (std::size_t i = 0; annih && i < src->dim(); ++i) {
    Coords pi = rep.psi.column(i);
    for (std::size_t j = 0; j < src->dim(); ++j) {
      Coords tj = rep.theta.column(j);
      if (!all_zero(A.mul(pi, tj)) || !all_zero(A.mul(tj, pi))) {
        annih = false;
        annih_witness = "a=" + src->basis_label(i) + " b=" + src->basis_label(j);
        break;
      }
    }
  }
  rep.verdicts.push_back({"sum.components_mutually_annihilate",
                          annih ? "yes" : "no (" + annih_witness + ")"});
  return rep;
}

// ---------------------------------------------------------------------------
// Identity suites.
// ---------------------------------------------------------------------------

std::vector<CheckResult> mixed_product_checks(const AdditiveMap& phi, const FzSplit& split) {
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  CheckResult left{"mixed.diagonal_then_strict", true, ""};
  CheckResult right{"mixed.strict_then_diagonal", true, ""};
  auto column_or_zero = [&](const LinearMap& m, std::int32_t k) {
    return k < 0 ? Coords(A.dim(), 0) : m.column(static_cast<std::size_t>(k));
  };
  for (std::size_t a : src.diagonal_basis()) {
    Coords pa = mat_col(phi.matrix(), a);
    for (std::size_t s : src.strict_basis()) {
      if (left.passed) {
        Coords lhs = column_or_zero(split.psi, src.basis_product(a, s));
        Coords rhs = A.mul(pa, split.psi.column(s));
        if (lhs != rhs) {
          left.passed = false;
          left.witness = pair_witness(src, a, s, lhs, rhs);
        }
      }
      if (right.passed) {
        Coords lhs = column_or_zero(split.psi, src.basis_product(s, a));
        Coords rhs = A.mul(split.psi.column(s), pa);
        if (lhs != rhs) {
          right.passed = false;
          right.witness = pair_witness(src, s, a, lhs, rhs);
        }
      }
    }
  }
  return {left, right};
}

std::vector<CheckResult> commuting_idempotent_checks(const AdditiveMap& phi,
                                                     const SampleBudget& budget) {
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  std::vector<std::vector<std::uint32_t>> subsets =
      class_subsets(src, budget, "commuting_idempotents.subsets");

  CheckResult basis{"commuting_idempotents.basis", true, ""};
  for (const auto& X : subsets) {
    if (!basis.passed) break;
    Coords eX = src.idempotent_coords(X);
    Coords peX = phi.apply(eX);
    for (std::size_t k = 0; k < src.dim(); ++k) {
      Coords b = unit_coords(src.dim(), k);
      Coords er = src.convolve_coords(eX, b);
      if (er != src.convolve_coords(b, eX)) continue;  // the law assumes er = re
      Coords pb = mat_col(phi.matrix(), k);
      Coords want = phi.apply(er);
      if (A.mul(peX, pb) != want || A.mul(pb, peX) != want) {
        basis.passed = false;
        basis.witness = "X=" + subset_text(src, X) + " r=" + src.basis_label(k);
        break;
      }
    }
  }

  CheckResult sampled{"commuting_idempotents.samples", true, ""};
  {
    SplitMix64 rng = budget.stream("commuting_idempotents.samples");
    std::vector<std::uint32_t> full = all_classes(src);
    for (std::uint32_t t = 0; t < budget.samples; ++t) {
      const auto& X = subsets[rng.below(static_cast<std::uint32_t>(subsets.size()))];
      std::vector<std::uint32_t> comp;
      for (std::uint32_t c : full)
        if (std::find(X.begin(), X.end(), c) == X.end()) comp.push_back(c);
      // Sample directly from the commutant of e_X: both-sided restriction
      // to X plus both-sided restriction to its complement.
      Coords r0 = src.random_coords(rng);
      Coords r = src.add_coords(src.restrict_coords(r0, X, X), src.restrict_coords(r0, comp, comp));
      Coords eX = src.idempotent_coords(X);
      Coords er = src.convolve_coords(eX, r);
      if (er != src.convolve_coords(r, eX)) {
        sampled.passed = false;
        sampled.witness = "commutant sampling failed for X=" + subset_text(src, X);
        break;
      }
      Coords peX = phi.apply(eX);
      Coords pr = phi.apply(r);
      Coords want = phi.apply(er);
      if (A.mul(peX, pr) != want || A.mul(pr, peX) != want) {
        sampled.passed = false;
        sampled.witness = "X=" + subset_text(src, X) + " r=" + coords_text(r);
        break;
      }
    }
  }
  return {basis, sampled};
}

std::vector<CheckResult> sandwich_identity_checks(const AdditiveMap& phi, const FzSplit& split,
                                                  const SampleBudget& budget) {
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();

  std::vector<Coords> alphas;
  for (std::size_t k : src.strict_basis()) alphas.push_back(unit_coords(src.dim(), k));
  {
    SplitMix64 rng = budget.stream("sandwich.extras");
    std::uint32_t extras = std::min<std::uint32_t>(budget.samples, 500);
    for (std::uint32_t t = 0; t < extras; ++t) alphas.push_back(random_strict(src, rng));
  }

  std::size_t classes = src.poset().class_count();
  std::vector<Coords> phi_e(classes);
  for (std::uint32_t c = 0; c < classes; ++c) phi_e[c] = phi.apply(src.idempotent_coords({c}));

  auto mul3 = [&](const Coords& a, const Coords& b, const Coords& c) {
    return A.mul(A.mul(a, b), c);
  };

  CheckResult fwd{"sandwich.forward_identity", true, ""};
  CheckResult rev{"sandwich.reverse_identity", true, ""};
  CheckResult vanish{"sandwich.vanishing", true, ""};
  CheckResult blocks{"sandwich.block_values", true, ""};

  for (const Coords& a : alphas) {
    Coords pa = phi.apply(a);
    Coords psa = split.psi.apply(a);
    Coords tha = split.theta.apply(a);
    for (std::size_t p = 0; p < src.pair_count(); ++p) {
      if (src.pair_is_diagonal(p)) continue;
      auto [x, y] = src.pair_classes(p);
      const Coords& ex = phi_e[x];
      const Coords& ey = phi_e[y];
      std::string at = " at classes (" + src.poset().class_labels()[x] + "," +
                       src.poset().class_labels()[y] + ") a=" + coords_text(a);
      if (fwd.passed && mul3(ex, psa, ey) != mul3(ex, pa, ey)) {
        fwd.passed = false;
        fwd.witness = "psi sandwich differs from the map sandwich" + at;
      }
      if (rev.passed && mul3(ey, tha, ex) != mul3(ey, pa, ex)) {
        rev.passed = false;
        rev.witness = "theta sandwich differs from the map sandwich" + at;
      }
      if (vanish.passed &&
          (!all_zero(mul3(ey, psa, ex)) || !all_zero(mul3(ex, psa, ex)) ||
           !all_zero(mul3(ex, tha, ey)) || !all_zero(mul3(ex, tha, ex)))) {
        vanish.passed = false;
        vanish.witness = "a mismatched sandwich of psi/theta is nonzero" + at;
      }
      if (blocks.passed) {
        Coords ablock = src.restrict_coords(a, {x}, {y});
        if (split.psi.apply(ablock) != mul3(ex, psa, ey) ||
            split.theta.apply(ablock) != mul3(ey, tha, ex)) {
          blocks.passed = false;
          blocks.witness = "the single-block value disagrees with its sandwich" + at;
        }
      }
    }
  }
  return {fwd, rev, vanish, blocks};
}

std::vector<CheckResult> restriction_identity_checks(const AdditiveMap& phi, const FzSplit& split,
                                                     const SampleBudget& budget) {
  const FiContext& src = *phi.source();
  const TargetAlgebra& A = *phi.target();
  std::vector<std::vector<std::uint32_t>> subsets =
      class_subsets(src, budget, "restriction.subsets");
  std::vector<std::uint32_t> full = all_classes(src);

  std::vector<Coords> alphas;
  for (std::size_t k : src.strict_basis()) alphas.push_back(unit_coords(src.dim(), k));
  {
    SplitMix64 rng = budget.stream("restriction.extras");
    std::uint32_t extras = std::min<std::uint32_t>(budget.samples, 100);
    for (std::uint32_t t = 0; t < extras; ++t) alphas.push_back(random_strict(src, rng));
  }

  CheckResult psi_left{"restriction.psi_source_left", true, ""};
  CheckResult psi_right{"restriction.psi_target_right", true, ""};
  CheckResult theta_left{"restriction.theta_target_left", true, ""};
  CheckResult theta_right{"restriction.theta_source_right", true, ""};
  CheckResult two_psi{"restriction.two_subset_psi", true, ""};
  CheckResult two_theta{"restriction.two_subset_theta", true, ""};

  std::vector<Coords> e_img(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i)
    e_img[i] = phi.apply(src.idempotent_coords(subsets[i]));

  for (const Coords& a : alphas) {
    Coords psa = split.psi.apply(a);
    Coords tha = split.theta.apply(a);
    for (std::size_t xi = 0; xi < subsets.size(); ++xi) {
      const auto& X = subsets[xi];
      const Coords& E = e_img[xi];
      Coords a_src = src.restrict_coords(a, X, full);   // source classes in X
      Coords a_tgt = src.restrict_coords(a, full, X);   // target classes in X
      std::string at = " X=" + subset_text(src, X) + " a=" + coords_text(a);
      if (psi_left.passed && A.mul(E, psa) != A.mul(E, split.psi.apply(a_src))) {
        psi_left.passed = false;
        psi_left.witness = "left action of the subset unit ignores the source restriction" + at;
      }
      if (psi_right.passed && A.mul(psa, E) != A.mul(split.psi.apply(a_tgt), E)) {
        psi_right.passed = false;
        psi_right.witness = "right action of the subset unit ignores the target restriction" + at;
      }
      if (theta_left.passed && A.mul(E, tha) != A.mul(E, split.theta.apply(a_tgt))) {
        theta_left.passed = false;
        theta_left.witness = "theta takes the opposite restriction on the left" + at;
      }
      if (theta_right.passed && A.mul(tha, E) != A.mul(split.theta.apply(a_src), E)) {
        theta_right.passed = false;
        theta_right.witness = "theta takes the opposite restriction on the right" + at;
      }
    }
  }

  bool pairs_exhaustive = subsets.size() <= 64;
  SplitMix64 rng = budget.stream("restriction.two_subset_pairs");
  std::size_t pair_rounds = pairs_exhaustive ? subsets.size() * subsets.size() : 4096;
  for (const Coords& a : alphas) {
    if (!two_psi.passed && !two_theta.passed) break;
    Coords psa = split.psi.apply(a);
    Coords tha = split.theta.apply(a);
    for (std::size_t t = 0; t < pair_rounds; ++t) {
      std::size_t xi = pairs_exhaustive ? t / subsets.size()
                                        : rng.below(static_cast<std::uint32_t>(subsets.size()));
      std::size_t yi = pairs_exhaustive ? t % subsets.size()
                                        : rng.below(static_cast<std::uint32_t>(subsets.size()));
      const auto& X = subsets[xi];
      const auto& Y = subsets[yi];
      const Coords& EX = e_img[xi];
      const Coords& EY = e_img[yi];
      std::string at =
          " X=" + subset_text(src, X) + " Y=" + subset_text(src, Y) + " a=" + coords_text(a);
      if (two_psi.passed) {
        Coords lhs = A.mul(A.mul(EX, psa), EY);
        Coords rhs = A.mul(A.mul(EX, split.psi.apply(src.restrict_coords(a, X, Y))), EY);
        if (lhs != rhs) {
          two_psi.passed = false;
          two_psi.witness = "two-subset sandwich of psi ignores the restriction" + at;
        }
      }
      if (two_theta.passed) {
        Coords lhs = A.mul(A.mul(EX, tha), EY);
        Coords rhs = A.mul(A.mul(EX, split.theta.apply(src.restrict_coords(a, Y, X))), EY);
        if (lhs != rhs) {
          two_theta.passed = false;
          two_theta.witness = "two-subset sandwich of theta ignores the swapped restriction" + at;
        }
      }
    }
  }
  return {psi_left, psi_right, theta_left, theta_right, two_psi, two_theta};
}

std::vector<CheckResult> prime_map_multiplicativity_checks(const AdditiveMap& phi) {
  const FiContext& src = *phi.source();
  CheckResult first{"prime_maps.first_multiplicative", true, ""};
  CheckResult second{"prime_maps.second_multiplicative", true, ""};

  // Cache the extractions of every strict basis element (and zero).
  std::vector<PrimePair> cache(src.dim());
  std::vector<bool> have(src.dim(), false);
  auto parts_of = [&](std::size_t k) -> const PrimePair& {
    if (!have[k]) {
      cache[k] = prime_parts(phi, unit_coords(src.dim(), k));
      have[k] = true;
    }
    return cache[k];
  };

  for (std::size_t i : src.strict_basis()) {
    if (!first.passed && !second.passed) break;
    const PrimePair pi = parts_of(i);
    for (std::size_t j : src.strict_basis()) {
      const PrimePair& pj = parts_of(j);
      std::int32_t k = src.basis_product(i, j);
      PrimePair pk{src.zero_coords(), src.zero_coords()};
      if (k >= 0) pk = parts_of(static_cast<std::size_t>(k));
      if (first.passed &&
          src.convolve_coords(pi.first, pj.first) != pk.first) {
        first.passed = false;
        first.witness = "a=" + src.basis_label(i) + " b=" + src.basis_label(j);
      }
      if (second.passed &&
          src.convolve_coords(pi.second, pj.second) != pk.second) {
        second.passed = false;
        second.witness = "a=" + src.basis_label(i) + " b=" + src.basis_label(j);
      }
    }
  }
  return {first, second};
}

std::vector<CheckResult> prime_restriction_checks(const AdditiveMap& phi,
                                                  const SampleBudget& budget) {
  const FiContext& src = *phi.source();
  std::vector<std::vector<std::uint32_t>> subsets =
      class_subsets(src, budget, "restriction.prime_subsets");

  std::vector<Coords> alphas;
  for (std::size_t k : src.strict_basis()) alphas.push_back(unit_coords(src.dim(), k));
  {
    SplitMix64 rng = budget.stream("restriction.prime_extras");
    std::uint32_t extras = std::min<std::uint32_t>(budget.samples, 50);
    for (std::uint32_t t = 0; t < extras; ++t) alphas.push_back(random_strict(src, rng));
  }

  CheckResult first{"restriction.first_extraction", true, ""};
  CheckResult second{"restriction.second_extraction", true, ""};

  bool pairs_exhaustive = subsets.size() <= 64;
  SplitMix64 rng = budget.stream("restriction.prime_pairs");
  std::size_t rounds = pairs_exhaustive ? subsets.size() * subsets.size() : 2048;

  for (const Coords& a : alphas) {
    if (!first.passed && !second.passed) break;
    PrimePair pa = prime_parts(phi, a);
    for (std::size_t t = 0; t < rounds; ++t) {
      std::size_t ui = pairs_exhaustive ? t / subsets.size()
                                        : rng.below(static_cast<std::uint32_t>(subsets.size()));
      std::size_t vi = pairs_exhaustive ? t % subsets.size()
                                        : rng.below(static_cast<std::uint32_t>(subsets.size()));
      const auto& U = subsets[ui];
      const auto& V = subsets[vi];
      PrimePair pr = prime_parts(phi, src.restrict_coords(a, U, V));
      std::string at = " U=" + subset_text(src, U) + " V=" + subset_text(src, V) +
                       " a=" + coords_text(a);
      if (first.passed && pr.first != src.restrict_coords(pa.first, U, V)) {
        first.passed = false;
        first.witness = "restricting and extracting do not commute (first part)" + at;
      }
      if (second.passed && pr.second != src.restrict_coords(pa.second, U, V)) {
        second.passed = false;
        second.witness = "restricting and extracting do not commute (second part)" + at;
      }
    }
  }
  return {first, second};
}

// ---------------------------------------------------------------------------
// Generators.
// ---------------------------------------------------------------------------

std::optional<std::vector<Residue>> fi_inverse(const FiContext& ctx, const Coords& u) {
  MatZn left(ctx.ring(), ctx.dim(), ctx.dim());
  for (std::size_t k = 0; k < ctx.dim(); ++k) {
    Coords col = ctx.convolve_coords(u, unit_coords(ctx.dim(), k));
    for (std::size_t r = 0; r < ctx.dim(); ++r) left.set(r, k, col[r]);
  }
  std::optional<MatZn> inv = mat_inverse(left);
  if (!inv) return std::nullopt;
  Coords delta = ctx.delta_coords();
  Coords v = inv->apply(delta);
  if (ctx.convolve_coords(u, v) != delta || ctx.convolve_coords(v, u) != delta)
    return std::nullopt;
  return v;
}

namespace {

/// Construction-time gate: generators must produce maps satisfying the
/// Jordan laws. Deterministic and cheap — the complete bilinear check plus
/// a seeded sample of the quadratic and cubic ones; suites re-verify with
/// the caller's full budget later.
void require_jordan_construction(const AdditiveMap& m, const std::string& what) {
  SampleBudget gate;
  gate.enum_cap = 4096;
  gate.samples = 200;
  gate.seed = 0xfe11c1a5u;
  LinearMap lin = m.as_linear();
  for (const CheckResult& c : jordan_law_checks(lin, gate)) {
    if (!c.passed)
      throw PreconditionFailed(what + ": the constructed map violates the Jordan laws (" + c.name +
                               ": " + c.witness + ")");
  }
}

}  // namespace

AdditiveMap identity_map(FiContextPtr ctx) {
  if (!ctx) throw PreconditionFailed("identity map needs a context");
  MatZn m = MatZn::identity(ctx->ring(), ctx->dim());
  TargetPtr dst = TargetAlgebra::from_context(ctx);
  return AdditiveMap(std::move(ctx), std::move(dst), std::move(m));
}

AdditiveMap inner_automorphism(FiContextPtr ctx, const Coords& unit) {
  if (!ctx) throw PreconditionFailed("inner automorphism needs a context");
  if (unit.size() != ctx->dim())
    throw PreconditionFailed("inner automorphism: element has the wrong dimension");
  std::optional<Coords> v = fi_inverse(*ctx, unit);
  if (!v) throw NotInvertible("inner automorphism: the element is not invertible");
  MatZn m(ctx->ring(), ctx->dim(), ctx->dim());
  for (std::size_t k = 0; k < ctx->dim(); ++k) {
    Coords col = ctx->convolve_coords(ctx->convolve_coords(unit, unit_coords(ctx->dim(), k)), *v);
    for (std::size_t r = 0; r < ctx->dim(); ++r) m.set(r, k, col[r]);
  }
  TargetPtr dst = TargetAlgebra::from_context(ctx);
  AdditiveMap out(std::move(ctx), std::move(dst), std::move(m));
  require_jordan_construction(out, "inner automorphism");
  return out;
}

std::optional<std::vector<std::uint32_t>> canonical_order_reversal(const QuotientPoset& poset) {
  std::size_t c = poset.class_count();
  std::vector<std::uint32_t> assign(c, 0);
  std::vector<bool> used(c, false);

  // Depth-first search taking the smallest feasible image first, so the
  // returned reversal is canonical.
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == c) return true;
    for (std::uint32_t cand = 0; cand < c; ++cand) {
      if (used[cand]) continue;
      if (poset.class_size(cand) != poset.class_size(static_cast<std::uint32_t>(i))) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        std::uint32_t ji = static_cast<std::uint32_t>(j);
        std::uint32_t ii = static_cast<std::uint32_t>(i);
        if (poset.leq(ji, ii) != poset.leq(cand, assign[j])) ok = false;
        if (poset.leq(ii, ji) != poset.leq(assign[j], cand)) ok = false;
      }
      if (!ok) continue;
      used[cand] = true;
      assign[i] = cand;
      if (rec(i + 1)) return true;
      used[cand] = false;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return assign;
}

AdditiveMap order_reversal_map(FiContextPtr ctx, const std::vector<std::uint32_t>& lambda) {
  if (!ctx) throw PreconditionFailed("order reversal needs a context");
  const QuotientPoset& poset = ctx->poset();
  std::size_t c = poset.class_count();
  if (lambda.size() != c)
    throw PreconditionFailed("order reversal: the class map must name every class once");
  std::vector<bool> seen(c, false);
  for (std::uint32_t img : lambda) {
    if (img >= c || seen[img])
      throw PreconditionFailed("order reversal: the class map is not a bijection");
    seen[img] = true;
  }
  for (std::uint32_t i = 0; i < c; ++i)
    if (poset.class_size(lambda[i]) != poset.class_size(i))
      throw PreconditionFailed("order reversal: image class sizes do not match");
  for (std::uint32_t i = 0; i < c; ++i)
    for (std::uint32_t j = 0; j < c; ++j)
      if (poset.leq(i, j) != poset.leq(lambda[j], lambda[i]))
        throw PreconditionFailed("order reversal: the class map does not reverse the order");

  MatZn m(ctx->ring(), ctx->dim(), ctx->dim());
  for (std::size_t k = 0; k < ctx->dim(); ++k) {
    const BasisTriple& b = ctx->basis().at(k);
    auto [ci, cj] = ctx->pair_classes(b.pair);
    std::size_t to = ctx->coord_of(lambda[cj], lambda[ci], b.col, b.row);
    m.set(to, k, 1);
  }
  TargetPtr dst = TargetAlgebra::from_context(ctx);
  AdditiveMap out(std::move(ctx), std::move(dst), std::move(m));
  require_jordan_construction(out, "order reversal");
  return out;
}

AdditiveMap order_reversal_map(FiContextPtr ctx) {
  if (!ctx) throw PreconditionFailed("order reversal needs a context");
  std::optional<std::vector<std::uint32_t>> lambda = canonical_order_reversal(ctx->poset());
  if (!lambda)
    throw PreconditionFailed(
        "order reversal: the quotient order admits no size-preserving reversal");
  return order_reversal_map(std::move(ctx), *lambda);
}

LinearMap diagonal_projection(FiContextPtr ctx) {
  if (!ctx) throw PreconditionFailed("diagonal projection needs a context");
  LinearMap out = LinearMap::zero(ctx, TargetAlgebra::from_context(ctx));
  for (std::size_t k : ctx->diagonal_basis()) out.set_column(k, unit_coords(ctx->dim(), k));
  return out;
}

AdditiveMap j_twist_class(FiContextPtr ctx, std::uint32_t class_index, Residue e) {
  if (!ctx) throw PreconditionFailed("class twist needs a context");
  if (class_index >= ctx->poset().class_count())
    throw PreconditionFailed("class twist: no class with that index");
  const RingZn& ring = ctx->ring();
  e = ring.canon(e);
  if (ring.mul(e, e) != e)
    throw PreconditionFailed("class twist: the chosen residue is not idempotent");
  Residue co = ring.sub(1, e);

  MatZn m = MatZn::identity(ring, ctx->dim());
  std::int32_t p = ctx->pair_index(class_index, class_index);
  for (std::size_t k = 0; k < ctx->dim(); ++k) {
    const BasisTriple& b = ctx->basis().at(k);
    if (b.pair != static_cast<std::uint32_t>(p)) continue;
    std::size_t swapped = ctx->coord_of(class_index, class_index, b.col, b.row);
    for (std::size_t r = 0; r < ctx->dim(); ++r) m.set(r, k, 0);
    m.set(k, k, e);
    m.set(swapped, k, ring.add(m.at(swapped, k), co));
  }
  TargetPtr dst = TargetAlgebra::from_context(ctx);
  AdditiveMap out(std::move(ctx), std::move(dst), std::move(m));
  require_jordan_construction(out, "class twist");
  return out;
}

AdditiveMap j_twist_blockwise(FiContextPtr ctx, Residue e) {
  if (!ctx) throw PreconditionFailed("blockwise twist needs a context");
  const RingZn& ring = ctx->ring();
  e = ring.canon(e);
  if (ring.mul(e, e) != e)
    throw PreconditionFailed("blockwise twist: the chosen residue is not idempotent");
  AdditiveMap rev = order_reversal_map(ctx);
  MatZn m = MatZn::identity(ring, ctx->dim()).scaled(e) + rev.matrix().scaled(ring.sub(1, e));
  TargetPtr dst = TargetAlgebra::from_context(ctx);
  AdditiveMap out(std::move(ctx), std::move(dst), std::move(m));
  require_jordan_construction(out, "blockwise twist");
  return out;
}

AdditiveMap near_sum_compose(const LinearMap& h, const LinearMap& t) {
  FiContextPtr src = h.source();
  if (!src->same(*t.source()) || !h.target()->same(*t.target()))
    throw ContextMismatch("near sum: the components live on different spaces");
  const TargetAlgebra& A = *h.target();

  CheckResult hom = multiplicative_check(h);
  if (!hom.passed)
    throw PreconditionFailed("near sum: the first component is not multiplicative (" +
                             hom.witness + ")");
  CheckResult anti = antimultiplicative_check(t);
  if (!anti.passed)
    throw PreconditionFailed("near sum: the second component is not anti-multiplicative (" +
                             anti.witness + ")");
  for (std::size_t i : src->strict_basis()) {
    Coords hi = h.column(i);
    for (std::size_t j : src->strict_basis()) {
      Coords tj = t.column(j);
      if (!all_zero(A.mul(hi, tj)) || !all_zero(A.mul(tj, hi)))
        throw PreconditionFailed(
            "near sum: the components do not mutually annihilate on the strict ideal (r=" +
            src->basis_label(i) + " s=" + src->basis_label(j) + ")");
    }
  }
  for (std::size_t k : src->diagonal_basis())
    if (h.column(k) != t.column(k))
      throw PreconditionFailed("near sum: the components disagree on the diagonal subring (a=" +
                               src->basis_label(k) + ")");

  MatZn m(src->ring(), A.dim(), src->dim());
  for (std::size_t k : src->diagonal_basis()) {
    Coords col = h.column(k);
    for (std::size_t r = 0; r < col.size(); ++r) m.set(r, k, col[r]);
  }
  for (std::size_t k : src->strict_basis()) {
    Coords col = A.context()->add_coords(h.column(k), t.column(k));
    for (std::size_t r = 0; r < col.size(); ++r) m.set(r, k, col[r]);
  }
  AdditiveMap out(src, h.target(), std::move(m));
  require_jordan_construction(out, "near sum");
  return out;
}

AdditiveMap compose_maps(const AdditiveMap& outer, const AdditiveMap& inner) {
  return outer.after(inner);
}

}  // namespace fijord
