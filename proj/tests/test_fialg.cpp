#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "fijord/errors.hpp"
#include "fijord/fialg.hpp"
#include "fijord/prng.hpp"
#include "helpers.hpp"

using namespace fijord;
using namespace fijord::testutil;

namespace {

// Independent oracle for the product: view a coordinate vector as a
// function on comparable element pairs (u, w) of the underlying preorder
// and convolve pointwise, (ab)(u, w) = sum over u <= v <= w of
// a(u, v) * b(v, w). This never consults the structure-constant table.
using ElemFn = std::map<std::pair<std::size_t, std::size_t>, Residue>;

ElemFn to_elem_fn(const FiContext& ctx, const std::vector<Residue>& coords) {
  ElemFn fn;
  const QuotientPoset& q = ctx.poset();
  for (std::size_t k = 0; k < ctx.dim(); ++k) {
    const BasisTriple& b = ctx.basis().at(k);
    auto [ci, cj] = ctx.pair_classes(b.pair);
    std::size_t u = q.classes()[ci][b.row];
    std::size_t w = q.classes()[cj][b.col];
    if (coords[k] != 0) fn[{u, w}] = coords[k];
  }
  return fn;
}

std::vector<Residue> from_elem_fn(const FiContext& ctx, const ElemFn& fn) {
  std::vector<Residue> coords = ctx.zero_coords();
  const QuotientPoset& q = ctx.poset();
  for (const auto& [uw, val] : fn) {
    if (val == 0) continue;
    auto [u, w] = uw;
    std::uint32_t ci = static_cast<std::uint32_t>(q.class_of(u));
    std::uint32_t cj = static_cast<std::uint32_t>(q.class_of(w));
    std::uint16_t row = 0, col = 0;
    for (std::size_t i = 0; i < q.classes()[ci].size(); ++i)
      if (q.classes()[ci][i] == u) row = static_cast<std::uint16_t>(i);
    for (std::size_t j = 0; j < q.classes()[cj].size(); ++j)
      if (q.classes()[cj][j] == w) col = static_cast<std::uint16_t>(j);
    coords[ctx.coord_of(ci, cj, row, col)] = val;
  }
  return coords;
}

std::vector<Residue> oracle_convolve(const FiContext& ctx, const std::vector<Residue>& a,
                                     const std::vector<Residue>& b) {
  const RingZn& ring = ctx.ring();
  const QuotientPoset& q = ctx.poset();
  std::size_t n = q.preorder().size();
  ElemFn fa = to_elem_fn(ctx, a), fb = to_elem_fn(ctx, b);
  ElemFn out;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w = 0; w < n; ++w) {
      if (!q.leq(q.class_of(u), q.class_of(w))) continue;
      Residue acc = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (!q.leq(q.class_of(u), q.class_of(v)) || !q.leq(q.class_of(v), q.class_of(w)))
          continue;
        auto ia = fa.find({u, v});
        auto ib = fb.find({v, w});
        if (ia != fa.end() && ib != fb.end())
          acc = ring.add(acc, ring.mul(ia->second, ib->second));
      }
      if (acc != 0) out[{u, w}] = acc;
    }
  return from_elem_fn(ctx, out);
}

}  // namespace

TEST_CASE("basis layout of the three-element chain") {
  FiContextPtr ctx = chain(6, {"a", "b", "c"});
  CHECK(ctx->dim() == 6);
  CHECK(ctx->pair_count() == 6);
  // Pairs are ordered lexicographically by (source class, target class).
  CHECK(ctx->basis_label(0) == "E(a,a)[0,0]");
  CHECK(ctx->basis_label(1) == "E(a,b)[0,0]");
  CHECK(ctx->basis_label(2) == "E(a,c)[0,0]");
  CHECK(ctx->basis_label(3) == "E(b,b)[0,0]");
  CHECK(ctx->basis_label(4) == "E(b,c)[0,0]");
  CHECK(ctx->basis_label(5) == "E(c,c)[0,0]");
  CHECK(ctx->diagonal_basis() == std::vector<std::size_t>{0, 3, 5});
  CHECK(ctx->strict_basis() == std::vector<std::size_t>{1, 2, 4});
  // No block for incomparable or reversed pairs.
  CHECK(ctx->pair_index(cls(ctx, "c"), cls(ctx, "a")) == -1);
}

TEST_CASE("basis products on the chain follow the composition rule") {
  FiContextPtr ctx = chain(6, {"a", "b", "c"});
  std::size_t ab = coord(ctx, "a", "b"), bc = coord(ctx, "b", "c"), ac = coord(ctx, "a", "c");
  std::size_t aa = coord(ctx, "a", "a"), bb = coord(ctx, "b", "b");
  CHECK(ctx->basis_product(ab, bc) == static_cast<std::int32_t>(ac));
  CHECK(ctx->basis_product(bc, ab) == -1);  // (b,c) then (a,b) does not compose
  CHECK(ctx->basis_product(ab, ab) == -1);
  CHECK(ctx->basis_product(aa, ab) == static_cast<std::int32_t>(ab));
  CHECK(ctx->basis_product(ab, bb) == static_cast<std::int32_t>(ab));
  CHECK(ctx->basis_product(aa, aa) == static_cast<std::int32_t>(aa));
  CHECK(ctx->basis_product(aa, bb) == -1);
}

TEST_CASE("a single class of two elements is the 2x2 matrix algebra") {
  FiContextPtr ctx = matrix2(6);
  CHECK(ctx->dim() == 4);
  CHECK(ctx->pair_count() == 1);
  CHECK(ctx->poset().class_count() == 1);
  // Matrix-unit oracle: E[i,j] E[k,l] = E[i,l] when j == k, else 0.
  for (std::uint16_t i = 0; i < 2; ++i)
    for (std::uint16_t j = 0; j < 2; ++j)
      for (std::uint16_t k = 0; k < 2; ++k)
        for (std::uint16_t l = 0; l < 2; ++l) {
          std::int32_t got = ctx->basis_product(ctx->coord_of(0, 0, i, j),
                                                ctx->coord_of(0, 0, k, l));
          if (j == k)
            CHECK(got == static_cast<std::int32_t>(ctx->coord_of(0, 0, i, l)));
          else
            CHECK(got == -1);
        }
  CHECK(ctx->basis_label(1) == "E(p,p)[0,1]");
}

TEST_CASE("convolution agrees with the element-level oracle") {
  std::vector<FiContextPtr> ctxs = {chain(6, {"a", "b", "c"}), two_blocks(6), diamond(6),
                                    matrix2(12)};
  SplitMix64 rng(7);
  for (const FiContextPtr& ctx : ctxs) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Residue> a = ctx->random_coords(rng);
      std::vector<Residue> b = ctx->random_coords(rng);
      std::vector<Residue> got = ctx->convolve_coords(a, b);
      std::vector<Residue> want = oracle_convolve(*ctx, a, b);
      REQUIRE(got == want);
      // The block-form product must agree as well.
      FinSeries fa = FinSeries::from_coords(ctx, a);
      FinSeries fb = FinSeries::from_coords(ctx, b);
      REQUIRE(convolve(fa, fb).coords() == got);
    }
  }
}

TEST_CASE("the identity element is the all-classes idempotent") {
  for (const FiContextPtr& ctx : {chain(6, {"a", "b", "c"}), two_blocks(6), diamond(5)}) {
    std::vector<Residue> delta = ctx->delta_coords();
    SplitMix64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Residue> a = ctx->random_coords(rng);
      CHECK(ctx->convolve_coords(delta, a) == a);
      CHECK(ctx->convolve_coords(a, delta) == a);
    }
    std::vector<std::uint32_t> all;
    for (std::uint32_t c = 0; c < ctx->poset().class_count(); ++c) all.push_back(c);
    CHECK(ctx->idempotent_coords(all) == delta);
  }
}

TEST_CASE("subset idempotents multiply by intersection") {
  FiContextPtr ctx = diamond(6);
  std::size_t nc = ctx->poset().class_count();
  REQUIRE(nc == 4);
  for (std::uint32_t xm = 0; xm < 16; ++xm)
    for (std::uint32_t ym = 0; ym < 16; ++ym) {
      std::vector<std::uint32_t> X, Y, XY;
      for (std::uint32_t c = 0; c < nc; ++c) {
        if (xm & (1u << c)) X.push_back(c);
        if (ym & (1u << c)) Y.push_back(c);
        if ((xm & ym) & (1u << c)) XY.push_back(c);
      }
      REQUIRE(ctx->convolve_coords(ctx->idempotent_coords(X), ctx->idempotent_coords(Y)) ==
              ctx->idempotent_coords(XY));
    }
}

TEST_CASE("sandwiching by singleton idempotents extracts one block") {
  for (const FiContextPtr& ctx : {chain(6, {"a", "b", "c"}), two_blocks(6), diamond(6)}) {
    SplitMix64 rng(5);
    std::size_t nc = ctx->poset().class_count();
    for (int trial = 0; trial < 20; ++trial) {
      FinSeries alpha = FinSeries::from_coords(ctx, ctx->random_coords(rng));
      for (std::uint32_t x = 0; x < nc; ++x)
        for (std::uint32_t y = 0; y < nc; ++y) {
          FinSeries ex = FinSeries::idempotent(ctx, {x});
          FinSeries ey = FinSeries::idempotent(ctx, {y});
          FinSeries got = convolve(convolve(ex, alpha), ey);
          // Oracle: the (x, y) block of alpha, alone.
          FinSeries want(ctx);
          if (ctx->pair_index(x, y) >= 0 && alpha.block(x, y) != nullptr)
            want.set_block(x, y, *alpha.block(x, y));
          REQUIRE(got == want);
        }
    }
  }
}

TEST_CASE("diagonal part and strict part recombine to the element") {
  for (const FiContextPtr& ctx : {chain(6, {"a", "b", "c"}), two_blocks(6), diamond(6)}) {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Residue> a = ctx->random_coords(rng);
      auto [d, z] = ctx->split_coords(a);
      CHECK(ctx->add_coords(d, z) == a);
      for (std::size_t k : ctx->diagonal_basis()) CHECK(z[k] == 0);
      for (std::size_t k : ctx->strict_basis()) CHECK(d[k] == 0);
      FinSeries fs = FinSeries::from_coords(ctx, a);
      auto [fd, fz] = fs.split_dz();
      CHECK(fd.coords() == d);
      CHECK(fz.coords() == z);
      CHECK((fd + fz) == fs);
    }
  }
}

TEST_CASE("strict elements form a two-sided ideal, diagonal ones a subring") {
  FiContextPtr ctx = two_blocks(6);
  SplitMix64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Residue> a = ctx->random_coords(rng);
    std::vector<Residue> b = ctx->random_coords(rng);
    auto [ad, az] = ctx->split_coords(a);
    auto [bd, bz] = ctx->split_coords(b);
    // strict * anything and anything * strict stay strict
    for (const std::vector<Residue>& prod :
         {ctx->convolve_coords(az, b), ctx->convolve_coords(b, az)})
      for (std::size_t k : ctx->diagonal_basis()) REQUIRE(prod[k] == 0);
    // diagonal * diagonal stays diagonal
    std::vector<Residue> dd = ctx->convolve_coords(ad, bd);
    for (std::size_t k : ctx->strict_basis()) REQUIRE(dd[k] == 0);
  }
}

TEST_CASE("restriction keeps exactly the blocks inside the chosen sets") {
  FiContextPtr ctx = chain(6, {"a", "b", "c"});
  std::vector<Residue> a(ctx->dim());
  for (std::size_t k = 0; k < ctx->dim(); ++k) a[k] = static_cast<Residue>(k + 1);
  // X = {a}, Y = {b, c}: keeps (a,b), (a,c); drops everything else.
  std::vector<Residue> got =
      ctx->restrict_coords(a, class_set(ctx, {"a"}), class_set(ctx, {"b", "c"}));
  std::vector<Residue> want = ctx->zero_coords();
  want[coord(ctx, "a", "b")] = a[coord(ctx, "a", "b")];
  want[coord(ctx, "a", "c")] = a[coord(ctx, "a", "c")];
  CHECK(got == want);
  // Full restriction is the identity.
  CHECK(ctx->restrict_coords(a, class_set(ctx, {"a", "b", "c"}),
                             class_set(ctx, {"a", "b", "c"})) == a);
  // Empty source kills everything.
  CHECK(ctx->restrict_coords(a, {}, class_set(ctx, {"a", "b", "c"})) == ctx->zero_coords());
}

TEST_CASE("restriction is additive and nests by intersection") {
  FiContextPtr ctx = diamond(6);
  std::size_t nc = ctx->poset().class_count();
  SplitMix64 rng(19);
  auto subset = [&](std::uint32_t mask) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t c = 0; c < nc; ++c)
      if (mask & (1u << c)) s.push_back(c);
    return s;
  };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Residue> a = ctx->random_coords(rng);
    std::vector<Residue> b = ctx->random_coords(rng);
    for (std::uint32_t xm = 0; xm < 16; ++xm)
      for (std::uint32_t ym = 0; ym < 16; ++ym) {
        std::vector<std::uint32_t> X = subset(xm), Y = subset(ym);
        REQUIRE(ctx->restrict_coords(ctx->add_coords(a, b), X, Y) ==
                ctx->add_coords(ctx->restrict_coords(a, X, Y), ctx->restrict_coords(b, X, Y)));
        for (std::uint32_t um = 0; um < 16; ++um) {
          std::vector<std::uint32_t> U = subset(um);
          // Nesting in the source and in the target.
          REQUIRE(ctx->restrict_coords(ctx->restrict_coords(a, X, Y), U, Y) ==
                  ctx->restrict_coords(a, subset(xm & um), Y));
          REQUIRE(ctx->restrict_coords(ctx->restrict_coords(a, X, Y), X, U) ==
                  ctx->restrict_coords(a, X, subset(ym & um)));
        }
      }
  }
}

TEST_CASE("products restrict by restricting the factors") {
  FiContextPtr ctx = diamond(6);
  std::size_t nc = ctx->poset().class_count();
  std::vector<std::uint32_t> all;
  for (std::uint32_t c = 0; c < nc; ++c) all.push_back(c);
  SplitMix64 rng(23);
  auto subset = [&](std::uint32_t mask) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t c = 0; c < nc; ++c)
      if (mask & (1u << c)) s.push_back(c);
    return s;
  };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Residue> a = ctx->random_coords(rng);
    std::vector<Residue> b = ctx->random_coords(rng);
    for (std::uint32_t xm = 0; xm < 16; ++xm)
      for (std::uint32_t ym = 0; ym < 16; ++ym) {
        std::vector<std::uint32_t> X = subset(xm), Y = subset(ym);
        REQUIRE(ctx->restrict_coords(ctx->convolve_coords(a, b), X, Y) ==
                ctx->convolve_coords(ctx->restrict_coords(a, X, all),
                                     ctx->restrict_coords(b, all, Y)));
      }
  }
}

TEST_CASE("series block accessors round-trip through coordinates") {
  FiContextPtr ctx = two_blocks(6);
  FinSeries s(ctx);
  CHECK(s.is_zero());
  MatZn m(ctx->ring(), 2, 2);
  m.set(0, 1, 5);
  s.set_block(cls(ctx, "a1"), cls(ctx, "b1"), m);
  CHECK(!s.is_zero());
  std::vector<Residue> c = s.coords();
  CHECK(c[ctx->coord_of(cls(ctx, "a1"), cls(ctx, "b1"), 0, 1)] == 5);
  CHECK(FinSeries::from_coords(ctx, c) == s);
  const MatZn* back = s.block(cls(ctx, "a1"), cls(ctx, "b1"));
  REQUIRE(back != nullptr);
  CHECK(back->at(0, 1) == 5);
  CHECK(s.block(cls(ctx, "b1"), cls(ctx, "a1")) == nullptr);
  CHECK(s.is_finitary());
  // Setting a block for an unordered class pair or with the wrong shape is rejected.
  CHECK_THROWS_AS(s.set_block(cls(ctx, "b1"), cls(ctx, "a1"), m), BadLabel);
  CHECK_THROWS_AS(s.set_block(cls(ctx, "a1"), cls(ctx, "b1"), MatZn(ctx->ring(), 1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(s.set_block(cls(ctx, "a1"), cls(ctx, "b1"), MatZn(RingZn(5), 2, 2)),
                  ModulusMismatch);
}

TEST_CASE("series render deterministically") {
  FiContextPtr ctx = chain(6, {"a", "b", "c"});
  FinSeries s = FinSeries::basis_element(ctx, coord(ctx, "a", "b")).scaled(4) +
                FinSeries::basis_element(ctx, coord(ctx, "c", "c"));
  FinSeries t = FinSeries::basis_element(ctx, coord(ctx, "c", "c")) +
                FinSeries::basis_element(ctx, coord(ctx, "a", "b")).scaled(4);
  CHECK(s == t);
  CHECK(s.to_text() == t.to_text());
  // Blocks render in pair order under their class-pair heading.
  CHECK(s.to_text().find("(a,b):") != std::string::npos);
  CHECK(FinSeries(ctx).to_text() == "0");
}

TEST_CASE("mixing contexts is rejected, structural equality is accepted") {
  FiContextPtr c1 = chain(6, {"a", "b"});
  FiContextPtr c1bis = chain(6, {"a", "b"});
  CHECK(c1->same(*c1));
  CHECK(c1->same(*c1bis));  // same ring, labels, and order: same coordinates
  CHECK(FinSeries::delta(c1) + FinSeries::delta(c1bis) == FinSeries::delta(c1).scaled(2));

  FiContextPtr c2 = chain(6, {"a", "z"});
  FiContextPtr c3 = chain(5, {"a", "b"});
  CHECK(!c1->same(*c2));
  CHECK(!c1->same(*c3));
  CHECK_THROWS_AS(FinSeries::delta(c1) + FinSeries::delta(c2), ContextMismatch);
  CHECK_THROWS_AS(convolve(FinSeries::delta(c1), FinSeries::delta(c3)), ContextMismatch);
}

TEST_CASE("element enumeration covers the whole algebra exactly once") {
  FiContextPtr ctx = chain(2, {"a", "b"});  // dim 3 over Z_2: 8 elements
  CHECK(element_count(*ctx, 1 << 10) == 8);
  ElementEnumerator en(ctx, 1 << 10);
  CHECK(en.count() == 8);
  std::vector<std::vector<Residue>> seen;
  std::vector<Residue> cur;
  while (en.next(cur)) seen.push_back(cur);
  CHECK(seen.size() == 8);
  for (std::size_t i = 0; i < seen.size(); ++i)
    for (std::size_t j = i + 1; j < seen.size(); ++j) REQUIRE(seen[i] != seen[j]);
  CHECK_THROWS_AS(element_count(*ctx, 4), TooLarge);
  CHECK_THROWS_AS(ElementEnumerator(ctx, 4), TooLarge);
}
