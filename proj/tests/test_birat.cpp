#include <doctest.h>

#include <map>
#include <sstream>

#include "birsym/birat.hpp"
#include "birsym/exactla.hpp"
#include "random_blowup.hpp"

using namespace birsym;

namespace {

FixedLocusData parse(const AbelianGroup& g, const std::string& text) {
  std::istringstream in(text);
  return read_fixed_locus(in, g);
}

BlowupSpec point_blowup_p2() {
  BlowupSpec s;
  s.kind = BlowupCase::I;
  s.d4 = 2;
  s.a = {1, 2};
  s.kappa = {1, 1};
  return s;
}

}  // namespace

TEST_CASE("beta of Z/3 acting on P^2 with weights (0,1,2)") {
  const auto g = AbelianGroup::cyclic(3);
  // tangent characters at the coordinate points are differences of weights
  const auto data = parse(g, "# three fixed points\np0 : 1,2\np1 : 2,1\np2 : 1,2\n");
  REQUIRE(data.components.size() == 3);
  const auto index = enumerate_symbols(g, 2, Flavor::B);
  const auto beta = beta_class(index, data);
  const auto col = index.locate(std::vector<Code>{1, 2});
  REQUIRE(col.coefficient == 1);
  SymbolVector expected;
  expected.add(col.column, 3);
  CHECK(beta == expected);
  SymbolVector one;
  one.add(col.column, 1);
  CHECK(beta_class(index, data, std::string("p1")) == one);
  CHECK(beta_class(index, data, std::string("nothing")).is_zero());
  CHECK(beta_class(index, FixedLocusData{g, 2, {}}).is_zero());
}

TEST_CASE("beta ignores the order of components and entries") {
  const auto g = AbelianGroup::cyclic(7);
  const auto index = enumerate_symbols(g, 3, Flavor::B);
  const auto a = parse(g, "1,2,3\n0,0,1\n5,5,2\n");
  const auto b = parse(g, "2,5,5\n1,0,0\n3,1,2\n");
  CHECK(beta_class(index, a) == beta_class(index, b));
}

TEST_CASE("point blowup on P^2 under Z/3") {
  const auto g = AbelianGroup::cyclic(3);
  const auto rel = build_relations(g, 2, Flavor::B, full_kset(2));
  const auto& index = rel.index();
  const auto spec = point_blowup_p2();
  const auto delta = blowup_delta(index, spec);
  // class-equal to [1,0] + [2,0] - [1,2]
  SymbolVector expected;
  for (const auto& [t, c] : std::vector<std::pair<std::vector<Code>, int>>{{{1, 0}, 1}, {{2, 0}, 1}, {{1, 2}, -1}}) {
    const auto term = index.locate(t);
    expected.add(term.column, c * term.coefficient);
  }
  SymbolVector diff = delta;
  diff -= expected;
  CHECK(in_rowspan_z(rel.matrix(), diff.to_row()));
  const auto data = parse(g, "1,2\n2,1\n1,2\n");
  CHECK(apply_blowup(data, spec).components.size() == 4);
  CHECK(certify_invariance(data, spec, rel));
  CHECK(certify_invariance(data, spec, rel, SpanField::Z));
}

TEST_CASE("case II adds one component per character") {
  const auto g = AbelianGroup::cyclic(5);
  BlowupSpec s;
  s.kind = BlowupCase::II;
  s.d1 = 1;
  s.d4 = 2;
  s.a = {2};
  s.kappa = {2};
  // new component [-a, a, 0]
  const auto index = enumerate_symbols(g, 3, Flavor::B);
  const auto delta = blowup_delta(index, s);
  SymbolVector expected;
  const auto t = index.locate(std::vector<Code>{3, 2, 0});
  expected.add(t.column, t.coefficient);
  CHECK(delta == expected);
  const auto rel = build_relations(index, full_kset(3));
  const auto data = parse(g, "0,2,2\n");
  CHECK(apply_blowup(data, s).components.size() == 2);
  CHECK(certify_invariance(data, s, rel));
}

TEST_CASE("case III changes nothing") {
  const auto g = AbelianGroup::cyclic(4);
  BlowupSpec s;
  s.kind = BlowupCase::III;
  s.d1 = 2;
  s.d3 = 1;
  s.b = {1};
  const auto index = enumerate_symbols(g, 3, Flavor::B);
  CHECK(blowup_delta(index, s).is_zero());
}

TEST_CASE("blowup validation") {
  const auto g = AbelianGroup::cyclic(6);
  auto s = point_blowup_p2();
  s.a = {2, 4};  // does not span Z/6
  CHECK_THROWS_AS(s.validate(g), Error);
  s = point_blowup_p2();
  s.kappa = {1, 2};
  CHECK_THROWS_AS(s.validate(g), Error);
  s = point_blowup_p2();
  s.a = {1, 1};
  CHECK_THROWS_AS(s.validate(g), Error);
  s = point_blowup_p2();
  s.kind = BlowupCase::II;
  CHECK_THROWS_AS(s.validate(g), Error);
  s = point_blowup_p2();
  s.validate(g);
  // case I needs the component through the center
  const auto data = parse(g, "1,5\n");
  CHECK_THROWS_AS(apply_blowup(data, s), Error);
}

TEST_CASE("fixed locus file errors and round trip") {
  const auto g = AbelianGroup::cyclic(6);
  CHECK_THROWS_AS(parse(g, "1,2\n1,2,3\n"), Error);
  CHECK_THROWS_AS(parse(g, "2,4\n"), Error);
  const auto data = parse(g, "x : 5,1\n1,3\n");
  std::ostringstream out;
  write_fixed_locus(out, data);
  CHECK(out.str() == "x : 1;5\n1;3\n");
  const auto index = enumerate_symbols(g, 2, Flavor::B);
  std::istringstream in(out.str());
  CHECK(beta_class(index, read_fixed_locus(in, g)) == beta_class(index, data));
}

TEST_CASE("random blowups leave beta unchanged") {
  std::mt19937_64 rng(20240531);
  std::map<std::pair<std::int64_t, int>, RelationSystem> cache;
  for (auto kind : {BlowupCase::I, BlowupCase::II, BlowupCase::III})
    for (int sample = 0; sample < 60; ++sample) {
      const auto r = testing_support::random_blowup(rng, kind, 9, 4);
      const auto key = std::make_pair(r.group.order(), r.data.n);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, build_relations(r.group, r.data.n, Flavor::B, full_kset(r.data.n))).first;
      CAPTURE(key.first);
      CAPTURE(key.second);
      CHECK(certify_invariance(r.data, r.spec, it->second));
      CHECK(certify_invariance(r.data, r.spec, it->second, SpanField::Z));
    }
}
