#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "softpi/metrics.hpp"

using namespace softpi;

namespace {

// Chain of k spawns on chan, each handing its fresh session to a unit use.
Term spawn_chain(const Name& chan, int k, Term tail, bool sharp) {
  Term t = tail;
  for (int i = k; i >= 1; --i) {
    Name z = "z" + std::to_string(i);
    Term body = one_l(z, t);
    t = sharp ? flat_sharp(chan, z, body) : flat_bang(chan, z, body);
  }
  return t;
}

Term mult_client(int factors) {
  Term t = one_r("y");
  for (int i = 0; i + 1 < factors; ++i) {
    Name p = "p" + std::to_string(i);
    t = tens_r("y", p, one_r(p), t);
  }
  return bang_l_sharp("x", flat_sharp("x", "z", one_l("z", t)));
}

}  // namespace

TEST_CASE("process box depth counts replication nesting") {
  REQUIRE(bde_process(server("x", "y", server("z", "w", nil()))) == 2);
  REQUIRE(bde_process(nu("x", receive("y", "z", nil()))) == 0);
  REQUIRE(bde_process(par(server("x", "y", nil()), nil())) == 1);
  REQUIRE(bde_process(nil()) == 0);
}

TEST_CASE("term box depth boxes promotions and exponential cut servers") {
  REQUIRE(bde_term(one_r("x")) == 0);
  REQUIRE(bde_term(bang_r("x", "y", {}, one_r("y"))) == 1);
  REQUIRE(bde_term(cut_sharp("x", "y", one_r("y"),
                             one_l("c", one_r("s")))) == 1);
  Term nested = cut_bang("x", "y", bang_r("v", "w", {}, one_r("w")),
                         flat_bang("x", "z", one_l("z", one_r("s"))));
  REQUIRE(bde_term(nested) == 2);
  REQUIRE(bde_term(cut("x", one_r("x"), one_l("x", one_r("s")))) == 0);
}

TEST_CASE("term and process box depth and size agree through extraction") {
  std::vector<Term> samples = {
      one_r("x"),
      mult_client(4),
      bang_r("x", "y", {}, one_r("y")),
      cut_sharp("x", "y", one_r("y"),
                spawn_chain("x", 2, one_r("s"), true)),
      cut_bang("x", "y", bang_r("v", "w", {}, one_r("w")),
               flat_bang("x", "z", one_l("z", one_r("s")))),
      lolli_r("x", "y", one_l("y", one_r("x"))),
      with_r("x", plus_r1("x", ty_one(), one_r("x")), one_r("x")),
  };
  for (const Term& t : samples) {
    REQUIRE(bde_term(t) == bde_process(extract(t)));
    REQUIRE(size_term(t) == proc_size(extract(t)));
  }
  REQUIRE(size_term(one_r("x")) == 0);
  REQUIRE(size_term(bang_r("x", "y", {}, one_r("y"))) == 1);
}

TEST_CASE("spawn counts key on the channel and recurse through nests") {
  REQUIRE(foc("w", one_r("x")) == 0);
  REQUIRE(foc("x", flat_sharp("x", "y", one_r("s"))) == 1);
  REQUIRE(foc("x", spawn_chain("x", 2, one_r("s"), true)) == 2);
  REQUIRE(foc("x", spawn_chain("x", 5, one_r("s"), true)) == 5);
  REQUIRE(foc("a", spawn_chain("x", 3, one_r("s"), true)) == 0);
  Term two_sided = tens_r("o", "p", spawn_chain("x", 1, one_r("p"), true),
                          spawn_chain("x", 2, one_r("o"), true));
  REQUIRE(foc("x", two_sided) == 3);
  Term boxed = bang_r("q", "y", {"a"},
                      flat_bang("a", "z", one_l("z", one_r("y"))));
  REQUIRE(foc("a", boxed) == 0);
}

TEST_CASE("exponential cuts multiply spawn counts of their left premise") {
  Term l = flat_bang("a", "z", one_l("z", one_r("y")));
  Term r = spawn_chain("x", 2, one_r("s"), true);
  REQUIRE(foc("x", r) == 2);
  REQUIRE(foc("a", l) == 1);
  REQUIRE(foc("a", r) == 0);
  REQUIRE(foc("a", cut_bang("x", "y", l, r)) == 2);
  Term sharp = cut_sharp("x", "y", l, r);
  REQUIRE(foc("a", sharp) == foc("x", r) * foc("a", l) + foc("a", r));
  synthesize(sharp);
}

TEST_CASE("duplicability factor maxes spawn counts at promotion left rules") {
  REQUIRE(dupf(one_r("x")) == 0);
  Term three = bang_l_sharp("x", spawn_chain("x", 3, one_r("s"), true));
  REQUIRE(dupf(three) == 3);
  REQUIRE(dupf(mult_client(3)) == 1);
  Term left = bang_l_sharp("x", spawn_chain("x", 2, one_r("s"), true));
  Term right = bang_l_sharp("v", spawn_chain("v", 4, one_r("o"), true));
  REQUIRE(dupf(tens_r("o", "s", left, right)) == 4);
  REQUIRE(dupf(bang_r("q", "y", {}, one_r("y"))) == 0);
}

TEST_CASE("parameterized weight follows the definitional table") {
  REQUIRE(weip(5, one_r("x")) == 0);
  REQUIRE(weip(3, bang_r("x", "y", {}, one_r("y"))) == 3);
  REQUIRE(weip(0, bang_r("x", "y", {}, one_r("y"))) == 0);
  REQUIRE(weip(1, tens_l("c", "y", one_l("y", one_l("c", one_r("s"))))) == 1);
  REQUIRE(weip(4, with_r("x", one_r("x"), one_r("x"))) == 1);
  REQUIRE(weip(2, plus_r1("x", ty_one(), one_r("x"))) == 1);
  Term l3 = flat_bang("a", "z1",
                      one_l("z1", flat_bang("b", "z2",
                                            one_l("z2", flat_bang(
                                                "c", "z3",
                                                one_l("z3", one_r("y")))))));
  Term r2 = spawn_chain("x", 2, one_r("s"), true);
  REQUIRE(weip(2, l3) == 3);
  REQUIRE(weip(2, r2) == 2);
  REQUIRE(weip(2, cut_sharp("x", "w", l3, r2)) == 8);
  for (int n = 0; n <= 5; ++n) {
    Term t = cut_sharp("x", "w", l3, r2);
    REQUIRE(weip(n, t) == foc("x", r2) * weip(n, l3) + weip(n, r2));
  }
  Term nested_box = bang_r("x", "y", {},
                           tens_l("y", "u", one_l("u", one_l("y", one_r("s")))));
  REQUIRE(weip(2, nested_box) == 4);
  REQUIRE(weip(3, nested_box) == 6);
}

TEST_CASE("weight parameterization is monotone") {
  std::vector<Term> samples = {
      mult_client(3),
      bang_r("x", "y", {}, one_r("y")),
      cut_sharp("x", "w", one_r("w"), spawn_chain("x", 3, one_r("s"), true)),
      bang_r("x", "y", {},
             tens_l("y", "u", one_l("u", one_l("y", one_r("s"))))),
  };
  for (const Term& t : samples)
    for (int n = 0; n < 6; ++n) REQUIRE(weip(n, t) <= weip(n + 1, t));
}

TEST_CASE("weight at the duplicability factor") {
  REQUIRE(wei(one_r("x")) == 0);
  REQUIRE(wei(bang_r("x", "y", {}, one_r("y"))) == 0);
  REQUIRE(wei(mult_client(4)) == 4);
  Term served = cut_sharp("x", "y", one_r("y"),
                          spawn_chain("x", 2, one_r("s"), true));
  REQUIRE(dupf(served) == 0);
  REQUIRE(wei(served) == 2);
}

TEST_CASE("weights stay below the polynomial in size and box depth") {
  std::vector<Term> samples = {
      mult_client(2),
      mult_client(6),
      bang_l_sharp("x", spawn_chain("x", 3, one_r("s"), true)),
      cut_sharp("x", "y", one_r("y"), spawn_chain("x", 2, one_r("s"), true)),
      cut_bang("x", "y", bang_r("v", "w", {}, one_r("w")),
               flat_bang("x", "z", one_l("z", one_r("s")))),
  };
  for (const Term& t : samples) {
    Nat lo = nat_max(dupf(t), 1);
    for (Nat n : std::vector<Nat>{lo, Nat(lo + 1), Nat(lo + 5)}) {
      Nat degree = bde_term(t);
      Nat bound = size_term(t);
      for (Nat i = 0; i <= degree; ++i) bound *= n;
      REQUIRE(weip(n, t) <= bound);
    }
  }
}

TEST_CASE("lifting preserves every metric") {
  std::vector<Term> samples = {
      cut_bang("x", "y", flat_bang("a", "z", one_l("z", one_r("y"))),
               flat_bang("x", "z", one_l("z", one_r("s")))),
      bang_l_bang("x", flat_bang("x", "z", one_l("z", one_r("s")))),
      bang_r("x", "y", {"a"}, flat_bang("a", "z", one_l("z", one_r("y")))),
  };
  for (const Term& t : samples) {
    Term u = lift(t);
    REQUIRE(bde_term(u) == bde_term(t));
    REQUIRE(dupf(u) == dupf(t));
    REQUIRE(size_term(u) == size_term(t));
    for (int n = 0; n < 4; ++n) REQUIRE(weip(n, u) == weip(n, t));
    for (const Name& w : {"a", "x", "s"}) REQUIRE(foc(w, u) == foc(w, t));
  }
}

TEST_CASE("metric report assembles judgment-aware spawn counts") {
  WeightReport zero = report(one_r("x"));
  REQUIRE(zero.boxDepth == 0);
  REQUIRE(zero.dupFactor == 0);
  REQUIRE(zero.weight == 0);
  REQUIRE(zero.termSize == 0);
  REQUIRE(zero.perChannelFoc.empty());

  WeightReport m = report(mult_client(4));
  REQUIRE(m.boxDepth == 0);
  REQUIRE(m.dupFactor == 1);
  REQUIRE(m.weight == 4);
  REQUIRE(m.termSize == 4);
  REQUIRE(m.perChannelFoc.empty());

  Term open = cut_sharp(
      "x", "w", one_r("w"),
      flat_sharp("x", "z",
                 one_l("z", flat_bang("a", "v", one_l("v", one_r("s"))))));
  WeightReport o = report(open);
  REQUIRE(o.perChannelFoc.size() == 1);
  REQUIRE(o.perChannelFoc.at("a") == 1);

  REQUIRE_THROWS_AS(
      report(parse_term(
          "(bangR x0 y (x1) (flat! x1 z (1L z (flat! x1 w (1L w (1R y))))))")),
      TypeError);
}

TEST_CASE("context membership bounds spawn counts for typable terms") {
  std::vector<Term> samples = {
      mult_client(3),
      cut_sharp("x", "w", one_r("w"), spawn_chain("x", 2, one_r("s"), true)),
      cut_sharp("x", "w", flat_bang("a", "z", one_l("z", one_r("w"))),
                spawn_chain("x", 2, one_r("s"), true)),
      bang_l_sharp("x", spawn_chain("x", 3, one_r("s"), true)),
      lolli_r("x", "y", one_l("y", one_r("x"))),
  };
  for (const Term& t : samples) {
    Judgment j = synthesize(t).judgment;
    Nat sz = size_term(t);
    for (const auto& [name, ty] : j.auxiliary) REQUIRE(foc(name, t) <= 1);
    for (const auto& [name, ty] : j.multiplexor) REQUIRE(foc(name, t) <= sz);
    for (const auto& [name, ty] : j.linear) {
      REQUIRE(foc(name, t) <= sz);
      if (ty->kind != TypeKind::Bang) REQUIRE(foc(name, t) == 0);
    }
    REQUIRE(dupf(t) <= sz);
  }
}

TEST_CASE("a floated replication channel keeps a positive spawn count") {
  Term client = mult_client(2);
  Judgment j = synthesize(client).judgment;
  REQUIRE(j.linear.count("x") == 1);
  REQUIRE(j.linear.at("x")->kind == TypeKind::Bang);
  REQUIRE(foc("x", client) == 1);
}

TEST_CASE("box depth of cut-free terms never exceeds the judgment depth") {
  std::vector<Term> cut_free = {
      one_r("x"),
      mult_client(3),
      bang_r("x", "y", {}, one_r("y")),
      bang_r("x", "y", {}, lolli_r("y", "u", one_l("u", one_r("y")))),
      lolli_r("x", "y",
              bang_l_sharp("y", flat_sharp("y", "z", one_l("z", one_r("x"))))),
      with_r("x", plus_r1("x", ty_one(), one_r("x")), one_r("x")),
  };
  for (const Term& t : cut_free) {
    Judgment j = synthesize(t).judgment;
    REQUIRE(bde_term(t) <= judgment_depth(j));
  }
  REQUIRE(bde_term(bang_r("x", "y", {}, one_r("y"))) ==
          judgment_depth(synthesize(bang_r("x", "y", {}, one_r("y"))).judgment));
  Term client = mult_client(2);
  REQUIRE(bde_term(client) <
          judgment_depth(synthesize(client).judgment));
  Term closed = lolli_r(
      "x", "y",
      bang_l_sharp("y", flat_sharp("y", "z", one_l("z", one_r("x")))));
  REQUIRE(bde_term(closed) <
          judgment_depth(synthesize(closed).judgment));
}
