#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "softpi/canonical.hpp"
#include "softpi/generate.hpp"
#include "softpi/process.hpp"
#include "softpi/process_parse.hpp"

using namespace softpi;

TEST_CASE("free names of a case over outputs") {
  Process p = choice("x", send("y", "z", nil()), nil());
  REQUIRE(free_names(p) == NameSet{"x", "y", "z"});
}

TEST_CASE("free names respect binders") {
  Process p = nu("x", receive("x", "y", send("y", "w", nil())));
  REQUIRE(free_names(p) == NameSet{"w"});
  Process q = receive("x", "y", send("y", "y", nil()));
  REQUIRE(free_names(q) == NameSet{"x"});
}

TEST_CASE("substitution renames a colliding binder with a prime") {
  Process p = nu("z", send("x", "z", nil()));
  Process got = substitute(p, "x", "z");
  Process want = nu("z'", send("z", "z'", nil()));
  REQUIRE(proc_equal(got, want));
}

TEST_CASE("substitution stops at a shadowing binder") {
  Process p = receive("c", "x", send("x", "x", nil()));
  Process got = substitute(p, "x", "v");
  REQUIRE(proc_equal(got, p));
  Process q = receive("x", "x", send("x", "x", nil()));
  REQUIRE(proc_equal(substitute(q, "x", "v"),
                     receive("v", "x", send("x", "x", nil()))));
}

TEST_CASE("identity substitution is a no-op") {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    Process p = random_process(rng, 12);
    REQUIRE(proc_equal(substitute(p, "a", "a"), p));
  }
}

TEST_CASE("size counts prefixes only") {
  REQUIRE(proc_size(nil()) == 0);
  Process triple = nu(
      "x", send("y", "x",
                nu("x1", send("y", "x1", nu("x2", send("y", "x2", nil()))))));
  REQUIRE(proc_size(triple) == 3);
  Process deep_nu = nu("a", nu("b", nu("c", send("a", "b", nil()))));
  REQUIRE(proc_size(deep_nu) == 1);
  Process br = choice("x", send("y", "z", nil()), receive("y", "w", nil()));
  REQUIRE(proc_size(br) == 3);
}

TEST_CASE("size is invariant under substitution") {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    Process p = random_process(rng, 14);
    REQUIRE(proc_size(substitute(p, "a", "b")) == proc_size(p));
  }
}

TEST_CASE("alpha equivalence identifies renamed binders") {
  Process p = nu("x", receive("x", "y", send("y", "z", nil())));
  Process q = nu("u", receive("u", "v", send("v", "z", nil())));
  REQUIRE(alpha_eq(p, q));
  Process r = nu("u", receive("u", "v", send("v", "w", nil())));
  REQUIRE_FALSE(alpha_eq(p, r));
  REQUIRE_FALSE(alpha_eq(receive("x", "y", nil()), send("x", "y", nil())));
}

TEST_CASE("canonical form erases nil and dead restrictions") {
  Process p = send("x", "y", nil());
  REQUIRE(proc_equal(canonical_form(par(p, nil())), canonical_form(p)));
  REQUIRE(proc_equal(canonical_form(par(nil(), p)), canonical_form(p)));
  REQUIRE(canonical_form(nu("a", nil()))->kind == ProcKind::Nil);
  REQUIRE(proc_equal(canonical_form(nu("a", p)), canonical_form(p)));
}

TEST_CASE("canonical form is invariant under composition order") {
  Process a = send("x", "y", nil());
  Process b = receive("x", "z", send("z", "w", nil()));
  Process c = server("u", "v", nil());
  Process left = par(par(a, b), c);
  Process right = par(c, par(b, a));
  REQUIRE(proc_equal(canonical_form(left), canonical_form(right)));
  REQUIRE(struct_congruent(left, right));
}

TEST_CASE("restriction swap is congruent") {
  Process body = send("x", "y", nil());
  REQUIRE(struct_congruent(nu("x", nu("y", body)), nu("y", nu("x", body))));
}

TEST_CASE("scope extrusion is congruent") {
  Process p = send("x", "a", nil());
  Process q = receive("b", "w", nil());
  REQUIRE(struct_congruent(par(nu("x", p), q), nu("x", par(p, q))));
}

TEST_CASE("distinct prefixes are not congruent") {
  REQUIRE_FALSE(struct_congruent(receive("x", "y", nil()), send("x", "y", nil())));
  REQUIRE_FALSE(struct_congruent(sel_l("x", nil()), sel_r("x", nil())));
}

TEST_CASE("canonical form is idempotent on random processes") {
  std::mt19937 rng(23);
  for (int i = 0; i < 120; ++i) {
    Process p = random_process(rng, 16);
    Process c = canonical_form(p);
    REQUIRE(proc_equal(canonical_form(c), c));
    REQUIRE(free_names(c) == free_names(p));
    REQUIRE(proc_size(c) == proc_size(p));
  }
}

TEST_CASE("random congruence rewrites preserve the canonical form") {
  std::mt19937 rng(31);
  for (int round = 0; round < 40; ++round) {
    Process p = random_process(rng, 12);
    Process c = canonical_form(p);
    Process q = p;
    for (int step = 0; step < 25; ++step) {
      auto [axiom, next] = congruence_rewrite(q, rng);
      INFO("axiom " << axiom << " on " << proc_to_string(q));
      REQUIRE(proc_size(next) == proc_size(p));
      q = next;
    }
    REQUIRE(proc_equal(canonical_form(q), c));
  }
}

TEST_CASE("canonical node count stays polynomial in size") {
  std::mt19937 rng(47);
  for (int i = 0; i < 100; ++i) {
    Process p = random_process(rng, 18);
    Nat s = proc_size(p);
    REQUIRE(node_count(canonical_form(p)) <= (s + 1) * (s + 1));
  }
}

TEST_CASE("parser round trips the printer") {
  std::mt19937 rng(59);
  for (int i = 0; i < 80; ++i) {
    Process p = random_process(rng, 12);
    Process q = parse_process(proc_to_string(p));
    REQUIRE(proc_equal(p, q));
  }
}

TEST_CASE("parser handles the concrete syntax forms") {
  REQUIRE(parse_process("0")->kind == ProcKind::Nil);
  Process p = parse_process("new x. (x!(y). 0 | x?(z). z.inl. 0)");
  REQUIRE(p->kind == ProcKind::New);
  REQUIRE(p->left->kind == ProcKind::Par);
  Process rep = parse_process("!srv?(req). case req { inl: 0 ; inr: req!(a). 0 }");
  REQUIRE(rep->kind == ProcKind::RepIn);
  REQUIRE(rep->left->kind == ProcKind::Case);
  Process bar = parse_process("a?(x). 0 | b!(y). 0 | c.inr. 0");
  REQUIRE(bar->kind == ProcKind::Par);
  REQUIRE(bar->left->kind == ProcKind::Par);
  Process scoped = parse_process("new x. a?(y). 0 | b!(z). 0");
  REQUIRE(scoped->kind == ProcKind::Par);
}

TEST_CASE("parser reports line and column") {
  try {
    parse_process("a?(x). 0 |\n  b!(. 0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 2);
    REQUIRE(e.col >= 6);
  }
  REQUIRE_THROWS_AS(parse_process("case x { inl: 0 }"), ParseError);
  REQUIRE_THROWS_AS(parse_process("a?(x). 0 extra"), ParseError);
}

TEST_CASE("inert processes are detected") {
  REQUIRE(is_inert(nil()));
  REQUIRE(is_inert(nu("x", server("x", "y", send("y", "z", nil())))));
  Process live = nu("x", par(server("x", "y", nil()),
                             nu("z", send("x", "z", nil()))));
  REQUIRE_FALSE(is_inert(live));
  Process free_server = server("x", "y", nil());
  REQUIRE_FALSE(is_inert(free_server));
  Process chained =
      nu("x", nu("u", par(server("x", "y", send("u", "y", nil())),
                          server("u", "v", nil()))));
  REQUIRE(is_inert(chained));
}
