#include <doctest.h>

#include <random>

#include "gcv/lefschetz.hpp"

using namespace gcv;

namespace {

FibrationWord random_word(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<long> entry(-4, 4);
  std::uniform_int_distribution<std::size_t> len(2, max_len);
  FibrationWord w;
  std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w.cycles.push_back({entry(rng), entry(rng)});
  return w;
}

Cycle a_plus(long k) { return {1, k}; }

}  // namespace

TEST_CASE("twist examples") {
  CHECK(twist({1, -3}, {1, -4}, -1) == Cycle{0, -1});
  CHECK(twist({1, -3}, {1, -4}, 1) == Cycle{2, -7});
  CHECK(twist({2, 5}, {2, 5}, -1) == Cycle{2, 5});
  CHECK(twist(cycle_b, cycle_a, 1) == Cycle{1, 1});
  CHECK(intersection(cycle_a, cycle_b) == 1);
  CHECK(Cycle{1, -3}.str() == "a-3b");
  CHECK(Cycle{0, -1}.str() == "-b");
  CHECK(Cycle{2, 1}.str() == "2a+b");
  CHECK(Cycle{}.str() == "0");
  CHECK(Cycle{-1, 2}.canonical() == Cycle{1, -2});
  CHECK(Cycle{0, -1}.canonical() == cycle_b);
}

TEST_CASE("twist preserves the intersection pairing") {
  for (long p = -5; p <= 5; ++p) {
    for (long q = -5; q <= 5; ++q) {
      Cycle v{p, q};
      for (int d : {-1, 1}) {
        CHECK(det(twist_matrix(v, d)) == 1);
        for (long s = -2; s <= 2; ++s) {
          for (long t = -2; t <= 2; ++t) {
            Cycle c1{s, t}, c2{t - s, s + 1};
            if (intersection(twist(v, c1, d), twist(v, c2, d)) != intersection(c1, c2)) FAIL("pairing changed");
          }
        }
      }
    }
  }
}

TEST_CASE("monodromy") {
  CHECK(total_monodromy(FibrationWord{}) == identity2());
  CHECK(total_monodromy(FibrationWord{{cycle_b}}) == Mat2{{{1, 0}, {-1, 1}}});
  FibrationWord ab;
  for (int k = 0; k < 6; ++k) {
    ab.cycles.push_back(cycle_a);
    ab.cycles.push_back(cycle_b);
  }
  CHECK(total_monodromy(ab) == identity2());
  CHECK(twist_matrix({1, -3}) * Cycle{1, -4} == twist({1, -3}, {1, -4}, -1));
}

TEST_CASE("hurwitz moves") {
  FibrationWord w{{cycle_b, cycle_a}};
  auto r = hurwitz_move(w, 0, 1);
  CHECK(r.cycles == std::vector<Cycle>{cycle_a, {-1, 1}});
  CHECK(hurwitz_move(r, 0, -1) == w);
  CHECK_THROWS_AS(hurwitz_move(w, 1, 1), WordError);
  CHECK_THROWS_AS(hurwitz_move(w, 0, 2), WordError);

  std::mt19937_64 rng(0x1ef5c0);
  for (int trial = 0; trial < 300; ++trial) {
    FibrationWord x = random_word(rng, 12);
    Mat2 before = total_monodromy(x);
    std::uniform_int_distribution<std::size_t> pos(0, x.size() - 2);
    for (int k = 0; k < 8; ++k) {
      std::size_t i = pos(rng);
      int d = (rng() & 1) ? 1 : -1;
      FibrationWord y = hurwitz_move(x, i, d);
      CHECK(hurwitz_move(y, i, -d) == x);
      x = std::move(y);
    }
    CHECK(total_monodromy(x) == before);
  }
}

TEST_CASE("E(1) and iterated fiber sums") {
  auto e1 = build_E1();
  CHECK(e1.word.size() == 12);
  CHECK(sorted_multiset(e1.word) == normalized_family(1));
  REQUIRE(e1.certificate);
  CHECK(e1.certificate->moves.empty());
  CHECK(total_monodromy(e1.word) == identity2());
  CHECK(build_En(1).word == e1.word);

  auto e2 = build_En(2);
  CHECK(e2.word.size() == 24);
  std::vector<Cycle> nonb;
  for (const auto& c : e2.word.cycles) {
    if (!same_up_to_sign(c, cycle_b)) nonb.push_back(c);
  }
  CHECK(nonb == std::vector<Cycle>{a_plus(3), a_plus(0), a_plus(-3), a_plus(-4), a_plus(-7), a_plus(-10)});
  REQUIRE(e2.certificate);
  for (int n = 1; n <= 5; ++n) {
    auto en = build_En(n, 0);
    CHECK(en.word.size() == static_cast<std::size_t>(12 * n));
    CHECK(en.certificate.has_value());
  }

  FibrationWord broken = e1.word;
  broken.cycles[0] = a_plus(2);
  CHECK_FALSE(identity_certificate(broken, 1).has_value());
}

TEST_CASE("rotation certificate") {
  auto e1 = build_E1().word;
  auto cert = rotation_certificate(e1, 3);
  auto rotated = replay(e1, cert);
  std::vector<Cycle> expected(e1.cycles.begin() + 3, e1.cycles.end());
  expected.insert(expected.end(), e1.cycles.begin(), e1.cycles.begin() + 3);
  CHECK(rotated.cycles == expected);
  CHECK_THROWS_AS(rotation_certificate(FibrationWord{{cycle_a}}, 1), WordError);
}

TEST_CASE("marking and boundary sums") {
  auto e1 = build_E1().word;
  auto hat = log_mark(e1, cycle_b);
  CHECK(hat.base == Base::disk);
  CHECK(hat.boundary == cycle_b);
  CHECK(hat.cycles == e1.cycles);
  CHECK(log_mark(e1, cycle_a).boundary == cycle_a);
  CHECK_THROWS_AS(log_mark(hat, cycle_b), WordError);
  CHECK_THROWS_AS(boundary_connected_sum(e1, hat, identity2()), WordError);

  Mat2 ident{{{1, 0}, {-7, 1}}};
  auto sum = boundary_connected_sum(hat, hat, ident);
  CHECK(sum.word.size() == 24);
  CHECK_FALSE(sum.orientation_reversed);
  CHECK(sum.word.cycles[12] == a_plus(-4));
  auto plain = boundary_connected_sum(hat, hat, identity2());
  std::vector<Cycle> twice = e1.cycles;
  twice.insert(twice.end(), e1.cycles.begin(), e1.cycles.end());
  CHECK(plain.word.cycles == twice);
  CHECK(boundary_connected_sum(hat, hat, Mat2{{{-1, 0}, {0, 1}}}).orientation_reversed);
  CHECK_THROWS_AS(boundary_connected_sum(hat, hat, Mat2{{{1, 1}, {0, 1}}}), WordError);
  CHECK_THROWS_AS(boundary_connected_sum(hat, hat, Mat2{{{2, 0}, {0, 1}}}), WordError);
}

TEST_CASE("brane search") {
  auto hat1 = log_mark(build_E1().word, cycle_b);
  auto s1 = brane_search(hat1, 0);
  CHECK(s1.witnesses.size() == 9);
  for (const auto& w : s1.witnesses) CHECK(w.transport.empty());

  auto hat2 = log_mark(build_En(2).word, cycle_b);
  CHECK(brane_search(hat2, 0).witnesses.size() == 18);
  auto s2 = brane_search(hat2, 3);
  CHECK(s2.witnesses.size() == 19);
  const BraneWitness* gamma = nullptr;
  for (const auto& w : s2.witnesses) {
    CHECK(same_up_to_sign(replay_transport(hat2, w), cycle_b));
    if (!w.transport.empty()) gamma = &w;
  }
  REQUIRE(gamma != nullptr);
  CHECK(gamma->index == 12);
  CHECK(hat2.cycles[12] == a_plus(-4));
  CHECK(gamma->transport == std::vector<Crossing>{{11, -1}});
  CHECK(hat2.cycles[11] == a_plus(-3));
  CHECK(gamma->result == Cycle{0, -1});

  FibrationWord none = log_mark(FibrationWord{{cycle_a, cycle_a}}, cycle_b);
  auto empty = brane_search(none, 1);
  CHECK(empty.witnesses.empty());
  CHECK_FALSE(empty.exhausted);
  CHECK(brane_search(log_mark(FibrationWord{{cycle_a, cycle_a, cycle_a}}, cycle_b), 1).exhausted);
  CHECK_THROWS_AS(brane_search(build_E1().word, 1), WordError);
}

TEST_CASE("cycle normalization") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    auto hat = log_mark(build_En(n).word, cycle_b);
    auto norm = normalize_cycles(hat, n);
    CHECK(sorted_multiset(norm.word) == normalized_family(n));
    CHECK(norm.word.size() == static_cast<std::size_t>(12 * n));
    CHECK(norm.gamma_moves.size() == static_cast<std::size_t>(n - 1));
    CHECK(replay(hat, norm.certificate) == norm.word);
    CHECK(total_monodromy(norm.word) == identity2());
    auto again = normalize_cycles(norm.word, 1);
    CHECK(sorted_multiset(again.word) == sorted_multiset(norm.word));
    CHECK(brane_search(norm.word, 0).witnesses.size() == static_cast<std::size_t>(10 * n - 1));
  }
  auto family2 = normalized_family(2);
  std::vector<Cycle> expected = {a_plus(-7), a_plus(-4), a_plus(0), a_plus(4), a_plus(7)};
  expected.insert(expected.end(), 19, cycle_b);
  std::sort(expected.begin(), expected.end());
  CHECK(family2 == expected);
  CHECK_THROWS_AS(normalize_cycles(log_mark(build_En(3).word, cycle_b), 3, 5), WordError);
  CHECK_THROWS_AS(normalize_cycles(log_mark(build_E1().word, cycle_a), 1), WordError);
}

TEST_CASE("blow-down bookkeeping") {
  auto hat1 = log_mark(build_E1().word, cycle_b);
  auto rec = blow_down_word(hat1, brane_search(hat1, 0).witnesses);
  CHECK(rec.count == 9);
  CHECK(rec.delta_chi == -9);
  CHECK(rec.delta_b2_minus == -9);
  CHECK(rec.delta_sigma == 9);
  CHECK(rec.self_intersections == std::vector<int>(9, -1));
  CHECK(blow_down_word(hat1, {}).count == 0);
  auto hat2 = log_mark(build_En(2).word, cycle_b);
  CHECK(blow_down_word(hat2, brane_search(hat2, 3).witnesses).delta_chi == -19);
  BraneWitness dup{3, {}, cycle_b};
  CHECK_THROWS_AS(blow_down_word(hat1, {dup, dup}), WordError);
  CHECK_THROWS_AS(blow_down_word(hat1, {BraneWitness{0, {}, cycle_b}}), WordError);
}

TEST_CASE("text and dot formats") {
  auto hat2 = log_mark(build_En(2).word, cycle_b);
  auto norm = normalize_cycles(hat2, 2);
  std::string text = to_text(hat2, &norm.certificate);
  auto file = parse_word(text);
  CHECK(file.word == hat2);
  CHECK(file.certificate == norm.certificate);
  CHECK(replay(file.word, file.certificate) == norm.word);
  CHECK(parse_word("; comment\n1 3\n0 1\n").word.base == Base::sphere);
  CHECK_THROWS_AS(parse_word("1 2 3\n"), WordError);
  CHECK_THROWS_AS(parse_word("#base disk\n1 0\n"), WordError);
  CHECK_THROWS_AS(parse_word("#frob\n"), WordError);
  try {
    parse_word("1 0\n#move 0 3\n");
    FAIL("expected a parse error");
  } catch (const WordError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::string dot = to_dot(hat2, brane_search(hat2, 3).witnesses);
  CHECK(dot.find("graph fibration {") == 0);
  CHECK(dot.find("cv12 -- boundary [style=dashed];") != std::string::npos);
  CHECK(dot.find("label=\"a-10b\"") != std::string::npos);
}

TEST_CASE("cycle text round trip") {
  for (long p = -3; p <= 3; ++p) {
    for (long q = -12; q <= 12; ++q) CHECK(parse_cycle(Cycle{p, q}.str()) == Cycle{p, q});
  }
  CHECK(parse_cycle("a-4b") == Cycle{1, -4});
  for (const char* bad : {"", "b+a", "a+", "2", "aa", "x", "a b"}) CHECK_THROWS_AS(parse_cycle(bad), std::invalid_argument);
}
