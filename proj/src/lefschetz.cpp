#include "gcv/lefschetz.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>

namespace gcv {

Cycle Cycle::canonical() const {
  if (p < 0 || (p == 0 && q < 0)) return -*this;
  return *this;
}

std::string Cycle::str() const {
  if (p == 0 && q == 0) return "0";
  std::string out;
  auto term = [&](long k, const char* name) {
    if (k == 0) return;
    if (k < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    long m = k < 0 ? -k : k;
    if (m != 1) out += std::to_string(m);
    out += name;
  };
  term(p, "a");
  term(q, "b");
  return out;
}

Cycle parse_cycle(std::string_view text) {
  if (text == "0") return {};
  Cycle out;
  bool seen_a = false, seen_b = false;
  std::size_t i = 0;
  auto fail = [&]() { return std::invalid_argument("bad cycle '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  while (i < text.size()) {
    long sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      if (text[i] == '-') sign = -1;
      ++i;
    } else if (i != 0) {
      throw fail();
    }
    long k = 1;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) k = std::stol(std::string(text.substr(start, i - start)));
    if (i >= text.size()) throw fail();
    if (text[i] == 'a' && !seen_a && !seen_b) {
      out.p = sign * k;
      seen_a = true;
    } else if (text[i] == 'b' && !seen_b) {
      out.q = sign * k;
      seen_b = true;
    } else {
      throw fail();
    }
    ++i;
  }
  return out;
}

long intersection(const Cycle& c, const Cycle& v) { return c.p * v.q - c.q * v.p; }

bool same_up_to_sign(const Cycle& c, const Cycle& v) { return c == v || c == -v; }

Cycle twist(const Cycle& v, const Cycle& c, int direction) {
  long k = direction * intersection(c, v);
  return {c.p + k * v.p, c.q + k * v.q};
}

Mat2 identity2() { return Mat2{{{1, 0}, {0, 1}}}; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  }
  return out;
}

Cycle operator*(const Mat2& m, const Cycle& c) { return {m[0][0] * c.p + m[0][1] * c.q, m[1][0] * c.p + m[1][1] * c.q}; }

long det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Mat2 twist_matrix(const Cycle& v, int direction) {
  Cycle ca = twist(v, cycle_a, direction);
  Cycle cb = twist(v, cycle_b, direction);
  return Mat2{{{ca.p, cb.p}, {ca.q, cb.q}}};
}

namespace {

void check_direction(int direction) {
  if (direction != 1 && direction != -1) throw WordError("direction must be 1 or -1");
}

void move_in_place(std::vector<Cycle>& c, std::size_t i, int direction) {
  if (i + 1 >= c.size()) throw WordError("move index " + std::to_string(i) + " out of range");
  check_direction(direction);
  if (direction > 0) {
    Cycle moved = twist(c[i + 1], c[i], 1);
    c[i] = c[i + 1];
    c[i + 1] = moved;
  } else {
    Cycle moved = twist(c[i], c[i + 1], -1);
    c[i + 1] = c[i];
    c[i] = moved;
  }
}

bool is_identity(const Mat2& m) { return m == identity2(); }

const std::vector<Cycle>& e1_cycles() {
  static const std::vector<Cycle> cycles = [] {
    std::vector<Cycle> c = {{1, 3}, {1, 0}, {1, -3}};
    c.insert(c.end(), 9, cycle_b);
    return c;
  }();
  return cycles;
}

}  // namespace

FibrationWord hurwitz_move(const FibrationWord& w, std::size_t i, int direction) {
  FibrationWord out = w;
  move_in_place(out.cycles, i, direction);
  return out;
}

Mat2 total_monodromy(const FibrationWord& w) {
  Mat2 m = identity2();
  for (const auto& v : w.cycles) m = m * twist_matrix(v, -1);
  return m;
}

FibrationWord replay(const FibrationWord& w, const Certificate& cert) {
  if (det(cert.basis) != 1 && det(cert.basis) != -1) throw WordError("basis change is not invertible over Z");
  FibrationWord out = w;
  for (const auto& m : cert.moves) move_in_place(out.cycles, m.index, m.direction);
  for (auto& c : out.cycles) c = cert.basis * c;
  if (out.boundary) out.boundary = cert.basis * *out.boundary;
  return out;
}

std::optional<Certificate> identity_certificate(const FibrationWord& w, int budget) {
  struct Node {
    std::vector<Cycle> cycles;
    std::vector<Move> moves;
  };
  std::deque<Node> queue{{w.cycles, {}}};
  std::set<std::vector<Cycle>> seen{w.cycles};
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    FibrationWord probe{node.cycles, w.base, w.boundary};
    if (is_identity(total_monodromy(probe))) return Certificate{node.moves, identity2()};
    if (static_cast<int>(node.moves.size()) >= budget) continue;
    for (std::size_t i = 0; i + 1 < node.cycles.size(); ++i) {
      for (int d : {-1, 1}) {
        Node next = node;
        move_in_place(next.cycles, i, d);
        if (!seen.insert(next.cycles).second) continue;
        next.moves.push_back({i, d});
        queue.push_back(std::move(next));
      }
    }
  }
  return std::nullopt;
}

BuiltFibration build_E1(int budget) {
  FibrationWord w{e1_cycles(), Base::sphere, std::nullopt};
  auto cert = identity_certificate(w, budget);
  return {std::move(w), std::move(cert)};
}

BuiltFibration build_En(int n, int budget) {
  if (n < 1) throw WordError("n must be at least 1");
  FibrationWord w{e1_cycles(), Base::sphere, std::nullopt};
  for (int k = 2; k <= n; ++k) {
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!same_up_to_sign(w.cycles[i], cycle_b)) last = i;
    }
    std::rotate(w.cycles.begin(), w.cycles.begin() + static_cast<long>(last + 1), w.cycles.end());
    Mat2 ident{{{1, 0}, {-7L * (k - 1), 1}}};
    for (const auto& c : e1_cycles()) w.cycles.push_back(ident * c);
  }
  auto cert = identity_certificate(w, budget);
  return {std::move(w), std::move(cert)};
}

Certificate rotation_certificate(const FibrationWord& w, std::size_t k) {
  if (!is_identity(total_monodromy(w))) throw WordError("rotation needs identity monodromy");
  Certificate cert;
  if (w.size() < 2) return cert;
  for (std::size_t r = 0; r < k % w.size(); ++r) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) cert.moves.push_back({i, 1});
  }
  return cert;
}

FibrationWord log_mark(const FibrationWord& w, const Cycle& collapse) {
  if (w.boundary) throw WordError("word already has a marked boundary");
  if (collapse.p == 0 && collapse.q == 0) throw WordError("boundary cycle must be nonzero");
  FibrationWord out = w;
  out.base = Base::disk;
  out.boundary = collapse;
  return out;
}

BoundarySum boundary_connected_sum(const FibrationWord& w1, const FibrationWord& w2, const Mat2& identification) {
  if (!w1.boundary || !w2.boundary) throw WordError("boundary connected sum needs two marked words");
  long d = det(identification);
  if (d != 1 && d != -1) throw WordError("identification must have determinant 1 or -1");
  if (identification * *w2.boundary != *w1.boundary) {
    throw WordError("identification sends " + w2.boundary->str() + " to " + (identification * *w2.boundary).str() +
                    ", not " + w1.boundary->str());
  }
  BoundarySum out{w1, d < 0};
  for (const auto& c : w2.cycles) out.word.cycles.push_back(identification * c);
  return out;
}

Cycle replay_transport(const FibrationWord& w, const BraneWitness& witness) {
  if (witness.index >= w.size()) throw WordError("witness index out of range");
  Cycle c = w.cycles[witness.index];
  for (const auto& x : witness.transport) {
    if (x.crossed >= w.size()) throw WordError("crossing index out of range");
    check_direction(x.direction);
    c = twist(w.cycles[x.crossed], c, x.direction);
  }
  return c;
}

std::vector<std::size_t> footprint(const BraneWitness& witness) {
  std::vector<std::size_t> out{witness.index};
  for (const auto& x : witness.transport) out.push_back(x.crossed);
  return out;
}

BraneSearch brane_search(const FibrationWord& w, int budget) {
  if (!w.boundary) throw WordError("brane search needs a marked boundary");
  const Cycle target = *w.boundary;
  const std::size_t n = w.size();
  BraneSearch out;
  std::vector<BraneWitness> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (same_up_to_sign(w.cycles[i], target)) {
      candidates.push_back({i, {}, w.cycles[i]});
      continue;
    }
    std::optional<BraneWitness> found;
    for (int len = 1; len <= budget && !found; ++len) {
      for (int d : {-1, 1}) {
        long end = static_cast<long>(i) + d * len;
        if (end < 0 || end >= static_cast<long>(n)) continue;
        BraneWitness wit{i, {}, w.cycles[i]};
        for (int s = 1; s <= len; ++s) {
          std::size_t j = static_cast<std::size_t>(static_cast<long>(i) + d * s);
          wit.transport.push_back({j, d});
          wit.result = twist(w.cycles[j], wit.result, d);
        }
        if (same_up_to_sign(wit.result, target)) {
          found = std::move(wit);
          break;
        }
      }
    }
    if (found) {
      candidates.push_back(std::move(*found));
    } else if (static_cast<long>(i) - budget - 1 >= 0 || i + static_cast<std::size_t>(budget) + 1 < n) {
      out.exhausted = true;
    }
  }
  auto dir = [](const BraneWitness& x) { return x.transport.empty() ? -1 : x.transport.front().direction; };
  std::stable_sort(candidates.begin(), candidates.end(), [&](const BraneWitness& x, const BraneWitness& y) {
    if (x.transport.size() != y.transport.size()) return x.transport.size() < y.transport.size();
    if (dir(x) != dir(y)) return dir(x) < dir(y);
    return x.index < y.index;
  });
  std::set<std::size_t> used;
  for (auto& c : candidates) {
    auto fp = footprint(c);
    if (std::any_of(fp.begin(), fp.end(), [&](std::size_t k) { return used.count(k) != 0; })) continue;
    used.insert(fp.begin(), fp.end());
    out.witnesses.push_back(std::move(c));
  }
  std::sort(out.witnesses.begin(), out.witnesses.end(),
            [](const BraneWitness& x, const BraneWitness& y) { return x.index < y.index; });
  return out;
}

Normalization normalize_cycles(const FibrationWord& w, int n, std::size_t max_moves) {
  if (n < 1) throw WordError("n must be at least 1");
  if (!w.boundary || !same_up_to_sign(*w.boundary, cycle_b)) throw WordError("normalization needs boundary b");
  Normalization out{w, {}, {}};
  std::vector<Cycle> c = w.cycles;
  auto is_b = [](const Cycle& x) { return same_up_to_sign(x, cycle_b); };
  auto step = [&](std::size_t i, int d) {
    if (out.certificate.moves.size() >= max_moves) throw WordError("normalization exceeded the move budget");
    move_in_place(c, i, d);
    out.certificate.moves.push_back({i, d});
  };
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (!is_b(c[i]) && !is_b(c[i - 1]) && is_b(twist(c[i - 1], c[i], -1))) {
      step(i - 1, -1);
      out.gamma_moves.push_back({i - 1, -1});
    }
  }
  std::size_t prefix = 0;
  while (prefix < c.size() && is_b(c[prefix])) ++prefix;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = prefix + 1; i < c.size(); ++i) {
      if (is_b(c[i - 1]) && !is_b(c[i])) {
        step(i - 1, -1);
        changed = true;
      }
    }
  }
  out.certificate.basis = Mat2{{{1, 0}, {4L * (n - 1), 1}}};
  out.word = replay(w, out.certificate);
  return out;
}

std::vector<Cycle> normalized_family(int n) {
  if (n < 1) throw WordError("n must be at least 1");
  std::vector<Cycle> out = {{1, 4L * n - 1}, {1, -(4L * n - 1)}};
  for (long k = n - 1; k >= 1 - n; --k) out.push_back({1, 4 * k});
  out.insert(out.end(), static_cast<std::size_t>(10 * n - 1), cycle_b);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cycle> sorted_multiset(const FibrationWord& w) {
  std::vector<Cycle> out;
  for (const auto& c : w.cycles) out.push_back(c.canonical());
  std::sort(out.begin(), out.end());
  return out;
}

BlowDownRecord blow_down_word(const FibrationWord& w, const std::vector<BraneWitness>& witnesses) {
  if (!w.boundary) throw WordError("blow-down needs a marked boundary");
  std::set<std::size_t> used;
  BlowDownRecord rec;
  for (const auto& wit : witnesses) {
    if (!same_up_to_sign(replay_transport(w, wit), *w.boundary)) {
      throw WordError("witness at " + std::to_string(wit.index) + " does not reach the boundary cycle");
    }
    for (auto k : footprint(wit)) {
      if (!used.insert(k).second) throw WordError("witnesses overlap at position " + std::to_string(k));
    }
    rec.self_intersections.push_back(-1);
  }
  rec.count = static_cast<int>(witnesses.size());
  rec.delta_chi = -rec.count;
  rec.delta_sigma = rec.count;
  rec.delta_b2_minus = -rec.count;
  return rec;
}

std::string to_text(const FibrationWord& w, const Certificate* cert) {
  std::ostringstream out;
  out << "#base " << (w.base == Base::sphere ? "sphere" : "disk") << "\n";
  if (w.boundary) out << "#boundary " << w.boundary->p << " " << w.boundary->q << "\n";
  for (const auto& c : w.cycles) out << c.p << " " << c.q << "\n";
  if (cert) {
    for (const auto& m : cert->moves) out << "#move " << m.index << " " << m.direction << "\n";
    const Mat2& b = cert->basis;
    if (b != identity2()) out << "#basis " << b[0][0] << " " << b[0][1] << " " << b[1][0] << " " << b[1][1] << "\n";
  }
  return out.str();
}

WordFile parse_word(std::string_view text) {
  WordFile file;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  bool saw_base = false;
  while (std::getline(in, line)) {
    ++number;
    auto fail = [&](const std::string& why) {
      throw WordError("line " + std::to_string(number) + ": " + why);
    };
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == ';') continue;
    std::vector<long> nums;
    auto read_nums = [&](std::size_t count) {
      long x;
      while (ls >> x) nums.push_back(x);
      if (!ls.eof() || nums.size() != count) fail("expected " + std::to_string(count) + " integers");
    };
    if (head == "#base") {
      std::string kind;
      ls >> kind;
      if (kind == "sphere") {
        file.word.base = Base::sphere;
      } else if (kind == "disk") {
        file.word.base = Base::disk;
      } else {
        fail("unknown base '" + kind + "'");
      }
      saw_base = true;
    } else if (head == "#boundary") {
      read_nums(2);
      file.word.boundary = Cycle{nums[0], nums[1]};
    } else if (head == "#move") {
      read_nums(2);
      if (nums[0] < 0 || (nums[1] != 1 && nums[1] != -1)) fail("bad move");
      file.certificate.moves.push_back({static_cast<std::size_t>(nums[0]), static_cast<int>(nums[1])});
    } else if (head == "#basis") {
      read_nums(4);
      file.certificate.basis = Mat2{{{nums[0], nums[1]}, {nums[2], nums[3]}}};
    } else if (head[0] == '#') {
      fail("unknown directive " + head);
    } else {
      std::istringstream whole(line);
      long p, q;
      std::string extra;
      if (!(whole >> p >> q) || (whole >> extra)) fail("expected a cycle 'p q'");
      file.word.cycles.push_back({p, q});
    }
  }
  if (!saw_base) file.word.base = file.word.boundary ? Base::disk : Base::sphere;
  if (file.word.boundary.has_value() != (file.word.base == Base::disk)) {
    throw WordError("a disk base needs a boundary cycle and a sphere base has none");
  }
  return file;
}

std::string to_dot(const FibrationWord& w, const std::vector<BraneWitness>& witnesses) {
  std::ostringstream out;
  out << "graph fibration {\n  node [shape=circle];\n  base [shape=point];\n";
  for (std::size_t i = 0; i < w.size(); ++i) {
    out << "  cv" << i << " [label=\"" << w.cycles[i].str() << "\"];\n";
    out << "  base -- cv" << i << ";\n";
  }
  if (w.boundary) {
    out << "  boundary [shape=doublecircle, label=\"" << w.boundary->str() << "\"];\n";
    for (const auto& wit : witnesses) out << "  cv" << wit.index << " -- boundary [style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace gcv
