#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcv {

/// p·a + q·b in H1(T²; Z).
struct Cycle {
  long p = 0;
  long q = 0;

  /// Representative with first nonzero entry positive.
  Cycle canonical() const;
  Cycle operator-() const { return {-p, -q}; }
  /// "a+3b", "-b", "2a-b", "0".
  std::string str() const;
  friend bool operator==(const Cycle&, const Cycle&) = default;
  friend auto operator<=>(const Cycle&, const Cycle&) = default;
};

/// Inverse of Cycle::str. Throws std::invalid_argument.
Cycle parse_cycle(std::string_view text);

inline constexpr Cycle cycle_a{1, 0};
inline constexpr Cycle cycle_b{0, 1};

/// ⟨c, v⟩ = p_c q_v − q_c p_v.
long intersection(const Cycle& c, const Cycle& v);
bool same_up_to_sign(const Cycle& c, const Cycle& v);

/// c ↦ c + direction·⟨c, v⟩·v. Direction −1 is the Dehn twist T_v.
Cycle twist(const Cycle& v, const Cycle& c, int direction);

using Mat2 = std::array<std::array<long, 2>, 2>;
Mat2 identity2();
Mat2 operator*(const Mat2& a, const Mat2& b);
Cycle operator*(const Mat2& m, const Cycle& c);
long det(const Mat2& m);
/// Matrix of c ↦ twist(v, c, direction) on column vectors (p, q).
Mat2 twist_matrix(const Cycle& v, int direction = -1);

enum class Base { sphere, disk };

/// Vanishing cycles in path order. A disk base carries the boundary cycle
/// collapsed by the log transform.
struct FibrationWord {
  std::vector<Cycle> cycles;
  Base base = Base::sphere;
  std::optional<Cycle> boundary;

  std::size_t size() const { return cycles.size(); }
  friend bool operator==(const FibrationWord&, const FibrationWord&) = default;
};

class WordError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// direction +1: (v_i, v_{i+1}) → (v_{i+1}, T^{-1}_{v_{i+1}} v_i).
/// direction −1: (v_i, v_{i+1}) → (T_{v_i} v_{i+1}, v_i).
struct Move {
  std::size_t index = 0;
  int direction = 1;
  friend bool operator==(const Move&, const Move&) = default;
};

FibrationWord hurwitz_move(const FibrationWord& w, std::size_t i, int direction);
/// Product T_{v_1} T_{v_2} ⋯ of twist matrices.
Mat2 total_monodromy(const FibrationWord& w);

/// Hurwitz moves followed by the basis change c ↦ basis·c.
struct Certificate {
  std::vector<Move> moves;
  Mat2 basis = identity2();
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

FibrationWord replay(const FibrationWord& w, const Certificate& cert);

/// Breadth-first search over move sequences of length ≤ budget for a word with
/// identity monodromy. Lexicographic in (index, direction), left moves first.
std::optional<Certificate> identity_certificate(const FibrationWord& w, int budget);

struct BuiltFibration {
  FibrationWord word;
  std::optional<Certificate> certificate;
};

/// a+3b, a, a−3b followed by nine copies of b.
BuiltFibration build_E1(int budget = 4);
/// Iterated fiber sum. Copy k enters with a ↦ a − 7(k−1)b after rotating the
/// current word so that its last non-b cycle ends it.
BuiltFibration build_En(int n, int budget = 4);

/// Cyclic rotation moving the first k cycles to the end, as right moves.
/// Requires identity monodromy.
Certificate rotation_certificate(const FibrationWord& w, std::size_t k);

FibrationWord log_mark(const FibrationWord& w, const Cycle& collapse);

struct BoundarySum {
  FibrationWord word;
  bool orientation_reversed = false;  // identification has determinant −1
};

/// Concatenates w1 with identification·w2. The identification must have
/// determinant ±1 and send the boundary of w2 to the boundary of w1.
BoundarySum boundary_connected_sum(const FibrationWord& w1, const FibrationWord& w2, const Mat2& identification);

/// One crossing during transport: the moving cycle passes the cycle at
/// `crossed` and is twisted by it with `direction`.
struct Crossing {
  std::size_t crossed = 0;
  int direction = -1;
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

struct BraneWitness {
  std::size_t index = 0;
  std::vector<Crossing> transport;
  Cycle result;
};

struct BraneSearch {
  std::vector<BraneWitness> witnesses;
  bool exhausted = false;  // the budget cut off some unexplored transport
};

Cycle replay_transport(const FibrationWord& w, const BraneWitness& witness);
/// Positions used by a witness: its index and every crossed position.
std::vector<std::size_t> footprint(const BraneWitness& witness);

/// Straight transports of length ≤ budget landing on ±boundary. Per position
/// the shortest transport wins, left before right. Witnesses are then taken
/// greedily by (length, left first, index) with disjoint footprints.
BraneSearch brane_search(const FibrationWord& w, int budget = 3);

struct Normalization {
  FibrationWord word;
  Certificate certificate;
  std::vector<Move> gamma_moves;  // junction moves turning a cycle into −b
};

/// Junction moves, bundling of the non-b cycles and the basis change
/// a ↦ a + 4(n−1)b on a marked iterated fiber sum. Throws WordError when more
/// than max_moves moves are needed.
Normalization normalize_cycles(const FibrationWord& w, int n, std::size_t max_moves = 100000);

/// a+(4n−1)b, a+4kb for k = n−1..1−n, a−(4n−1)b and 10n−1 copies of b,
/// as a sorted multiset.
std::vector<Cycle> normalized_family(int n);
std::vector<Cycle> sorted_multiset(const FibrationWord& w);

struct BlowDownRecord {
  int count = 0;
  std::vector<int> self_intersections;
  int delta_chi = 0;
  int delta_sigma = 0;
  int delta_b2_minus = 0;
};

/// Throws WordError for overlapping or unsound witnesses.
BlowDownRecord blow_down_word(const FibrationWord& w, const std::vector<BraneWitness>& witnesses);

/// "#base sphere|disk", "#boundary p q", one "p q" per cycle, "#move i d" and
/// "#basis a b c d" for a certificate. Lines starting with ';' are comments.
std::string to_text(const FibrationWord& w, const Certificate* cert = nullptr);

struct WordFile {
  FibrationWord word;
  Certificate certificate;
};

/// Throws WordError with the offending line number.
WordFile parse_word(std::string_view text);

/// Base-disk diagram: one node per critical value and one for the boundary.
std::string to_dot(const FibrationWord& w, const std::vector<BraneWitness>& witnesses = {});

}  // namespace gcv
