#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcv/lefschetz.hpp"

namespace gcv {

struct InvariantLedger {
  long chi = 0;
  long sigma = 0;
  long b2plus = 0;
  long b2minus = 0;
  bool simply_connected = true;

  /// b2+ − b2− = σ, and χ = 2 + b2+ + b2− when simply connected.
  bool consistent() const;
  std::string str() const;  // "(chi, sigma, b2+, b2-)"
  friend bool operator==(const InvariantLedger&, const InvariantLedger&) = default;
};

/// (12n, −8n, 2n − 1, 10n − 1).
InvariantLedger ledger_E(int n);

enum class LedgerOpKind { fiber_sum, log_transform0, blow_down, connected_sum };

struct LedgerOp {
  LedgerOpKind kind = LedgerOpKind::log_transform0;
  long k = 0;                            // blow_down count
  std::optional<InvariantLedger> other;  // fiber_sum and connected_sum operand
};

/// Throws std::invalid_argument on b2− underflow, a missing operand or an
/// inconsistent input ledger.
InvariantLedger apply(const InvariantLedger& l, const LedgerOp& op);
/// Blow-downs recorded by a Lefschetz witness set.
InvariantLedger apply(const InvariantLedger& l, const BlowDownRecord& rec);

using IntMatrix = std::vector<std::vector<long>>;

struct IndexFlags {
  bool split = false;        // no linking with any other handle
  bool cancellable = false;  // split with framing 0
};

/// Symmetric linking matrix of a framed link.
class LinkingForm {
public:
  LinkingForm() = default;
  /// Throws std::invalid_argument unless q is square and symmetric.
  explicit LinkingForm(IntMatrix q);

  const IntMatrix& q() const { return q_; }
  std::size_t size() const { return q_.size(); }
  std::vector<IndexFlags> flags() const;
  bool is_diagonal() const;

  friend bool operator==(const LinkingForm&, const LinkingForm&) = default;

private:
  IntMatrix q_;
};

struct FormInvariants {
  std::string det;  // exact integer as text
  long signature = 0;
  std::size_t rank = 0;
  friend bool operator==(const FormInvariants&, const FormInvariants&) = default;
};

FormInvariants invariants(const LinkingForm& f);

/// Handle i slides over handle j: Q ↦ EᵀQE with E = I + sign·e_j e_iᵀ.
LinkingForm slide(const LinkingForm& f, std::size_t i, std::size_t j, int sign);

/// Deletes an isolated ±1 handle. Throws std::invalid_argument otherwise.
LinkingForm blow_down_index(const LinkingForm& f, std::size_t i);

struct KirbyMove {
  std::string op;  // "slide" or "split"
  std::size_t i = 0;
  std::size_t j = 0;
  int sign = 1;
  friend bool operator==(const KirbyMove&, const KirbyMove&) = default;
};

/// Replays slides and checks that each split index is isolated.
LinkingForm replay(const LinkingForm& f, const std::vector<KirbyMove>& moves);

struct Reduction {
  LinkingForm form;
  std::vector<KirbyMove> transcript;
  bool stalled = false;
  std::string message;
};

/// Greedy reduction. An unsplit handle with framing ±1 absorbs its linkings by
/// slides. Otherwise one slide that creates a ±1 framing is taken, or else one
/// that shrinks a framing. Works on degenerate forms too.
Reduction reduce_definite(const LinkingForm& f, std::size_t max_moves = 10000);

/// Ledger of a closed simply-connected manifold with this intersection form.
InvariantLedger ledger_of(const LinkingForm& f);

nlohmann::json to_json(const InvariantLedger& l);
nlohmann::json to_json(const LinkingForm& f, const std::vector<KirbyMove>& moves = {});
/// Reads {"Q": [[...]], "moves": [...]}. Throws std::invalid_argument.
std::pair<LinkingForm, std::vector<KirbyMove>> linking_from_json(const nlohmann::json& j);

}  // namespace gcv
