#include "gcv/topo.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace gcv {

bool InvariantLedger::consistent() const {
  if (b2plus < 0 || b2minus < 0 || b2plus - b2minus != sigma) return false;
  return !simply_connected || chi == 2 + b2plus + b2minus;
}

std::string InvariantLedger::str() const {
  return "(" + std::to_string(chi) + ", " + std::to_string(sigma) + ", " + std::to_string(b2plus) + ", " +
         std::to_string(b2minus) + ")";
}

InvariantLedger ledger_E(int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  InvariantLedger l{12, -8, 1, 9, true};
  for (int k = 2; k <= n; ++k) l = apply(l, LedgerOp{LedgerOpKind::fiber_sum, 0, InvariantLedger{12, -8, 1, 9, true}});
  return l;
}

InvariantLedger apply(const InvariantLedger& l, const LedgerOp& op) {
  if (!l.consistent()) throw std::invalid_argument("inconsistent ledger " + l.str());
  InvariantLedger out = l;
  switch (op.kind) {
    case LedgerOpKind::log_transform0:
      break;
    case LedgerOpKind::blow_down:
      if (op.k < 0) throw std::invalid_argument("blow-down count must be non-negative");
      if (op.k > l.b2minus) throw std::invalid_argument("b2- underflow");
      out.chi -= op.k;
      out.sigma += op.k;
      out.b2minus -= op.k;
      break;
    case LedgerOpKind::fiber_sum:
    case LedgerOpKind::connected_sum: {
      if (!op.other) throw std::invalid_argument("operation needs a second ledger");
      const InvariantLedger& o = *op.other;
      if (!o.consistent()) throw std::invalid_argument("inconsistent ledger " + o.str());
      out.simply_connected = l.simply_connected && o.simply_connected;
      out.sigma = l.sigma + o.sigma;
      if (op.kind == LedgerOpKind::connected_sum) {
        out.chi = l.chi + o.chi - 2;
        out.b2plus = l.b2plus + o.b2plus;
        out.b2minus = l.b2minus + o.b2minus;
      } else {
        // Torus fibres have Euler characteristic 0.
        out.chi = l.chi + o.chi;
        if (!out.simply_connected) throw std::invalid_argument("fiber sum ledger needs simply connected summands");
        out.b2plus = (out.chi - 2 + out.sigma) / 2;
        out.b2minus = (out.chi - 2 - out.sigma) / 2;
      }
      break;
    }
  }
  if (!out.consistent()) throw std::invalid_argument("operation produced an inconsistent ledger " + out.str());
  return out;
}

InvariantLedger apply(const InvariantLedger& l, const BlowDownRecord& rec) {
  for (int s : rec.self_intersections) {
    if (s != -1) throw std::invalid_argument("only -1 spheres can be blown down");
  }
  InvariantLedger out = apply(l, LedgerOp{LedgerOpKind::blow_down, rec.count, std::nullopt});
  if (out.chi - l.chi != rec.delta_chi || out.sigma - l.sigma != rec.delta_sigma ||
      out.b2minus - l.b2minus != rec.delta_b2_minus) {
    throw std::invalid_argument("blow-down record disagrees with the ledger rule");
  }
  return out;
}

LinkingForm::LinkingForm(IntMatrix q) : q_(std::move(q)) {
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (q_[i].size() != q_.size()) throw std::invalid_argument("linking matrix is not square");
    for (std::size_t j = 0; j < i; ++j) {
      if (q_[i][j] != q_[j][i]) throw std::invalid_argument("linking matrix is not symmetric");
    }
  }
}

std::vector<IndexFlags> LinkingForm::flags() const {
  std::vector<IndexFlags> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    bool split = true;
    for (std::size_t j = 0; j < size(); ++j) {
      if (j != i && q_[i][j] != 0) split = false;
    }
    out[i] = {split, split && q_[i][i] == 0};
  }
  return out;
}

bool LinkingForm::is_diagonal() const {
  auto f = flags();
  return std::all_of(f.begin(), f.end(), [](const IndexFlags& x) { return x.split; });
}

FormInvariants invariants(const LinkingForm& f) {
  std::size_t n = f.size();
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = f.q()[i][j];
  }
  // Symmetric elimination by congruence; pivots give the inertia.
  FormInvariants out;
  mpq_class det = 1;
  std::size_t k = 0;
  for (; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n && piv == n; ++i) {
      if (a[i][i] != 0) piv = i;
    }
    if (piv == n) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n && pi == n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (a[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
        }
      }
      if (pi == n) break;
      // Row/column j added to i: unimodular, so the determinant is unchanged.
      for (std::size_t c = 0; c < n; ++c) a[pi][c] += a[pj][c];
      for (std::size_t r = 0; r < n; ++r) a[r][pi] += a[r][pj];
      piv = pi;
    }
    if (piv != k) {
      std::swap(a[piv], a[k]);
      for (auto& row : a) std::swap(row[piv], row[k]);
    }
    mpq_class p = a[k][k];
    det *= p;
    out.signature += p > 0 ? 1 : -1;
    ++out.rank;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      mpq_class m = a[i][k] / p;
      for (std::size_t c = k; c < n; ++c) a[i][c] -= m * a[k][c];
      a[i][k] = 0;
    }
    for (std::size_t i = k + 1; i < n; ++i) a[k][i] = 0;
  }
  if (out.rank < n) det = 0;
  out.det = det.get_str();
  return out;
}

LinkingForm slide(const LinkingForm& f, std::size_t i, std::size_t j, int sign) {
  std::size_t n = f.size();
  if (i >= n || j >= n) throw std::invalid_argument("slide index out of range");
  if (i == j) throw std::invalid_argument("a handle cannot slide over itself");
  if (sign != 1 && sign != -1) throw std::invalid_argument("slide sign must be 1 or -1");
  IntMatrix q = f.q();
  long s = sign;
  long qii = q[i][i] + 2 * s * q[i][j] + q[j][j];
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    q[i][k] += s * q[j][k];
    q[k][i] = q[i][k];
  }
  q[i][i] = qii;
  return LinkingForm(std::move(q));
}

LinkingForm blow_down_index(const LinkingForm& f, std::size_t i) {
  if (i >= f.size()) throw std::invalid_argument("index out of range");
  if (f.q()[i][i] != 1 && f.q()[i][i] != -1) throw std::invalid_argument("framing is not +1 or -1");
  if (!f.flags()[i].split) throw std::invalid_argument("handle still links others; slide first");
  IntMatrix q;
  for (std::size_t r = 0; r < f.size(); ++r) {
    if (r == i) continue;
    std::vector<long> row;
    for (std::size_t c = 0; c < f.size(); ++c) {
      if (c != i) row.push_back(f.q()[r][c]);
    }
    q.push_back(std::move(row));
  }
  return LinkingForm(std::move(q));
}

LinkingForm replay(const LinkingForm& f, const std::vector<KirbyMove>& moves) {
  LinkingForm out = f;
  for (const auto& m : moves) {
    if (m.op == "slide") {
      out = slide(out, m.i, m.j, m.sign);
    } else if (m.op == "split") {
      if (m.i >= out.size() || !out.flags()[m.i].split) {
        throw std::invalid_argument("split of handle " + std::to_string(m.i) + " that is not isolated");
      }
    } else {
      throw std::invalid_argument("unknown Kirby move '" + m.op + "'");
    }
  }
  return out;
}

Reduction reduce_definite(const LinkingForm& f, std::size_t max_moves) {
  Reduction out{f, {}, false, ""};
  std::size_t n = f.size();
  std::vector<bool> done(n, false);
  auto push = [&](KirbyMove m) {
    if (out.transcript.size() >= max_moves) {
      out.stalled = true;
      out.message = "reduction stalls: move budget exhausted";
      return false;
    }
    if (m.op == "slide") out.form = slide(out.form, m.i, m.j, m.sign);
    out.transcript.push_back(m);
    return true;
  };
  while (true) {
    auto flags = out.form.flags();
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && flags[i].split) {
        done[i] = true;
        if (!push({"split", i, i, 1})) return out;
      }
    }
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i]) active.push_back(i);
    }
    if (active.empty()) return out;

    const IntMatrix& q = out.form.q();
    auto unit = std::find_if(active.begin(), active.end(), [&](std::size_t i) { return q[i][i] == 1 || q[i][i] == -1; });
    if (unit != active.end()) {
      std::size_t i = *unit;
      for (std::size_t j : active) {
        if (j == i) continue;
        while (out.form.q()[j][i] != 0) {
          long v = out.form.q()[j][i] * out.form.q()[i][i];
          if (!push({"slide", j, i, v > 0 ? -1 : 1})) return out;
        }
      }
      continue;
    }
    // First a slide that produces framing ±1, then one that shrinks a framing.
    bool made = false;
    for (int pass = 0; pass < 2 && !made; ++pass) {
      for (std::size_t a = 0; a < active.size() && !made; ++a) {
        for (std::size_t b = 0; b < active.size() && !made; ++b) {
          std::size_t i = active[a], j = active[b];
          if (i == j || q[i][j] == 0) continue;
          for (int s : {-1, 1}) {
            long framing = q[i][i] + 2 * s * q[i][j] + q[j][j];
            bool take = pass == 0 ? (framing == 1 || framing == -1) : std::labs(framing) < std::labs(q[i][i]);
            if (take) {
              if (!push({"slide", i, j, s})) return out;
              made = true;
              break;
            }
          }
        }
      }
    }
    if (!made) {
      out.stalled = true;
      out.message = "reduction stalls: no slide produces framing +1 or -1 or shrinks a framing";
      return out;
    }
  }
}

InvariantLedger ledger_of(const LinkingForm& f) {
  FormInvariants inv = invariants(f);
  long r = static_cast<long>(inv.rank);
  long plus = (r + inv.signature) / 2;
  long minus = (r - inv.signature) / 2;
  return InvariantLedger{2 + plus + minus, inv.signature, plus, minus, true};
}

nlohmann::json to_json(const InvariantLedger& l) {
  return nlohmann::json{{"chi", l.chi},
                        {"sigma", l.sigma},
                        {"b2plus", l.b2plus},
                        {"b2minus", l.b2minus},
                        {"simply_connected", l.simply_connected}};
}

nlohmann::json to_json(const LinkingForm& f, const std::vector<KirbyMove>& moves) {
  nlohmann::json j;
  j["Q"] = f.q();
  j["moves"] = nlohmann::json::array();
  for (const auto& m : moves) {
    nlohmann::json mj{{"op", m.op}, {"i", m.i}};
    if (m.op == "slide") {
      mj["j"] = m.j;
      mj["sign"] = m.sign;
    }
    j["moves"].push_back(std::move(mj));
  }
  return j;
}

std::pair<LinkingForm, std::vector<KirbyMove>> linking_from_json(const nlohmann::json& j) {
  try {
    LinkingForm f(j.at("Q").get<IntMatrix>());
    std::vector<KirbyMove> moves;
    if (j.contains("moves")) {
      for (const auto& mj : j.at("moves")) {
        KirbyMove m{mj.at("op").get<std::string>(), mj.at("i").get<std::size_t>(), 0, 1};
        if (m.op == "slide") {
          m.j = mj.at("j").get<std::size_t>();
          m.sign = mj.at("sign").get<int>();
        } else {
          m.j = m.i;
        }
        moves.push_back(std::move(m));
      }
    }
    return {std::move(f), std::move(moves)};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed linking JSON: ") + e.what());
  }
}

}  // namespace gcv
