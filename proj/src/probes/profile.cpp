#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lsi/probe.hpp"

namespace lsi {

Profile::Profile(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("Profile: no pieces");
  const double lo = pieces_.front().lo;
  if (!(lo == -std::numeric_limits<double>::infinity() || lo == 0.0))
    throw std::invalid_argument("Profile: domain must start at -inf or 0");
  if (pieces_.back().hi != std::numeric_limits<double>::infinity())
    throw std::invalid_argument("Profile: domain must extend to +inf");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].lo < pieces_[i].hi)) throw std::invalid_argument("Profile: empty piece");
    if (i + 1 < pieces_.size() && pieces_[i].hi != pieces_[i + 1].lo)
      throw std::invalid_argument("Profile: pieces must be contiguous");
  }
}

std::vector<double> Profile::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i > 0) out.push_back(pieces_[i].lo);
    for (double z : pieces_[i].expr.zeros_in(pieces_[i].lo, pieces_[i].hi)) out.push_back(z);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Profile::piece_index(double x) const {
  if (x < pieces_.front().lo) throw std::domain_error("Profile: point outside the domain");
  std::size_t lo = 0, hi = pieces_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (pieces_[mid].lo <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double Profile::value(double x) const { return pieces_[piece_index(x)].expr.value(x); }

double Profile::derivative(double x) const {
  return pieces_[piece_index(x)].expr.derivative(x);
}

double Profile::continuity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double c = pieces_[i].hi;
    const double l = pieces_[i].expr.value(c);
    const double r = pieces_[i + 1].expr.value(c);
    worst = std::max(worst, std::abs(l - r));
  }
  return worst;
}

bool Profile::nonnegative() const {
  for (const auto& p : pieces_) {
    const Expression& e = p.expr;
    if (e.is_zero()) continue;
    if (e.base == BaseKind::polynomial) {
      if (!e.zeros_in(p.lo, p.hi).empty()) return false;
      double probe;
      if (std::isinf(p.lo) && std::isinf(p.hi))
        probe = 0.0;
      else if (std::isinf(p.lo))
        probe = p.hi - 1.0;
      else if (std::isinf(p.hi))
        probe = p.lo + 1.0;
      else
        probe = 0.5 * (p.lo + p.hi);
      if (e.value(probe) < 0.0) return false;
    } else if (e.amplitude < 0.0) {
      return false;
    }
  }
  return true;
}

bool Profile::is_trivial() const {
  if (pieces_.size() != 1 || !std::isinf(pieces_[0].lo)) return false;
  const Expression& e = pieces_[0].expr;
  return e.base == BaseKind::one && e.amplitude == 1.0 && e.q0 == 0.0 && e.q1 == 0.0 &&
         e.q2 == 0.0;
}

TailDescriptor Profile::tail(bool right) const {
  const Expression& e = right ? pieces_.back().expr : pieces_.front().expr;
  TailDescriptor t;
  if (e.is_zero() || e.base == BaseKind::bump) return t;
  if (e.base == BaseKind::algebraic_log) {
    t.kind = TailKind::algebraic;
    t.q1 = e.q1;
    t.q2 = e.q2;
    return t;
  }
  t.kind = TailKind::exp_quadratic;
  t.q1 = e.q1;
  t.q2 = e.q2;
  return t;
}

Profile Profile::transformed_shift(double k) const {
  if (domain_lo() == 0.0) throw std::invalid_argument("Profile: cannot shift a radial profile");
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back({p.lo - k, p.hi - k, p.expr.shifted(k)});
  return Profile(std::move(out));
}

Profile Profile::rescaled(double s) const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back({p.lo * s, p.hi * s, p.expr.rescaled(s)});
  return Profile(std::move(out));
}

Profile Profile::times_exp(double c0, double c1, double c2) const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back({p.lo, p.hi, p.expr.times_exp(c0, c1, c2)});
  return Profile(std::move(out));
}

Profile Profile::times(double c) const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back({p.lo, p.hi, p.expr.times(c)});
  return Profile(std::move(out));
}

}  // namespace lsi
