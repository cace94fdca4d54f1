#pragma once

namespace qdelta {

/// The nonextensivity index q.
///
/// q = 1 is never represented by a nearby value: it is either rejected or
/// requested explicitly through QParam::limit(), in which case operations
/// dispatch to their classical (exp / Shannon / Gaussian) counterparts.
/// Operations check their own admissible range on top of this:
/// entropies need q > 0, the delta-representation machinery needs 1 < q < 2.
class QParam {
  public:
    /// Throws DomainError for non-finite q or |q - 1| within the epsilon guard.
    explicit QParam(double q);

    static QParam limit() { return QParam(); }

    double value() const noexcept { return q_; }
    bool is_limit() const noexcept { return limit_; }
    /// 1 - q; zero only in limit mode.
    double one_minus() const noexcept { return 1.0 - q_; }

    /// Guard on |q - 1| below which a finite q is refused.
    static constexpr double kUnityGuard = 16.0 * 2.220446049250313e-16;

  private:
    QParam() : q_(1.0), limit_(true) {}

    double q_;
    bool limit_ = false;
};

/// Throws DomainError unless 1 < q < 2 (and not limit mode).
void require_delta_window(const QParam& q);
/// Throws DomainError unless q > 0.
void require_entropy_range(const QParam& q);

}  // namespace qdelta
