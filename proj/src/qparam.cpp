#include "qdelta/qparam.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "qdelta/errors.hpp"

namespace qdelta {

QParam::QParam(double q) : q_(q) {
    if (!std::isfinite(q)) throw DomainError("q must be finite");
    if (std::abs(q - 1.0) <= kUnityGuard) {
        throw DomainError("q = 1 requires the explicit limit mode (QParam::limit())");
    }
}

void require_delta_window(const QParam& q) {
    if (q.is_limit() || !(q.value() > 1.0 && q.value() < 2.0)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "q = %.17g is outside the open window (1, 2)", q.value());
        throw DomainError(buf);
    }
}

void require_entropy_range(const QParam& q) {
    if (!(q.value() > 0.0)) throw DomainError("entropy requires q > 0");
}

}  // namespace qdelta
