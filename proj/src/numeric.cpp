#include "tensorpow/numeric.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace tensorpow {

namespace {

std::atomic<Precision>& precision_slot() {
  static std::atomic<Precision> slot{precision_from_env()};
  return slot;
}

}  // namespace

Precision active_precision() { return precision_slot().load(); }

void set_active_precision(Precision p) { precision_slot().store(p); }

Precision precision_from_env() {
  const char* raw = std::getenv("TENSORPOW_PRECISION");
  if (raw == nullptr) return Precision::extended;
  const std::string v(raw);
  if (v == "dd") return Precision::extended;
  if (v == "double") return Precision::dbl;
  throw std::runtime_error("precision_from_env: TENSORPOW_PRECISION must be "
                           "\"double\" or \"dd\", got \"" + v + "\"");
}

std::string precision_name(Precision p) {
  return p == Precision::dbl ? "double" : "dd";
}

double tie_epsilon() {
  return active_precision() == Precision::dbl ? 1e-13 : 1e-24;
}

xreal tie_slack(const xreal& a, const xreal& b) {
  using std::abs;
  xreal scale(1);
  if (isfinite(a) && abs(a) > scale) scale = abs(a);
  if (isfinite(b) && abs(b) > scale) scale = abs(b);
  return xreal(tie_epsilon()) * scale;
}

LogCmp log_compare(const xreal& value, const xreal& threshold) {
  // -inf only arises from zero spectral values; it ties only with itself.
  const bool vinf = !isfinite(value);
  const bool tinf = !isfinite(threshold);
  if (vinf || tinf) {
    if (vinf && tinf) return LogCmp::tie;
    return vinf ? LogCmp::below : LogCmp::above;
  }
  const xreal slack = tie_slack(value, threshold);
  if (value > threshold + slack) return LogCmp::above;
  if (value < threshold - slack) return LogCmp::below;
  return LogCmp::tie;
}

xreal round_to_backend(const xreal& v) {
  if (active_precision() == Precision::extended) return v;
  return xreal(static_cast<double>(v));
}

}  // namespace tensorpow
