#include "lbe/drive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lbe/error.hpp"

namespace lbe {

DriveSignal DriveSignal::constant(double value) {
  if (!std::isfinite(value)) throw InvalidInput("DriveSignal: non-finite constant");
  DriveSignal s;
  s.kind_ = Kind::constant;
  s.amplitude_ = value;
  return s;
}

DriveSignal DriveSignal::cosine(double amplitude, double omega) {
  if (!std::isfinite(amplitude) || !std::isfinite(omega)) {
    throw InvalidInput("DriveSignal: non-finite cosine parameters");
  }
  DriveSignal s;
  s.kind_ = Kind::cosine;
  s.amplitude_ = amplitude;
  s.omega_ = omega;
  return s;
}

DriveSignal DriveSignal::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw InvalidInput("DriveSignal: tabulated signal needs >= 2 matching samples");
  }
  if (!std::is_sorted(times.begin(), times.end(), std::less_equal<>{}) ||
      std::adjacent_find(times.begin(), times.end()) != times.end()) {
    throw InvalidInput("DriveSignal: tabulated times must be strictly ascending");
  }
  DriveSignal s;
  s.kind_ = Kind::tabulated;
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  return s;
}

double DriveSignal::operator()(double t) const {
  if (t < 0.0) throw InvalidInput("DriveSignal: negative time " + std::to_string(t));
  switch (kind_) {
    case Kind::constant:
      return amplitude_;
    case Kind::cosine:
      return amplitude_ * std::cos(omega_ * t);
    case Kind::tabulated: {
      if (t < times_.front() || t > times_.back()) {
        throw InvalidInput("DriveSignal: t = " + std::to_string(t) + " outside tabulated grid");
      }
      auto hi = std::upper_bound(times_.begin(), times_.end(), t);
      if (hi == times_.end()) return values_.back();
      const auto k = static_cast<std::size_t>(hi - times_.begin());
      const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
      return (1.0 - w) * values_[k - 1] + w * values_[k];
    }
  }
  return 0.0;
}

std::string DriveSignal::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::constant:
      os << amplitude_;
      break;
    case Kind::cosine:
      os << amplitude_ << "*cos(" << omega_ << "*t)";
      break;
    case Kind::tabulated:
      os << "tabulated[" << times_.size() << "]";
      break;
  }
  return os.str();
}

}  // namespace lbe
