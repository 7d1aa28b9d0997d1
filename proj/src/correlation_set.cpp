#include "seqmeas/correlation_set.hpp"

#include <cmath>
#include <stdexcept>

namespace seqmeas {

void CorrelationSet::set(const std::string& x, const std::string& y, double value) {
  if (!std::isfinite(value) || std::abs(value) > 1.0 + kBoundTol) {
    throw std::invalid_argument("correlation <" + x + ", " + y + "> = " + std::to_string(value) +
                                " lies outside [-1, 1]");
  }
  values_[{x, y}] = value;
}

std::optional<double> CorrelationSet::find(const std::string& x, const std::string& y) const {
  if (auto it = values_.find({x, y}); it != values_.end()) return it->second;
  return std::nullopt;
}

double CorrelationSet::at(const std::string& x, const std::string& y) const {
  if (auto v = find(x, y)) return *v;
  throw std::out_of_range("missing correlation <" + x + ", " + y + ">");
}

}  // namespace seqmeas
