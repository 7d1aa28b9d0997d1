#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace seqmeas {

/// Named correlations <x, y> for ±1-valued observables, keyed by ordered
/// setting pair. Values must lie in [-1, 1] up to 1e-12.
class CorrelationSet {
 public:
  static constexpr double kBoundTol = 1e-12;

  void set(const std::string& x, const std::string& y, double value);
  std::optional<double> find(const std::string& x, const std::string& y) const;
  // Throws std::out_of_range naming the missing pair.
  double at(const std::string& x, const std::string& y) const;

  std::size_t size() const noexcept { return values_.size(); }
  const std::map<std::pair<std::string, std::string>, double>& values() const noexcept {
    return values_;
  }

 private:
  std::map<std::pair<std::string, std::string>, double> values_;
};

}  // namespace seqmeas
