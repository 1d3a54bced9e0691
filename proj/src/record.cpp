#include "logbarrier/record.hpp"

#include <limits>
#include <sstream>

#include "logbarrier/types.hpp"

namespace logbarrier {

Budget Budget::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw UsageError("budget '" + text + "' must look like iters:N, epochs:E or seconds:S");
  const std::string kind = text.substr(0, colon);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("budget '" + text + "' has a malformed value");
  }
  if (!(value > 0.0)) throw UsageError("budget '" + text + "' must be positive");
  if (kind == "iters" || kind == "iterations") {
    if (value != std::floor(value)) throw UsageError("iteration budget must be an integer");
    return iterations(static_cast<long>(value));
  }
  if (kind == "epochs") return epochs(value);
  if (kind == "seconds") return seconds(value);
  throw UsageError("unknown budget kind '" + kind + "'");
}

std::string Budget::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::iterations: os << "iters:" << static_cast<long>(value); break;
    case Kind::epochs: os << "epochs:" << value; break;
    case Kind::seconds: os << "seconds:" << value; break;
  }
  return os.str();
}

long Budget::max_iterations(double iters_per_epoch) const {
  switch (kind) {
    case Kind::iterations: return static_cast<long>(value);
    case Kind::epochs: return static_cast<long>(std::ceil(value * iters_per_epoch - 1e-9));
    case Kind::seconds: return std::numeric_limits<long>::max();
  }
  return 0;
}

}  // namespace logbarrier
