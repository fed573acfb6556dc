#include "regsat/params.hpp"

#include <string>

#include "regsat/errors.hpp"

namespace regsat {

ModelParams::ModelParams(std::int64_t n, std::int64_t d, std::int64_t k)
    : n_(n), d_(d), k_(k), m_(0) {
  if (k < 2) throw DomainError("k must be at least 2 (got " + std::to_string(k) + ")");
  if (d < 1) throw DomainError("d must be at least 1 (got " + std::to_string(d) + ")");
  if (n < k) {
    throw DomainError("n must be at least k (got n=" + std::to_string(n) +
                      ", k=" + std::to_string(k) + ")");
  }
  if ((2 * d * n) % k != 0) {
    throw DomainError("k must divide 2dn (2*" + std::to_string(d) + "*" + std::to_string(n) +
                      "=" + std::to_string(2 * d * n) + " is not divisible by " +
                      std::to_string(k) + ")");
  }
  m_ = 2 * d * n / k;
}

}  // namespace regsat
