// Lifts the explicit prime cocycle for every T at r = 91, M = 3 and prints the
// image in U/MU against D_T[sum 1/l].

#include <iostream>

#include "udcoh/kcomplex.hpp"

int main() {
  using namespace udcoh;
  const long m = 3;
  const auto cfg = make_config({7, 13}, m);
  const UniversalDistribution u(cfg);
  const KComplex k(cfg, OrderIdeal::full(cfg.s()), 0);
  for (Subset t = 0; t <= full_subset(cfg.s()); ++t) {
    const auto lift = lift_prime_cocycle(k, u, m, t);
    std::cout << "T=" << t << " sign " << lift.leading_sign << " tail " << to_string(lift.tail_space) << "\n"
              << "  image  " << lift.image.to_string() << "\n"
              << "  target " << lift.target.to_string() << "\n";
  }
}
