// Prints H^n(G_S, U_S) for n = 0..4 next to the closed-form prediction, and
// the mod M groups with their class counts.

#include <iostream>

#include "udcoh/cohomology.hpp"

int main() {
  using namespace udcoh;
  for (auto [primes, m] : std::vector<std::pair<std::vector<long>, long>>{{{3}, 2}, {{3, 7}, 2}, {{7, 13}, 6}}) {
    const auto cfg = make_config(primes, m);
    std::cout << cfg.describe() << "\n";
    const auto hom = hom_P_U(UniversalDistribution(cfg));
    for (const auto& d : verify_theorem_A(cfg, 4).degrees) {
      std::cout << "  H^" << d.degree << " = " << d.computed.to_string() << "  (predicted " << d.expected.to_string()
                << ")  mod " << m << ": " << hom.cohomology(d.degree, m).to_string() << ", "
                << modM_class_count(cfg, d.degree) << " classes\n";
    }
  }
}
