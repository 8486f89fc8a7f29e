// Lists the derivative elements D_T[sum 1/l] mod M and confirms they form a
// basis of the Galois invariants of U/MU.

#include <iostream>

#include "udcoh/distribution.hpp"

int main(int argc, char** argv) {
  using namespace udcoh;
  std::vector<long> primes{7, 13};
  long m = 6;
  if (argc >= 3) {
    primes.clear();
    m = std::stol(argv[1]);
    for (int i = 2; i < argc; ++i) primes.push_back(std::stol(argv[i]));
  }
  try {
    const auto cfg = make_config(primes, m);
    const UniversalDistribution u(cfg);
    const auto rep = verify_theorem_b(u, m);
    std::cout << cfg.describe() << ", rank U = " << u.rank() << "\n";
    for (std::size_t t = 0; t < rep.family.size(); ++t) std::cout << "  T=" << t << ": " << rep.family[t].to_string() << "\n";
    std::cout << "invariants " << rep.invariants.to_string() << "; fixed " << rep.fixed << ", independent "
              << rep.independent << ", spans " << rep.spans << "\n";
    return rep.pass() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
