#include <cmath>

#include "solwave/operators.hpp"

namespace solwave {

std::vector<std::string> probe_corpus_names() {
  return {"gauss_w1",      "gauss_w5",      "gauss_w20", "mod_gauss_k1",
          "mod_gauss_k2p5", "soliton_bump",  "soliton_bump_shift",
          "odd_moment"};
}

std::vector<RealField> probe_corpus(const Grid& grid, double omega) {
  SolitonShape s(omega);
  SolitonShape s2(0.8 * omega);
  std::vector<RealField> probes;
  probes.push_back(make_real_field(grid, [](double x) { return std::exp(-x * x); }));
  probes.push_back(
      make_real_field(grid, [](double x) { return std::exp(-x * x / 25.0); }));
  probes.push_back(
      make_real_field(grid, [](double x) { return std::exp(-x * x / 400.0); }));
  probes.push_back(make_real_field(grid, [](double x) {
    return std::cos(x) * std::exp(-x * x / 16.0);
  }));
  probes.push_back(make_real_field(grid, [](double x) {
    return std::sin(2.5 * x) * std::exp(-x * x / 9.0);
  }));
  probes.push_back(make_real_field(grid, [&](double x) { return s.phi(x); }));
  probes.push_back(
      make_real_field(grid, [&](double x) { return s2.phi(x - 3.0); }));
  probes.push_back(make_real_field(
      grid, [](double x) { return x * std::exp(-x * x / 4.0); }));
  return probes;
}

}  // namespace solwave
