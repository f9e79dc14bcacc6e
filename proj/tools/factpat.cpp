#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "factpat/factpat.hpp"

using namespace factpat;

namespace {

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  out << text;
  return 0;
}

int cmd_factor(const std::string& field, const std::string& coeffs, std::uint64_t seed) {
  const auto F = make_field(field);
  const Poly f = parse_poly(*F, coeffs);
  Rng rng(seed);
  const auto [fz, cost] = factor(*F, f, rng);
  std::cout << "factorization: " << format(*F, fz) << "\n";
  std::cout << "pattern: " << pattern_of(fz).to_string() << "\n";
  const CostTally* st[4] = {&cost.x1, &cost.x2, &cost.x3, &cost.x4};
  for (int i = 0; i < 4; ++i) {
    const CostTally& t = *st[i];
    std::cout << "X" << i + 1 << ": mults=" << t.field_mults << " invs=" << t.field_invs << " gcds=" << t.gcd_calls
              << " powmod_mults=" << t.powmod_mults << " divrems=" << t.divrem_calls << "\n";
  }
  std::cout << "ddf_iterations: " << cost.ddf_iterations << "\n";
  return 0;
}

int cmd_census(const std::string& field, const std::string& family, std::uint64_t sample, std::uint64_t seed,
               unsigned workers, const std::string& fmt, const std::string& out, bool no_oracle) {
  const auto F = make_field(field);
  const FamilySpec spec = parse_family(family);
  CensusOptions opt;
  opt.mode = sample ? CensusMode::Sampled : CensusMode::Exhaustive;
  opt.sample_size = sample;
  opt.seed = seed;
  opt.workers = workers;
  opt.use_oracle = !no_oracle;
  const CensusReport rep = run_pattern_census(spec, *F, opt);
  write_output(fmt == "csv" ? emit_csv(rep) : emit_json(rep), out);
  std::cerr << "wall time: " << std::fixed << std::setprecision(3) << rep.wall_seconds << " s\n";
  return rep.status();
}

int cmd_cost(const std::string& field, const std::string& family, std::uint64_t n, std::uint64_t seed,
             unsigned workers, const std::string& fmt, const std::string& out) {
  const auto F = make_field(field);
  const FamilySpec spec = parse_family(family);
  const CostCensus c = run_cost_census(spec, *F, n, seed, workers);
  write_output(fmt == "csv" ? emit_csv(c) : emit_json(c), out);
  std::cerr << "wall time: " << std::fixed << std::setprecision(3) << c.wall_seconds << " s\n";
  return c.status();
}

struct IdentityLine {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::uint64_t degree = 0;  // largest degree of the identity polynomial tested
  std::uint64_t trials = 0;
};

int cmd_verify(const std::string& field, unsigned r, std::uint64_t trials, std::uint64_t seed) {
  if (r < 2) throw DomainError("verify-identities needs --r >= 2");
  const auto F = make_field(field);
  Rng rng(seed);
  IdentityLine trudi{"trudi det T_i = H_i"}, multinomial{"toeplitz-hessenberg multinomial expansion"},
      newton{"alternating H/Pi identity"}, minor{"jacobian minor identity"}, duality{"coefficient duality"},
      homog{"weighted homogeneity"};
  const unsigned trudi_max = std::min(r, 6U);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const PointVector x = random_point(*F, r, rng);
    for (unsigned i = 1; i <= r; ++i) {
      ++trudi.checks;
      if (!trudi_check(*F, x, i)) ++trudi.failures;
    }
    for (unsigned k = 1; k <= std::max(r, 8U); ++k) {
      ++newton.checks;
      if (!newton_check(*F, x, k)) ++newton.failures;
    }
    for (unsigned k = 0; k <= r - 1; ++k)
      for (unsigned l = 1; l <= r; ++l) {
        ++minor.checks;
        if (!minor_identity_check(*F, x, k, l)) ++minor.failures;
      }
    ++duality.checks;
    if (!coefficient_duality_check(*F, x)) ++duality.failures;
    std::vector<FieldElement> a(trudi_max);
    for (auto& ai : a) ai = F->random_element(rng);
    ++multinomial.checks;
    if (toeplitz_hessenberg_det(*F, a) != trudi_expansion(*F, a)) ++multinomial.failures;
    ++homog.checks;
    if (!weighted_homogeneity_check(*F, a, F->random_element(rng))) ++homog.failures;
  }
  trudi.degree = r;
  multinomial.degree = trudi_max;
  newton.degree = std::max(r, 8U);
  minor.degree = static_cast<std::uint64_t>(r - 1) * (r - 1) + r;
  duality.degree = r;
  homog.degree = 2ULL * trudi_max;
  int status = 0;
  for (auto* line : {&trudi, &multinomial, &newton, &minor, &duality, &homog}) {
    const double fa = false_accept_log2(line->degree, F->q(), trials);
    std::cout << (line->failures == 0 ? "PASS " : "FAIL ") << line->name << ": " << line->checks << " checks, "
              << line->failures << " failures, false-accept log2 <= " << std::fixed << std::setprecision(1) << fa
              << "\n";
    if (line->failures) status = 2;
  }
  return status;
}

int cmd_sieve(const std::string& field, unsigned max_degree, bool list) {
  const auto F = make_field(field);
  const IrreducibleTable table = sieve_irreducibles(*F, max_degree);
  for (unsigned d = 1; d <= max_degree; ++d) {
    std::cout << "degree " << d << ": " << table.of_degree(d).size() << "\n";
    if (list)
      for (const auto& g : table.of_degree(d)) std::cout << "  " << format(*F, g) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial factorization patterns over finite fields"};
  app.require_subcommand(1);

  std::string field, family, coeffs, fmt = "json", out;
  std::uint64_t seed = 0, sample = 0, n = 0, trials = 100;
  unsigned workers = 1, r = 0, max_degree = 0;
  bool no_oracle = false, list = false;

  auto* fac = app.add_subcommand("factor", "Factor one monic polynomial");
  fac->add_option("--field", field, "Field descriptor, e.g. 7 or 3^2")->required();
  fac->add_option("--poly", coeffs, "Coefficients a0,a1,...,ar")->required();
  fac->add_option("--seed", seed);

  auto* cen = app.add_subcommand("census", "Factorization-pattern census of a family");
  cen->add_option("--field", field)->required();
  cen->add_option("--family", family)->required();
  cen->add_option("--sample", sample, "Sampled mode with N draws (default: exhaustive)");
  cen->add_option("--seed", seed);
  cen->add_option("--workers", workers)->check(CLI::PositiveNumber);
  cen->add_option("--format", fmt)->check(CLI::IsMember({"csv", "json"}));
  cen->add_option("--out", out);
  cen->add_flag("--no-oracle", no_oracle, "Skip the trial-division cross-check");

  auto* cst = app.add_subcommand("cost", "Average factorization cost over a family");
  cst->add_option("--field", field)->required();
  cst->add_option("--family", family)->required();
  cst->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  cst->add_option("--seed", seed);
  cst->add_option("--workers", workers)->check(CLI::PositiveNumber);
  cst->add_option("--format", fmt)->check(CLI::IsMember({"csv", "json"}));
  cst->add_option("--out", out);

  auto* ver = app.add_subcommand("verify-identities", "Check symmetric-function identities at random points");
  ver->add_option("--field", field)->required();
  ver->add_option("--r", r)->required();
  ver->add_option("--trials", trials);
  ver->add_option("--seed", seed);

  auto* sie = app.add_subcommand("sieve", "Monic irreducible polynomials by degree");
  sie->add_option("--field", field)->required();
  sie->add_option("--max-degree", max_degree)->required()->check(CLI::PositiveNumber);
  sie->add_flag("--list", list, "Print every polynomial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fac) return cmd_factor(field, coeffs, seed);
    if (*cen) return cmd_census(field, family, sample, seed, workers, fmt, out, no_oracle);
    if (*cst) return cmd_cost(field, family, n, seed, workers, fmt, out);
    if (*ver) return cmd_verify(field, r, trials, seed);
    if (*sie) return cmd_sieve(field, max_degree, list);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
