#pragma once

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "haarwalk/levy.hpp"
#include "haarwalk/occupation.hpp"

namespace haarwalk {

/// f(y) = sum_j c_j exp(i lambda_j y) with pairwise distinct frequencies.
struct TrigPolynomial {
  struct Term {
    double frequency = 0.0;
    std::complex<double> coefficient;
  };
  std::vector<Term> terms;

  std::complex<double> operator()(double y) const;
};

/// Throws std::invalid_argument on repeated or non-finite frequencies.
void validate(const TrigPolynomial& f);

/// Parses [{"lambda": r, "re": a, "im": b}, ...]; "im" defaults to 0.
TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const TrigPolynomial& f);

/// Mean value A(f): the coefficient of frequency 0, or 0 when absent.
std::complex<double> mean_value(const TrigPolynomial& f);

/// f(. + shift).
TrigPolynomial translate(const TrigPolynomial& f, double shift);

/// (1/T) int_0^T f(Y_t) dt, one exact segment integral per frequency.
/// Throws std::invalid_argument when T exceeds the path horizon.
std::complex<double> path_average(const TrigPolynomial& f, const RealLevyPath& path, double horizon,
                                  Execution exec = Execution::Parallel);

/// "A(f)" when the time average converges to the mean value for every
/// nonzero frequency, otherwise "degenerate: limit not A(f)". The degenerate
/// case is sigma2 == 0 with nu carried by a lattice aZ (rational atoms, or a
/// single atom, or no jumps at all).
std::string limit_status(const RationalTriple& triple);

}  // namespace haarwalk
