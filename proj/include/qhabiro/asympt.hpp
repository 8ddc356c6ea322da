#pragma once

#include "qhabiro/knots.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace qh {

using Real = boost::multiprecision::mpfr_float;

// Sets the working precision of Real for its lifetime. Precision is process
// wide, so set it before fanning out to worker threads.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

unsigned bits_to_digits(unsigned bits);

// Every operation rounds once at the working precision; a chain of m
// operations stays within 2^{-P + log2(m) + 1} relative to its magnitude.
struct ComplexHP {
    Real re, im;
    ComplexHP() : re(0), im(0) {}
    ComplexHP(Real r, Real i = 0) : re(std::move(r)), im(std::move(i)) {}
    // e^{2 pi i num/den}
    static ComplexHP root(long long num, long long den);
    Real abs() const;
    ComplexHP conj() const { return {re, -im}; }
};

ComplexHP operator+(const ComplexHP& a, const ComplexHP& b);
ComplexHP operator-(const ComplexHP& a, const ComplexHP& b);
ComplexHP operator*(const ComplexHP& a, const ComplexHP& b);
ComplexHP operator*(const ComplexHP& a, const Real& b);
ComplexHP operator/(const ComplexHP& a, const ComplexHP& b);

// f_n as an exact Laurent polynomial
QSeries f_poly_exact(const Registry& reg, const std::string& knot, long long n);

// poly at q = e^{2 pi i/N}; q^e is e^{2 pi i e/N} for fractional e too.
// Needs bits >= 64 + log2(sum |coeff|).
ComplexHP eval_root_of_unity(const QSeries& poly, long long N, unsigned bits);
unsigned bits_needed(const QSeries& poly);

// f_n(4_1) at e^{2 pi i/N} from the binomial sum, using q-Lucas to split off
// the ordinary binomial part where the Gaussian denominators vanish.
ComplexHP eval_f41(long long n, long long N, unsigned bits);

// dispatch: the binomial sum when the knot carries the 4_1 closed form
ComplexHP eval_f(const Registry& reg, const std::string& knot, long long n, long long N, unsigned bits);

// 2 Im Li_2(e^{i pi/3}) at the current precision
Real vol_41();

struct PeriodResult {
    bool found = false;
    long long period = 0;
    long long phase = 0;              // first n of the reported period
    std::vector<Real> values;         // one period starting at phase
    std::vector<Real> multiset;       // same values, sorted
    Real imag_max = 0;                // largest |Im| seen
};

// minimal period of f_n(zeta_n), n = 1..n_max
PeriodResult periodicity_check(const Registry& reg, const std::string& knot, long long n_max, unsigned bits,
                               const Real& tol, int jobs = 1);

// polynomial extrapolation to 1/n -> 0 through the last order+1 points
Real richardson(const std::vector<long long>& n, const std::vector<Real>& v, int order);
Real richardson(const std::vector<Real>& v, int order);  // n = 1..size

struct GrowthResult {
    Real estimate = 0;
    bool trivial = false;   // f_n vanish or stay bounded: no exponential growth
    bool flagged = false;   // successive orders disagree or residuals do not shrink
    std::vector<Real> orders;  // estimate at each Richardson order
    std::vector<std::pair<long long, Real>> raw;
};

GrowthResult growth_rate(const Registry& reg, const std::string& knot, const std::vector<long long>& n_list,
                         unsigned bits, int jobs = 1);

// Phi(h) = prefactor * sum_k c_k u^k / k!, u = h / (72 sqrt(-3))
struct PerturbSeries {
    std::vector<mpq_class> c;
    std::string prefactor;
    int depth() const { return (int)c.size() - 1; }
};

PerturbSeries phi_j_data();
PerturbSeries phi_f_data();
PerturbSeries series_mul(const PerturbSeries& s, const PerturbSeries& t);
PerturbSeries series_inv(const PerturbSeries& s);
PerturbSeries series_sqrt(const PerturbSeries& s);
PerturbSeries series_sqrt_inv(const PerturbSeries& s);

// Phi^J / sqrt(Phi^F) through u^depth; throws on a non-integer coefficient
std::vector<mpz_class> phi_quotient_check(int depth);

struct PhiFit {
    std::vector<Real> c;       // c_0..c_depth
    std::vector<Real> c_alt;   // same from a smaller fit, for the stability flag
    bool flagged = false;
    long long points = 0;
};

// fit of f_n(zeta_{2n}) e^{-n vol/pi} sqrt(3) in powers of 1/n over n <= n_max
PhiFit extract_phi(const Registry& reg, const std::string& knot, int depth, long long n_max, unsigned bits,
                   int jobs = 1);

struct SampleRow {
    long long n;
    ComplexHP value;
    Real modulus;
    Real normalized;  // value e^{-n vol/pi} sqrt(3) (real part)
};

// rows for the CSV emitter, evaluated at zeta_{2n}
std::vector<SampleRow> sample_rows(const Registry& reg, const std::string& knot, const std::vector<long long>& ns,
                                   unsigned bits, int jobs = 1);

}  // namespace qh
