#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wolct/params.hpp"
#include "wolct/transform.hpp"

namespace wolct::lab {

enum class Check { heisenberg, lieb, logarithmic, donoho_stark, beurling, nazarov, hardy, abb };

inline constexpr std::array<Check, 8> kAllChecks = {Check::heisenberg,   Check::lieb,     Check::logarithmic,
                                                    Check::donoho_stark, Check::beurling, Check::nazarov,
                                                    Check::hardy,        Check::abb};

std::string_view to_string(Check c);
/// Throws InputError for unknown names.
Check parse_check(std::string_view name);

/// Checks whose `holds` evaluates a proven inequality; these drive the
/// verify exit code. The others are diagnostics.
bool is_proven(Check c);

inline constexpr double kDefaultSlack = 1e-3;

using Diagnostics = std::map<std::string, double>;

/**
 * Both sides of one inequality. `ratio` is lhs/rhs for claims lhs >= rhs and
 * rhs/lhs for claims lhs <= rhs, so `holds` is always ratio >= 1 - tol; tol is
 * stored in diagnostics["tol"].
 */
struct InequalityResult {
    Check name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool holds = false;
    Diagnostics diagnostics;
};

/// Sorted, disjoint half-open intervals [lo, hi).
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<std::pair<double, double>> intervals);

    static IntervalSet centered(double center, double half_width);

    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    bool contains(double x) const;
    /// Sum of interval lengths.
    double measure() const;
    /// Number of grid points inside the set times the grid step.
    double snapped_measure(const Grid& grid) const;
    /// {x * factor : x in set}; negative factors reverse the order.
    IntervalSet scaled(double factor) const;

private:
    std::vector<std::pair<double, double>> intervals_;
};

/// D and S with their concentration thresholds.
struct ConcentrationSpec {
    IntervalSet time_set;
    IntervalSet freq_set;
    double eps_d = 0.0;
    double eps_s = 0.0;
};

/// Measured (eps_D, eps_S) for the given sets.
std::pair<double, double> measure_concentration(const SampledSignal& f, const TimeFreqMap& V, const IntervalSet& D,
                                                const IntervalSet& S);

enum class HardyVerdict { forces_zero, gaussian_extremal, unconstrained };

std::string_view to_string(HardyVerdict v);

struct HardyFit {
    double alpha = 0.0;
    double beta = 0.0;
    double c_time = 0.0;
    double c_freq = 0.0;
    double product = 0.0;
    HardyVerdict verdict = HardyVerdict::unconstrained;
    double fit_residual = 0.0;
    Diagnostics diagnostics;
};

inline constexpr double kHardyProductTol = 0.02;
inline constexpr double kHardyResidualLimit = 0.05;
/// Relative level above which sup_w |V| enters the frequency fit.
inline constexpr double kHardyFreqFitLevel = 1e-3;

/// Trichotomy on alpha * beta around 1/4.
HardyVerdict hardy_verdict(double product, double tol = kHardyProductTol);

/// psi(x) = d/dx ln Gamma(x), for any x not a non-positive integer.
double digamma(double x);

/// psi(1/2) - ln(pi).
double log_uncertainty_constant();

/// Heisenberg-type product for the windowed transform. V must be the WOLCT of
/// (f, phi, A); an energy mismatch above 5% is rejected.
InequalityResult heisenberg_check(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A,
                                  const TimeFreqMap& V, double slack = kDefaultSlack);

/// (2/p) C_p (||f|| ||phi||)^p as the constant that closes the p = 2 energy
/// identity: C_p = (2 pi |b|)^{1 - p/2}.
double lieb_bound_constant(double p, double b);
/// The constant (2/p) E_A^p with E_A = (2 pi)^{-1/2} |b|^{1/p - 1/2}.
double lieb_printed_constant(double p, double b);

/// Lieb-type L^p bound. `holds` uses lieb_bound_constant; the printed
/// constant is reported in diagnostics.
InequalityResult lieb_check(const TimeFreqMap& V, double f_norm, double phi_norm, double p,
                            double slack = kDefaultSlack);

/// Logarithmic bound with M = psi(1/2) - ln(pi). ratio = 1 + gap / (||f|| ||phi||)^2.
InequalityResult logarithmic_check(const SampledSignal& f, const SampledSignal& phi, const TimeFreqMap& V,
                                   const OlctParams& A, double slack = kDefaultSlack);

InequalityResult donoho_stark_check(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A,
                                    const ConcentrationSpec& spec, double slack = kDefaultSlack);

inline constexpr double kDefaultFloor = 1e-8;

/// Numerical double-support test for compactly supported f.
InequalityResult abb_support_check(const SampledSignal& f, const TimeFreqMap& V, double floor = kDefaultFloor);

/// dt du sum_{|t|<=T} sum_{|u|<=U} |f(t) V(u, w)| e^{|t u / b|}.
double beurling_functional(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A, double w, double T,
                           double U);

/// B(2T, 2U) against 1.5 B(T, U) at w = argmax ||V(., w)||.
InequalityResult beurling_growth(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A, double T, double U,
                                 double slack = kDefaultSlack);

/// Smallest C with E <= C e^{C |T||U|} R. Always holds.
InequalityResult nazarov_ratio(const SampledSignal& f, const SampledSignal& phi, const TimeFreqMap& V,
                               const OlctParams& A, const IntervalSet& T, const IntervalSet& U);

/**
 * Fits Gaussian envelopes to |f| (in t) and to sup_w |V| (in xi = (u - u0)/b)
 * and classifies alpha * beta. Throws InputError when |f| does not decay like
 * a Gaussian (relative envelope mismatch above kHardyResidualLimit).
 */
HardyFit hardy_classify(const SampledSignal& f, const TimeFreqMap& V, const OlctParams& A,
                        double floor = kDefaultFloor, std::optional<cplx> phi_at_zero = std::nullopt);

struct LiebSurveyRow {
    double p;
    double b;
    double measured;   // du dw sum |V|^p / (||f|| ||phi||)^p
    double empirical;  // lieb_bound_constant(p, b)
    double printed;    // lieb_printed_constant(p, b)
};

struct LiebFit {
    double p;
    double b_exponent;         // least-squares slope of ln(measured) in ln|b|
    double log_prefactor;      // intercept
    double expected_exponent;  // 1 - p/2
    double expected_log_prefactor;
};

struct LiebSurvey {
    std::vector<LiebSurveyRow> rows;
    std::vector<LiebFit> fits;
};

/// Measures the sharp constant on matched Gaussians with A = (0, b, -1/b, 0)
/// for every (p, b) pair and fits its b-dependence per p.
LiebSurvey lieb_constant_survey(const Grid& t_grid, const std::vector<double>& ps, const std::vector<double>& bs);

struct SuiteConfig {
    std::vector<Check> checks{kAllChecks.begin(), kAllChecks.end()};
    double default_slack = kDefaultSlack;
    std::map<Check, double> slack;
    double lieb_p = 4.0;
    double floor = kDefaultFloor;
    TransformMethod method = TransformMethod::fast;
    std::optional<Grid> u_grid;
    std::optional<Grid> w_grid;
    unsigned threads = 1;

    double slack_for(Check c) const;
};

struct CheckOutcome {
    Check name;
    std::optional<InequalityResult> result;
    std::string error;
};

struct UncertaintyReport {
    OlctParams params;
    Grid t_grid;
    Grid u_grid;
    Grid w_grid;
    std::vector<CheckOutcome> outcomes;
    Diagnostics identities;

    /// True when every proven check ran and holds.
    bool all_proven_hold() const;
};

/// Computes the WOLCT once and runs every configured check on it. Individual
/// check failures become error entries; only invalid inputs (zero signal or
/// window, b = 0) throw.
UncertaintyReport run_suite(const SampledSignal& f, const SampledSignal& phi, const OlctParams& A,
                            const SuiteConfig& config = {});

}  // namespace wolct::lab
