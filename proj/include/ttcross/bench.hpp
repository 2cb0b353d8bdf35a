#pragma once

#include <memory>
#include <string>

#include "ttcross/bounds.hpp"
#include "ttcross/oracle.hpp"
#include "ttcross/tt_cross.hpp"

namespace ttcross {

/// Synthetic instance: the model-true tensor T = T_r + eta*F, the frozen unit
/// measurement-error tensor E, and an oracle serving T + mu*E. T_r, F and E
/// are each normalized to unit Frobenius norm; T itself is not renormalized.
struct SyntheticInstance {
    std::shared_ptr<DenseTensor> t;      // T_r + eta * F
    std::shared_ptr<DenseTensor> noise;  // E, unit Frobenius norm
    std::shared_ptr<ElementOracle> oracle;
    double mu = 0.0;
};

/// T_r comes from truncating a seeded Gaussian tensor with a sequential SVD at
/// uniform bond rank r; F and E are seeded standard-normal tensors. All three
/// are generated by a counter-based scheme, so regeneration is exact.
SyntheticInstance gen_synthetic(index_t n, index_t d, index_t r, double eta, double mu,
                                std::uint64_t seed);

enum class SweepVariable { none, r_prime, order_n, eta, mu };

SweepVariable sweep_variable_from_string(const std::string& s);
std::string to_string(SweepVariable v);

struct ExperimentConfig {
    index_t n = 4;
    index_t d = 2;
    index_t r = 2;        // true rank
    index_t r_prime = 2;  // estimated rank
    double eta = 0.0;     // model-error level
    double mu = 0.0;      // measurement-error level
    std::vector<double> tau_values{0.0};  // one run per tau
    double tau_scale = -1.0;  // when >= 0 and sweeping eta or mu: tau = tau_scale * value
    std::uint64_t seed = 0;
    int sweeps = detail::kDefaultMaxSweeps;
    int trials = 5;
    SweepVariable sweep_variable = SweepVariable::none;
    std::vector<double> sweep_values;  // empty with sweep_variable none
    bool compute_bounds = false;       // epsilon / epsilon_bar columns
    index_t bound_budget = 1 << 21;    // skip bound columns above this size
    bool record_wallclock = true;      // false makes output byte-stable
};

struct ResultRow {
    std::string sweep_var;
    double sweep_value = 0.0;
    int trial = 0;
    index_t n = 0, d = 0, r = 0, r_prime = 0;
    double eta = 0.0, mu = 0.0, tau = 0.0;
    std::uint64_t seed = 0;
    double t_norm_fro = 0.0;
    double observed_fro = 0.0;
    double mse_db = 0.0;
    index_t queries = 0;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double epsilon_bar = std::numeric_limits<double>::quiet_NaN();
    double wallclock_ms = 0.0;
    std::string error;  // nonempty when the row failed (budget etc.)
};

/// One row per (sweep value, tau, trial). MSE is measured against the
/// model-true tensor T, never against the noisy measurements. Budget errors
/// are recorded in the row and the run continues.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader =
    "sweep_var,sweep_value,trial,N,d,r,r_prime,eta,mu,tau,seed,t_norm_fro,observed_fro,mse_db,"
    "queries,epsilon,epsilon_bar,wallclock_ms";

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

/// Minimal self-contained line plot of MSE against the sweep value, one
/// polyline per tau group.
void emit_svg(const std::vector<ResultRow>& rows, const std::string& path);

inline constexpr const char* kBoundCsvHeader =
    "epsilon,r_max,kappa,a,c,epsilon_bar,rhs_kappa,rhs_shape,observed_fro";

/// One CSV row for a bound report (absent kappa/rhs_kappa print as nan).
std::string bound_report_csv(const BoundReport& rep);

/// Median helper used for plotting and the acceptance protocol.
double median(std::vector<double> v);

}  // namespace ttcross
