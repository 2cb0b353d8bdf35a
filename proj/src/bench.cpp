#include "ttcross/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ttcross/io.hpp"

namespace ttcross {

namespace {

DenseTensor gaussian_tensor(const std::vector<index_t>& dims, std::uint64_t seed) {
    DenseTensor t(dims);
    const index_t n = t.size();
    for (index_t i = 0; i < n; ++i) t.at_flat(i) = gaussian_at(seed, static_cast<std::uint64_t>(i));
    return t;
}

void normalize_unit(DenseTensor& t) {
    const double norm = t.frobenius_norm();
    if (norm == 0.0) throw std::runtime_error("gen_synthetic: zero-norm component");
    t.vec() /= norm;
}

}  // namespace

SyntheticInstance gen_synthetic(index_t n, index_t d, index_t r, double eta, double mu,
                                std::uint64_t seed) {
    if (n < 2 || d < 1) throw std::invalid_argument("gen_synthetic: need N >= 2 and d >= 1");
    if (r < 1 || r > d)
        throw std::invalid_argument("gen_synthetic: uniform TT rank r must satisfy 1 <= r <= d");
    if (eta < 0.0 || mu < 0.0) throw std::invalid_argument("gen_synthetic: eta and mu must be >= 0");

    const std::vector<index_t> dims(static_cast<std::size_t>(n), d);
    if (product(dims) > detail::kDenseElementBudget)
        throw budget_error("gen_synthetic: instance exceeds the element budget");
    const std::vector<index_t> ranks(static_cast<std::size_t>(n - 1), r);

    auto t = std::make_shared<DenseTensor>(dims);
    {
        const DenseTensor raw = gaussian_tensor(dims, mix_seed(seed, 1));
        *t = tt_to_dense(tt_svd(raw, ranks));
    }
    normalize_unit(*t);  // T_r with |T_r|_F = 1

    if (eta > 0.0) {
        DenseTensor f = gaussian_tensor(dims, mix_seed(seed, 2));
        normalize_unit(f);
        t->vec() += eta * f.vec();  // T = T_r + eta * F
    }

    auto e = std::make_shared<DenseTensor>(gaussian_tensor(dims, mix_seed(seed, 3)));
    normalize_unit(*e);

    SyntheticInstance inst;
    inst.t = t;
    inst.noise = e;
    inst.mu = mu;
    inst.oracle = std::make_shared<ElementOracle>(
        dims, [t, e, mu](index_t flat) { return t->at_flat(flat) + mu * e->at_flat(flat); });
    return inst;
}

SweepVariable sweep_variable_from_string(const std::string& s) {
    if (s == "none" || s.empty()) return SweepVariable::none;
    if (s == "r_prime" || s == "r-prime") return SweepVariable::r_prime;
    if (s == "n" || s == "N") return SweepVariable::order_n;
    if (s == "eta") return SweepVariable::eta;
    if (s == "mu") return SweepVariable::mu;
    throw std::invalid_argument("unknown sweep variable: " + s);
}

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::none: return "none";
        case SweepVariable::r_prime: return "r_prime";
        case SweepVariable::order_n: return "n";
        case SweepVariable::eta: return "eta";
        case SweepVariable::mu: return "mu";
    }
    return "none";
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
    if (cfg.tau_values.empty()) throw std::invalid_argument("run_experiment: no tau values");
    for (double t : cfg.tau_values)
        if (t < 0.0) throw std::invalid_argument("run_experiment: tau must be >= 0");
    if (cfg.sweep_variable == SweepVariable::none && !cfg.sweep_values.empty())
        throw std::invalid_argument("run_experiment: sweep values given without a sweep variable");
    if (cfg.sweep_variable != SweepVariable::none && cfg.sweep_values.empty())
        throw std::invalid_argument("run_experiment: sweep variable without values");
    if (cfg.tau_scale >= 0.0 && cfg.sweep_variable != SweepVariable::eta &&
        cfg.sweep_variable != SweepVariable::mu)
        throw std::invalid_argument("run_experiment: tau_scale applies only to eta or mu sweeps");

    std::vector<double> values = cfg.sweep_values;
    if (cfg.sweep_variable == SweepVariable::none) values = {0.0};

    std::vector<ResultRow> rows;
    for (double value : values) {
        index_t n = cfg.n, r_prime = cfg.r_prime;
        double eta = cfg.eta, mu = cfg.mu;
        switch (cfg.sweep_variable) {
            case SweepVariable::r_prime: r_prime = static_cast<index_t>(std::llround(value)); break;
            case SweepVariable::order_n: n = static_cast<index_t>(std::llround(value)); break;
            case SweepVariable::eta: eta = value; break;
            case SweepVariable::mu: mu = value; break;
            case SweepVariable::none: break;
        }
        std::vector<double> taus = cfg.tau_values;
        if (cfg.tau_scale >= 0.0) taus = {cfg.tau_scale * value};

        for (double tau : taus) {
            for (int trial = 0; trial < cfg.trials; ++trial) {
                ResultRow row;
                row.sweep_var = to_string(cfg.sweep_variable);
                row.sweep_value = value;
                row.trial = trial;
                row.n = n;
                row.d = cfg.d;
                row.r = cfg.r;
                row.r_prime = r_prime;
                row.eta = eta;
                row.mu = mu;
                row.tau = tau;
                row.seed = cfg.seed + static_cast<std::uint64_t>(trial);

                const auto t0 = std::chrono::steady_clock::now();
                try {
                    SyntheticInstance inst = gen_synthetic(n, cfg.d, cfg.r, eta, mu, row.seed);
                    CrossResult res =
                        cross_approximate(*inst.oracle, r_prime, tau, cfg.sweeps, row.seed);
                    const DenseTensor that = tt_to_dense(res.tt);
                    row.t_norm_fro = inst.t->frobenius_norm();
                    row.observed_fro = (inst.t->vec() - that.vec()).norm();
                    row.mse_db = mse_db(*inst.t, that);
                    row.queries = res.stats.queries;
                    if (cfg.compute_bounds && inst.t->size() <= cfg.bound_budget) {
                        const std::vector<index_t> ranks(static_cast<std::size_t>(n - 1), cfg.r);
                        row.epsilon = epsilon_of(*inst.t, ranks).first;
                        row.epsilon_bar = row.epsilon + mu;  // |mu E|_F = mu, E has unit norm
                    }
                } catch (const budget_error& ex) {
                    row.error = ex.what();
                    row.t_norm_fro = row.observed_fro = row.mse_db =
                        std::numeric_limits<double>::quiet_NaN();
                }
                if (cfg.record_wallclock) {
                    const auto t1 = std::chrono::steady_clock::now();
                    row.wallclock_ms =
                        std::chrono::duration<double, std::milli>(t1 - t0).count();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.sweep_var << ',' << format_double(r.sweep_value) << ',' << r.trial << ',' << r.n
            << ',' << r.d << ',' << r.r << ',' << r.r_prime << ',' << format_double(r.eta) << ','
            << format_double(r.mu) << ',' << format_double(r.tau) << ',' << r.seed << ','
            << format_double(r.t_norm_fro) << ',' << format_double(r.observed_fro) << ','
            << format_double(r.mse_db) << ',' << r.queries << ',' << format_double(r.epsilon) << ','
            << format_double(r.epsilon_bar) << ',' << format_double(r.wallclock_ms) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("read_csv: unexpected header in " + path);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
        if (f.size() != 18) throw std::runtime_error("read_csv: malformed row in " + path);
        ResultRow r;
        r.sweep_var = f[0];
        r.sweep_value = std::strtod(f[1].c_str(), nullptr);
        r.trial = std::stoi(f[2]);
        r.n = std::stoll(f[3]);
        r.d = std::stoll(f[4]);
        r.r = std::stoll(f[5]);
        r.r_prime = std::stoll(f[6]);
        r.eta = std::strtod(f[7].c_str(), nullptr);
        r.mu = std::strtod(f[8].c_str(), nullptr);
        r.tau = std::strtod(f[9].c_str(), nullptr);
        r.seed = std::stoull(f[10]);
        r.t_norm_fro = std::strtod(f[11].c_str(), nullptr);
        r.observed_fro = std::strtod(f[12].c_str(), nullptr);
        r.mse_db = std::strtod(f[13].c_str(), nullptr);
        r.queries = std::stoll(f[14]);
        r.epsilon = std::strtod(f[15].c_str(), nullptr);
        r.epsilon_bar = std::strtod(f[16].c_str(), nullptr);
        r.wallclock_ms = std::strtod(f[17].c_str(), nullptr);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string bound_report_csv(const BoundReport& rep) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream out;
    out << format_double(rep.epsilon) << ',' << rep.r_max << ','
        << format_double(rep.kappa.value_or(nan)) << ',' << format_double(rep.a) << ','
        << format_double(rep.c) << ',' << format_double(rep.epsilon_bar) << ','
        << format_double(rep.rhs_kappa.value_or(nan)) << ',' << format_double(rep.rhs_shape)
        << ',' << format_double(rep.observed_fro);
    return out.str();
}

void emit_svg(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    const int width = 640, height = 480, margin = 60;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // median MSE per (group, x); groups by tau, falling back to r'
    std::map<double, std::map<double, std::vector<double>>> groups;
    bool by_tau = false;
    {
        std::vector<double> taus;
        for (const auto& r : rows)
            if (std::find(taus.begin(), taus.end(), r.tau) == taus.end()) taus.push_back(r.tau);
        by_tau = taus.size() > 1;
    }
    bool logx = true;
    for (const auto& r : rows) {
        if (!r.error.empty() || !std::isfinite(r.mse_db)) continue;
        groups[by_tau ? r.tau : static_cast<double>(r.r_prime)][r.sweep_value].push_back(r.mse_db);
        if (r.sweep_value <= 0.0) logx = false;
    }
    if (groups.empty()) {
        out << "</svg>\n";
        return;
    }

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& [g, pts] : groups)
        for (auto& [x, ys] : pts) {
            const double xv = logx ? std::log10(x) : x;
            const double yv = median(ys);
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    auto px = [&](double x) {
        const double xv = logx ? std::log10(x) : x;
        return margin + (xv - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto py = [&](double y) { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); };

    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-size=\"13\">" << (rows.empty() ? "" : rows[0].sweep_var)
        << (logx ? " (log10)" : "") << "</text>\n";
    out << "<text x=\"18\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << height / 2
        << ")\">MSE (dB)</text>\n";

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int ci = 0;
    for (auto& [g, pts] : groups) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (auto& [x, ys] : pts) out << px(x) << ',' << py(median(ys)) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << 20 + 16 * ci << "\" font-size=\"12\" fill=\""
            << colors[ci % 6] << "\">" << (by_tau ? "tau=" : "r'=") << format_double(g) << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace ttcross
