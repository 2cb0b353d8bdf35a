// ttx: tensor-train cross approximation toolbox.
//
// Subcommands:
//   gen     write a synthetic instance (.dt tensor, .noise.dt, .tt of T_r)
//   cross   run one cross approximation and print stats
//   sweep   run an experiment sweep, emit CSV (and optionally an SVG plot)
//   bounds  evaluate the error-bound quantities for given files/sets
//
// Exit codes: 0 success, 2 argument error, 3 budget/resource error.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

#include "ttcross/bench.hpp"
#include "ttcross/bounds.hpp"
#include "ttcross/io.hpp"
#include "ttcross/tt_cross.hpp"

using namespace ttcross;

namespace {

std::string trim(const std::string& s) {
    const auto l = s.find_first_not_of(" \t\r");
    if (l == std::string::npos) return "";
    const auto r = s.find_last_not_of(" \t\r");
    return s.substr(l, r - l + 1);
}

// `--config file` support: key=value lines become --key=value tokens, with the
// command line taking precedence over the file
void expand_config(std::vector<std::string>& args) {
    std::string path;
    for (auto it = args.begin(); it != args.end(); ++it) {
        if (*it == "--config") {
            if (std::next(it) == args.end())
                throw std::invalid_argument("--config needs a file path");
            path = *std::next(it);
            args.erase(it, it + 2);
            break;
        }
        if (it->rfind("--config=", 0) == 0) {
            path = it->substr(9);
            args.erase(it);
            break;
        }
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string flag = "--" + key;
        bool on_cli = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                on_cli = true;
                break;
            }
        if (!on_cli) args.push_back(flag + "=" + value);
    }
}

struct GenArgs {
    index_t n = 4, d = 3, r = 2;
    double eta = 0.0, mu = 0.0;
    std::uint64_t seed = 0;
    std::string out = "instance";
};

int run_gen(const GenArgs& a) {
    SyntheticInstance inst = gen_synthetic(a.n, a.d, a.r, a.eta, a.mu, a.seed);
    write_dt(*inst.t, a.out + ".dt");
    write_dt(*inst.noise, a.out + ".noise.dt");
    // the unit-norm T_r in TT form; eta*F is dense by construction
    SyntheticInstance clean = a.eta == 0.0 ? inst : gen_synthetic(a.n, a.d, a.r, 0.0, 0.0, a.seed);
    write_tt(tt_svd(*clean.t, std::vector<index_t>(static_cast<std::size_t>(a.n - 1), a.r)),
             a.out + ".tt");
    std::cout << "wrote " << a.out << ".dt (|T|_F = " << format_double(inst.t->frobenius_norm())
              << "), " << a.out << ".noise.dt, " << a.out << ".tt\n";
    return 0;
}

struct CrossArgs {
    std::string input;
    std::string noise;
    index_t n = 4, d = 3, r = 2;
    double eta = 0.0;
    double mu = 0.0;
    index_t r_prime = 2;
    double tau = 0.0;
    int sweeps = detail::kDefaultMaxSweeps;
    std::uint64_t seed = 0;
    std::string save_tt, save_sets;
};

int run_cross(const CrossArgs& a) {
    std::shared_ptr<DenseTensor> t;
    std::shared_ptr<ElementOracle> oracle;
    if (!a.input.empty()) {
        t = std::make_shared<DenseTensor>(read_dt(a.input));
        oracle = make_dense_oracle(t);
        if (!a.noise.empty()) {
            auto e = std::make_shared<DenseTensor>(read_dt(a.noise));
            if (e->dims() != t->dims())
                throw std::invalid_argument("cross: noise dims do not match the tensor");
            auto base = t;
            const double mu = a.mu;
            oracle = std::make_shared<ElementOracle>(t->dims(), [base, e, mu](index_t flat) {
                return base->at_flat(flat) + mu * e->at_flat(flat);
            });
        } else if (a.mu > 0.0) {
            oracle = noisy_oracle(oracle, a.mu, mix_seed(a.seed, 3));
        }
    } else {
        SyntheticInstance inst = gen_synthetic(a.n, a.d, a.r, a.eta, a.mu, a.seed);
        t = inst.t;
        oracle = inst.oracle;
    }

    CrossResult res = cross_approximate(*oracle, a.r_prime, a.tau, a.sweeps, a.seed);
    std::cout << "queries " << res.stats.queries << " of " << t->size() << " entries ("
              << format_double(100.0 * static_cast<double>(res.stats.queries) /
                               static_cast<double>(t->size()))
              << "%)\n";
    std::cout << "sweeps " << res.stats.sweeps_run << "\n";
    std::cout << "ranks";
    for (index_t rk : res.tt.ranks()) std::cout << ' ' << rk;
    std::cout << "\n";
    for (const auto& w : res.stats.warnings) std::cout << "warning: " << w << "\n";

    const DenseTensor that = tt_to_dense(res.tt);
    std::cout << "observed_fro " << format_double((t->vec() - that.vec()).norm()) << "\n";
    std::cout << "mse_db " << format_double(mse_db(*t, that)) << "\n";

    if (!a.save_tt.empty()) write_tt(res.tt, a.save_tt);
    if (!a.save_sets.empty()) write_sets(res.sets, a.save_sets);
    return 0;
}

struct SweepArgs {
    ExperimentConfig cfg;
    std::string sweep_name = "none";
    std::string out = "sweep.csv";
    std::string svg;
    bool no_wallclock = false;
    bool bounds = false;
};

int run_sweep(SweepArgs& a) {
    a.cfg.sweep_variable = sweep_variable_from_string(a.sweep_name);
    a.cfg.record_wallclock = !a.no_wallclock;
    a.cfg.compute_bounds = a.bounds;
    const auto rows = run_experiment(a.cfg);
    emit_csv(rows, a.out);
    if (!a.svg.empty()) emit_svg(rows, a.svg);
    int failed = 0;
    for (const auto& r : rows)
        if (!r.error.empty()) {
            ++failed;
            std::cerr << "row error: " << r.error << "\n";
        }
    std::cout << "wrote " << rows.size() << " rows to " << a.out;
    if (failed > 0) std::cout << " (" << failed << " failed)";
    std::cout << "\n";
    return 0;
}

struct BoundsArgs {
    std::string input;
    std::string noise;
    std::string sets;
    std::vector<index_t> ranks;
    index_t r = 0;
    double tau = 0.0;
    std::string out;
};

int run_bounds(const BoundsArgs& a) {
    const DenseTensor t = read_dt(a.input);
    NestedIndexSets sets = read_sets(a.sets);
    std::vector<index_t> ranks = a.ranks;
    if (ranks.empty()) {
        if (a.r < 1) throw std::invalid_argument("bounds: give --ranks or a uniform --r");
        ranks.assign(static_cast<std::size_t>(t.order() - 1), a.r);
    }

    std::unique_ptr<DenseTensor> e;
    if (!a.noise.empty()) {
        e = std::make_unique<DenseTensor>(read_dt(a.noise));
        if (e->dims() != t.dims()) throw std::invalid_argument("bounds: noise dims mismatch");
    }

    BoundReport rep = evaluate_bounds(t, e.get(), ranks, sets);

    // observed error of the cross built from these sets at the given tau
    {
        auto shared = std::make_shared<DenseTensor>(t);
        std::shared_ptr<ElementOracle> oracle;
        if (e) {
            auto noise = std::make_shared<DenseTensor>(*e);
            oracle = std::make_shared<ElementOracle>(t.dims(), [shared, noise](index_t flat) {
                return shared->at_flat(flat) + noise->at_flat(flat);
            });
        } else {
            oracle = make_dense_oracle(shared);
        }
        const std::vector<double> tau(static_cast<std::size_t>(t.order() - 1), a.tau);
        const DenseTensor that = tt_to_dense(build_cores(*oracle, sets, tau));
        rep.observed_fro = (t.vec() - that.vec()).norm();
    }

    std::ostringstream csv;
    csv << kBoundCsvHeader << '\n' << bound_report_csv(rep) << '\n';
    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(a.out);
        if (!f) throw std::runtime_error("cannot open for writing: " + a.out);
        f << csv.str();
    }

    std::cout << "# per-bond (k, epsilon_k, w_k, v_k, c_k, rank_check, kappa_col, kappa_row)\n";
    for (const auto& p : rep.per_k)
        std::cout << "# " << p.k << ' ' << format_double(p.epsilon_k) << ' ' << format_double(p.w_k)
                  << ' ' << format_double(p.v_k) << ' ' << format_double(p.c_k) << ' '
                  << (p.rank_check ? 1 : 0) << ' ' << format_double(p.kappa_col) << ' '
                  << format_double(p.kappa_row) << "\n";
    std::cout << "# rhs_shape tracks the bound only up to the universal constant; "
                 "rhs_kappa assumes the existential selection and small epsilon\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor-train cross approximation toolbox"};
    app.require_subcommand(1);
    app.footer("Every subcommand also accepts --config <file> with plain key=value lines\n"
               "(keys are the long option names without dashes; the command line wins).");

    GenArgs gen;
    auto* cgen = app.add_subcommand("gen", "write a synthetic instance to .dt/.tt files");
    cgen->add_option("--n", gen.n, "tensor order");
    cgen->add_option("--d", gen.d, "mode size");
    cgen->add_option("--r", gen.r, "true TT rank");
    cgen->add_option("--eta", gen.eta, "model-error level");
    cgen->add_option("--mu", gen.mu, "measurement-error level");
    cgen->add_option("--seed", gen.seed, "RNG seed");
    cgen->add_option("--out", gen.out, "output path prefix");

    CrossArgs cross;
    auto* ccross = app.add_subcommand("cross", "run a single cross approximation");
    ccross->add_option("--input", cross.input, "tensor file (.dt); otherwise synthetic");
    ccross->add_option("--noise", cross.noise, "error tensor file (.dt), scaled by --mu");
    ccross->add_option("--n", cross.n, "tensor order (synthetic)");
    ccross->add_option("--d", cross.d, "mode size (synthetic)");
    ccross->add_option("--r", cross.r, "true TT rank (synthetic)");
    ccross->add_option("--eta", cross.eta, "model-error level (synthetic)");
    ccross->add_option("--mu", cross.mu, "measurement-error level");
    ccross->add_option("--r-prime", cross.r_prime, "estimated rank / set size");
    ccross->add_option("--tau", cross.tau, "pseudoinverse truncation threshold");
    ccross->add_option("--sweeps", cross.sweeps, "max pivot sweeps");
    ccross->add_option("--seed", cross.seed, "RNG seed");
    ccross->add_option("--save-tt", cross.save_tt, "write the result train (.tt)");
    ccross->add_option("--save-sets", cross.save_sets, "write the interpolation sets (.sets)");

    SweepArgs sweep;
    std::vector<double> tau_list{0.0};
    auto* csweep = app.add_subcommand("sweep", "run an experiment sweep, emit CSV");
    csweep->add_option("--n", sweep.cfg.n, "tensor order");
    csweep->add_option("--d", sweep.cfg.d, "mode size");
    csweep->add_option("--r", sweep.cfg.r, "true TT rank");
    csweep->add_option("--r-prime", sweep.cfg.r_prime, "estimated rank");
    csweep->add_option("--eta", sweep.cfg.eta, "model-error level");
    csweep->add_option("--mu", sweep.cfg.mu, "measurement-error level");
    csweep->add_option("--tau", tau_list, "tau values (one run per value)")->delimiter(',');
    csweep->add_option("--tau-scale", sweep.cfg.tau_scale,
                       "tau = scale * value when sweeping eta or mu");
    csweep->add_option("--seed", sweep.cfg.seed, "base RNG seed (trial t uses seed + t)");
    csweep->add_option("--sweeps", sweep.cfg.sweeps, "max pivot sweeps");
    csweep->add_option("--trials", sweep.cfg.trials, "trials per configuration");
    csweep->add_option("--sweep", sweep.sweep_name, "sweep variable: r_prime|n|eta|mu");
    csweep->add_option("--values", sweep.cfg.sweep_values, "sweep values")->delimiter(',');
    csweep->add_option("--out", sweep.out, "CSV output path");
    csweep->add_option("--svg", sweep.svg, "optional SVG plot path");
    csweep->add_flag("--no-wallclock", sweep.no_wallclock, "zero the wallclock column (byte-stable)");
    csweep->add_flag("--bounds", sweep.bounds, "fill epsilon columns when within budget");
    csweep->add_option("--bound-budget", sweep.cfg.bound_budget,
                       "max elements for bound evaluation");

    BoundsArgs bounds;
    auto* cbounds = app.add_subcommand("bounds", "evaluate bound quantities for files/sets");
    cbounds->add_option("--input", bounds.input, "tensor file (.dt)")->required();
    cbounds->add_option("--sets", bounds.sets, "interpolation sets file (.sets)")->required();
    cbounds->add_option("--noise", bounds.noise, "pre-scaled error tensor file (.dt)");
    cbounds->add_option("--ranks", bounds.ranks, "per-bond ranks r_1..r_{N-1}")->delimiter(',');
    cbounds->add_option("--r", bounds.r, "uniform rank alternative to --ranks");
    cbounds->add_option("--tau", bounds.tau, "tau for the observed reconstruction");
    cbounds->add_option("--out", bounds.out, "write the report row here instead of stdout");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
        if (cgen->parsed()) return run_gen(gen);
        if (ccross->parsed()) return run_cross(cross);
        if (csweep->parsed()) {
            sweep.cfg.tau_values = tau_list;
            return run_sweep(sweep);
        }
        if (cbounds->parsed()) return run_bounds(bounds);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const budget_error& ex) {
        std::cerr << "budget error: " << ex.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "argument error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
