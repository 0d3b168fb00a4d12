#include <chrono>
#include <complex>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "atomloc/atomloc.hpp"

namespace {

using namespace atomloc;
using nlohmann::json;

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::string convention_str = "paper-figure";

  Convention convention() const {
    return convention_str == "strict-k0" ? Convention::strict_k0 : Convention::paper_figure;
  }

  RunConfig load() const {
    if (config_path.empty()) return RunConfig{};
    return load_config(config_path, convention());
  }
};

std::string csv_complexless(double v) { return format_double(v); }

int cmd_filters(const GlobalOpts& go) {
  const RunConfig rc = go.load();
  OutputSet out(go.out_dir, "filters", rc, go.convention());

  const auto phi = linspace(0.0, pi, 2001);
  const struct {
    const char* name;
    double chi0_times_alpha;  // chi0 = this * alpha
  } panels[] = {{"filters_chi0_plus.csv", 2.0},
                {"filters_chi0_zero.csv", 0.0},
                {"filters_chi0_minus.csv", -2.0}};

  for (const auto& p : panels) {
    InteractionConfig cfg = rc.interaction;
    cfg.theta = 0.0;
    cfg.chi0 = p.chi0_times_alpha * cfg.alpha;
    CsvBuilder csv(out.stamp(), {"phi", "f_a", "f_b", "envelope"});
    for (double x : phi) {
      const auto [fa, fb] = filter_values(x, cfg);
      const double d = amplitude_filter(x, cfg);
      csv.numeric_row({x, fa, fb, d * d});
    }
    out.add_csv(p.name, csv);
  }
  const auto manifest = out.finish();
  std::cout << "filters: 3 files + " << manifest.string() << "\n";
  return 0;
}

int cmd_posdist(const GlobalOpts& go) {
  const RunConfig rc = go.load();
  OutputSet out(go.out_dir, "posdist", rc, go.convention());

  const Grid g = make_grid(rc.wavepacket, rc.grid.log2_points, rc.grid.padding);
  const auto f = build_wavepacket(rc.wavepacket, g);
  const auto t = position_distribution(g, f, rc.interaction);

  const bool dual = rc.interaction.ramsey_on;
  CsvBuilder csv(out.stamp(), dual
                                  ? std::vector<std::string>{"phi", "p_a", "p_b", "envelope"}
                                  : std::vector<std::string>{"phi", "pi_a", "pi_b", "envelope"});
  const auto& da = t.column(dual ? Column::p_a : Column::pi_a);
  const auto& db = t.column(dual ? Column::p_b : Column::pi_b);
  for (std::size_t i = 0; i < t.axis.size(); ++i)
    csv.numeric_row({t.axis[i], da[i], db[i], t.envelope[i]});
  out.add_csv("position.csv", csv);
  const auto manifest = out.finish();
  std::cout << "posdist: position.csv (P(a)=" << t.prob_a << ", P(b)=" << t.prob_b << ") + "
            << manifest.string() << "\n";
  return 0;
}

int cmd_momdist(const GlobalOpts& go) {
  const RunConfig rc = go.load();
  OutputSet out(go.out_dir, "momdist", rc, go.convention());

  const Grid g = make_grid(rc.wavepacket, rc.grid.log2_points, rc.grid.padding);
  const auto f = build_wavepacket(rc.wavepacket, g);
  const auto t = momentum_distribution(g, f, rc.interaction);

  const bool dual = rc.interaction.ramsey_on;
  CsvBuilder csv(out.stamp(), dual ? std::vector<std::string>{"q", "p_a", "p_b"}
                                   : std::vector<std::string>{"q", "pi_a", "pi_b"});
  const auto& da = t.column(dual ? Column::p_a : Column::pi_a);
  const auto& db = t.column(dual ? Column::p_b : Column::pi_b);
  for (std::size_t i = 0; i < t.axis.size(); ++i) csv.numeric_row({t.axis[i], da[i], db[i]});
  out.add_csv("momentum.csv", csv);
  const auto manifest = out.finish();
  std::cout << "momdist: momentum.csv (P(a)=" << t.prob_a << ", P(b)=" << t.prob_b << ") + "
            << manifest.string() << "\n";
  return 0;
}

json branch_json(const BranchMechanics& bm) {
  return {{"prob", bm.prob},
          {"delta_x", bm.delta_x},
          {"delta_p", bm.delta_p},
          {"delta_p_t", bm.delta_p_t},
          {"delta_p_k_heuristic", bm.delta_p_k_heuristic}};
}

json mode_json(const ModeMechanics& mm) {
  json j = {{"ramsey_on", mm.ramsey_on},
            {"a", branch_json(mm.a)},
            {"b", branch_json(mm.b)}};
  if (mm.ramsey_on) j["superposed_mechanical_spread"] = mm.superposed_spread;
  return j;
}

int cmd_mechanics(const GlobalOpts& go) {
  const RunConfig rc = go.load();
  OutputSet out(go.out_dir, "mechanics", rc, go.convention());

  // Impulse-spread sweep over Gaussian position densities. The numerical
  // column integrates an analytic Gaussian on its own fine grid, independent
  // of the FFT window.
  CsvBuilder csv(out.stamp(), {"phi0", "sigma", "dpt_numeric", "dpt_closed", "dpt_smallsigma"});
  const auto phi0s = linspace(0.0, pi / 2.0, 33);
  const std::vector<double> sigmas{0.02, 0.05, 0.1, 0.2, 0.1 * pi};
  for (double phi0 : phi0s) {
    for (double sigma : sigmas) {
      const auto xs = linspace(phi0 - 8.0 * sigma, phi0 + 8.0 * sigma, 8001);
      std::vector<double> dens(xs.size());
      const double norm = 1.0 / (sigma * std::sqrt(two_pi));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double z = (xs[i] - phi0) / sigma;
        dens[i] = norm * std::exp(-0.5 * z * z);
      }
      csv.numeric_row({phi0, sigma, dpt_numeric(xs, dens, rc.interaction),
                       dpt_closed(phi0, sigma, rc.interaction),
                       dpt_small_sigma(phi0, sigma, rc.interaction)});
    }
  }
  out.add_csv("mechanics_sweep.csv", csv);

  // Dual vs field-only comparison on the configured wavepacket.
  const Grid g = make_grid(rc.wavepacket, rc.grid.log2_points, rc.grid.padding);
  const auto f = build_wavepacket(rc.wavepacket, g);
  const auto pc = popper_comparison(g, f, rc.interaction, 0.0, pi / 2.0);
  json report;
  report["dual"] = mode_json(pc.dual);
  report["field_only"] = mode_json(pc.field_only);
  report["localization_window"] = {0.0, pi / 2.0};
  report["notes"] = {
      "delta_p_k_heuristic = delta_p - delta_p_t: an operational subtraction, "
      "not an independently defined observable",
      "superposed_mechanical_spread: classical two-branch mixture of the +/- "
      "impulse over the measured position density, weighted by the "
      "internal-state populations"};
  out.add_text("popper_report.json", report.dump(2) + "\n");

  const auto manifest = out.finish();
  std::cout << "mechanics: mechanics_sweep.csv, popper_report.json + " << manifest.string()
            << "\n";
  return 0;
}

int cmd_sample(const GlobalOpts& go, std::uint64_t seed, std::uint64_t count) {
  const RunConfig rc = go.load();
  OutputSet out(go.out_dir, "sample", rc, go.convention());
  out.set_seed(seed);

  const Grid g = make_grid(rc.wavepacket, rc.grid.log2_points, rc.grid.padding);
  const auto f = build_wavepacket(rc.wavepacket, g);
  const auto od = outcome_density(g, f, rc.interaction);
  const auto records = sample_records(od, count, seed);

  CsvBuilder csv(out.stamp(), {"chi", "state"});
  std::size_t count_a = 0;
  for (const auto& r : records) {
    csv.row({csv_complexless(r.chi), branch_name(r.state)});
    if (r.state == Branch::a) ++count_a;
  }
  out.add_csv("samples.csv", csv);

  const auto gof = chi_squared_gof(records, od);
  json summary;
  summary["generator"] = sampler_generator_name;
  summary["seed"] = seed;
  summary["count"] = count;
  summary["freq_a"] = double(count_a) / double(records.size());
  summary["freq_b"] = double(records.size() - count_a) / double(records.size());
  summary["gof"] = {{"chi2", gof.chi2},
                    {"dof", gof.dof},
                    {"p_value", gof.p_value},
                    {"bins", gof.bins_used}};
  out.add_text("summary.json", summary.dump(2) + "\n");

  const auto manifest = out.finish();
  std::cout << "sample: " << records.size() << " records, GOF p=" << gof.p_value << " + "
            << manifest.string() << "\n";
  return 0;
}

// ---- validate: closed forms vs the number-basis oracle, plus invariants ----

struct CheckLog {
  json checks = json::array();
  bool all_ok = true;

  void add(const std::string& name, bool ok, double value, const std::string& detail) {
    checks.push_back({{"name", name}, {"pass", ok}, {"value", value}, {"detail", detail}});
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << ": " << detail << "\n";
    all_ok = all_ok && ok;
  }
};

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * (double(gen() >> 11) * 0x1.0p-53);
}

/// Worst closed-vs-oracle amplitude error relative to the larger branch
/// magnitude, so a deeply suppressed branch is judged on the measurement's
/// scale rather than its own vanishing one.
double pair_error(const cplx& ca, const cplx& cb, const std::complex<long double>& oa,
                  const std::complex<long double>& ob) {
  const long double scale =
      std::max({std::abs(oa), std::abs(ob), (long double)1e-300});
  const long double da = std::abs(std::complex<long double>(ca.real(), ca.imag()) - oa);
  const long double db = std::abs(std::complex<long double>(cb.real(), cb.imag()) - ob);
  return double(std::max(da, db) / scale);
}

int cmd_validate(const GlobalOpts& go) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig rc = go.load();
  CheckLog log;
  std::mt19937_64 gen(0x5eed);

  // Dual amplitudes against the truncated number-basis simulation, theta=0.
  {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      InteractionConfig cfg;
      cfg.alpha = uniform(gen, 0.5, 3.0);
      cfg.theta = 0.0;
      const double phi = uniform(gen, 0.0, pi);
      const double eta = light_shift(phi, cfg);
      cfg.chi0 = 2.0 * cfg.alpha * std::cos(eta) + uniform(gen, -3.0, 3.0);
      const auto [ca, cb] = dual_amplitudes(phi, cfg);
      const auto [oa, ob] = fock::oracle_amplitudes<long double>(phi, cfg);
      worst = std::max(worst, pair_error(ca, cb, oa, ob));
    }
    log.add("dual amplitudes vs number-basis oracle (theta=0)", worst < 1e-8, worst,
            "worst relative error " + format_double(worst) + " over 200 tuples");
  }

  // Field-only amplitudes, one prepared state at a time.
  {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      InteractionConfig cfg;
      cfg.ramsey_on = false;
      const bool prep_a = k % 2 == 0;
      cfg.c_a = prep_a ? 1.0 : 0.0;
      cfg.c_b = prep_a ? 0.0 : 1.0;
      cfg.alpha = uniform(gen, 0.5, 3.0);
      const double phi = uniform(gen, 0.0, pi);
      const double eta = light_shift(phi, cfg);
      cfg.chi0 = 2.0 * cfg.alpha * std::cos(eta) + uniform(gen, -3.0, 3.0);
      const auto [sa, sb] = single_amplitudes(phi, cfg);
      const auto [oa, ob] = fock::oracle_amplitudes<long double>(phi, cfg);
      const auto closed = prep_a ? sa : sb;
      const auto oracle = prep_a ? oa : ob;
      const long double scale = std::max<long double>(std::abs(oracle), 1e-300);
      worst = std::max(
          worst, double(std::abs(std::complex<long double>(closed.real(), closed.imag()) -
                                 oracle) /
                        scale));
    }
    log.add("field-only amplitudes vs oracle", worst < 1e-8, worst,
            "worst relative error " + format_double(worst) + " over 100 tuples");
  }

  // Generalized local-oscillator phase.
  {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      InteractionConfig cfg;
      cfg.alpha = uniform(gen, 0.5, 3.0);
      cfg.theta = uniform(gen, 0.0, two_pi);
      const double phi = uniform(gen, 0.0, pi);
      const double eta = light_shift(phi, cfg);
      cfg.chi0 = 2.0 * cfg.alpha * std::cos(eta - cfg.theta) + uniform(gen, -3.0, 3.0);
      const auto [ca, cb] = dual_amplitudes(phi, cfg);
      const auto [oa, ob] = fock::oracle_amplitudes<long double>(phi, cfg);
      worst = std::max(worst, pair_error(ca, cb, oa, ob));
    }
    log.add("dual amplitudes vs oracle (general theta)", worst < 1e-8, worst,
            "worst relative error " + format_double(worst) + " over 100 tuples");
  }

  // Overlap closed form vs Hermite-recursion projection on a lattice.
  {
    const double alpha = 2.5;
    const std::size_t n_max = fock::default_n_max(alpha);
    const auto base = fock::coherent_state<long double>(alpha, n_max);
    double worst = 0.0;
    for (int ic = 0; ic < 21; ++ic) {
      const double chi = -4.0 + 8.0 * ic / 20.0;
      for (int ie = 0; ie < 21; ++ie) {
        const double eta = two_pi * ie / 21.0;
        const auto rotated = fock::phase_rotate(base, (long double)eta);
        for (int it = 0; it < 11; ++it) {
          const double theta = pi * it / 10.0;
          const auto chi_vec =
              fock::quadrature_vector<long double>(chi, theta, n_max);
          const auto oracle = fock::project(chi_vec, rotated);
          const cplx closed = quadrature_overlap(alpha, eta, theta, chi);
          const long double scale = std::max<long double>(std::abs(oracle), 1e-300);
          const double err =
              double(std::abs(std::complex<long double>(closed.real(), closed.imag()) -
                              oracle) /
                     scale);
          worst = std::max(worst, err);
        }
      }
    }
    log.add("overlap closed form vs Hermite projection (21x21x11 lattice)", worst < 1e-8,
            worst, "worst pointwise relative error " + format_double(worst));
  }

  // Completeness of the outcome density in chi, closed form and oracle path.
  {
    // Half-span 2*alpha + 6: the density is a unit-variance Gaussian whose
    // mean can sit anywhere in [-2*alpha, 2*alpha], so six sigmas remain.
    const double alpha = 2.5, eta = 0.7, theta = 0.3;
    const auto chis = linspace(-(6.0 + 2.0 * alpha), 6.0 + 2.0 * alpha, 4001);
    std::vector<double> closed_d(chis.size()), oracle_d(chis.size());
    const std::size_t n_max = fock::default_n_max(alpha);
    const auto rotated =
        fock::phase_rotate(fock::coherent_state<long double>(alpha, n_max), (long double)eta);
    for (std::size_t i = 0; i < chis.size(); ++i) {
      closed_d[i] = std::norm(quadrature_overlap(alpha, eta, theta, chis[i]));
      const auto v = fock::quadrature_vector<long double>(chis[i], theta, n_max);
      oracle_d[i] = double(std::norm(fock::project(v, rotated)));
    }
    const double m_closed = trapezoid(chis, closed_d);
    const double m_oracle = trapezoid(chis, oracle_d);
    const double err = std::max(std::abs(m_closed - 1.0), std::abs(m_oracle - 1.0));
    log.add("outcome completeness integral", err < 1e-8, err,
            "closed " + format_double(m_closed) + ", oracle " + format_double(m_oracle));
  }

  // Filter identities at chi0 = 0.
  {
    InteractionConfig cfg;
    cfg.chi0 = 0.0;
    double worst_sum = 0.0, worst_period = 0.0;
    for (double phi : linspace(0.0, pi, 4001)) {
      const auto [fa, fb] = filter_values(phi, cfg);
      const double d = amplitude_filter(phi, cfg);
      worst_sum = std::max(worst_sum, std::abs(fa + fb - d * d));
      const auto [fa2, fb2] = filter_values(phi + pi / 2.0, cfg);
      worst_period = std::max({worst_period, std::abs(fa - fa2), std::abs(fb - fb2)});
    }
    log.add("filter sum rule F_a + F_b = D^2", worst_sum < 1e-12, worst_sum,
            "worst deviation " + format_double(worst_sum));
    log.add("filter pi/2 periodicity at chi0=0", worst_period < 1e-12, worst_period,
            "worst deviation " + format_double(worst_period));
  }

  // Flat-top transform bookkeeping: Parseval per branch and the mixture rule.
  {
    RunConfig frc;  // defaults: flat-top, chi0 = 0
    const Grid g = make_grid(frc.wavepacket, frc.grid.log2_points, frc.grid.padding);
    const auto f = build_wavepacket(frc.wavepacket, g);
    InteractionConfig cfg = frc.interaction;

    const auto mom = momentum_distribution(g, f, cfg);
    const double pa_q = trapezoid(mom.p_a, g.dq());
    const double pb_q = trapezoid(mom.p_b, g.dq());
    const double parseval =
        std::max(std::abs(pa_q - mom.prob_a), std::abs(pb_q - mom.prob_b));
    log.add("Parseval per branch (flat-top)", parseval < 1e-9, parseval,
            "worst branch deviation " + format_double(parseval));

    cfg.ramsey_on = false;
    const auto mom_off = momentum_distribution(g, f, cfg);
    double worst_mix = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const double lhs = mom.p_a[i] + mom.p_b[i];
      const double rhs = 0.5 * (mom_off.pi_a[i] + mom_off.pi_b[i]);
      worst_mix = std::max(worst_mix, std::abs(lhs - rhs));
    }
    log.add("dual/field-only mixture identity", worst_mix < 1e-9, worst_mix,
            "worst pointwise deviation " + format_double(worst_mix));

    const auto od = outcome_density(g, f, frc.interaction);
    const double mass_err = std::abs(od.total_mass() - 1.0);
    log.add("outcome density mass (flat-top)", mass_err < 1e-8, mass_err,
            "|mass - 1| = " + format_double(mass_err));
  }

  // Dispersive-regime inequalities, when the config supplies lab rates.
  if (rc.regime) {
    const auto rep = validate_regime(*rc.regime, rc.interaction);
    log.add("dispersive-regime inequalities", rep.pass(), rep.balance_residual,
            "|delta|/gamma = " + format_double(rep.ratio_a) + " and " +
                format_double(rep.ratio_b) + " (margin " + format_double(rc.regime->margin) +
                "), shift-balance residual " + format_double(rep.balance_residual));
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  OutputSet out(go.out_dir, "validate", rc, go.convention());
  json report;
  report["checks"] = log.checks;
  report["all_pass"] = log.all_ok;
  report["runtime_seconds"] = seconds;
  out.add_text("validation_report.json", report.dump(2) + "\n");
  out.finish();

  std::cout << (log.all_ok ? "validate: all checks passed" : "validate: FAILURES above")
            << " (" << seconds << " s)\n";
  return log.all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"standing-wave position measurement toolkit: filter functions, "
               "localization distributions, dipole-force analytics, and a "
               "Born-rule sampler"};
  app.require_subcommand(1);

  GlobalOpts go;
  app.add_option("--config", go.config_path, "JSON run configuration");
  app.add_option("--out", go.out_dir, "output directory")->capture_default_str();
  app.add_option("--convention", go.convention_str,
                 "mapping from figure axis x/lambda to the phase variable")
      ->check(CLI::IsMember({"paper-figure", "strict-k0"}))
      ->capture_default_str();

  app.add_subcommand("filters", "filter functions over one spatial period");
  app.add_subcommand("posdist", "near-region position distributions");
  app.add_subcommand("momdist", "far-region momentum distributions");
  app.add_subcommand("mechanics", "dipole-impulse spread sweep and mode comparison");
  auto* sample_cmd = app.add_subcommand("sample", "seeded Born-rule measurement records");
  std::uint64_t seed = 0, count = 100000;
  sample_cmd->add_option("--seed", seed, "random seed")->required();
  sample_cmd->add_option("--count", count, "number of records")->capture_default_str();
  app.add_subcommand("validate", "closed forms vs the number-basis oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("filters")) return cmd_filters(go);
    if (app.got_subcommand("posdist")) return cmd_posdist(go);
    if (app.got_subcommand("momdist")) return cmd_momdist(go);
    if (app.got_subcommand("mechanics")) return cmd_mechanics(go);
    if (app.got_subcommand("sample")) return cmd_sample(go, seed, count);
    if (app.got_subcommand("validate")) return cmd_validate(go);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numerics_error& e) {
    std::cerr << "numerical contract violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
