// Command-line driver for the simulation lab. Subcommands cover the walk,
// urn, branching-chain and diffusion samplers plus the profile/increment/
// occupation experiments. All outputs are CSV with a config-echo header.
//
// Exit codes: 0 success, 1 invalid configuration, 2 replica failure rate
// exceeded, 3 verdict failure under --assert.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sirw/blp.hpp"
#include "sirw/diffusion.hpp"
#include "sirw/raylab.hpp"
#include "sirw/replicate.hpp"
#include "sirw/report.hpp"
#include "sirw/urn.hpp"
#include "sirw/walk.hpp"
#include "sirw/weights.hpp"

namespace {

using namespace sirw;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::size_t replicas = 1000;
    int workers = 0;  // 0: all cores
    std::string out;
    bool assert_verdicts = false;
};

void write_or_print(const Report& report, const std::string& out) {
    if (out.empty()) {
        std::cout << report.to_csv();
    } else {
        report.write_csv(out);
        std::cout << "wrote " << out << " (" << report.rows.size() << " rows, "
                  << report.replicas << " replicas)\n";
    }
}

int finish(const Report& report, const GlobalOpts& g) {
    write_or_print(report, g.out);
    if (g.assert_verdicts && !report.all_pass()) return 3;
    return 0;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated integer list");
    return out;
}

void add_global(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--seed", g.seed, "master seed (64-bit)");
    cmd->add_option("--replicas", g.replicas, "Monte Carlo replicas");
    cmd->add_option("--workers", g.workers, "worker threads (0 = all cores)");
    cmd->add_option("--out", g.out, "output CSV path (default: stdout)");
    cmd->add_flag("--assert", g.assert_verdicts, "exit 3 if any verdict row fails");
}

std::string echo_config(const CLI::App& cmd) {
    std::string line = "config:";
    for (const auto* opt : cmd.get_options()) {
        if (opt->count() == 0) continue;
        line += " " + opt->get_name() + "=" + opt->results().front();
    }
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-interacting walk and perturbed-diffusion simulation lab"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from a config file (flags override)");
    app.failure_message(CLI::FailureMessage::help);

    // ---- simulate-walk ----
    GlobalOpts g_walk;
    std::string walk_weight = "kind=constant,value=1.0";
    std::uint64_t walk_steps = 10000;
    std::string walk_record = "position";
    auto* sim = app.add_subcommand("simulate-walk", "run walks and record them");
    sim->add_option("--weight", walk_weight, "weight descriptor");
    sim->add_option("--steps", walk_steps, "steps per walk")->check(CLI::PositiveNumber);
    sim->add_option("--record", walk_record, "position | decomposition | profile")
        ->check(CLI::IsMember({"position", "decomposition", "profile"}));
    add_global(sim, g_walk);

    // ---- urn-stats ----
    GlobalOpts g_urn;
    std::string urn_variant = "plus", urn_weight = "kind=polynomial,alpha=1.0";
    std::string urn_n = "1000";
    std::string urn_sampler = "direct";
    auto* urn = app.add_subcommand("urn-stats", "stopped-discrepancy moments");
    urn->add_option("--variant", urn_variant)->check(CLI::IsMember({"minus", "plus", "zero"}));
    urn->add_option("--weight", urn_weight, "weight descriptor");
    urn->add_option("--n", urn_n, "comma-separated blue-stop levels");
    urn->add_option("--sampler", urn_sampler)->check(CLI::IsMember({"direct", "rubin"}));
    add_global(urn, g_urn);

    // ---- blp-stats ----
    GlobalOpts g_blp;
    std::string blp_kind = "zeta", blp_weight = "kind=constant,value=1.0";
    std::uint64_t blp_init = 0, blp_gens = 100;
    auto* blp = app.add_subcommand("blp-stats", "branching-like chain paths");
    blp->add_option("--kind", blp_kind)->check(CLI::IsMember({"zeta", "tilde"}));
    blp->add_option("--weight", blp_weight, "weight descriptor");
    blp->add_option("--init", blp_init, "initial value");
    blp->add_option("--generations", blp_gens, "generations per path")
        ->check(CLI::PositiveNumber);
    add_global(blp, g_blp);

    // ---- diffusion ----
    GlobalOpts g_diff;
    std::string process = "besq";
    double d_alpha = 0.0, d_delta = 0.0, d_theta = 0.0, d_start = 1.0, d_step = 1e-4,
           d_horizon = 1.0;
    std::uint64_t d_n = 10000;
    auto* diff = app.add_subcommand("diffusion", "reference process sampling");
    diff->add_option("--process", process)->check(CLI::IsMember({"besq", "bmpe", "pq"}));
    diff->add_option("--alpha", d_alpha);
    diff->add_option("--delta", d_delta, "dimension (besq)");
    diff->add_option("--theta", d_theta, "perturbation (bmpe, pq)");
    diff->add_option("--start", d_start)->check(CLI::NonNegativeNumber);
    diff->add_option("--step", d_step)->check(CLI::PositiveNumber);
    diff->add_option("--horizon", d_horizon)->check(CLI::PositiveNumber);
    diff->add_option("--n", d_n, "steps for the pq walk")->check(CLI::PositiveNumber);
    add_global(diff, g_diff);

    // ---- rk-profile ----
    GlobalOpts g_rk;
    std::string rk_weight = "kind=polynomial,alpha=1.0";
    double rk_M = 2.0;
    std::uint64_t rk_N = 300;
    std::size_t rk_grid = 21;
    auto* rk = app.add_subcommand("rk-profile", "edge-local-time profile at an upcrossing stop");
    rk->add_option("--weight", rk_weight);
    rk->add_option("--M", rk_M)->check(CLI::PositiveNumber);
    rk->add_option("--N", rk_N)->check(CLI::PositiveNumber);
    rk->add_option("--grid", rk_grid);
    add_global(rk, g_rk);

    // ---- increment-test ----
    GlobalOpts g_inc;
    std::string inc_weight = "kind=polynomial,alpha=1.0";
    double inc_M = 20.0, inc_c = 0.1;
    std::uint64_t inc_N = 300;
    std::size_t inc_grid = 21;
    auto* inc = app.add_subcommand("increment-test", "profile increments between upcrossing stops");
    inc->add_option("--weight", inc_weight);
    inc->add_option("--M", inc_M)->check(CLI::PositiveNumber);
    inc->add_option("--c", inc_c);
    inc->add_option("--N", inc_N)->check(CLI::PositiveNumber);
    inc->add_option("--grid", inc_grid);
    add_global(inc, g_inc);

    // ---- bmpe-increment ----
    GlobalOpts g_bmpe;
    double bm_alpha = 1.0, bm_M = 20.0, bm_eps = 0.05;
    std::uint64_t bm_q = 300;
    auto* bmpe = app.add_subcommand("bmpe-increment",
                                    "local-time increments of the perturbed diffusion");
    bmpe->add_option("--alpha", bm_alpha)->check(CLI::NonNegativeNumber);
    bmpe->add_option("--M", bm_M)->check(CLI::PositiveNumber);
    bmpe->add_option("--eps", bm_eps)->check(CLI::PositiveNumber);
    bmpe->add_option("--q", bm_q, "sites per unit of scaled space")->check(CLI::PositiveNumber);
    add_global(bmpe, g_bmpe);

    // ---- nonconv ----
    GlobalOpts g_nc;
    double nc_alpha = 1.0, nc_delta = 0.05, nc_M = 20.0, nc_c = 0.05, nc_K = 50.0;
    std::string nc_N = "300";
    auto* nc = app.add_subcommand("nonconv", "occupation-functional gap walk vs diffusion");
    nc->add_option("--alpha", nc_alpha)->check(CLI::NonNegativeNumber);
    nc->add_option("--N", nc_N, "comma-separated scales, n = N^2");
    nc->add_option("--delta", nc_delta);
    nc->add_option("--M", nc_M)->check(CLI::PositiveNumber);
    nc->add_option("--c", nc_c);
    nc->add_option("--K", nc_K, "second-moment cap")->check(CLI::PositiveNumber);
    add_global(nc, g_nc);

    // ---- afc-test ----
    GlobalOpts g_afc;
    std::string afc_weight = "kind=pq,w0=2.0";
    std::uint64_t afc_n = 10000;
    std::string afc_t = "0.5,1.0";
    double afc_threshold = 0.03, afc_h = 1e-5;
    auto* afc = app.add_subcommand("afc-test", "diffusive-limit marginal comparison");
    afc->add_option("--weight", afc_weight);
    afc->add_option("--n", afc_n)->check(CLI::PositiveNumber);
    afc->add_option("--t", afc_t, "comma-separated times in (0,1]");
    afc->add_option("--ks-threshold", afc_threshold);
    afc->add_option("--bmpe-step", afc_h);
    add_global(afc, g_afc);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const auto w = parse_weight(walk_weight);
            Report report;
            report.echo("experiment: simulate-walk");
            report.echo(echo_config(*sim));
            report.echo("seed: " + std::to_string(g_walk.seed));
            const int workers = g_walk.workers;
            if (walk_record == "profile") {
                struct Rec {
                    std::vector<double> e, d, l;
                    std::int64_t lo, hi;
                };
                auto batch = replicate<Rec>(
                    g_walk.replicas, g_walk.seed, 0xC11A, workers, [&](std::size_t, Rng& rng) {
                        Walk walk(w, rng);
                        for (std::uint64_t k = 0; k < walk_steps; ++k) walk.step();
                        Rec rec;
                        rec.lo = walk.running_min();
                        rec.hi = walk.running_max();
                        for (std::int64_t x = rec.lo; x <= rec.hi; ++x) {
                            rec.e.push_back(static_cast<double>(walk.upcrossings(x)));
                            rec.d.push_back(static_cast<double>(walk.downcrossings(x)));
                            rec.l.push_back(static_cast<double>(walk.site_visits(x)));
                        }
                        return rec;
                    });
                require_failure_rate(batch.failures, g_walk.replicas, 0.05, "simulate-walk");
                report.replicas = g_walk.replicas;
                report.failures = batch.failures;
                // aggregate means on the union range
                std::int64_t lo = 0, hi = 0;
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    if (!batch.ok[i]) continue;
                    lo = std::min(lo, batch.records[i].lo);
                    hi = std::max(hi, batch.records[i].hi);
                }
                for (std::int64_t x = lo; x <= hi; ++x) {
                    double se = 0, sd = 0, sl = 0;
                    std::size_t cnt = 0;
                    for (std::size_t i = 0; i < batch.size(); ++i) {
                        if (!batch.ok[i]) continue;
                        const auto& r = batch.records[i];
                        if (x >= r.lo && x <= r.hi) {
                            const auto idx = static_cast<std::size_t>(x - r.lo);
                            se += r.e[idx];
                            sd += r.d[idx];
                            sl += r.l[idx];
                        }
                        ++cnt;
                    }
                    const double dc = static_cast<double>(cnt);
                    report.rows.push_back({"E_mean", static_cast<double>(x), se / dc,
                                           std::nullopt, std::nullopt, std::nullopt, "info"});
                    report.rows.push_back({"D_mean", static_cast<double>(x), sd / dc,
                                           std::nullopt, std::nullopt, std::nullopt, "info"});
                    report.rows.push_back({"L_mean", static_cast<double>(x), sl / dc,
                                           std::nullopt, std::nullopt, std::nullopt, "info"});
                }
            } else {
                const bool decomposition = walk_record == "decomposition";
                struct Rec {
                    double x, m, gamma, vmin, vmax, d1, dm1;
                };
                auto batch = replicate<Rec>(
                    g_walk.replicas, g_walk.seed, 0xC11B, workers, [&](std::size_t, Rng& rng) {
                        Walk walk(w, rng);
                        double gamma = 0.0, d1 = 0.0, dm1 = 0.0;
                        for (std::uint64_t k = 0; k < walk_steps; ++k) {
                            if (decomposition) {
                                const double d = walk.drift();
                                gamma += d;
                                if (walk.position() == 1) d1 += d;
                                if (walk.position() == -1) dm1 += d;
                            }
                            walk.step();
                        }
                        const double x = static_cast<double>(walk.position());
                        return Rec{x,
                                   x - gamma,
                                   gamma,
                                   static_cast<double>(walk.running_min()),
                                   static_cast<double>(walk.running_max()),
                                   d1,
                                   dm1};
                    });
                require_failure_rate(batch.failures, g_walk.replicas, 0.05, "simulate-walk");
                report.replicas = g_walk.replicas;
                report.failures = batch.failures;
                auto add = [&](const std::string& name, auto field) {
                    const auto m = moments(collect(batch, field));
                    report.rows.push_back({name, static_cast<double>(walk_steps), m.mean,
                                           m.se_mean, std::nullopt, std::nullopt, "info"});
                };
                add("position_mean", [](const Rec& r) { return r.x; });
                const auto mx = moments(collect(batch, [](const Rec& r) { return r.x; }));
                report.rows.push_back({"position_var", static_cast<double>(walk_steps), mx.var,
                                       mx.se_var, std::nullopt, std::nullopt, "info"});
                add("running_min_mean", [](const Rec& r) { return r.vmin; });
                add("running_max_mean", [](const Rec& r) { return r.vmax; });
                if (decomposition) {
                    add("martingale_mean", [](const Rec& r) { return r.m; });
                    add("gamma_mean", [](const Rec& r) { return r.gamma; });
                    add("delta_plus1_mean", [](const Rec& r) { return r.d1; });
                    add("delta_minus1_mean", [](const Rec& r) { return r.dm1; });
                }
            }
            return finish(report, g_walk);
        }

        if (*urn) {
            const auto w = parse_weight(urn_weight);
            const auto variant = urn_variant == "minus"
                                     ? UrnVariant::Minus
                                     : (urn_variant == "plus" ? UrnVariant::Plus
                                                              : UrnVariant::Zero);
            const auto sampler =
                urn_sampler == "direct" ? UrnSampler::Direct : UrnSampler::Rubin;
            auto report = moment_scan(variant, w, parse_u64_list(urn_n), g_urn.replicas,
                                      g_urn.seed, sampler, g_urn.workers);
            report.echo(echo_config(*urn));
            return finish(report, g_urn);
        }

        if (*blp) {
            const auto w = parse_weight(blp_weight);
            const auto kind = blp_kind == "zeta" ? BlpKind::Zeta : BlpKind::ZetaTilde;
            struct Rec {
                double final_value;
                double sigma0;  // -1 when zero was not reached
            };
            auto batch = replicate<Rec>(
                g_blp.replicas, g_blp.seed, 0xB1D, g_blp.workers, [&](std::size_t, Rng& rng) {
                    const auto path = blp_run(kind, w, blp_init, blp_gens, rng);
                    return Rec{static_cast<double>(path.values.back()),
                               path.first_hit_zero
                                   ? static_cast<double>(*path.first_hit_zero)
                                   : -1.0};
                });
            require_failure_rate(batch.failures, g_blp.replicas, 0.05, "blp-stats");
            Report report;
            report.echo("experiment: blp-stats");
            report.echo(echo_config(*blp));
            report.echo("seed: " + std::to_string(g_blp.seed));
            report.replicas = g_blp.replicas;
            report.failures = batch.failures;
            const auto mf =
                moments(collect(batch, [](const Rec& r) { return r.final_value; }));
            report.rows.push_back({"final_value_mean", static_cast<double>(blp_gens), mf.mean,
                                   mf.se_mean, std::nullopt, std::nullopt, "info"});
            std::size_t hit = 0;
            double sigma_sum = 0.0;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (!batch.ok[i]) continue;
                if (batch.records[i].sigma0 >= 0) {
                    ++hit;
                    sigma_sum += batch.records[i].sigma0;
                }
            }
            report.rows.push_back({"hit_zero_fraction", static_cast<double>(blp_gens),
                                   static_cast<double>(hit) / static_cast<double>(batch.size()),
                                   std::nullopt, std::nullopt, std::nullopt, "info"});
            if (hit > 0)
                report.rows.push_back({"sigma0_mean_given_hit", static_cast<double>(blp_gens),
                                       sigma_sum / static_cast<double>(hit), std::nullopt,
                                       std::nullopt, std::nullopt, "info"});
            return finish(report, g_blp);
        }

        if (*diff) {
            Report report;
            report.echo("experiment: diffusion");
            report.echo(echo_config(*diff));
            report.echo("seed: " + std::to_string(g_diff.seed));
            report.replicas = g_diff.replicas;
            if (process == "besq") {
                BesqParams p;
                p.alpha = d_alpha;
                p.delta = d_delta;
                p.start = d_start;
                p.step = d_step;
                p.horizon = d_horizon;
                validate(p);
                struct Rec {
                    double end, integral;
                };
                auto batch = replicate<Rec>(
                    g_diff.replicas, g_diff.seed, 0xD1F, g_diff.workers,
                    [&](std::size_t, Rng& rng) {
                        const auto path = sample_besq(p, rng);
                        double integral = 0.0;
                        for (std::size_t k = 0; k + 1 < path.values.size(); ++k)
                            integral += path.values[k];
                        return Rec{path.values.back(), integral * p.step};
                    });
                const auto me = moments(collect(batch, [](const Rec& r) { return r.end; }));
                const auto mi =
                    moments(collect(batch, [](const Rec& r) { return r.integral; }));
                report.rows.push_back({"endpoint_mean", d_horizon, me.mean, me.se_mean,
                                       besq_mean(d_alpha, d_delta, d_start, d_horizon),
                                       std::nullopt, "info"});
                report.rows.push_back({"endpoint_var", d_horizon, me.var, me.se_var,
                                       besq_variance(d_alpha, d_delta, d_start, d_horizon),
                                       std::nullopt, "info"});
                const auto im = besq_integral_moments(d_alpha, d_start, d_horizon);
                const bool closed_form = d_delta == 0.0;
                report.rows.push_back({"integral_mean", d_horizon, mi.mean, mi.se_mean,
                                       closed_form ? std::optional<double>(im.mean)
                                                   : std::nullopt,
                                       std::nullopt, "info"});
                report.rows.push_back({"integral_var", d_horizon, mi.var, mi.se_var,
                                       closed_form ? std::optional<double>(im.variance)
                                                   : std::nullopt,
                                       std::nullopt, "info"});
            } else if (process == "bmpe") {
                BmpeParams p;
                p.theta_plus = p.theta_minus = d_theta;
                p.alpha_scale = d_alpha;
                p.step = d_step;
                p.horizon = d_horizon;
                auto batch = replicate<double>(
                    g_diff.replicas, g_diff.seed, 0xD2F, g_diff.workers,
                    [&](std::size_t, Rng& rng) { return sample_bmpe(p, rng).values.back(); });
                const auto m = moments(collect(batch, [](double v) { return v; }));
                report.rows.push_back({"endpoint_mean", d_horizon, m.mean, m.se_mean, 0.0,
                                       std::nullopt, "info"});
                report.rows.push_back({"endpoint_var", d_horizon, m.var, m.se_var,
                                       std::nullopt, std::nullopt, "info"});
            } else {
                auto batch = replicate<double>(
                    g_diff.replicas, g_diff.seed, 0xD3F, g_diff.workers,
                    [&](std::size_t, Rng& rng) {
                        return sample_pq_walk(d_theta, d_n, rng).values.back();
                    });
                const auto m = moments(collect(batch, [](double v) { return v; }));
                report.rows.push_back({"endpoint_mean", 1.0, m.mean, m.se_mean, 0.0,
                                       std::nullopt, "info"});
                report.rows.push_back({"endpoint_var", 1.0, m.var, m.se_var, std::nullopt,
                                       std::nullopt, "info"});
            }
            return finish(report, g_diff);
        }

        if (*rk) {
            auto report = rk_profile(parse_weight(rk_weight), rk_M, rk_N, g_rk.replicas,
                                     g_rk.seed, g_rk.workers, rk_grid);
            report.echo(echo_config(*rk));
            return finish(report, g_rk);
        }

        if (*inc) {
            if (!(inc_c >= 0.0 && inc_c < 0.5))
                throw CLI::ValidationError("--c", "c must lie in [0, 1/2)");
            auto result = increment_experiment(parse_weight(inc_weight), inc_M, inc_c, inc_N,
                                               g_inc.replicas, g_inc.seed, g_inc.workers,
                                               inc_grid);
            result.report.echo(echo_config(*inc));
            return finish(result.report, g_inc);
        }

        if (*bmpe) {
            PqScale scale;
            scale.q = bm_q;
            scale.eps = bm_eps;
            auto report = bmpe_increment_experiment(bm_alpha, bm_M, g_bmpe.replicas,
                                                    g_bmpe.seed, g_bmpe.workers, scale);
            report.echo(echo_config(*bmpe));
            return finish(report, g_bmpe);
        }

        if (*nc) {
            if (!(nc_delta > 0.0 && nc_delta <= 0.5))
                throw CLI::ValidationError("--delta", "delta must lie in (0, 1/2]");
            if (!(nc_c >= 0.0 && nc_c < 0.5))
                throw CLI::ValidationError("--c", "c must lie in [0, 1/2)");
            auto result = nonconvergence_test(nc_alpha, parse_u64_list(nc_N), nc_delta, nc_M,
                                              nc_c, nc_K, g_nc.replicas, g_nc.seed,
                                              g_nc.workers);
            result.report.echo(echo_config(*nc));
            return finish(result.report, g_nc);
        }

        if (*afc) {
            std::vector<double> ts;
            {
                std::stringstream ss(afc_t);
                std::string item;
                while (std::getline(ss, item, ',')) ts.push_back(std::stod(item));
            }
            auto report = afc_limit_test(parse_weight(afc_weight), afc_n, ts, g_afc.replicas,
                                         g_afc.seed, g_afc.workers, afc_threshold, afc_h);
            report.echo(echo_config(*afc));
            return finish(report, g_afc);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
