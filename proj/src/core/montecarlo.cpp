#include "core/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "core/errors.hpp"
#include "core/fbl.hpp"
#include "core/numerics.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace noma::mc {

namespace {

// Stream tags keep the per-trial streams of different estimators disjoint.
constexpr std::uint64_t kTagExact = 1;
constexpr std::uint64_t kTagOmega = 2;
constexpr std::uint64_t kTagMoments = 3;
constexpr std::uint64_t kTagSic = 4;
constexpr std::uint64_t kTagLink = 5;

constexpr double kZ95 = 1.959963984540054;

void check_params(int copies, int interferers, double snr, std::uint64_t trials) {
    if (copies < 1) throw DomainError("montecarlo: D must be >= 1");
    if (interferers < 0) throw DomainError("montecarlo: M must be >= 0");
    if (!(snr > 0.0)) throw DomainError("montecarlo: snr must be > 0 (linear)");
    if (trials < 1) throw DomainError("montecarlo: trials must be >= 1");
}

double draw_exact(rng::Stream& s, int copies, int interferers, double inv_snr,
                  std::vector<double>& own, std::vector<double>& interference) {
    own.resize(copies);
    interference.resize(copies);
    for (int l = 0; l < copies; ++l) {
        own[l] = s.next_exponential();
        double acc = 0.0;
        for (int q = 0; q < interferers; ++q) acc += s.next_exponential();
        interference[l] = acc;
    }
    return sinr_exact_from_gains(own, interference, 1.0 / inv_snr);
}

double draw_omega(rng::Stream& s, int copies, int interferers, double inv_snr) {
    const double n_match = (copies + 1) / 2.0;
    const double sum_own = s.next_gamma(copies);
    // Omega = chi^2_{2NM} / N drawn as Gamma(NM, 2)/N; NM may be half-integer.
    const double half_omega = s.next_gamma(n_match * interferers) / n_match;
    return sum_own / (half_omega + inv_snr);
}

}  // namespace

OutageEstimate wilson_interval(std::uint64_t hits, std::uint64_t trials) {
    OutageEstimate est;
    est.trials = trials;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    est.p_hat = p;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    est.ci_lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
    est.ci_hi = hits == trials ? 1.0 : std::min(1.0, center + half);
    return est;
}

double sinr_exact_from_gains(std::span<const double> own,
                             std::span<const double> interference_sum, double snr) {
    double sum_own = 0.0;
    double cross = 0.0;
    for (std::size_t l = 0; l < own.size(); ++l) {
        sum_own += own[l];
        cross += interference_sum[l] * own[l];
    }
    return sum_own / (cross / sum_own + 1.0 / snr);
}

SinrSampleSet sample_sinr_exact(int copies, int interferers, double snr, std::uint64_t trials,
                                std::uint64_t seed) {
    check_params(copies, interferers, snr, trials);
    SinrSampleSet set{{}, copies, interferers, snr, seed, trials, SinrKind::ExactSinr};
    set.values.resize(trials);
    const double inv_snr = 1.0 / snr;
    struct None {};
    par::run_chunked<None>(
        trials, None{},
        [&](std::uint64_t lo, std::uint64_t hi, None&) {
            std::vector<double> own, interference;
            for (std::uint64_t t = lo; t < hi; ++t) {
                rng::Stream s(seed, kTagExact, t);
                set.values[t] = draw_exact(s, copies, interferers, inv_snr, own, interference);
            }
        },
        [](None&, const None&) {});
    return set;
}

SinrSampleSet sample_sinr_omega(int copies, int interferers, double snr, std::uint64_t trials,
                                std::uint64_t seed) {
    check_params(copies, interferers, snr, trials);
    if (interferers < 1)
        throw DomainError("sample_sinr_omega: M must be >= 1 (the approximation needs interference)");
    SinrSampleSet set{{}, copies, interferers, snr, seed, trials, SinrKind::OmegaApprox};
    set.values.resize(trials);
    const double inv_snr = 1.0 / snr;
    struct None {};
    par::run_chunked<None>(
        trials, None{},
        [&](std::uint64_t lo, std::uint64_t hi, None&) {
            for (std::uint64_t t = lo; t < hi; ++t) {
                rng::Stream s(seed, kTagOmega, t);
                set.values[t] = draw_omega(s, copies, interferers, inv_snr);
            }
        },
        [](None&, const None&) {});
    return set;
}

OutageEstimate estimate_outage(const SinrSampleSet& samples, double threshold) {
    if (samples.values.empty()) throw EmptySampleError("estimate_outage: empty sample set");
    if (!(threshold > 0.0) || !std::isfinite(threshold))
        throw DomainError("estimate_outage: threshold must be positive and finite");
    std::uint64_t hits = 0;
    for (double g : samples.values) hits += g < threshold;
    return wilson_interval(hits, samples.trials);
}

OutageEstimate outage_mc(SinrKind kind, int copies, int interferers, double threshold, double snr,
                         std::uint64_t trials, std::uint64_t seed) {
    check_params(copies, interferers, snr, trials);
    if (!(threshold > 0.0) || !std::isfinite(threshold))
        throw DomainError("outage_mc: threshold must be positive and finite");
    if (kind == SinrKind::OmegaApprox && interferers < 1)
        throw DomainError("outage_mc: omega approximation needs M >= 1");
    if (kind == SinrKind::LinklevelEmpirical)
        throw DomainError("outage_mc: use sample_sinr_linklevel for the link-level path");
    const double inv_snr = 1.0 / snr;
    const std::uint64_t hits = par::run_chunked<std::uint64_t>(
        trials, 0,
        [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t& acc) {
            std::vector<double> own, interference;
            for (std::uint64_t t = lo; t < hi; ++t) {
                double g;
                if (kind == SinrKind::ExactSinr) {
                    rng::Stream s(seed, kTagExact, t);
                    g = draw_exact(s, copies, interferers, inv_snr, own, interference);
                } else {
                    rng::Stream s(seed, kTagOmega, t);
                    g = draw_omega(s, copies, interferers, inv_snr);
                }
                acc += g < threshold;
            }
        },
        [](std::uint64_t& a, const std::uint64_t& b) { a += b; });
    return wilson_interval(hits, trials);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double ks = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        ks = std::max(ks, std::fabs(i / na - j / nb));
    }
    return ks;
}

MomentDiag moment_diagnostics(int copies, int interferers, std::uint64_t trials,
                              std::uint64_t seed) {
    check_params(copies, interferers, 1.0, trials);
    if (interferers < 1) throw DomainError("moment_diagnostics: M must be >= 1");
    const double n_match = (copies + 1) / 2.0;

    std::vector<double> w_samples(trials), omega_samples(trials);
    std::vector<double> alpha_sq_mean(trials);
    struct None {};
    par::run_chunked<None>(
        trials, None{},
        [&](std::uint64_t lo, std::uint64_t hi, None&) {
            std::vector<double> own(copies);
            for (std::uint64_t t = lo; t < hi; ++t) {
                rng::Stream s(seed, kTagMoments, t);
                double sum = 0.0;
                for (int l = 0; l < copies; ++l) {
                    own[l] = s.next_exponential();
                    sum += own[l];
                }
                double w = 0.0;
                double a2 = 0.0;
                for (int l = 0; l < copies; ++l) {
                    const double alpha = own[l] / sum;
                    const double y = 2.0 * s.next_gamma(interferers);  // chi^2_{2M}
                    w += alpha * y;
                    a2 += alpha * alpha;
                }
                w_samples[t] = w;
                alpha_sq_mean[t] = a2 / copies;
                omega_samples[t] = 2.0 * s.next_gamma(n_match * interferers) / n_match;
            }
        },
        [](None&, const None&) {});

    MomentDiag diag;
    diag.trials = trials;
    diag.predicted_mean = 2.0 * interferers;
    diag.predicted_second = 4.0 * interferers * (interferers + 1.0 / n_match);
    diag.predicted_alpha_sq = 2.0 / (static_cast<double>(copies) * (copies + 1.0));

    double s1 = 0.0, s2 = 0.0, s4 = 0.0, sa = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const double w = w_samples[t];
        s1 += w;
        s2 += w * w;
        s4 += w * w * w * w;
        sa += alpha_sq_mean[t];
    }
    const double n = static_cast<double>(trials);
    diag.mean_w = s1 / n;
    diag.second_w = s2 / n;
    diag.alpha_sq = sa / n;
    diag.se_mean_w = std::sqrt(std::max(0.0, s2 / n - diag.mean_w * diag.mean_w) / n);
    diag.se_second_w = std::sqrt(std::max(0.0, s4 / n - diag.second_w * diag.second_w) / n);
    diag.ks_w_omega = ks_distance(std::move(w_samples), std::move(omega_samples));
    return diag;
}

namespace {

struct SicAccumulator {
    std::vector<std::uint64_t> genie_fail;
    std::vector<std::uint64_t> actual_fail;
};

double layered_sinr(const channel::FrameLayout& layout, const std::vector<double>& power,
                    int total_users, int user, const std::vector<char>& interferes,
                    double inv_snr) {
    double sum_own = 0.0;
    double cross = 0.0;
    for (int l : layout.users[user].blocks) {
        const double x = power[static_cast<std::size_t>(l) * total_users + user];
        sum_own += x;
        double acc = 0.0;
        for (int q = 0; q < total_users; ++q) {
            if (q != user && interferes[q])
                acc += power[static_cast<std::size_t>(l) * total_users + q];
        }
        cross += acc * x;
    }
    return sum_own / (cross / sum_own + inv_snr);
}

}  // namespace

SicResult simulate_sic_frame(const channel::FrameLayout& layout,
                             std::span<const double> thresholds, double snr, std::uint64_t trials,
                             std::uint64_t seed, SicDecision decision, long codeword_bits) {
    layout.validate();
    const int num_layers = layout.num_layers();
    const int total_users = layout.total_users();
    if (static_cast<int>(thresholds.size()) != num_layers)
        throw DomainError("simulate_sic_frame: one threshold per layer required");
    for (double t : thresholds)
        if (!(t > 0.0)) throw DomainError("simulate_sic_frame: thresholds must be positive");
    if (!(snr > 0.0)) throw DomainError("simulate_sic_frame: snr must be > 0");
    if (decision == SicDecision::FblBernoulli && codeword_bits < 2)
        throw DomainError("simulate_sic_frame: Bernoulli decision needs a codeword length");

    std::vector<double> rates(num_layers);
    for (int b = 0; b < num_layers; ++b) rates[b] = std::log2(1.0 + thresholds[b]);

    const double inv_snr = 1.0 / snr;
    SicAccumulator init;
    init.genie_fail.assign(num_layers, 0);
    init.actual_fail.assign(num_layers, 0);

    const SicAccumulator acc = par::run_chunked<SicAccumulator>(
        trials, init,
        [&](std::uint64_t lo, std::uint64_t hi, SicAccumulator& a) {
            std::vector<double> power(static_cast<std::size_t>(layout.blocks) * total_users);
            std::vector<char> genie_mask(total_users), actual_mask(total_users);
            for (std::uint64_t t = lo; t < hi; ++t) {
                const channel::ChannelDraw draw = channel::draw_channel(layout, snr, seed, t);
                for (std::size_t i = 0; i < power.size(); ++i)
                    power[i] = std::norm(draw.gains[i]);
                rng::Stream decide(seed, kTagSic, t);

                // genie mask: layers below the one being decoded are removed;
                // actual mask: failed users stay, successes are cancelled.
                std::fill(actual_mask.begin(), actual_mask.end(), 1);
                for (int b = 1; b <= num_layers; ++b) {
                    for (int k = 0; k < total_users; ++k)
                        genie_mask[k] = layout.users[k].layer >= b;
                    // All users of layer b are decided against the same
                    // interference state, then removed together.
                    std::vector<int> decoded;
                    for (int k = 0; k < total_users; ++k) {
                        if (layout.users[k].layer != b) continue;
                        const double g_genie =
                            layered_sinr(layout, power, total_users, k, genie_mask, inv_snr);
                        const double g_actual =
                            layered_sinr(layout, power, total_users, k, actual_mask, inv_snr);
                        bool fail_genie, fail_actual;
                        if (decision == SicDecision::SinrThreshold) {
                            fail_genie = g_genie < thresholds[b - 1];
                            fail_actual = g_actual < thresholds[b - 1];
                        } else {
                            const auto error_prob = [&](double g) {
                                const double v = fbl::dispersion(g);
                                if (v <= 0.0) return rates[b - 1] > 0.0 ? 1.0 : 0.0;
                                return numerics::q_function(
                                    std::sqrt(codeword_bits / v) *
                                    (std::log2(1.0 + g) - rates[b - 1]));
                            };
                            // One uniform decides both views of the same
                            // transmission, so the genie and propagated
                            // counts coincide when the states coincide.
                            const double u = decide.next_uniform();
                            fail_genie = u < error_prob(g_genie);
                            fail_actual = u < error_prob(g_actual);
                        }
                        a.genie_fail[b - 1] += fail_genie;
                        a.actual_fail[b - 1] += fail_actual;
                        if (!fail_actual) decoded.push_back(k);
                    }
                    for (int k : decoded) actual_mask[k] = 0;
                }
            }
        },
        [](SicAccumulator& a, const SicAccumulator& b) {
            for (std::size_t i = 0; i < a.genie_fail.size(); ++i) {
                a.genie_fail[i] += b.genie_fail[i];
                a.actual_fail[i] += b.actual_fail[i];
            }
        });

    SicResult result;
    for (int b = 0; b < num_layers; ++b) {
        const std::uint64_t per_layer_draws = trials * layout.layers[b].users;
        result.eps.push_back(wilson_interval(acc.genie_fail[b], per_layer_draws));
        result.rho.push_back(wilson_interval(acc.actual_fail[b], per_layer_draws));
    }
    return result;
}

SinrSampleSet sample_sinr_linklevel(const channel::FrameLayout& layout, int user,
                                    long codeword_bits, double snr, std::uint64_t trials,
                                    std::uint64_t seed) {
    layout.validate();
    if (user < 0 || user >= layout.total_users())
        throw DomainError("sample_sinr_linklevel: invalid user index");
    if (codeword_bits < 2 || codeword_bits % 2 != 0)
        throw DomainError("sample_sinr_linklevel: codeword bits must be even and >= 2");
    if (!(snr > 0.0)) throw DomainError("sample_sinr_linklevel: snr must be > 0");
    if (trials < 1) throw DomainError("sample_sinr_linklevel: trials must be >= 1");

    const int nsym = static_cast<int>(codeword_bits / 2);
    const int total_users = layout.total_users();
    const double noise_power = 1.0 / snr;
    const double noise_scale = std::sqrt(noise_power / 2.0);

    // Only users sharing a block with the target contribute.
    std::vector<char> shares(total_users, 0);
    const auto per_block = layout.users_per_block();
    for (int l : layout.users[user].blocks)
        for (int q : per_block[l]) shares[q] = 1;
    shares[user] = 0;

    SinrSampleSet set{{}, static_cast<int>(layout.users[user].blocks.size()),
                      layout.num_layers() - layout.users[user].layer, snr, seed, trials,
                      SinrKind::LinklevelEmpirical};
    set.values.resize(trials);

    struct None {};
    par::run_chunked<None>(
        trials, None{},
        [&](std::uint64_t lo, std::uint64_t hi, None&) {
            std::vector<std::vector<std::complex<double>>> symbols(total_users);
            std::vector<std::complex<double>> combined(nsym), block(nsym);
            std::vector<int> bits(codeword_bits);
            for (std::uint64_t t = lo; t < hi; ++t) {
                const channel::ChannelDraw draw = channel::draw_channel(layout, snr, seed, t);
                rng::Stream s(seed, kTagLink, t);
                const std::uint64_t perm_seed = s.next_u64();

                for (int q = 0; q < total_users; ++q) {
                    if (!shares[q]) continue;
                    for (long i = 0; i < codeword_bits; ++i) bits[i] = s.next_u64() & 1;
                    symbols[q] = channel::qpsk_modulate(bits);
                }

                std::fill(combined.begin(), combined.end(), std::complex<double>{0.0, 0.0});
                double sum_own = 0.0;
                for (int l : layout.users[user].blocks) {
                    const std::complex<double> h_own = draw.gain(l, user);
                    sum_own += std::norm(h_own);
                    for (int i = 0; i < nsym; ++i) {
                        const double u1 = s.next_uniform();
                        const double u2 = s.next_uniform();
                        const double r = std::sqrt(-2.0 * std::log(u1)) * noise_scale;
                        const double ang = 2.0 * std::numbers::pi * u2;
                        block[i] = {r * std::cos(ang), r * std::sin(ang)};
                    }
                    for (int q : per_block[l]) {
                        if (q == user) continue;
                        const channel::Interleaver pi_q =
                            channel::make_interleaver(nsym, perm_seed, l, q);
                        const std::complex<double> h = draw.gain(l, q);
                        for (int i = 0; i < nsym; ++i) block[i] += h * symbols[q][pi_q.perm[i]];
                    }
                    const channel::Interleaver pi_k =
                        channel::make_interleaver(nsym, perm_seed, l, user);
                    const std::complex<double> hc = std::conj(h_own);
                    for (int i = 0; i < nsym; ++i) combined[pi_k.perm[i]] += hc * block[i];
                }

                double disturbance = 0.0;
                for (int i = 0; i < nsym; ++i) disturbance += std::norm(combined[i]);
                disturbance /= nsym;
                set.values[t] = sum_own * sum_own / disturbance;
            }
        },
        [](None&, const None&) {});
    return set;
}

MeanEstimate simulate_linklevel(const channel::FrameLayout& layout, int user, double rate,
                                long codeword_bits, double snr, std::uint64_t trials,
                                std::uint64_t seed) {
    const SinrSampleSet samples =
        sample_sinr_linklevel(layout, user, codeword_bits, snr, trials, seed);
    return fbl::avg_error_mc(samples, rate, static_cast<double>(codeword_bits),
                             fbl::DispersionMode::ExactV);
}

}  // namespace noma::mc
