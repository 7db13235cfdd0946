// sampler.hpp — synthetic measurement records of the sine-Gordon phase.
//
// Pipeline per shot: integrate the Ito process d phi = A dx + sqrt(2 D dx) N
// on a fine grid (initial value drawn from the stationary density), optionally
// add solitons, then push the unwrapped field through the imaging model
// (Gaussian PSF convolution + pixel coarse-graining) and wrap.  Out-of-
// distribution proxies live at pixel resolution and skip the field stage.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sg/constants.hpp"
#include "sg/dataset.hpp"
#include "sg/errors.hpp"
#include "sg/rng.hpp"
#include "sg/transfer.hpp"

namespace sg::sampler {

using data::Dataset;
using data::DatasetKind;
using data::Trajectory;
using transfer::GroundState;
using transfer::SgParams;

// Unwrapped phase on a fine spatial grid; sample i sits at x = (i + 1/2) dx.
struct FineField {
    std::vector<double> phases;
    double dx_fine = 0.1; // um

    double extent() const { return static_cast<double>(phases.size()) * dx_fine; }
};

struct ImagingConfig {
    double sigma_psf = 3.0;  // Gaussian PSF width, um
    double pixel_size = 2.0; // um
    std::uint32_t L = 35;    // pixels per trajectory

    void validate() const {
        if (!(sigma_psf >= 0.0)) throw config_error("ImagingConfig: sigma_psf must be >= 0");
        if (!(pixel_size > 0.0)) throw config_error("ImagingConfig: pixel_size must be > 0");
        if (L < 2) throw config_error("ImagingConfig: L must be >= 2");
    }
};

struct DatasetSpec {
    DatasetKind kind = DatasetKind::equilibrium;
    std::vector<double> Q_values;
    std::uint32_t shots_per_Q = 1;
    double fluctuation = 0.08; // relative std of per-shot lambda_T and Q (log-normal)
    std::uint64_t seed = 0;
    ImagingConfig imaging;
    double lambda_T = 25.0;      // base thermal coherence length, um
    double dx_fine = 0.1;        // integration step, um
    double soliton_mean = 1.0;   // Poisson mean kink count (soliton_injected)
    double soliton_width = 2.0;  // kink width, um
    double relax_distance = 1.0; // per-pixel Ito relaxation length (ood_quench_proxy), um

    void validate() const {
        imaging.validate();
        if (Q_values.empty()) throw config_error("DatasetSpec: Q_values must not be empty");
        if (shots_per_Q < 1) throw config_error("DatasetSpec: shots_per_Q must be >= 1");
        if (!(fluctuation >= 0.0)) throw config_error("DatasetSpec: fluctuation must be >= 0");
        if (!(lambda_T > 0.0)) throw config_error("DatasetSpec: lambda_T must be > 0");
        if (!(dx_fine > 0.0)) throw config_error("DatasetSpec: dx_fine must be > 0");
        for (double q : Q_values)
            if (!(q >= 0.0)) throw config_error("DatasetSpec: Q values must be >= 0");
    }
};

// --------------------------------------------------------- stationary IC --

// Inverse-CDF sampler for the wrapped stationary density |Psi_0|^2.
class StationarySampler {
public:
    explicit StationarySampler(const GroundState& gs, int grid = 4096) : grid_(grid) {
        cdf_.resize(static_cast<std::size_t>(grid) + 1, 0.0);
        const double h = two_pi / grid;
        for (int i = 0; i < grid; ++i) {
            const double phi = -pi + (i + 0.5) * h;
            const double rho = std::max(0.0, transfer::stationary_density(gs, phi));
            cdf_[static_cast<std::size_t>(i) + 1] = cdf_[static_cast<std::size_t>(i)] + rho * h;
        }
        const double total = cdf_.back();
        for (double& c : cdf_) c /= total;
    }

    double sample(rng::Stream& rng) const {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t hi = std::min<std::size_t>(cdf_.size() - 1,
                                               static_cast<std::size_t>(it - cdf_.begin()));
        if (hi == 0) hi = 1;
        const std::size_t lo = hi - 1;
        const double span = cdf_[hi] - cdf_[lo];
        const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.5;
        return -pi + (static_cast<double>(lo) + frac) * (two_pi / grid_);
    }

private:
    int grid_;
    std::vector<double> cdf_; // cdf_[i] at bin edge i
};

// ----------------------------------------------------------- integration --

inline void check_step_size(const SgParams& params, double dx_fine) {
    double limit = 0.05 * params.lambda_T;
    if (params.Q > 0.0) limit = std::min(limit, 0.2 * params.lambda_T / params.Q);
    if (dx_fine > limit * (1.0 + 1e-12))
        throw config_error("integrate_ito: dx_fine " + std::to_string(dx_fine) +
                           " exceeds stability limit " + std::to_string(limit));
}

// Euler-Maruyama path of the Ito process; the returned field is unwrapped.
inline FineField integrate_ito(const GroundState& gs, const SgParams& params, double extent,
                               double dx_fine, rng::Stream& rng, const StationarySampler& ic,
                               int drift_sign = +1) {
    check_step_size(params, dx_fine);
    const std::size_t n = static_cast<std::size_t>(std::llround(std::ceil(extent / dx_fine - 1e-9)));
    if (n == 0) throw config_error("integrate_ito: extent too small");
    FineField field;
    field.dx_fine = dx_fine;
    field.phases.resize(n);
    const double noise_scale = std::sqrt(2.0 * params.D * dx_fine);
    double phi = ic.sample(rng);
    field.phases[0] = phi;
    for (std::size_t i = 1; i < n; ++i) {
        const double a = transfer::drift(gs, params, phi, drift_sign);
        phi += a * dx_fine + noise_scale * rng.normal();
        field.phases[i] = phi;
    }
    return field;
}

inline FineField integrate_ito(const GroundState& gs, const SgParams& params, double extent,
                               double dx_fine, std::uint64_t seed, int drift_sign = +1) {
    auto rng = rng::Stream::derive(seed, "ito");
    const StationarySampler ic(gs);
    return integrate_ito(gs, params, extent, dx_fine, rng, ic, drift_sign);
}

// ------------------------------------------------------------ drift sign --

// Wrapped single-point histogram as bin probabilities.
inline std::vector<double> wrapped_histogram(const std::vector<double>& phases, int bins) {
    std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
    for (double p : phases) {
        int b = static_cast<int>((wrap_phase(p) + pi) / two_pi * bins);
        b = std::clamp(b, 0, bins - 1);
        h[static_cast<std::size_t>(b)] += 1.0;
    }
    for (double& x : h) x /= static_cast<double>(phases.size());
    return h;
}

// Total-variation distance between a wrapped histogram and |Psi_0|^2,
// integrating the density over each bin (Simpson, 8 panels per bin).
inline double tv_against_stationary(const std::vector<double>& hist, const GroundState& gs) {
    const int bins = static_cast<int>(hist.size());
    const double w = two_pi / bins;
    double tv = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double lo = -pi + b * w;
        double integral = 0.0;
        const int panels = 8;
        const double h = w / panels;
        for (int i = 0; i <= panels; ++i) {
            const double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            integral += weight * std::max(0.0, transfer::stationary_density(gs, lo + i * h));
        }
        integral *= h / 3.0;
        tv += std::abs(hist[static_cast<std::size_t>(b)] - integral);
    }
    return 0.5 * tv;
}

struct DriftSignResolution {
    int sign = +1;
    double tv_plus = 0.0;
    double tv_minus = 0.0;
};

// Pick the drift sign whose long-run wrapped histogram reproduces |Psi_0|^2.
// The paper prints A = -2D d/dphi ln|Psi_0|; the stationary Fokker-Planck
// density requires the opposite sign for a Psi_0 peaked at zero, so the
// convention is fixed here by measurement rather than by the printed formula.
inline DriftSignResolution resolve_drift_sign(const GroundState& gs, const SgParams& params,
                                              std::uint64_t seed, std::size_t steps = 200000,
                                              double dx_fine = 0.1) {
    const StationarySampler ic(gs);
    DriftSignResolution res;
    double tv[2] = {0.0, 0.0};
    const int signs[2] = {+1, -1};
    for (int s = 0; s < 2; ++s) {
        auto rng = rng::Stream::derive(seed, "drift-sign", static_cast<std::uint64_t>(s));
        FineField f = integrate_ito(gs, params, static_cast<double>(steps) * dx_fine, dx_fine,
                                    rng, ic, signs[s]);
        tv[s] = tv_against_stationary(wrapped_histogram(f.phases, 64), gs);
    }
    res.tv_plus = tv[0];
    res.tv_minus = tv[1];
    res.sign = (tv[0] <= tv[1]) ? +1 : -1;
    return res;
}

// ---------------------------------------------------------------- optics --

// Gaussian PSF convolution (kernel truncated at 4 sigma, renormalised at the
// array edges) followed by boxcar averaging over the L pixel windows centred
// in the field, then wrapping to [-pi, pi).
inline Trajectory apply_imaging(const FineField& field, const ImagingConfig& cfg) {
    cfg.validate();
    const double needed = cfg.L * cfg.pixel_size + 6.0 * cfg.sigma_psf;
    if (field.extent() + 1e-9 < needed)
        throw config_error("apply_imaging: field extent " + std::to_string(field.extent()) +
                           " um is below required " + std::to_string(needed) + " um");

    const double dx = field.dx_fine;
    const std::size_t n = field.phases.size();
    std::vector<double> smooth;
    if (cfg.sigma_psf > 0.0) {
        const int h = static_cast<int>(std::ceil(4.0 * cfg.sigma_psf / dx));
        std::vector<double> kernel(static_cast<std::size_t>(2 * h + 1));
        for (int j = -h; j <= h; ++j)
            kernel[static_cast<std::size_t>(j + h)] =
                std::exp(-0.5 * (j * dx) * (j * dx) / (cfg.sigma_psf * cfg.sigma_psf));
        smooth.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int lo = std::max<int>(-h, -static_cast<int>(i));
            const int hi = std::min<int>(h, static_cast<int>(n - 1 - i));
            double acc = 0.0, wsum = 0.0;
            for (int j = lo; j <= hi; ++j) {
                const double w = kernel[static_cast<std::size_t>(j + h)];
                acc += w * field.phases[i + static_cast<std::size_t>(j)];
                wsum += w;
            }
            smooth[i] = acc / wsum;
        }
    } else {
        smooth = field.phases;
    }

    const double offset = 0.5 * (field.extent() - cfg.L * cfg.pixel_size);
    Trajectory t;
    t.pixel_size = cfg.pixel_size;
    t.phases.resize(cfg.L);
    for (std::uint32_t p = 0; p < cfg.L; ++p) {
        const double a = offset + p * cfg.pixel_size;
        const double b = a + cfg.pixel_size;
        // samples whose centres (i + 1/2) dx fall in [a, b)
        auto first = static_cast<std::size_t>(std::max<long long>(0, std::llround(std::ceil(a / dx - 0.5 - 1e-9))));
        auto last = static_cast<std::size_t>(std::min<long long>(static_cast<long long>(n), std::llround(std::ceil(b / dx - 0.5 - 1e-9))));
        if (last <= first) throw config_error("apply_imaging: empty pixel window");
        double acc = 0.0;
        for (std::size_t i = first; i < last; ++i) acc += smooth[i];
        t.phases[p] = wrap_phase(acc / static_cast<double>(last - first));
    }
    return t;
}

// Add a 2 pi kink: charge * 4 atan(exp((x - x0)/width)).
inline void inject_soliton(FineField& field, double x0, double width, int charge) {
    if (!(width > 0.0)) throw config_error("inject_soliton: width must be > 0");
    if (!(x0 >= 0.0 && x0 <= field.extent()))
        throw config_error("inject_soliton: x0 outside field extent");
    for (std::size_t i = 0; i < field.phases.size(); ++i) {
        const double x = (static_cast<double>(i) + 0.5) * field.dx_fine;
        field.phases[i] += charge * 4.0 * std::atan(std::exp((x - x0) / width));
    }
}

// Net phase winding over the field in units of 2 pi.
inline double winding_number(const FineField& field) {
    return (field.phases.back() - field.phases.front()) / two_pi;
}

// -------------------------------------------------------------- datasets --

namespace detail {

// Ground-state cache keyed on Q rounded to 1e-3.
class GroundStateCache {
public:
    const GroundState& get(double Q) {
        const long long key = std::llround(Q * 1000.0);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const double q_quant = static_cast<double>(key) / 1000.0;
            auto gs = std::make_shared<GroundState>(
                transfer::ground_state(SgParams::from_Q(q_quant, 1.0)));
            it = cache_.emplace(key, std::move(gs)).first;
        }
        return *it->second;
    }

    const StationarySampler& sampler_for(double Q) {
        const long long key = std::llround(Q * 1000.0);
        auto it = samplers_.find(key);
        if (it == samplers_.end())
            it = samplers_.emplace(key, std::make_shared<StationarySampler>(get(Q))).first;
        return *it->second;
    }

private:
    std::map<long long, std::shared_ptr<GroundState>> cache_;
    std::map<long long, std::shared_ptr<StationarySampler>> samplers_;
};

inline std::string spec_echo(const DatasetSpec& spec, int drift_sign) {
    std::ostringstream ss;
    ss << "kind = " << data::to_string(spec.kind) << "\n";
    ss << "Q_values =";
    for (double q : spec.Q_values) ss << ' ' << data::detail::fmt_double(q);
    ss << "\n";
    ss << "shots_per_Q = " << spec.shots_per_Q << "\n";
    ss << "fluctuation = " << data::detail::fmt_double(spec.fluctuation) << "\n";
    ss << "seed = " << spec.seed << "\n";
    ss << "lambda_T = " << data::detail::fmt_double(spec.lambda_T) << "\n";
    ss << "dx_fine = " << data::detail::fmt_double(spec.dx_fine) << "\n";
    ss << "sigma_psf = " << data::detail::fmt_double(spec.imaging.sigma_psf) << "\n";
    ss << "pixel_size = " << data::detail::fmt_double(spec.imaging.pixel_size) << "\n";
    ss << "L = " << spec.imaging.L << "\n";
    ss << "soliton_mean = " << data::detail::fmt_double(spec.soliton_mean) << "\n";
    ss << "soliton_width = " << data::detail::fmt_double(spec.soliton_width) << "\n";
    ss << "relax_distance = " << data::detail::fmt_double(spec.relax_distance) << "\n";
    ss << "drift_sign = " << (drift_sign >= 0 ? "+1" : "-1") << "\n";
    return ss.str();
}

} // namespace detail

// Build one dataset from a spec.  Every shot draws its RNG stream from
// (seed, shot index), so synthesis order never matters.
inline Dataset synthesize(const DatasetSpec& spec) {
    spec.validate();
    detail::GroundStateCache cache;

    const bool field_based = spec.kind == DatasetKind::equilibrium ||
                             spec.kind == DatasetKind::soliton_injected;

    // Resolve the drift sign once per dataset against the strongest coupling.
    int drift_sign = +1;
    const double q_max = *std::max_element(spec.Q_values.begin(), spec.Q_values.end());
    if (q_max > 0.0) {
        const auto& gs = cache.get(q_max);
        drift_sign = resolve_drift_sign(gs, SgParams::from_Q(gs.Q, spec.lambda_T), spec.seed).sign;
    }

    Dataset ds;
    ds.header.L = spec.imaging.L;
    ds.header.pixel_size = spec.imaging.pixel_size;
    ds.header.spec_echo = detail::spec_echo(spec, drift_sign);
    ds.shots.reserve(static_cast<std::size_t>(spec.Q_values.size()) * spec.shots_per_Q);

    const double margin = 4.0 * spec.imaging.sigma_psf + 0.5 * spec.imaging.pixel_size;
    const double extent = spec.imaging.L * spec.imaging.pixel_size + 2.0 * margin;
    const double window_lo = margin;
    const double window_hi = margin + spec.imaging.L * spec.imaging.pixel_size;

    std::uint64_t shot_index = 0;
    for (double q_base : spec.Q_values) {
        for (std::uint32_t s = 0; s < spec.shots_per_Q; ++s, ++shot_index) {
            auto rng = rng::Stream::derive(spec.seed, "synth", shot_index);
            const double q_shot = q_base * std::exp(spec.fluctuation * rng.normal());
            const double lambda_shot = spec.lambda_T * std::exp(spec.fluctuation * rng.normal());
            const SgParams params = SgParams::from_Q(q_shot, lambda_shot);

            Trajectory t;
            std::uint32_t solitons = 0;

            if (field_based) {
                const auto& gs = cache.get(q_shot);
                const auto& ic = cache.sampler_for(q_shot);
                FineField field =
                    integrate_ito(gs, params, extent, spec.dx_fine, rng, ic, drift_sign);
                if (spec.kind == DatasetKind::soliton_injected) {
                    solitons = static_cast<std::uint32_t>(rng.poisson(spec.soliton_mean));
                    for (std::uint32_t k = 0; k < solitons; ++k) {
                        const double x0 = rng.uniform(window_lo, window_hi);
                        const int charge = rng.uniform01() < 0.5 ? +1 : -1;
                        inject_soliton(field, x0, spec.soliton_width, charge);
                    }
                }
                t = apply_imaging(field, spec.imaging);
            } else {
                // pixel-resolution OOD proxies: i.i.d. uniform phases, with an
                // optional short per-pixel Ito relaxation toward the target Q
                t.pixel_size = spec.imaging.pixel_size;
                t.phases.resize(spec.imaging.L);
                for (auto& p : t.phases) p = rng.uniform(-pi, pi);
                if (spec.kind == DatasetKind::ood_quench_proxy && spec.relax_distance > 0.0) {
                    const auto& gs = cache.get(q_shot);
                    check_step_size(params, spec.dx_fine);
                    const auto steps = static_cast<std::size_t>(
                        std::llround(std::ceil(spec.relax_distance / spec.dx_fine)));
                    const double noise = std::sqrt(2.0 * params.D * spec.dx_fine);
                    for (auto& p : t.phases) {
                        for (std::size_t it = 0; it < steps; ++it)
                            p += transfer::drift(gs, params, p, drift_sign) * spec.dx_fine +
                                 noise * rng.normal();
                        p = wrap_phase(p);
                    }
                }
            }

            t.meta.id = shot_index;
            t.meta.Q = q_shot;
            t.meta.lambda_T = lambda_shot;
            t.meta.kind = spec.kind;
            t.meta.soliton_count = solitons;
            t.meta.seed = shot_index;
            ds.shots.push_back(std::move(t));
        }
    }
    return ds;
}

struct FilterResult {
    Dataset kept;
    std::size_t removed = 0;
};

// Drop trajectories containing any wrapped nearest-neighbour increment with
// |d phi| >= threshold (unwrap-error suspects).
inline FilterResult filter_unwrap_suspects(const Dataset& ds, double threshold) {
    if (!(threshold > 0.0 && threshold <= pi))
        throw config_error("filter_unwrap_suspects: threshold must be in (0, pi]");
    FilterResult res;
    res.kept.header = ds.header;
    for (const auto& t : ds.shots) {
        bool suspect = false;
        for (std::size_t i = 1; i < t.phases.size() && !suspect; ++i)
            if (std::abs(wrap_increment(t.phases[i] - t.phases[i - 1])) >= threshold)
                suspect = true;
        if (suspect)
            ++res.removed;
        else
            res.kept.shots.push_back(t);
    }
    return res;
}

} // namespace sg::sampler
