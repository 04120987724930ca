#ifndef CGO_EXPERIMENTS_HPP
#define CGO_EXPERIMENTS_HPP

// Config-driven experiment runners producing deterministic CSV tables plus
// JSON diagnostics for the run manifest.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgo.hpp"
#include "config.hpp"
#include "serialize.hpp"
#include "uniqueness.hpp"

namespace cgo::experiments {

/// Shortest round-trip decimal representation; identical bits give
/// identical text.
inline std::string fmt(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<std::string> row)
    {
        if (row.size() != columns_.size()) throw std::logic_error("table row width mismatch");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    std::string to_csv() const
    {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(columns_);
        for (const auto& r : rows_) line(r);
        return out;
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Solver outcome of a run: 0 ok, otherwise the first failure kind seen.
enum class Status { Ok, Diverged, Resonant };

struct Result {
    explicit Result(Table t) : table(std::move(t)) {}

    Table table;
    nlohmann::json diagnostics = nlohmann::json::object();
    bool trend_ok = true;
    Status status = Status::Ok;
    std::optional<FormField> snapshot;
};

namespace detail {

inline void note(Result& r, Status s)
{
    if (r.status == Status::Ok) r.status = s;
}

inline std::string status_name(Status s)
{
    switch (s) {
    case Status::Ok: return "ok";
    case Status::Diverged: return "diverged";
    case Status::Resonant: return "resonant";
    }
    return "unknown";
}

inline bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return v.size() >= 2;
}

/// Strict decrease, or every value at the negligible floor (background media).
inline bool decreasing_or_negligible(const std::vector<double>& v, double floor)
{
    bool negligible = !v.empty();
    for (double x : v) negligible = negligible && std::abs(x) <= floor;
    return negligible || strictly_decreasing(v);
}

inline DerivedMedium derived(const RunConfig& c, std::size_t index)
{
    return derive(Medium::from_spec(c.make_grid(), c.media.at(index)));
}

}  // namespace detail

/// CGO solves over the configured s list and polarizations, with the
/// grade-{0,3} ratio and the incidence-violating control.
inline Result run_cgo(const RunConfig& c)
{
    Result res{Table({"s", "polarization", "eta1_angle", "status", "iterations", "residual", "remainder_norm",
                      "source_norm", "contraction", "clamped_fraction", "grade03_ratio", "grade03_control"})};
    const auto dm = detail::derived(c, 0);
    const Vec3 rho = c.rho();
    const auto [eta1, eta2] = frame(rho, c.geometry.angle);
    const auto opt = c.solver.options();
    std::vector<double> ratios;
    nlohmann::json failures = nlohmann::json::array();
    for (auto pol : c.geometry.polarizations) {
        std::vector<double> pol_ratios;
        for (double s : c.geometry.s_list) {
            const auto geo = make_geometry(dm.grid, rho, eta1, eta2, s, dm.k);
            std::vector<std::string> row{fmt(s), std::string(to_string(pol)), fmt(c.geometry.angle)};
            try {
                const auto sol = solve_cgo(dm, geo.zeta1, amplitude_A(geo, pol), opt);
                const double ratio = check_grade03(dm, sol);
                const auto control = solve_cgo(dm, geo.zeta1, GradedForm::scalar(1.0), opt);
                const auto& d = sol.diag;
                row.insert(row.end(), {"ok", std::to_string(d.iterations), fmt(d.residual), fmt(d.remainder_norm),
                                       fmt(d.source_norm), fmt(d.contraction), fmt(d.clamp.fraction()), fmt(ratio),
                                       fmt(check_grade03(dm, control))});
                pol_ratios.push_back(ratio);
                if (c.output.fields) res.snapshot = sol.remainder;
            } catch (const DivergenceError& e) {
                detail::note(res, Status::Diverged);
                row.insert(row.end(), {"diverged", std::to_string(e.iterations()), "nan", "nan", "nan",
                                       fmt(e.contraction()), "nan", "nan", "nan"});
                failures.push_back({{"s", s}, {"kind", "divergence"}, {"contraction", e.contraction()},
                                    {"iterations", e.iterations()}});
            } catch (const ResonantGridError& e) {
                detail::note(res, Status::Resonant);
                row.insert(row.end(), {"resonant", "0", "nan", "nan", "nan", "nan", fmt(e.clamp_fraction()), "nan",
                                       "nan"});
                failures.push_back({{"s", s}, {"kind", "resonant"}, {"clamped_fraction", e.clamp_fraction()}});
            }
            res.table.add(std::move(row));
        }
        if (pol_ratios.size() == c.geometry.s_list.size() && pol_ratios.size() >= 2)
            res.trend_ok = res.trend_ok && detail::decreasing_or_negligible(pol_ratios, 1e-10);
        else if (pol_ratios.size() != c.geometry.s_list.size())
            res.trend_ok = false;
        ratios.insert(ratios.end(), pol_ratios.begin(), pol_ratios.end());
    }
    res.diagnostics = {{"grade03_ratios", ratios}, {"failures", failures}, {"k", dm.k}, {"omega", dm.omega}};
    return res;
}

/// Average decay of ‖R‖² over (s, η₁) ∈ [λ, 2λ] × S¹.
inline Result run_decay(const RunConfig& c)
{
    Result res{Table({"lambda", "sample", "s", "eta1_angle", "status", "iterations", "residual", "remainder_norm",
                      "source_norm", "clamped_fraction"})};
    const auto dm = detail::derived(c, 0);
    const auto pol = c.geometry.polarizations.front();
    const auto st = decay_study(dm, c.rho(), pol, c.geometry.lambda_list, c.sampling.n_samples, c.sampling.seed,
                                c.solver.options());
    const std::size_t n = static_cast<std::size_t>(c.sampling.n_samples);
    for (std::size_t i = 0; i < st.samples.size(); ++i) {
        const auto& s = st.samples[i];
        const bool ok = s.ok;
        res.table.add({fmt(s.lambda), std::to_string(i % n), fmt(s.s), fmt(s.angle), ok ? "ok" : "failed",
                       std::to_string(s.iterations), ok ? fmt(s.residual) : "nan",
                       ok ? fmt(s.remainder_norm) : "nan", ok ? fmt(s.source_norm) : "nan", fmt(s.clamped_fraction)});
    }
    std::vector<double> means;
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lv : st.levels) {
        means.push_back(lv.mean_r2);
        levels.push_back({{"lambda", lv.lambda},
                          {"samples", lv.samples},
                          {"failures", lv.failures},
                          {"mean_remainder_sq", lv.mean_r2},
                          {"stderr_remainder_sq", lv.stderr_r2},
                          {"mean_source_sq", lv.mean_qa2},
                          {"stderr_source_sq", lv.stderr_qa2}});
    }
    res.trend_ok = means.size() < 2 || detail::decreasing_or_negligible(means, 1e-20);
    res.diagnostics = {{"levels", levels}, {"polarization", to_string(pol)}};
    return res;
}

/// Randomized lower bound of ‖Q‖ from X^{1/2} to X^{-1/2} over the s list.
inline Result run_qnorm(const RunConfig& c)
{
    Result res{Table({"s", "zeta_norm", "estimate", "mollifier_h", "smooth_term", "rough_term"})};
    const auto dm = detail::derived(c, 0);
    const Vec3 rho = c.rho();
    const auto [eta1, eta2] = frame(rho, c.geometry.angle);
    std::vector<double> est;
    for (double s : c.geometry.s_list) {
        const auto geo = make_geometry(dm.grid, rho, eta1, eta2, s, dm.k);
        const auto q = q_norm_estimate(dm, geo.zeta1, c.sampling.trials, c.sampling.seed, c.solver.options());
        res.table.add({fmt(s), fmt(geo.zeta1.norm()), fmt(q.estimate), fmt(q.h), fmt(q.smooth_term), fmt(q.rough_term)});
        est.push_back(q.estimate);
    }
    res.trend_ok = est.size() < 2 || detail::decreasing_or_negligible(est, 1e-12);
    res.diagnostics = {{"estimates", est}};
    return res;
}

/// Pairing against its large-s limit for each polarization, plus the unique
/// continuation certificate at |ζ| = s.
inline Result run_uniqueness(const RunConfig& c)
{
    if (c.media.size() != 2) throw ConfigError("media", "run-uniqueness needs exactly two media");
    Result res{Table({"polarization", "s", "status", "pairing_re", "pairing_im", "target_re", "target_im", "abs_error"})};
    const auto mp = make_medium_pair(detail::derived(c, 0), detail::derived(c, 1));
    const Vec3 rho = c.rho();
    const auto opt = c.solver.options();

    // identical media have vanishing targets; the pairing must then sit at
    // the quadrature floor
    constexpr double kFloor = 1e-9;
    nlohmann::json pol_diag = nlohmann::json::array();
    for (auto pol : c.geometry.polarizations) {
        const auto rows = convergence_experiment(mp, rho, pol, c.geometry.s_list, c.geometry.angle, opt);
        std::vector<double> errors;
        bool all_ok = true;
        for (const auto& r : rows) {
            if (!r.ok) {
                all_ok = false;
                detail::note(res, r.error.find("clamped") != std::string::npos ? Status::Resonant : Status::Diverged);
            }
            res.table.add({std::string(to_string(pol)), fmt(r.s), r.ok ? "ok" : "failed",
                           r.ok ? fmt(r.pairing.real()) : "nan", r.ok ? fmt(r.pairing.imag()) : "nan",
                           fmt(r.target.real()), fmt(r.target.imag()), r.ok ? fmt(r.abs_error) : "nan"});
            errors.push_back(r.abs_error);
        }
        const double target = rows.empty() ? 0.0 : std::abs(rows.front().target);
        bool ok = all_ok;
        if (all_ok && target == 0.0) {
            for (double e : errors) ok = ok && e <= kFloor;
        } else if (all_ok && errors.size() >= 2) {
            ok = errors.back() < errors.front();
        }
        res.trend_ok = res.trend_ok && ok;
        pol_diag.push_back({{"polarization", to_string(pol)}, {"target_abs", target}, {"trend_ok", ok}});
    }

    const auto coeff = ucp_coefficients(mp);
    const auto [u1, u2] = frame(rho, c.geometry.angle);
    UcpOptions uo;
    uo.trials = c.sampling.trials;
    uo.starts = c.sampling.fixed_point_starts;
    uo.clamp_floor = c.solver.clamp_floor;
    nlohmann::json ucp = nlohmann::json::array();
    std::vector<double> contraction;
    for (double s : c.geometry.s_list) {
        const auto rep = ucp_contraction_check(coeff, null_covector(s, u1, u2), c.sampling.seed, uo);
        contraction.push_back(rep.contraction);
        ucp.push_back({{"zeta_norm", rep.zeta_norm},
                       {"contraction", rep.contraction},
                       {"certified", rep.certified},
                       {"inconclusive", rep.inconclusive},
                       {"max_iterations", rep.max_iterations},
                       {"worst_final", rep.worst_final}});
    }
    const auto rr = recovery_residual(mp, coeff);
    res.diagnostics = {{"pairing", pol_diag},
                       {"ucp", ucp},
                       {"ucp_trend_ok", contraction.size() < 2 || detail::strictly_decreasing(contraction)},
                       {"recovery_residual_max", {rr.first.max_abs(), rr.second.max_abs()}}};
    const cplx ta = target_a(mp, rho), tb = target_b(mp, rho);
    res.diagnostics["target_a"] = {ta.real(), ta.imag()};
    res.diagnostics["target_b"] = {tb.real(), tb.imag()};
    return res;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace cgo::experiments

#endif  // CGO_EXPERIMENTS_HPP
