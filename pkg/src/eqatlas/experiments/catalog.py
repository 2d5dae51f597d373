"""The built-in validation scenarios with their pre-registered tolerances."""

from __future__ import annotations

from .model import Check, Scenario, Source

TAUS_TENTHS = [i / 10 for i in range(10)]
FIG_NU_PARAMS = [(m, tau) for tau in (0.8, 0.05) for m in (0.6, 0.7, 0.8, 0.9)]


def _c(id, anchor, predicted, measured, comparator, tolerance) -> Check:
    return Check(id, anchor, Source(*predicted), Source(*measured), comparator, tolerance)


def _zero():
    return ("const", {"value": 0.0})


def _analytic_invariants() -> Scenario:
    taus_pos = [0.1, 0.5, 0.9]
    checks = (
        _c("phi-continuous-at-edge", "log-potential of the elliptic law, inside/outside branches",
           _zero(), ("phi_edge_jump", {"taus": TAUS_TENTHS}), "abs", 1e-10),
        _c("phi-edge-value", "log-potential equals tau/2 at the spectral edge",
           _zero(), ("phi_edge_value_error", {"taus": TAUS_TENTHS}), "abs", 1e-300),
        _c("psi-zero-at-edge", "largest real eigenvalue rate function vanishes at the edge",
           _zero(), ("psi_edge_value", {"taus": TAUS_TENTHS}), "abs", 1e-12),
        _c("psi-increasing", "largest real eigenvalue rate function is increasing beyond the edge",
           _zero(), ("psi_min_increment", {"taus": TAUS_TENTHS, "points": 100, "span": 2.0}), "exceeds", 1e-300),
        _c("sigma-st-two-forms", "stable complexity as equilibrium complexity minus a quadratic penalty",
           _zero(), ("sigma_st_form_gap", {"taus": taus_pos, "points": 50}), "abs", 1e-12),
        _c("sigma-st-alpha-at-zero", "alpha-stable complexity reduces to stable complexity at alpha = 0",
           _zero(), ("sigma_st_alpha0_gap", {"taus": taus_pos, "points": 50}), "abs", 1e-12),
        _c("m-alpha-endpoints", "m_alpha takes the values 1, 0, -1 at alpha = 0, 1/2, 1",
           _zero(), ("m_alpha_endpoint_error", {}), "abs", 1e-10),
        _c("alpha-m-inverse", "alpha_m inverts m_alpha",
           _zero(), ("alpha_roundtrip_error", {"points": 101}), "abs", 1e-10),
    )
    return Scenario("analytic-invariants", "Exact identities of the closed-form theory (no sampling).",
                    {"taus": TAUS_TENTHS}, checks)


def _index_density() -> Scenario:
    checks = tuple(
        _c(f"nu-normalised-m{m}-tau{tau}", "normalisation of the instability-index density",
           ("const", {"value": 1.0}), ("nu_integral", {"m": m, "tau": tau, "n": 625}), "abs", 1e-3)
        for m, tau in FIG_NU_PARAMS
    )
    return Scenario("index-density-normalization", "The index density integrates to one over [0, 1].",
                    {"n": 625, "grid": [list(p) for p in FIG_NU_PARAMS]}, checks)


def _energy() -> Scenario:
    checks = tuple(
        _c(f"j-tau-zero-tau{tau}", "the elliptic law minimises the rate functional with value zero",
           _zero(), ("j_tau_grid", {"tau": tau, "grid": 200}), "abs", 0.02)
        for tau in (0.0, 0.5)
    ) + (
        _c("j-tau-shift-increases", "strict convexity: moving off the minimiser raises the functional",
           _zero(), ("j_tau_shift_gain", {"tau": 0.5, "grid": 200, "shift": 0.5}), "exceeds", 1e-12),
    )
    return Scenario("energy-functional-minimum", "Rate functional on a grid discretisation of the elliptic law.",
                    {"grid": 200, "taus": [0.0, 0.5]}, checks)


def _real_eigs() -> Scenario:
    checks = (
        _c("mean-real-count-ginibre", "expected number of real eigenvalues of real Ginibre matrices",
           ("sqrt_2n_over_pi", {"n": 64}), ("mean_real_count", {"n": 64, "tau": 0.0, "trials": 2000}), "rel", 0.05),
        _c("bulk-real-density", "flat bulk density of real eigenvalues",
           ("p_real_bulk", {"n": 400, "tau": 0.5}), ("bulk_real_density", {"n": 400, "tau": 0.5, "trials": 100}),
           "rel", 0.10),
    )
    return Scenario("real-eig-bulk-density", "Real-eigenvalue counts and bulk density.",
                    {"runs": [[64, 0.0, 2000], [400, 0.5, 100]]}, checks)


def _projection() -> Scenario:
    checks = (
        _c("projection-l1", "semicircular projection of the elliptic law onto the real axis",
           _zero(), ("projection_l1_over_n", {"n": 400, "tau": 0.5, "trials": 100}), "abs", 0.05),
    )
    return Scenario("projection-semicircle", "Histogram of eigenvalue real parts against the semicircle.",
                    {"n": 400, "tau": 0.5, "trials": 100}, checks)


def _concentration() -> Scenario:
    checks = (
        _c("mu-h-concentrates", "fraction of eigenvalues right of x(alpha) concentrates at alpha",
           ("const", {"value": 0.25}), ("mean_mu_h", {"n": 400, "tau": 0.5, "trials": 100, "alpha": 0.25}),
           "abs", 0.01),
        _c("x-max-median", "largest real part sits just inside the spectral edge 1 + tau",
           ("const", {"value": 1.5}), ("median_x_max", {"n": 400, "tau": 0.5, "trials": 200}),
           "interval", (1.40, 1.52)),
    )
    return Scenario("eigenvalue-fraction-concentration", "Concentration of the empirical spectral measure.",
                    {"n": 400, "tau": 0.5, "trials": [100, 200], "alpha": 0.25}, checks)


def _xmax_slope() -> Scenario:
    checks = (
        _c("xmax-slope", "large-deviation rate of the largest real eigenvalue beyond the edge",
           ("psi_r", {"x": 1.7, "tau": 0.5}),
           ("xmax_tail_slope", {"ns": [20, 40, 80], "tau": 0.5, "x": 1.7, "trials": 10000}), "rel", 0.20),
    )
    return Scenario("xmax-ld-slope", "Decay of P(x_max > x) with N.",
                    {"ns": [20, 40, 80], "tau": 0.5, "x": 1.7, "trials": 10000}, checks)


def _kac_rice() -> Scenario:
    checks = (
        _c("folded-normal", "mean modulus of a shifted one-dimensional determinant",
           ("folded_normal_mean", {"x": 0.5, "tau": 0.5}),
           ("det_mean", {"x": 0.5, "n": 1, "tau": 0.5, "trials": 1_000_000}), "rel", 0.01),
        _c("det-rate-unconstrained", "mean |det(X - x)| grows like exp(N phi_eq(x))",
           ("phi_eq", {"x": 2.0, "tau": 0.5}), ("det_rate", {"x": 2.0, "n": 64, "tau": 0.5, "trials": 2000}),
           "abs", 0.03),
        _c("count-rate-unconstrained", "complexity of all equilibria",
           ("sigma_eq", {"m": 0.5}), ("count_rate", {"m": 0.5, "tau": 0.5, "n": 16, "trials": 10000}),
           "abs", 0.10),
        _c("count-single-equilibrium", "a single equilibrium on average in the stable phase",
           ("const", {"value": 1.0}), ("count_mean", {"m": 2.0, "tau": 0.5, "n": 8, "trials": 10000}),
           "ratio_interval", (0.7, 1.4)),
    )
    return Scenario("kac-rice-determinants", "Monte Carlo determinant averages entering the Kac-Rice formula.",
                    {"seeds": "derived per check"}, checks)


def _edge() -> Scenario:
    n, tau = 100, 0.5
    checks = [
        _c("real-edge-to-bulk", "real density crossover merges into the bulk",
           ("p_real_bulk", {"n": n, "tau": tau}), ("p_real_edge", {"delta": -6.0, "n": n, "tau": tau}), "rel", 0.005),
        _c("real-edge-to-tail", "real density crossover merges into the Gaussian tail",
           ("p_real_edge_tail_asymptote", {"delta": 4.0, "n": n, "tau": tau}),
           ("p_real_edge", {"delta": 4.0, "n": n, "tau": tau}), "rel", 0.02),
    ]
    for d in (3.0, 5.0):
        checks.append(
            _c(f"complex-edge-outside-{d:g}", "complex projection crossover outside the edge",
               ("p_complex_edge_asymptote", {"delta": d, "n": n, "tau": tau}),
               ("p_complex_edge", {"delta": d, "n": n, "tau": tau}), "rel", 0.10))
        checks.append(
            _c(f"complex-edge-inside-{d:g}", "complex projection crossover inside the edge",
               ("p_complex_edge_asymptote", {"delta": -d, "n": n, "tau": tau}),
               ("p_complex_edge", {"delta": -d, "n": n, "tau": tau}), "rel", 0.20))
    return Scenario("edge-crossover", "Edge scaling forms against their bulk and tail limits.",
                    {"n": n, "tau": tau}, tuple(checks))


def _igamma() -> Scenario:
    n = 2000
    checks = (
        _c("igamma-below-one", "regularised incomplete gamma tends to one for a < 1",
           ("const", {"value": 1.0}), ("igamma_ratio", {"n": n, "a": 0.9}), "interval", (0.999, 1.0)),
        _c("igamma-above-one", "regularised incomplete gamma tends to zero for a > 1",
           _zero(), ("igamma_ratio", {"n": n, "a": 1.1}), "interval", (0.0, 0.001)),
        _c("igamma-at-one", "Gaussian crossover of the incomplete gamma at a = 1",
           ("const", {"value": 0.5}), ("igamma_ratio", {"n": n, "a": 1.0}), "abs", 0.02),
    )
    return Scenario("incomplete-gamma-limits", "Large-N limits of the incomplete gamma ratio.", {"n": n}, checks)


def _laplace() -> Scenario:
    cases = [(1.0, -1.0, 4.0, 2.0), (1.0, 1.0, 4.0, 2.0), (1.0, 0.0, 2.0, 1.0)]
    checks = tuple(
        _c(f"laplace-a{a:g}-c{c:g}-p{p:g}-q{q:g}", "Laplace-type integral has zero exponential rate",
           _zero(), ("laplace_rate", {"a": a, "c": c, "p": p, "q": q, "eps": 0.5, "n": 1000}), "abs", 0.01)
        for a, c, p, q in cases
    )
    return Scenario("laplace-sanity", "Sub-exponential behaviour of the boundary Laplace integral.",
                    {"n": 1000, "eps": 0.5}, checks)


def scenario_catalog() -> list[Scenario]:
    """All built-in scenarios, cheapest first."""
    return [
        _analytic_invariants(),
        _index_density(),
        _edge(),
        _igamma(),
        _laplace(),
        _energy(),
        _real_eigs(),
        _projection(),
        _concentration(),
        _xmax_slope(),
        _kac_rice(),
    ]


def get_scenario(scenario_id: str) -> Scenario:
    for s in scenario_catalog():
        if s.id == scenario_id:
            return s
    raise KeyError(scenario_id)


__all__ = ["scenario_catalog", "get_scenario", "FIG_NU_PARAMS"]
