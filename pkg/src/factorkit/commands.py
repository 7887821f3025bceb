"""Command implementations shared by the HTTP service and the CLI.

Every command returns a TableResult: a resolved-config echo, stable
column names, rows of plain values, and an optional summary dict.  All
floats entering rows are Python floats (rendered with repr by the
writers), so reruns are byte-identical; wall-clock fields appear only in
exact-count rows, which are not under the determinism contract.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import asymptotics as asym
from . import exact, sampling, switching
from .asymptotics import DegreeSpec
from .errors import InvalidInputError
from .graphs import LabelledGraph, circulant_regular

__all__ = ["TableResult", "cmd_asym", "cmd_exact", "cmd_mc", "cmd_switch",
           "cmd_bounds", "cmd_figure", "cmd_compare"]


@dataclass
class TableResult:
    config: dict
    columns: list
    rows: list
    summary: Optional[dict] = None

    def to_payload(self) -> dict:
        return {
            "config": self.config,
            "columns": self.columns,
            "rows": self.rows,
            "summary": self.summary,
        }


def _maybe_decimal(log_value: float) -> Optional[float]:
    """exp(log_value) when it fits a double, else None (never emit an
    overflowed or underflowed float)."""
    if not -709.0 < log_value < 709.0:
        return None
    return math.exp(log_value)


def _case_summary(report: asym.CaseReport) -> dict:
    return {
        "case_id": report.case_id,
        "conditions": [
            {
                "case": c.case_id,
                "description": c.description,
                "satisfied": c.satisfied,
                "margin": c.margin,
            }
            for c in report.conditions
        ],
    }


def _degrees_str(degrees: Sequence[int]) -> str:
    return ",".join(str(d) for d in degrees)


# ---------------------------------------------------------------------------

def cmd_asym(
    formula: str = "rprime",
    spec: Optional[DegreeSpec] = None,
    n: Optional[int] = None,
    d: Optional[int] = None,
    k: Optional[int] = None,
    h: Optional[int] = None,
    degrees: Optional[Sequence[int]] = None,
    d1: Optional[int] = None,
    d2: Optional[int] = None,
) -> TableResult:
    config = {"command": "asym", "formula": formula}
    if formula == "rprime":
        if spec is None:
            raise InvalidInputError("asym rprime needs a degree spec")
        config["spec"] = f"{spec.n}:{_degrees_str(spec.degrees)}"
        value = asym.r_prime(spec)
        report = asym.check_case(spec)
        return TableResult(
            config,
            ["n", "degrees", "k", "log_rprime", "rprime", "error_scale", "case_id"],
            [[spec.n, _degrees_str(spec.degrees), spec.k, value.log(),
              _maybe_decimal(value.log()), asym.error_scale(spec), report.case_id]],
            summary=_case_summary(report),
        )
    if formula == "regular":
        if n is None or d is None:
            raise InvalidInputError("asym regular needs n and d")
        config.update(n=n, d=d)
        value = asym.r_regular_asym(n, d)
        return TableResult(
            config,
            ["n", "d", "log_value", "value"],
            [[n, d, value.log(), _maybe_decimal(value.log())]],
        )
    if formula == "mcleod":
        if n is None or k is None:
            raise InvalidInputError("asym mcleod needs n and k")
        config.update(n=n, k=k)
        value = asym.mcleod_f_asym(n, k)
        return TableResult(
            config,
            ["n", "k", "log_value", "value"],
            [[n, k, value.log(), _maybe_decimal(value.log())]],
        )
    if formula == "disjoint":
        if d is None or h is None:
            raise InvalidInputError("asym disjoint needs d and h")
        config.update(d=d, h=h, n=n)
        err = asym.disjoint_error_scale(d, h, n) if n else None
        return TableResult(
            config,
            ["d", "h", "probability", "err_scale"],
            [[d, h, asym.disjoint_prob_asym(d, h), err]],
        )
    if formula == "multi":
        if not degrees:
            raise InvalidInputError("asym multi needs a degree list")
        degrees = [int(x) for x in degrees]
        config.update(degrees=_degrees_str(degrees), n=n)
        err = asym.triple_degree_sum(degrees) / n if n else None
        return TableResult(
            config,
            ["degrees", "probability", "err_scale"],
            [[_degrees_str(degrees), asym.multi_disjoint_prob_asym(degrees), err]],
        )
    if formula == "join":
        if n is None or d1 is None or d2 is None:
            raise InvalidInputError("asym join needs n, d1 and d2")
        config.update(n=n, d1=d1, d2=d2)
        return TableResult(
            config,
            ["n", "d1", "d2", "probability"],
            [[n, d1, d2, asym.join_prob_asym(n, d1, d2)]],
        )
    raise InvalidInputError(f"unknown asym formula {formula!r}")


def cmd_exact(
    kind: str,
    n: Optional[int] = None,
    d: Optional[int] = None,
    k: Optional[int] = None,
    spec: Optional[DegreeSpec] = None,
    method: str = "auto",
    workers: int = 1,
) -> TableResult:
    config = {"command": "exact", "kind": kind, "method": method, "workers": workers}
    columns = ["n", "degrees", "k", "d", "value", "method", "nodes", "ms"]
    if kind == "regular":
        if n is None or d is None:
            raise InvalidInputError("exact regular needs n and d")
        config.update(n=n, d=d)
        res = exact.count_regular_graphs_exact(n, d, workers=workers)
        row = [n, None, None, d, str(res.value), res.method, res.nodes_visited,
               res.wall_time * 1000.0]
    elif kind == "factorisations":
        if spec is None:
            raise InvalidInputError("exact factorisations needs a degree spec")
        config.update(spec=f"{spec.n}:{_degrees_str(spec.degrees)}")
        res = exact.count_factorisations(spec, workers=workers)
        row = [spec.n, _degrees_str(spec.degrees), spec.k, None, str(res.value),
               res.method, res.nodes_visited, res.wall_time * 1000.0]
    elif kind == "matchings":
        if n is None or k is None:
            raise InvalidInputError("exact matchings needs n and k")
        config.update(n=n, k=k)
        res = exact.count_matching_sequences(n, k, method=method, workers=workers)
        row = [n, None, k, None, str(res.value), res.method, res.nodes_visited,
               res.wall_time * 1000.0]
    else:
        raise InvalidInputError(f"unknown exact kind {kind!r}")
    return TableResult(config, columns, [row])


def _resolve_pair(
    n: Optional[int],
    d: Optional[int],
    h: Optional[int],
    graph: Optional[LabelledGraph],
    graph2: Optional[LabelledGraph],
) -> tuple:
    """The (D, H) pair for two-graph commands: explicit payloads win,
    otherwise deterministic circulants of the requested degrees."""
    if graph is not None:
        D = graph
        H = graph2 if graph2 is not None else graph
        return D, H
    if n is None or d is None:
        raise InvalidInputError("need either graph payloads or n and d (and h)")
    if h is None:
        h = d
    return circulant_regular(n, d), circulant_regular(n, h)


def cmd_mc(
    mode: str,
    trials: int,
    seed: int,
    workers: int = 1,
    n: Optional[int] = None,
    degrees: Optional[Sequence[int]] = None,
    d: Optional[int] = None,
    h: Optional[int] = None,
    graph: Optional[LabelledGraph] = None,
    graph2: Optional[LabelledGraph] = None,
) -> TableResult:
    if trials < 1:
        raise InvalidInputError("need at least one trial")
    config = {"command": "mc", "mode": mode, "trials": trials, "seed": seed,
              "workers": workers}
    columns = ["mode", "n", "degrees", "trials", "seed", "p_hat", "std_err",
               "ci_lo", "ci_hi", "predicted", "ratio", "err_scale", "M"]

    if mode == "multi":
        if not degrees or n is None:
            raise InvalidInputError("mc multi needs n and a degree list")
        degrees = [int(x) for x in degrees]
        config.update(n=n, degrees=_degrees_str(degrees))
        est = sampling.estimate_multi_disjoint(degrees, n, trials, seed, workers=workers)
        predicted = asym.multi_disjoint_prob_asym(degrees)
        err = asym.triple_degree_sum(degrees) / n
        row = [mode, n, _degrees_str(degrees), trials, seed, est.p_hat, est.std_err,
               est.ci95[0], est.ci95[1], predicted,
               est.p_hat / predicted if predicted else None, err, None]
    elif mode == "disjoint":
        D, H = _resolve_pair(n, d, h, graph, graph2)
        dd = D.regular_degree()
        hh = H.regular_degree()
        config.update(n=D.n, graph={"n": D.n, "m": D.edge_count},
                      graph2={"n": H.n, "m": H.edge_count})
        est = sampling.estimate_disjoint_prob(D, H, trials, seed, workers=workers)
        predicted = asym.disjoint_prob_asym(dd, hh) if dd and hh else None
        err = asym.disjoint_error_scale(dd, hh, D.n) if dd and hh else None
        degstr = f"{dd},{hh}" if dd is not None and hh is not None else None
        row = [mode, D.n, degstr, trials, seed, est.p_hat, est.std_err,
               est.ci95[0], est.ci95[1], predicted,
               est.p_hat / predicted if predicted else None, err, None]
    elif mode == "tail":
        if n is None or d is None or h is None:
            raise InvalidInputError("mc tail needs n, d and h")
        config.update(n=n, d=d, h=h)
        est = sampling.estimate_overlap_tail(n, d, h, trials, seed, workers=workers)
        M = switching.threshold_M(n, d, h)
        err = asym.disjoint_error_scale(d, h, n)
        row = [mode, n, f"{d},{h}", trials, seed, est.p_hat, est.std_err,
               est.ci95[0], est.ci95[1], None, None, err, M]
    else:
        raise InvalidInputError(f"unknown mc mode {mode!r}")
    return TableResult(config, columns, [row])


def cmd_switch(
    n: Optional[int] = None,
    d: Optional[int] = None,
    h: Optional[int] = None,
    graph: Optional[LabelledGraph] = None,
    graph2: Optional[LabelledGraph] = None,
    moves: bool = False,
) -> TableResult:
    D, H = _resolve_pair(n, d, h, graph, graph2)
    dd = D.regular_degree()
    hh = H.regular_degree()
    if dd is None or hh is None:
        raise InvalidInputError("switch experiments need regular D and H")
    config = {"command": "switch", "n": D.n, "d": dd, "h": hh, "moves": moves}
    levels = switching.exact_levels(D, H)
    move_sums = switching.double_counting_sums(D, H) if moves else {}
    M = switching.threshold_M(D.n, dd, hh)
    T = sum(cnt for t, cnt in levels.items() if t < M)
    L0 = levels.get(0, 0)
    max_t = max(levels) if levels else 0
    rows = []
    for t in range(max_t + 1):
        lt = levels.get(t, 0)
        pred = switching.ratio_predicted(D.n, dd, hh, t) if t >= 1 else None
        prev = levels.get(t - 1, 0)
        exact_ratio = lt / prev if t >= 1 and prev else None
        fwd, rev = move_sums.get(t, (None, None))
        rows.append([t, lt, pred, exact_ratio, fwd, rev])
    summary = {
        "n": D.n, "d": dd, "h": hh, "M": M, "T": T, "L0": L0,
        "t_over_l0": T / L0 if L0 else None,
        "t_over_l0_predicted": switching.t_over_l0_predicted(dd, hh),
    }
    return TableResult(
        config,
        ["t", "L_t", "ratio_predicted", "ratio_exact", "forward_moves", "reverse_moves"],
        rows,
        summary=summary,
    )


def cmd_bounds(
    Z: Optional[int] = None,
    A: Optional[float] = None,
    B: Optional[float] = None,
    c_hat: Optional[float] = None,
    demo: bool = False,
) -> TableResult:
    from .numeric import SummationInput, sum_bounds

    if demo:
        Z, A, B, c_hat = 20, 1.0, 0.0, 1.0 / 15.0
    if Z is None or A is None or B is None or c_hat is None:
        raise InvalidInputError("bounds needs Z, A, B and c-hat (or --demo)")
    config = {"command": "bounds", "Z": Z, "A": A, "B": B, "c_hat": c_hat, "demo": demo}
    res = sum_bounds(SummationInput.constant(Z, A, B, c_hat))
    ok = res.sigma1 <= res.total <= res.sigma2
    return TableResult(
        config,
        ["Z", "c_hat", "A1", "A2", "C1", "C2", "sigma1", "total", "sigma2",
         "slack", "sandwich_ok"],
        [[Z, c_hat, res.a1, res.a2, res.c1, res.c2, res.sigma1, res.total,
          res.sigma2, res.slack, ok]],
    )


def cmd_figure(n: int, method: str = "auto", workers: int = 1) -> TableResult:
    """Partial 1-factorisation ratio table: F(n,k) against R'(n; n-1-k, 1..1)
    for k = 1..n-2, with the e^(-x/6) reference curve at x = k/(n-2)."""
    if n % 2 or n < 4:
        raise InvalidInputError(f"figure needs even n >= 4, got {n}")
    config = {"command": "figure", "n": n, "method": method, "workers": workers}
    rows = []
    for k in range(1, n - 1):
        res = exact.count_matching_sequences(n, k, method=method, workers=workers)
        log_f = math.log(res.value)
        log_rp = asym.r_prime(DegreeSpec(n, (n - 1 - k,) + (1,) * k)).log()
        x = k / (n - 2)
        rows.append([k, x, log_f, log_rp, math.exp(log_f - log_rp), math.exp(-x / 6.0)])
    return TableResult(
        config,
        ["k", "x", "log_F", "log_Rprime", "ratio", "curve"],
        rows,
    )


def cmd_compare(spec: DegreeSpec, workers: int = 1) -> TableResult:
    config = {"command": "compare", "spec": f"{spec.n}:{_degrees_str(spec.degrees)}",
              "workers": workers}
    res = exact.count_factorisations(spec, workers=workers)
    rp = asym.r_prime(spec)
    log_exact = math.log(res.value) if res.value > 0 else None
    ratio = math.exp(log_exact - rp.log()) if log_exact is not None else 0.0
    report = asym.check_case(spec)
    row = [spec.n, _degrees_str(spec.degrees), str(res.value), log_exact, rp.log(),
           ratio, asym.error_scale(spec), report.case_id, res.method,
           res.nodes_visited, res.wall_time * 1000.0]
    return TableResult(
        config,
        ["n", "degrees", "exact", "log_exact", "log_rprime", "ratio",
         "error_scale", "case_id", "method", "nodes", "ms"],
        [row],
        summary=_case_summary(report),
    )
