"""The four worked scenarios: Bell, GHZ and W state preparation, and partial transpose.

Each scenario builds its unitaries and states exactly, runs the analyzers and
compares the results against the reference listings in :mod:`qchan.fixtures`.
Every comparison is recorded as a :class:`Match` carrying the tolerance used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import fixtures as fx
from . import numkit
from .chanrep import (SignedKrausSet, apply_channel, choi_distance, choi_super_convert,
                      choi_to_kraus, identity_channel, kraus_to_choi, kraus_to_super,
                      tensor_channels, to_choi, transpose_channel, ChoiMatrix)
from .dilation import DilationSpec, extract_kraus, ensure_unitary, reduced_spectra
from .errors import QChanError
from .verdicts import (DivisibilityReport, Tolerances, analyze_divisibility_unitary, check_cp,
                       check_tp, check_unital, ppt_min_eigenvalue, unsigned_completeness)

log = logging.getLogger(__name__)

EXACT_TOL = 1e-12
ROUNDED_TOL = 5e-3
SPECTRUM_TOL = 5e-4
W_LITERAL_REPAIR_THRESHOLD = 1e-6
W_VARIANTS = ("corrected", "literal")


class UnknownScenarioError(QChanError):
    pass


@dataclass
class Match:
    quantity: str
    matched: bool
    deviation: float
    tolerance: float
    note: str = ""
    informational: bool = False

    def to_dict(self) -> dict:
        return {"quantity": self.quantity, "matched": bool(self.matched),
                "deviation": float(self.deviation), "tolerance": float(self.tolerance),
                "note": self.note, "informational": self.informational}


def _match(quantity, deviation, tol, note="", informational=False, upper=True) -> Match:
    """``upper=False`` turns the check around: the quantity must exceed ``tol``."""
    deviation = float(deviation)
    ok = deviation <= tol if upper else deviation > tol
    return Match(quantity, ok, deviation, tol, note, informational)


@dataclass
class ScenarioResult:
    name: str
    stage_reports: Optional[DivisibilityReport] = None
    pt_report: Optional[dict] = None
    paper_match: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    fixtures: dict = field(default_factory=dict)

    def match(self, quantity: str) -> Match:
        for m in self.paper_match:
            if m.quantity == quantity:
                return m
        raise KeyError(quantity)

    @property
    def all_matched(self) -> bool:
        return all(m.matched for m in self.paper_match if not m.informational)

    def to_dict(self) -> dict:
        from .jsonio import to_jsonable

        return {
            "name": self.name,
            "stage_reports": self.stage_reports.to_dict() if self.stage_reports else None,
            "pt_report": to_jsonable(self.pt_report) if self.pt_report else None,
            "paper_match": [m.to_dict() for m in self.paper_match],
            "warnings": list(self.warnings),
            "extras": to_jsonable(self.extras),
        }


def _kraus(ops) -> SignedKrausSet:
    return SignedKrausSet.from_ops(ops)


def _raw_deviation(ours: SignedKrausSet, listed) -> float:
    """Largest per-operator Frobenius difference; ``inf`` when the counts differ."""
    if len(ours.positive_ops) != len(listed):
        return float("inf")
    return max(float(np.linalg.norm(a - b)) for a, b in zip(ours.positive_ops, listed))


def _compare_listings(res: ScenarioResult, report: DivisibilityReport, listings: dict, tol: float,
                      label: str, informational: bool = False, note: str = ""):
    for (stage, side), ops in sorted(listings.items()):
        ours = report.stage(stage, side).kraus
        res.paper_match.append(_match(
            f"{label} stage {stage + 1} {side} Kraus (Choi level)",
            choi_distance(ours, _kraus(ops)), tol, note, informational))
        res.paper_match.append(_match(
            f"{label} stage {stage + 1} {side} Kraus (per operator)",
            _raw_deviation(ours, ops), tol,
            "basis-dependent; degenerate spectator eigenspaces admit other orderings",
            informational=True))


def _stage_inputs(res: ScenarioResult, stages, initial, inputs, label: str):
    rho = fx.projector(initial)
    for i, (u, expected) in enumerate(zip(stages, inputs)):
        res.paper_match.append(_match(f"{label} input state of stage {i + 1}",
                                      np.linalg.norm(rho - fx.projector(expected)), EXACT_TOL))
        rho = u @ rho @ u.conj().T


def _report_checks(res: ScenarioResult, report: DivisibilityReport, label: str,
                   completeness_tol: float, unital_expected: bool = True):
    res.paper_match.append(_match(f"{label} completeness residuals (max)",
                                  report.max_completeness_residual, completeness_tol))
    for side in ("system", "environment"):
        res.paper_match.append(Match(f"{label} {side} CP-divisible",
                                     report.overall_cp_divisible[side], 0.0, 0.0))
        if unital_expected:
            res.paper_match.append(Match(f"{label} {side} unital",
                                         report.overall_unital[side], 0.0, 0.0))
    res.paper_match.append(Match(f"{label} system/environment CP symmetry",
                                 report.symmetry_ok, 0.0, 0.0))


def _bell(tols: Tolerances, **_) -> ScenarioResult:
    res = ScenarioResult("bell")
    stages = [np.kron(fx.H, fx.I2), fx.CNOT]
    total = stages[1] @ stages[0]
    res.paper_match.append(_match("bell U = CNOT (H x I)", np.linalg.norm(total - fx.BELL_U),
                                  EXACT_TOL))
    res.paper_match.append(_match("bell U1 = H x I", np.linalg.norm(stages[0] - fx.BELL_U1),
                                  EXACT_TOL))
    res.paper_match.append(_match("bell U2 = CNOT", np.linalg.norm(stages[1] - fx.BELL_U2),
                                  EXACT_TOL))
    report = analyze_divisibility_unitary(stages, fx.projector(fx.ket("00")), (2, 2),
                                          total=fx.BELL_U, tolerances=tols)
    res.stage_reports = report
    _stage_inputs(res, stages, fx.ket("00"), fx.BELL_STAGE_INPUTS, "bell")
    _compare_listings(res, report, fx.BELL_KRAUS, EXACT_TOL, "bell")
    _report_checks(res, report, "bell", EXACT_TOL)
    final = total @ fx.ket("00")
    res.paper_match.append(_match("bell output state", np.linalg.norm(final - fx.BELL_STATE),
                                  EXACT_TOL))
    res.fixtures = {"bell_U": total, "bell_U1": stages[0], "bell_U2": stages[1],
                    "bell_initial": fx.projector(fx.ket("00"))}
    return res


def _ghz(tols: Tolerances, **_) -> ScenarioResult:
    res = ScenarioResult("ghz")
    stages = [np.kron(fx.H, np.eye(4)), np.kron(fx.CNOT, fx.I2), np.kron(fx.I2, fx.CNOT)]
    total = stages[2] @ stages[1] @ stages[0]
    for i, listed in enumerate([fx.GHZ_U1, fx.GHZ_U2, fx.GHZ_U3]):
        res.paper_match.append(_match(f"ghz U{i + 1}", np.linalg.norm(stages[i] - listed),
                                      EXACT_TOL))
    res.paper_match.append(_match("ghz U", np.linalg.norm(total - fx.GHZ_U), EXACT_TOL))
    report = analyze_divisibility_unitary(stages, fx.projector(fx.ket("000")), (4, 2),
                                          total=fx.GHZ_U, tolerances=tols)
    res.stage_reports = report
    _stage_inputs(res, stages, fx.ket("000"), fx.GHZ_STAGE_INPUTS, "ghz")
    _compare_listings(res, report, fx.GHZ_KRAUS, EXACT_TOL, "ghz")
    _report_checks(res, report, "ghz", EXACT_TOL)
    ghz = (fx.ket("000") + fx.ket("111")) * fx.R2
    res.paper_match.append(_match("ghz output state",
                                  np.linalg.norm(total @ fx.ket("000") - ghz), EXACT_TOL))
    res.fixtures = {"ghz_U": total, "ghz_U1": stages[0], "ghz_U2": stages[1],
                    "ghz_U3": stages[2], "ghz_initial": fx.projector(fx.ket("000"))}
    return res


def _spectrum_deviation(spec, expected) -> float:
    return float(np.max(np.abs(np.sort(spec.eigenvalues)[::-1][:len(expected)] - expected)))


def _w(tols: Tolerances, w_variant: str = "corrected", **_) -> ScenarioResult:
    if w_variant not in W_VARIANTS:
        raise ValueError(f"w_variant must be one of {W_VARIANTS}, got {w_variant!r}")
    res = ScenarioResult("w")
    dims = (4, 2)
    literal = numkit.unitarity_check(fx.W_U_LITERAL)
    res.paper_match.append(_match("w U as printed is unitary", literal.residual, 1e-9,
                                  "one printed term is inconsistent with the U1 and U2 listings",
                                  informational=True))
    res.extras["w_variant"] = w_variant
    res.extras["literal_unitarity_residual"] = literal.residual
    if w_variant == "literal":
        if literal.residual > W_LITERAL_REPAIR_THRESHOLD:
            u, warns = ensure_unitary(fx.W_U_LITERAL, tols.unitary, repair=True, name="W unitary")
            res.warnings.extend(f"PROMINENT: {w}" for w in warns)
        else:
            u = fx.W_U_LITERAL
    else:
        u = fx.W_U_CORRECTED
        res.warnings.append(
            f"W unitary as printed fails the unitarity check (residual {literal.residual:.6g}); "
            "using the corrected matrix with (1/sqrt3)|001><001| in place of (1/sqrt3)|000><100|")
    res.paper_match.append(_match(f"w U ({w_variant}) is unitary",
                                  numkit.unitarity_check(u).residual, 1e-9))
    u1 = 1j * (u @ u)
    u2 = -1j * u.conj().T
    res.paper_match.append(_match("w U1 = iU^2 against its listing (max entry)",
                                  np.max(np.abs(u1 - fx.W_U1_LISTING)), 1e-2,
                                  "listing printed to two significant digits, some truncated",
                                  informational=True))
    res.paper_match.append(_match("w U2 = -iU^-1 against its listing (max entry)",
                                  np.max(np.abs(u2 - fx.W_U2_LISTING)), 1e-2,
                                  "listing printed to two or three significant digits",
                                  informational=True))
    w_state = (fx.ket("001") + fx.ket("010") + fx.ket("100")) * fx.R3
    res.paper_match.append(_match("w U|100> is the W state",
                                  np.linalg.norm(u @ fx.W_INITIAL - w_state), 1e-9))

    # exact chain: the CP-divisibility verdicts
    report = analyze_divisibility_unitary([u1, u2], fx.projector(fx.W_INITIAL), dims, total=u,
                                          tolerances=tols)
    res.stage_reports = report
    res.paper_match.append(_match("w completeness residuals (max)",
                                  report.max_completeness_residual, 1e-9))
    for side in ("system", "environment"):
        res.paper_match.append(Match(f"w {side} CP-divisible",
                                     report.overall_cp_divisible[side], 0.0, 0.0))
        res.paper_match.append(_match(
            f"w stage 1 {side} canonical unitality residual",
            report.stage(0, side).verdict.unital_canonical.residual, 0.1,
            "must exceed the tolerance (non-unital)", upper=False))
    res.paper_match.append(Match("w system/environment CP symmetry", report.symmetry_ok, 0.0, 0.0))
    _compare_listings(res, report, {k: v for k, v in fx.W_KRAUS.items() if k[0] == 0},
                      ROUNDED_TOL, "w", informational=True,
                      note="two-digit listing; S0 carries |11><11| where U1 has |11><10|")
    res.paper_match.append(_match(
        "w stage 1 system Kraus (Choi level, S0 term read as |11><10|)",
        choi_distance(report.stage(0, "system").kraus, _kraus(fx.W_STAGE1_SYSTEM_READ)),
        ROUNDED_TOL, "two-digit listing", informational=True))

    exact_in = u1 @ fx.W_INITIAL
    sys_exact, env_exact = reduced_spectra(fx.projector(exact_in), dims)
    res.extras["stage2_spectrum_exact_chain"] = env_exact.eigenvalues[:2]
    res.paper_match.append(_match(
        "w stage 2 environment spectrum (exact chain)",
        _spectrum_deviation(env_exact, fx.W_SPECTRUM), SPECTRUM_TOL,
        "exact values are 7/9 and 2/9", informational=True))

    # stage-2 comparisons use the printed (rounded) stage-2 input, renormalized
    printed = fx.W_STAGE2_INPUT_PRINTED / np.linalg.norm(fx.W_STAGE2_INPUT_PRINTED)
    rho2 = fx.projector(printed)
    sys_spec, env_spec = reduced_spectra(rho2, dims)
    res.extras["stage2_spectrum_printed_input"] = env_spec.eigenvalues
    res.extras["stage2_input_state_distance"] = float(
        np.linalg.norm(fx.projector(exact_in) - rho2))
    res.paper_match.append(_match("w stage 2 environment spectrum",
                                  _spectrum_deviation(env_spec, fx.W_SPECTRUM), SPECTRUM_TOL,
                                  "computed from the printed stage-2 input state"))
    res.paper_match.append(_match("w stage 2 system spectrum",
                                  _spectrum_deviation(sys_spec, fx.W_SPECTRUM), SPECTRUM_TOL,
                                  "computed from the printed stage-2 input state"))
    # printed chi vectors are the rows, not the columns, of the eigenvector matrix
    res.paper_match.append(_match("w chi vectors (rows of the eigenvector matrix)",
                                  np.max(np.abs(env_spec.eigenvectors - fx.W_CHI)), 5e-4,
                                  informational=True))
    sys_k = extract_kraus(DilationSpec(u2, dims, env_spec, "system", tols.unitary))
    env_k = extract_kraus(DilationSpec(u2, dims, sys_spec, "environment", tols.unitary))
    listed_s = _kraus(fx.W_KRAUS[(1, "system")])
    listed_e = _kraus(fx.W_KRAUS[(1, "environment")])
    res.extras["stage2_system_kraus"] = list(sys_k.positive_ops)
    res.extras["stage2_environment_kraus"] = list(env_k.positive_ops)
    res.paper_match.append(_match("w stage 2 system Choi", choi_distance(sys_k, listed_s),
                                  ROUNDED_TOL, "Frobenius distance from the Choi of the listing"))
    res.paper_match.append(_match("w stage 2 environment Choi", choi_distance(env_k, listed_e),
                                  ROUNDED_TOL, "Frobenius distance from the Choi of the listing"))
    res.paper_match.append(_match("w stage 2 S0 coefficients (max entry)",
                                  np.max(np.abs(sys_k.positive_ops[0] - listed_s.positive_ops[0])),
                                  ROUNDED_TOL))
    res.paper_match.append(_match("w stage 2 S1 coefficients (max entry)",
                                  np.max(np.abs(sys_k.positive_ops[1] - listed_s.positive_ops[1])),
                                  ROUNDED_TOL))
    res.paper_match.append(_match(
        "w stage 2 system Choi (exact chain)",
        choi_distance(report.stage(1, "system").kraus, listed_s), ROUNDED_TOL,
        "extraction against the exact stage-2 state", informational=True))
    res.paper_match.append(_match(
        "w stage 2 environment Choi (exact chain)",
        choi_distance(report.stage(1, "environment").kraus, listed_e), ROUNDED_TOL,
        "extraction against the exact stage-2 state; its second system eigenvector has a "
        "magnitude tie and the gauge rule picks the opposite sign, which changes the weighted "
        "spectator ket", informational=True))
    res.paper_match.append(_match("w stage 2 extraction completeness (max)", max(
        check_tp(sys_k).residual, check_tp(env_k).residual), 1e-9))
    res.fixtures = {"w_U": u, "w_U_literal": fx.W_U_LITERAL, "w_U1": u1, "w_U2": u2,
                    "w_initial": fx.projector(fx.W_INITIAL), "w_stage2_input_printed": rho2}
    return res


def _pt(tols: Tolerances, **_) -> ScenarioResult:
    res = ScenarioResult("pt")
    t = transpose_channel(2)
    b_t = to_choi(t)
    res.paper_match.append(_match("pt B_T is the Choi matrix of the transpose",
                                  np.linalg.norm(b_t.matrix - fx.B_T), EXACT_TOL))
    eig = numkit.hermitian_eig(fx.B_T)
    res.paper_match.append(_match("pt B_T eigenvalues {1,1,1,-1}",
                                  np.max(np.abs(eig.eigenvalues - [1, 1, 1, -1])), EXACT_TOL))
    k = choi_to_kraus(ChoiMatrix(2, 2, fx.B_T), tols.rank)
    res.paper_match.append(Match("pt signed Kraus counts (3 positive, 1 negative)",
                                 (len(k.positive_ops), len(k.negative_ops)) == (3, 1), 0.0, 0.0))
    res.paper_match.append(_match("pt signed Kraus reconstructs B_T",
                                  np.linalg.norm(kraus_to_choi(k).matrix - fx.B_T), EXACT_TOL))
    res.paper_match.append(_match("pt signed trace-preservation residual", check_tp(k).residual,
                                  EXACT_TOL))
    res.paper_match.append(_match("pt unsigned completeness residual",
                                  unsigned_completeness(k).residual, 0.5,
                                  "must exceed the tolerance", upper=False))
    res.paper_match.append(_match("pt unsigned unitality residual",
                                  check_unital(k).unsigned.residual, tols.verdict,
                                  "must exceed the tolerance (non-unital, unsigned form)",
                                  upper=False))
    listed = SignedKrausSet.from_ops(fx.T_LISTING_POSITIVE, fx.T_LISTING_NEGATIVE)
    res.paper_match.append(_match("pt listed operators satisfy signed trace preservation",
                                  check_tp(listed).residual, EXACT_TOL))
    res.paper_match.append(_match("pt listed operators reconstruct B_T (as printed)",
                                  np.linalg.norm(kraus_to_choi(listed).matrix - fx.B_T), EXACT_TOL,
                                  "D2 and F3 are printed without the 1/sqrt2 factor",
                                  informational=True))
    normalized = SignedKrausSet.from_ops(
        fx.T_LISTING_POSITIVE[:2] + [fx.T_LISTING_POSITIVE[2] * fx.R2],
        [fx.T_LISTING_NEGATIVE[0] * fx.R2])
    res.paper_match.append(_match("pt listed operators reconstruct B_T (normalized)",
                                  np.linalg.norm(kraus_to_choi(normalized).matrix - fx.B_T),
                                  EXACT_TOL))

    i_t = tensor_channels(identity_channel(2), t)
    a_form = choi_super_convert(kraus_to_choi(i_t)).matrix
    res.paper_match.append(_match("pt A-form of I x T equals the listed 16x16 matrix",
                                  np.max(np.abs(a_form - fx.PT_A_FORM)), EXACT_TOL,
                                  f"{int(np.count_nonzero(np.abs(a_form - fx.PT_A_FORM) > 0.5))} "
                                  "entries differ"))
    bell_rho = fx.projector(fx.BELL_STATE)
    res.paper_match.append(_match("pt vec(Bell) equals the listed 16-vector",
                                  np.max(np.abs(numkit.vec(bell_rho) - fx.BELL_VEC)), EXACT_TOL))
    out_vec = a_form @ numkit.vec(bell_rho)
    res.paper_match.append(_match("pt output vector equals the listed 16-vector",
                                  np.max(np.abs(out_vec - fx.PT_OUTPUT_VEC)), EXACT_TOL))
    res.paper_match.append(_match("pt listed 16x16 matrix on vec(Bell) gives the listed vector",
                                  np.max(np.abs(fx.PT_A_FORM @ fx.BELL_VEC - fx.PT_OUTPUT_VEC)),
                                  EXACT_TOL, informational=True))
    # the listed matrix acts as rho -> (I x Tr_A rho) SWAP; check on a fixed generic input
    probe = np.arange(1, 17).reshape(4, 4) + 1j * np.arange(16).reshape(4, 4).T
    alt = np.kron(fx.I2, numkit.partial_trace(probe, (2, 2), keep="B")) @ fx.B_T
    res.paper_match.append(_match(
        "pt listed 16x16 matrix equals rho -> (I x Tr_A rho) SWAP",
        np.max(np.abs(numkit.unvec(fx.PT_A_FORM @ numkit.vec(probe), 4, 4) - alt)), EXACT_TOL,
        informational=True))
    pseudo = numkit.unvec(out_vec, 4, 4)
    res.paper_match.append(_match("pt pseudo-density matrix",
                                  np.max(np.abs(pseudo - fx.PSEUDO_DENSITY)), EXACT_TOL))
    res.paper_match.append(_match("pt pseudo-density matrix is PT_B(Bell)",
                                  np.linalg.norm(pseudo - numkit.partial_transpose(bell_rho, (2, 2))),
                                  EXACT_TOL))
    min_eig = numkit.hermitian_eig(pseudo).min_eigenvalue
    res.paper_match.append(_match("pt pseudo-density min eigenvalue = -1/2", abs(min_eig + 0.5),
                                  EXACT_TOL))
    ppt = ppt_min_eigenvalue(bell_rho, (2, 2), "B", tols.verdict)

    tt = tensor_channels(t, t)
    tt_out = apply_channel(tt, bell_rho)
    fixed_resid = float(np.linalg.norm(tt_out - bell_rho))
    tt_cp = check_cp(tt, tols.psd)
    res.paper_match.append(_match("pt T x T fixes the Bell state", fixed_resid, EXACT_TOL))
    res.paper_match.append(_match("pt T x T Choi min eigenvalue = -1",
                                  abs(tt_cp.min_eigenvalue + 1), EXACT_TOL))
    res.warnings.append(
        "T x T leaves the Bell state unchanged, yet its Choi matrix has min eigenvalue "
        f"{tt_cp.min_eigenvalue:.6g}: it is not completely positive; both facts are reported")
    res.pt_report = {
        "a_form": a_form,
        "a_form_listed": fx.PT_A_FORM,
        "a_form_matches_listing": bool(np.array_equal(a_form, fx.PT_A_FORM)),
        "output_vector": out_vec,
        "pseudo_density_matrix": pseudo,
        "min_eigenvalue": min_eig,
        "ppt_min_eigenvalue_bell": ppt,
        "b_t_eigenvalues": eig.eigenvalues,
        "tt_fixed_point_residual": fixed_resid,
        "tt_choi_min_eigenvalue": tt_cp.min_eigenvalue,
        "tt_completely_positive": tt_cp.flag,
    }
    res.fixtures = {"pt_B_T": ChoiMatrix(2, 2, fx.B_T), "pt_transpose": k,
                    "pt_I_x_T": i_t, "pt_T_x_T": tt, "pt_bell": bell_rho,
                    "pt_I_x_T_super": kraus_to_super(i_t)}
    return res


SCENARIOS: dict[str, Callable[..., ScenarioResult]] = {
    "bell": _bell, "ghz": _ghz, "w": _w, "pt": _pt,
}


def run_scenario(name: str, tolerances: Optional[Tolerances] = None,
                 w_variant: str = "corrected") -> ScenarioResult:
    """Build and analyze one named scenario (``bell``, ``ghz``, ``w`` or ``pt``)."""
    try:
        builder = SCENARIOS[name]
    except KeyError:
        raise UnknownScenarioError(
            f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
    res = builder(tolerances or Tolerances(), w_variant=w_variant)
    for w in res.warnings:
        log.warning("%s: %s", name, w)
    return res
