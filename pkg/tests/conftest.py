"""Shared pytest wiring: per-criterion pass/fail summary lines."""

import re

_CRITERION_DESCRIPTIONS = {
    1: "oscillator-algebra oracle suite (commutators, center, basis change, eigenvalues)",
    2: "pair-state squared norms match the closed forms",
    3: "correlation oracle equivalence (disjoint four-term, coincident isolation)",
    4: "geometry suite (tetrad contractions, phase cocycle, covariance)",
    5: "Bell correlator structure (matched minimum, cosine law, shift symmetry, bound)",
    6: "oscillator-count dependence (invariance and rational law)",
    7: "joint-transform case (two evaluation routes, identity reproduces rest)",
    8: "single-arm transform case (identity, stressed witness, flat-density limit)",
    9: "deterministic byte-identical CSV output",
}

_outcomes: dict[int, list] = {}
_PATTERN = re.compile(r"test_criterion_0?(\d+)")


def pytest_runtest_logreport(report):
    match = _PATTERN.search(report.nodeid)
    if not match:
        return
    num = int(match.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(num, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(_outcomes):
        outcomes = _outcomes[num]
        if all(o == "passed" for o in outcomes):
            status = "PASS"
        elif any(o == "failed" for o in outcomes):
            status = "FAIL"
        else:
            status = outcomes[-1].upper()
        desc = _CRITERION_DESCRIPTIONS.get(num, "")
        terminalreporter.write_line(f"CRITERION {num}: {status} — {desc}")
