import random

import pytest

from sparseinv.sysmodel import LinSystem, sigma_alpha


def random_system(rng: random.Random, lo=-2, hi=2, max_dim=3) -> LinSystem:
    n, m, p = (rng.randint(1, max_dim) for _ in range(3))

    def mat(r, c):
        return [[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)]

    return LinSystem.from_lists(mat(n, n), mat(n, m), mat(p, n), mat(p, m))


def random_corpus(seed: int, count: int, **kw) -> list[LinSystem]:
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(2024, 200)


@pytest.fixture(scope="session")
def sigma0():
    return sigma_alpha(0)


@pytest.fixture(scope="session")
def sigma1():
    return sigma_alpha(1)


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion
# ---------------------------------------------------------------------------

_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion(request):
    """Record a short note that is echoed in the acceptance summary."""
    notes = []
    request.node.user_properties.append(("criterion_notes", notes))
    return notes


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        notes = dict(report.user_properties).get("criterion_notes", [])
        _ACCEPTANCE[name] = (report.outcome, report.duration, "; ".join(notes))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda k: int(k.split("_")[2])):
        outcome, dur, note = _ACCEPTANCE[name]
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"{status}  {name}  ({dur:.2f} s)"
        if note:
            line += f"  {note}"
        terminalreporter.write_line(line)
