import sys

import numpy as np
import pytest

from itemc.instance import IsingInstance


@pytest.fixture
def pair_instance():
    """h = (0.5, -0.3), J_01 = 0.7; ground state "10" at -1.5."""
    return IsingInstance(2, (0.5, -0.3), ((0, 1, 0.7),))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def enumerate_energies(inst):
    """Independent energy table by explicit spin loops."""
    out = {}
    for b in range(1 << inst.n):
        bits = [(b >> i) & 1 for i in range(inst.n)]
        z = [1 - 2 * x for x in bits]
        e = sum(h * zi for h, zi in zip(inst.h, z))
        e += sum(w * z[i] * z[j] for i, j, w in inst.edges)
        out["".join(map(str, bits))] = e
    return out


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in range(1, 11):
        ok, detail = module.RESULTS.get(num, (False, "no result recorded"))
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
