import math
import sys

import numpy as np
import pytest


def qfunc(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def naive_gf_mul(a: int, b: int, poly: int, m: int) -> int:
    """Schoolbook shift-and-add with reduction after each shift."""
    out = 0
    for _ in range(m):
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & (1 << m):
            a ^= poly
    return out


def qpsk_bit_error(ebn0_db: float, channel: str) -> float:
    """Per-axis bit error of Gray 4-QAM; each axis is antipodal with energy E_b."""
    g = 10.0 ** (ebn0_db / 10.0)
    if channel == "awgn":
        return qfunc(math.sqrt(2.0 * g))
    return 0.5 * (1.0 - math.sqrt(g / (1.0 + g)))


def qpsk_psub_exact(ebn0_db: float, channel: str, r: int) -> float:
    """Exact XOR-repair failure for Gray 4-QAM: a bit is wrong iff an odd number of helpers flip it."""
    pb = qpsk_bit_error(ebn0_db, channel)
    bit_wrong = 0.5 * (1.0 - (1.0 - 2.0 * pb) ** r)
    return 1.0 - (1.0 - bit_wrong) ** 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
