import numpy as np
import pytest

from dilations import matcore as mc
from dilations.channels import Dilation, MixedUnitaryDecomposition
from dilations.verify import commuting_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def ladder_state(d, rng, beta=0.7, levels=3):
    """Full-rank state with integer energy levels in a random eigenbasis.

    Products of such states have degenerate spectra, so commuting unitaries
    are far from diagonal.
    """
    energies = rng.integers(0, levels, size=d)
    p = np.exp(-beta * energies)
    V = mc.haar_random_unitary(d, rng)
    return (V * (p / p.sum())) @ V.conj().T


def commuting_block_dilation(da, db, rng, beta=0.7):
    """(dilation, omega_sys) with U commuting with omega_sys (x) omega_env."""
    wa = ladder_state(da, rng, beta)
    wb = ladder_state(db, rng, beta)
    U = commuting_unitary(np.kron(wa, wb), rng)
    return Dilation(U, wb, da, db), wa


def random_mixed_unitary(d, k, rng):
    """Decomposition with k pairwise distinct probabilities."""
    while True:
        p = rng.dirichlet(np.ones(k))
        if k == 1 or np.min(np.diff(np.sort(p))) > 1e-3:
            break
    return MixedUnitaryDecomposition(p, [mc.haar_random_unitary(d, rng) for _ in range(k)])


def ptrace_oracle(m, dims, keep):
    """Partial trace by explicit index loops (bipartite only)."""
    da, db = dims
    out = np.zeros((da, da) if keep == 0 else (db, db), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for l in range(db):
                    v = m[i * db + k, j * db + l]
                    if keep == 0 and k == l:
                        out[i, j] += v
                    if keep == 1 and i == j:
                        out[k, l] += v
    return out


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number, title, ok, detail=""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
