from pathlib import Path

import numpy as np
import pytest

from relayrate.source import TabularPMF, gen_component, validate_tabular
from relayrate.subsets import mask_of

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def example3():
    return gen_component(3, {mask_of([1]): 1, mask_of([2]): 1, mask_of([3]): 1,
                             mask_of([1, 2]): 1, mask_of([1, 3]): 1, mask_of([2, 3]): 1})


def example4():
    return gen_component(3, {mask_of([1]): 1, mask_of([2]): 1, mask_of([3]): 1, mask_of([2, 3]): 1})


def example5():
    return gen_component(3, {mask_of([1]): 1, mask_of([2]): 1, mask_of([3]): 1,
                             mask_of([1, 2]): 3, mask_of([1, 3]): 3, mask_of([2, 3]): 8})


def random_pmf(rng, L, max_alphabet=3, sparsity=0.3):
    """Random joint pmf with some zero cells, as a raw TabularPMF."""
    alph = tuple(int(a) for a in rng.integers(1, max_alphabet + 1, size=L))
    cells = list(np.ndindex(*alph))
    w = rng.dirichlet(np.full(len(cells), 0.7))
    w[rng.random(len(cells)) < sparsity] = 0.0
    if w.sum() == 0:
        w[0] = 1.0
    w /= w.sum()
    return TabularPMF(alph, tuple((c, float(p)) for c, p in zip(cells, w)))


def random_corpus(seed, L, count, max_alphabet=3):
    rng = np.random.default_rng(seed)
    return [validate_tabular(random_pmf(rng, L, max_alphabet)) for _ in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ex3():
    return example3()


@pytest.fixture
def ex4():
    return example4()


@pytest.fixture
def ex5():
    return example5()


def balanced_component(rng, L, max_rate=3.0):
    """Component source whose same-size shared components stay within the balance gap."""
    from relayrate.imeasure import gap

    full = (1 << L) - 1
    rates = {}
    base = {k: rng.uniform(0.0, max_rate) for k in range(2, L)}
    for mask in range(1, full + 1):
        k = bin(mask).count("1")
        if 2 <= k <= L - 1:
            rates[mask] = rng.uniform(base[k], gap(k, L) * base[k])
        else:
            rates[mask] = rng.uniform(0.0, max_rate)
    return gen_component(L, rates)


def random_component(rng, L, max_rate=3.0, density=0.6):
    full = (1 << L) - 1
    return gen_component(
        L, {m: float(rng.uniform(0.0, max_rate)) for m in range(1, full + 1) if rng.random() < density}
    )


def product_source(rng, L, max_alphabet=3):
    """Mutually independent users with random marginals."""
    margs = [rng.dirichlet(np.ones(int(rng.integers(1, max_alphabet + 1)))) for _ in range(L)]
    alph = tuple(len(m) for m in margs)
    entries = []
    for cell in np.ndindex(*alph):
        p = float(np.prod([margs[i][s] for i, s in enumerate(cell)]))
        entries.append((cell, p))
    total = sum(p for _, p in entries)
    return validate_tabular(TabularPMF(alph, tuple((c, p / total) for c, p in entries)))


ACCEPTANCE_LINES: list[str] = []


def report_criterion(number: int, title: str, failures: list[str]):
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] criterion {number:>2}: {title}"
    if failures:
        line += " | " + "; ".join(failures[:3]) + (" ..." if len(failures) > 3 else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
