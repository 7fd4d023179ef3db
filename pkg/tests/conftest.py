import math

import numpy as np
import pytest

from qbnf.ecrlh import ElementSet, UnitCell
from qbnf.synthesis import SynthesisSpec, synthesize

# Published benchmark element set for a quad-band cell (values in SI).
BENCH_ELEMENTS = ElementSet(
    c_r_c=2.6e-12,
    l_l_c=3.7e-9,
    l_l_d=3.3e-9,
    c_r_d=1.9e-12,
    l_r_c=6.4e-9,
    c_l_c=1.5e-12,
    c_l_d=1.3e-12,
    l_r_d=4.8e-9,
)

# Abstract quad-notch design targets used throughout the suite [Hz].
DESIGN_TARGETS = (0.9e9, 1.3e9, 2.55e9, 3.35e9)


@pytest.fixture(scope="session")
def bench_elements() -> ElementSet:
    return BENCH_ELEMENTS


@pytest.fixture(scope="session")
def bench_cell() -> UnitCell:
    return UnitCell(BENCH_ELEMENTS)


@pytest.fixture(scope="session")
def design_spec() -> SynthesisSpec:
    return SynthesisSpec(targets=DESIGN_TARGETS)


@pytest.fixture(scope="session")
def design_result(design_spec):
    return synthesize(design_spec)


@pytest.fixture(scope="session")
def design_cell(design_result) -> UnitCell:
    return UnitCell(design_result.elements)


def random_elements(rng: np.random.Generator) -> ElementSet:
    """Log-uniform draw over realistic chip-component magnitudes."""

    def henries() -> float:
        return float(np.exp(rng.uniform(math.log(0.5e-9), math.log(20e-9))))

    def farads() -> float:
        return float(np.exp(rng.uniform(math.log(0.3e-12), math.log(5e-12))))

    return ElementSet(
        c_r_c=farads(),
        l_l_c=henries(),
        l_l_d=henries(),
        c_r_d=farads(),
        l_r_c=henries(),
        c_l_c=farads(),
        c_l_d=farads(),
        l_r_d=henries(),
    )


def random_cells(seed: int, count: int, half_mix: bool = True) -> list[UnitCell]:
    rng = np.random.default_rng(seed)
    cells = []
    for i in range(count):
        half = half_mix and bool(i % 2)
        cells.append(UnitCell(random_elements(rng), half_series_convention=half))
    return cells


def frequencies_avoiding_poles(cell: UnitCell, rng: np.random.Generator, count: int,
                               f_lo: float = 0.1e9, f_hi: float = 6.0e9,
                               margin: float = 0.01) -> list[float]:
    """Random frequencies at least ``margin`` (relative) away from the branch poles."""
    from qbnf.ecrlh import resonant_frequencies

    res = resonant_frequencies(cell.elements)
    poles = (res.f_dp, res.f_ds)
    out = []
    while len(out) < count:
        f = float(rng.uniform(f_lo, f_hi))
        if all(abs(f - p) > margin * p for p in poles):
            out.append(f)
    return out
